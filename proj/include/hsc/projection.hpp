/* projection.hpp -- natural projections, composition, and abstraction checks
 *
 * Houses the four string maps between the low-level alphabet, the observable
 * events, and the high-level events, together with projection of automata,
 * inverse projection, parallel composition, nonconflictingness, the marked-
 * language observer property, local control consistency (LCC), and the greedy
 * alphabet extension that establishes both.
 */

#pragma once

#include "hsc/ops.hpp"

namespace hsc {

enum class ProjectionMap {
    Observation,          // Sigma* -> Sigma_o*
    Abstraction,          // Sigma* -> Sigma_hi*
    HighObservation,      // Sigma_hi* -> (Sigma_hi ∩ Sigma_o)*
    ObservedAbstraction,  // Sigma_o* -> (Sigma_hi ∩ Sigma_o)*
};

/// The alphabet roles of one control problem: events flagged observable,
/// high-level and controllable. The four projection maps commute:
/// HighObservation after Abstraction equals ObservedAbstraction after
/// Observation on every string.
struct ProjectionContext {
    Alphabet alphabet;

    static ProjectionContext from(const Alphabet& a) { return ProjectionContext{a}; }

    bool observable(int e) const { return alphabet.observable[e]; }
    bool highlevel(int e) const { return alphabet.highlevel[e]; }
    bool controllable(int e) const { return alphabet.controllable[e]; }

    Word observation(const Word& w) const { return erase(w, alphabet.observable, "observation"); }
    Word abstraction(const Word& w) const { return erase(w, alphabet.highlevel, "abstraction"); }

    Word high_observation(const Word& w) const {
        check_domain(w, alphabet.highlevel, "high_observation");
        return erase(w, alphabet.observable, "high_observation");
    }

    Word observed_abstraction(const Word& w) const {
        check_domain(w, alphabet.observable, "observed_abstraction");
        return erase(w, alphabet.highlevel, "observed_abstraction");
    }

  private:
    void check_domain(const Word& w, const std::vector<bool>& domain, const char* map) const {
        for (const auto& name : w) {
            int e = alphabet.index_of(name);
            if (e < 0 || !domain[e])
                throw Error(ErrorKind::DomainViolation,
                            std::string("DomainViolation(") + map + "," + name + ")");
        }
    }

    Word erase(const Word& w, const std::vector<bool>& keep, const char* map) const {
        Word out;
        for (const auto& name : w) {
            int e = alphabet.index_of(name);
            if (e < 0)
                throw Error(ErrorKind::DomainViolation,
                            std::string("DomainViolation(") + map + "," + name + ")");
            if (keep[e]) out.push_back(name);
        }
        return out;
    }
};

inline Word project_string(const ProjectionContext& ctx, ProjectionMap map, const Word& w) {
    switch (map) {
        case ProjectionMap::Observation: return ctx.observation(w);
        case ProjectionMap::Abstraction: return ctx.abstraction(w);
        case ProjectionMap::HighObservation: return ctx.high_observation(w);
        case ProjectionMap::ObservedAbstraction: return ctx.observed_abstraction(w);
    }
    return {};
}

/// Replaces `alphabet`'s high-level flags by the given set (names must exist).
inline Alphabet with_highlevel(Alphabet a, const std::vector<std::string>& hi) {
    std::fill(a.highlevel.begin(), a.highlevel.end(), false);
    for (const auto& n : hi) a.highlevel[a.require(n)] = true;
    return a;
}

inline Alphabet with_observable(Alphabet a, const std::vector<std::string>& obs) {
    std::fill(a.observable.begin(), a.observable.end(), false);
    for (const auto& n : obs) a.observable[a.require(n)] = true;
    return a;
}

/// Natural projection of an acceptor onto a target subalphabet: events
/// outside the target become silent moves and the result is determinized by
/// subset construction. Both the generated and the marked language are
/// projected.
inline Automaton project(const Automaton& a, const std::vector<std::string>& target) {
    std::vector<bool> keep(a.alphabet.size(), false);
    for (const auto& n : target) keep[a.alphabet.require(n)] = true;

    Adjacency adj(a);
    auto eclose = [&](std::set<int> s) {
        std::deque<int> q(s.begin(), s.end());
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (const auto& [e, d] : adj.out[x])
                if (!keep[e] && !s.count(d)) {
                    s.insert(d);
                    q.push_back(d);
                }
        }
        return s;
    };

    Alphabet na;
    std::vector<int> emap(a.alphabet.size(), -1);
    for (int e = 0; e < a.alphabet.size(); ++e)
        if (keep[e]) {
            emap[e] = na.size();
            na.add_event(a.alphabet.events[e], a.alphabet.controllable[e],
                         a.alphabet.observable[e], a.alphabet.highlevel[e]);
        }

    std::map<std::set<int>, int> ids;
    std::vector<std::set<int>> subsets;
    Automaton r;
    r.alphabet = na;
    auto intern = [&](const std::set<int>& s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        bool m = false;
        for (int x : s) m = m || a.marked[x];
        std::vector<int> sv(s.begin(), s.end());
        int id = r.add_state(detail::subset_name(a, sv), m);
        ids.emplace(s, id);
        subsets.push_back(s);
        return id;
    };

    r.initial = intern(eclose({a.initial}));
    for (int cur = 0; cur < static_cast<int>(subsets.size()); ++cur) {
        std::set<int> s = subsets[cur];
        for (int e = 0; e < a.alphabet.size(); ++e) {
            if (!keep[e]) continue;
            std::set<int> next;
            for (int x : s)
                for (int t : adj.step(x, e)) next.insert(t);
            if (next.empty()) continue;
            r.add_transition(cur, emap[e], intern(eclose(std::move(next))));
        }
    }
    return validate(std::move(r));
}

/// Inverse projection: the marked language becomes the full preimage over the
/// superset alphabet, realized by self-loops on the new events at every state.
inline Automaton inverse_project(const Automaton& a, const Alphabet& superset) {
    std::vector<int> emap(a.alphabet.size(), -1);
    for (int e = 0; e < a.alphabet.size(); ++e) {
        int f = superset.index_of(a.alphabet.events[e]);
        if (f < 0)
            throw Error(ErrorKind::AlphabetMismatch,
                        "AlphabetMismatch(inverse_project," + a.alphabet.events[e] + ")");
        emap[e] = f;
    }
    Automaton r;
    r.alphabet = superset;
    r.state_names = a.state_names;
    r.marked = a.marked;
    r.initial = a.initial;
    for (const auto& t : a.transitions) r.add_transition(t.src, emap[t.event], t.dst);
    std::vector<bool> is_old(superset.size(), false);
    for (int e = 0; e < a.alphabet.size(); ++e) is_old[emap[e]] = true;
    for (int f = 0; f < superset.size(); ++f)
        if (!is_old[f])
            for (int s = 0; s < r.num_states(); ++s) r.add_transition(s, f, s);
    return validate(std::move(r));
}

/// Union of two alphabets; shared events must carry identical attributes.
inline Alphabet merge_alphabets(const Alphabet& a, const Alphabet& b) {
    Alphabet u = a;
    for (int e = 0; e < b.size(); ++e) {
        int f = u.index_of(b.events[e]);
        if (f < 0) {
            u.add_event(b.events[e], b.controllable[e], b.observable[e], b.highlevel[e]);
        } else if (u.controllable[f] != b.controllable[e] || u.observable[f] != b.observable[e] ||
                   u.highlevel[f] != b.highlevel[e]) {
            throw Error(ErrorKind::AlphabetMismatch,
                        "AlphabetMismatch(attributes of " + b.events[e] + ")");
        }
    }
    return u;
}

/// Synchronous composition: shared events move jointly, private events move
/// alone; a tuple is marked when all components are.
inline Automaton parallel(const Automaton& a, const Automaton& b) {
    Alphabet u = merge_alphabets(a.alphabet, b.alphabet);
    Adjacency aa(a), ab(b);
    std::vector<int> ea(u.size(), -1), eb(u.size(), -1);
    for (int e = 0; e < u.size(); ++e) {
        ea[e] = a.alphabet.index_of(u.events[e]);
        eb[e] = b.alphabet.index_of(u.events[e]);
    }
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> pairs;
    Automaton r;
    r.alphabet = u;
    auto intern = [&](int x, int y) {
        auto it = ids.find({x, y});
        if (it != ids.end()) return it->second;
        int id = r.add_state(detail::pair_name(a.state_names[x], b.state_names[y]),
                             a.marked[x] && b.marked[y]);
        ids.emplace(std::make_pair(x, y), id);
        pairs.push_back({x, y});
        return id;
    };
    r.initial = intern(a.initial, b.initial);
    for (int cur = 0; cur < static_cast<int>(pairs.size()); ++cur) {
        auto [x, y] = pairs[cur];
        for (int e = 0; e < u.size(); ++e) {
            if (ea[e] >= 0 && eb[e] >= 0) {
                for (int nx : aa.step(x, ea[e]))
                    for (int ny : ab.step(y, eb[e])) r.add_transition(cur, e, intern(nx, ny));
            } else if (ea[e] >= 0) {
                for (int nx : aa.step(x, ea[e])) r.add_transition(cur, e, intern(nx, y));
            } else {
                for (int ny : ab.step(y, eb[e])) r.add_transition(cur, e, intern(x, ny));
            }
        }
    }
    return validate(std::move(r));
}

inline Automaton parallel(const std::vector<Automaton>& as) {
    if (as.empty()) throw Error(ErrorKind::DomainViolation, "parallel: no operands");
    Automaton r = as[0];
    for (size_t i = 1; i < as.size(); ++i) r = parallel(r, as[i]);
    return r;
}

/// Nonconflictingness: the closure of the composition equals the composition
/// of the closures.
inline bool nonconflicting(const std::vector<Automaton>& as) {
    std::vector<Automaton> closed;
    closed.reserve(as.size());
    for (const auto& a : as) closed.push_back(prefix_closure(a));
    return equivalent(prefix_closure(parallel(as)), parallel(closed));
}

struct ObserverResult {
    bool holds = true;
    std::optional<std::pair<Word, Word>> counterexample;  // (s, t)
};

/// Marked-language observer property of the abstraction map: every
/// high-level continuation of an abstracted prefix is realizable in the
/// marked language. Decided by a fixpoint over the product of the plant with
/// its determinized abstraction; a failure is then localized to the shortest
/// (|s| + |t|, lexicographic) violating pair.
inline ObserverResult check_observer(const Automaton& g, const ProjectionContext& ctx) {
    if (g.alphabet != ctx.alphabet)
        throw Error(ErrorKind::AlphabetMismatch, "AlphabetMismatch(check_observer)");
    if (!is_nonblocking(g)) throw Error(ErrorKind::BlockingPlant, "BlockingPlant(check_observer)");

    Automaton G = trim(determinize(trim(g)));
    std::vector<std::string> hi = G.alphabet.highlevel_events();
    Automaton abs = trim(project(G, hi));
    Adjacency gadj(G), absadj(abs);
    auto is_hi = [&](int e) { return G.alphabet.highlevel[e]; };
    auto abs_event = [&](int e) { return abs.alphabet.index_of(G.alphabet.events[e]); };

    // States that reach marking through low-level events only.
    std::vector<bool> lowmark = [&] {
        std::vector<std::vector<int>> rev(G.num_states());
        for (const auto& t : G.transitions)
            if (!is_hi(t.event)) rev[t.dst].push_back(t.src);
        std::vector<bool> seen(G.num_states(), false);
        std::deque<int> q;
        for (int i = 0; i < G.num_states(); ++i)
            if (G.marked[i]) {
                seen[i] = true;
                q.push_back(i);
            }
        while (!q.empty()) {
            int s = q.front();
            q.pop_front();
            for (int p : rev[s])
                if (!seen[p]) {
                    seen[p] = true;
                    q.push_back(p);
                }
        }
        return seen;
    }();

    // Forward low-level closures, per plant state.
    auto low_reach = [&](int x) {
        std::set<int> seen{x};
        std::deque<int> q{x};
        while (!q.empty()) {
            int s = q.front();
            q.pop_front();
            for (const auto& [e, d] : gadj.out[s])
                if (!is_hi(e) && !seen.count(d)) {
                    seen.insert(d);
                    q.push_back(d);
                }
        }
        return seen;
    };
    std::vector<std::set<int>> lowfwd(G.num_states());
    for (int x = 0; x < G.num_states(); ++x) lowfwd[x] = low_reach(x);

    // Reachable product pairs.
    std::map<std::pair<int, int>, int> pid;
    std::vector<std::pair<int, int>> pairs;
    std::deque<int> work;
    auto intern = [&](int x, int X) {
        auto it = pid.find({x, X});
        if (it != pid.end()) return it->second;
        int id = static_cast<int>(pairs.size());
        pid.emplace(std::make_pair(x, X), id);
        pairs.push_back({x, X});
        work.push_back(id);
        return id;
    };
    intern(G.initial, abs.initial);
    while (!work.empty()) {
        auto [x, X] = pairs[work.front()];
        work.pop_front();
        for (const auto& [e, y] : gadj.out[x]) {
            if (is_hi(e)) {
                auto nx = absadj.step(X, abs_event(e));
                intern(y, nx[0]);
            } else {
                intern(y, X);
            }
        }
    }

    // Greatest fixpoint: a pair survives if its marking is low-level
    // realizable and every abstract continuation can be matched into a
    // surviving pair.
    std::vector<bool> good(pairs.size(), true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (!good[i]) continue;
            auto [x, X] = pairs[i];
            bool ok = !abs.marked[X] || lowmark[x];
            if (ok) {
                for (const auto& [ae, Xn] : absadj.out[X]) {
                    int ge = G.alphabet.require(abs.alphabet.events[ae]);
                    bool matched = false;
                    for (int y : lowfwd[x]) {
                        for (int yn : gadj.step(y, ge)) {
                            auto it = pid.find({yn, Xn});
                            if (it != pid.end() && good[it->second]) {
                                matched = true;
                                break;
                            }
                        }
                        if (matched) break;
                    }
                    if (!matched) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) {
                good[i] = false;
                changed = true;
            }
        }
    }

    bool holds = std::all_of(good.begin(), good.end(), [](bool b) { return b; });
    ObserverResult res;
    res.holds = holds;
    if (holds) return res;

    // A violation exists; find the canonical shortest one by breadth-first
    // search over (s, t) candidates. The realizability of a remainder v from
    // a plant state is memoized.
    std::map<std::pair<int, std::string>, bool> realizable_memo;
    auto realizable = [&](int x, const Word& v) {
        auto key = std::make_pair(x, word_key(v));
        auto it = realizable_memo.find(key);
        if (it != realizable_memo.end()) return it->second;
        // BFS over (state, position in v).
        std::set<std::pair<int, size_t>> seen;
        std::deque<std::pair<int, size_t>> q{{x, 0}};
        seen.insert({x, 0});
        bool ok = false;
        while (!q.empty() && !ok) {
            auto [y, j] = q.front();
            q.pop_front();
            if (j == v.size() && G.marked[y]) {
                ok = true;
                break;
            }
            for (const auto& [e, d] : gadj.out[y]) {
                size_t nj = j;
                if (is_hi(e)) {
                    if (j >= v.size() || G.alphabet.events[e] != v[j]) continue;
                    nj = j + 1;
                }
                if (seen.insert({d, nj}).second) q.push_back({d, nj});
            }
        }
        realizable_memo.emplace(key, ok);
        return ok;
    };

    // Candidates (s, t) are scanned in order of |s| + |t|, then |s|, then
    // lexicographic; a future violation depends on s only through the plant
    // state, the abstraction state and |Q(s)|, so prefixes are deduplicated
    // on that key (keeping the lexicographically least representative).
    struct Node {
        int x, X;
        int qlen;
        Word s;
    };
    for (int total = 0;; ++total) {
        std::vector<Node> cur{{G.initial, abs.initial, 0, {}}};
        for (int slen = 0; slen <= total; ++slen) {
            for (const auto& nd : cur) {
                int vlen = total - slen - nd.qlen;
                if (vlen < 0) continue;
                // Remainders v of exactly vlen from nd.X ending marked, lex order.
                struct VNode {
                    int X;
                    Word v;
                };
                std::vector<VNode> vs{{nd.X, {}}};
                for (int k = 0; k < vlen; ++k) {
                    std::vector<VNode> nxt;
                    for (const auto& vn : vs)
                        for (const auto& [ae, Xn] : absadj.out[vn.X]) {
                            Word v2 = vn.v;
                            v2.push_back(abs.alphabet.events[ae]);
                            nxt.push_back({Xn, std::move(v2)});
                        }
                    vs = std::move(nxt);
                }
                for (const auto& vn : vs) {
                    if (!abs.marked[vn.X]) continue;
                    if (!realizable(nd.x, vn.v)) {
                        Word t = ctx.abstraction(nd.s);
                        t.insert(t.end(), vn.v.begin(), vn.v.end());
                        res.counterexample = {nd.s, t};
                        return res;
                    }
                }
            }
            // Advance to prefixes of length slen + 1, deduplicated.
            std::vector<Node> nxt;
            std::set<std::tuple<int, int, int>> taken;
            for (const auto& nd : cur)
                for (const auto& [e, y] : gadj.out[nd.x]) {
                    int Xn = is_hi(e) ? absadj.step(nd.X, abs_event(e))[0] : nd.X;
                    int ql = nd.qlen + (is_hi(e) ? 1 : 0);
                    if (!taken.insert({y, Xn, ql}).second) continue;
                    Word s2 = nd.s;
                    s2.push_back(G.alphabet.events[e]);
                    nxt.push_back({y, Xn, ql, std::move(s2)});
                }
            cur = std::move(nxt);
        }
    }
}

struct LccResult {
    bool holds = true;
    std::optional<std::pair<Word, std::string>> counterexample;  // (s, e)
};

/// Local control consistency of the abstraction: whenever an uncontrollable
/// high-level event is reachable after s through low-level events, it is also
/// reachable through uncontrollable low-level events alone.
inline LccResult check_lcc(const Automaton& g, const ProjectionContext& ctx) {
    if (g.alphabet != ctx.alphabet)
        throw Error(ErrorKind::AlphabetMismatch, "AlphabetMismatch(check_lcc)");
    Automaton G = trim(determinize(generated_automaton(g)));
    std::vector<std::string> hi = G.alphabet.highlevel_events();
    Automaton abs = project(G, hi);
    Adjacency gadj(G), absadj(abs);
    auto is_hi = [&](int e) { return G.alphabet.highlevel[e]; };

    auto closure = [&](int x, bool only_uncontrollable) {
        std::set<int> seen{x};
        std::deque<int> q{x};
        while (!q.empty()) {
            int s = q.front();
            q.pop_front();
            for (const auto& [e, d] : gadj.out[s]) {
                if (is_hi(e)) continue;
                if (only_uncontrollable && G.alphabet.controllable[e]) continue;
                if (!seen.count(d)) {
                    seen.insert(d);
                    q.push_back(d);
                }
            }
        }
        return seen;
    };

    // BFS over reachable (plant state, abstraction state) pairs, tracking the
    // shortest length-lex witness prefix.
    std::set<std::pair<int, int>> seen;
    std::deque<std::tuple<int, int, Word>> q;
    q.push_back({G.initial, abs.initial, {}});
    seen.insert({G.initial, abs.initial});
    while (!q.empty()) {
        auto [x, X, s] = q.front();
        q.pop_front();
        auto low = closure(x, false);
        auto lowuc = closure(x, true);
        for (int e = 0; e < G.alphabet.size(); ++e) {
            if (!is_hi(e) || G.alphabet.controllable[e]) continue;
            int ae = abs.alphabet.index_of(G.alphabet.events[e]);
            if (absadj.step(X, ae).empty()) continue;  // Q(s)e not in the abstraction
            auto enabled = [&](const std::set<int>& from) {
                for (int y : from)
                    if (!gadj.step(y, e).empty()) return true;
                return false;
            };
            if (enabled(low) && !enabled(lowuc)) {
                LccResult r;
                r.holds = false;
                r.counterexample = {s, G.alphabet.events[e]};
                return r;
            }
        }
        for (const auto& [e, y] : gadj.out[x]) {
            int Xn = X;
            if (is_hi(e)) Xn = absadj.step(X, abs.alphabet.index_of(G.alphabet.events[e]))[0];
            if (seen.insert({y, Xn}).second) {
                Word s2 = s;
                s2.push_back(G.alphabet.events[e]);
                q.push_back({y, Xn, std::move(s2)});
            }
        }
    }
    return {};
}

/// Greedy high-level alphabet extension: while the observer property or LCC
/// fails, promote the low-level events occurring in the reported shortest
/// counterexample (for LCC, in the shortest enabling low-level path); the
/// full alphabet is always a fixpoint, so the loop terminates.
inline std::vector<std::string> extend_observer_lcc(const Automaton& g,
                                                    const std::vector<std::string>& seed) {
    std::set<std::string> hi;
    for (const auto& n : seed) {
        g.alphabet.require(n);
        hi.insert(n);
    }
    auto current = [&] {
        return std::vector<std::string>(hi.begin(), hi.end());
    };
    auto fallback_event = [&]() -> std::optional<std::string> {
        for (int e = 0; e < g.alphabet.size(); ++e) {
            const std::string& n = g.alphabet.events[e];
            if (hi.count(n)) continue;
            for (const auto& t : g.transitions)
                if (t.event == e) return n;
        }
        return std::nullopt;
    };

    for (;;) {
        Alphabet alpha = with_highlevel(g.alphabet, current());
        Automaton gg = g;
        gg.alphabet = alpha;
        ProjectionContext ctx{alpha};

        auto obs = check_observer(gg, ctx);
        if (!obs.holds) {
            size_t before = hi.size();
            for (const auto& ev : obs.counterexample->first)
                if (!hi.count(ev)) hi.insert(ev);
            if (hi.size() == before) {
                auto fb = fallback_event();
                if (!fb) return current();
                hi.insert(*fb);
            }
            continue;
        }
        auto lcc = check_lcc(gg, ctx);
        if (!lcc.holds) {
            size_t before = hi.size();
            // Shortest low-level path enabling the offending event.
            Automaton G = trim(determinize(generated_automaton(gg)));
            Adjacency gadj(G);
            int x = G.initial;
            for (const auto& ev : lcc.counterexample->first)
                x = gadj.step(x, G.alphabet.require(ev))[0];
            int bad = G.alphabet.require(lcc.counterexample->second);
            std::map<int, std::pair<int, int>> parent;  // state -> (prev, event)
            std::deque<int> q{x};
            parent[x] = {-1, -1};
            int hit = -1;
            while (!q.empty() && hit < 0) {
                int y = q.front();
                q.pop_front();
                if (!gadj.step(y, bad).empty() && y != x) {
                    hit = y;
                    break;
                }
                for (const auto& [e, d] : gadj.out[y]) {
                    if (G.alphabet.highlevel[e]) continue;
                    if (!parent.count(d)) {
                        parent[d] = {y, e};
                        q.push_back(d);
                    }
                }
            }
            if (hit >= 0) {
                for (int cur = hit; parent[cur].first >= 0; cur = parent[cur].first)
                    hi.insert(G.alphabet.events[parent[cur].second]);
            }
            if (hi.size() == before) {
                auto fb = fallback_event();
                if (!fb) return current();
                hi.insert(*fb);
            }
            continue;
        }
        return current();
    }
}

}  // namespace hsc
