/* relational.hpp -- relational languages and observation-consistency checks
 *
 * Pair automata couple two acceptors through a synchronization alphabet; a
 * pair-string spells two component strings that agree on the synchronized
 * events. The consistency checkers (OC, MOC, LOC) enumerate candidate pairs
 * breadth-first from such a product, but never judge a candidate by raw
 * relational-language inclusion -- string-level inclusion over pair alphabets
 * is interleaving-sensitive. Each candidate is decided by a per-pair semantic
 * check, which is exact. Outcomes are three-valued: Holds (with a proof
 * kind), Violated (with a re-checkable counterexample), or BoundedPass.
 */

#pragma once

#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "hsc/projection.hpp"

namespace hsc {

struct PairEvent {
    std::string left;   // empty = silent component
    std::string right;

    std::string name() const {
        return (left.empty() ? "-" : left) + "|" + (right.empty() ? "-" : right);
    }

    static PairEvent parse(const std::string& name) {
        auto bar = name.find('|');
        if (bar == std::string::npos)
            throw Error(ErrorKind::ParseError, "not a pair event: '" + name + "'");
        std::string l = name.substr(0, bar);
        std::string r = name.substr(bar + 1);
        return PairEvent{l == "-" ? "" : l, r == "-" ? "" : r};
    }
};

/// Acceptor over pair events, together with the component alphabets and the
/// synchronization alphabet.
struct PairAutomaton {
    Automaton aut;
    Alphabet left_alphabet;
    Alphabet right_alphabet;
    std::vector<std::string> sync;

    /// Splits a pair-string into its component strings.
    static std::pair<Word, Word> decompose(const Word& pair_string) {
        Word l, r;
        for (const auto& name : pair_string) {
            PairEvent pe = PairEvent::parse(name);
            if (!pe.left.empty()) l.push_back(pe.left);
            if (!pe.right.empty()) r.push_back(pe.right);
        }
        return {l, r};
    }
};

struct Verdict {
    enum class Kind { Holds, Violated, BoundedPass };
    enum class HoldsBy { SufficientCondition, ExhaustiveFinite };

    Kind kind = Kind::Holds;
    HoldsBy holds_by = HoldsBy::ExhaustiveFinite;
    std::vector<Word> counterexample;  // (t,t') / (s,t') / (s,s',e)
    int bound = 0;

    bool holds() const { return kind == Kind::Holds; }
    bool violated() const { return kind == Kind::Violated; }

    static Verdict sufficient() { return {Kind::Holds, HoldsBy::SufficientCondition, {}, 0}; }
    static Verdict exhaustive(int bound) {
        return {Kind::Holds, HoldsBy::ExhaustiveFinite, {}, bound};
    }
    static Verdict violated_with(std::vector<Word> cex, int bound) {
        return {Kind::Violated, HoldsBy::ExhaustiveFinite, std::move(cex), bound};
    }
    static Verdict bounded(int bound) {
        return {Kind::BoundedPass, HoldsBy::ExhaustiveFinite, {}, bound};
    }
};

inline std::string to_string(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::Holds: return "holds";
        case Verdict::Kind::Violated: return "violated";
        case Verdict::Kind::BoundedPass: return "bounded_pass";
    }
    return "?";
}

/// Either every observable event is high-level or every high-level event is
/// observable; both force (modified) observation consistency.
inline bool sufficient_moc(const ProjectionContext& ctx) {
    bool o_in_hi = true, hi_in_o = true;
    for (int e = 0; e < ctx.alphabet.size(); ++e) {
        if (ctx.observable(e) && !ctx.highlevel(e)) o_in_hi = false;
        if (ctx.highlevel(e) && !ctx.observable(e)) hi_in_o = false;
    }
    return o_in_hi || hi_in_o;
}

/// Parallel composition of two acceptors synchronized on an explicit event
/// set: synchronized events step jointly as (a,a); all other events step one
/// component as (a,-) or (-,b). The accepted pair-strings are exactly the
/// pairs (w,w') of component strings agreeing on the synchronization set.
inline PairAutomaton sync_pair_product(const Automaton& a, const Automaton& b,
                                       const std::vector<std::string>& syncset) {
    for (const auto& s : syncset)
        if (!a.alphabet.contains(s) || !b.alphabet.contains(s))
            throw Error(ErrorKind::SyncSetNotShared, "SyncSetNotShared(" + s + ")");
    std::set<std::string> sync(syncset.begin(), syncset.end());

    Alphabet pairs;
    std::vector<int> left_event;   // pair event -> event index in a, or -1
    std::vector<int> right_event;  // pair event -> event index in b, or -1
    for (int e = 0; e < a.alphabet.size(); ++e) {
        const std::string& n = a.alphabet.events[e];
        if (sync.count(n)) {
            pairs.add_event(PairEvent{n, n}.name());
            left_event.push_back(e);
            right_event.push_back(b.alphabet.require(n));
        } else {
            pairs.add_event(PairEvent{n, ""}.name());
            left_event.push_back(e);
            right_event.push_back(-1);
        }
    }
    for (int e = 0; e < b.alphabet.size(); ++e) {
        const std::string& n = b.alphabet.events[e];
        if (sync.count(n)) continue;
        pairs.add_event(PairEvent{"", n}.name());
        left_event.push_back(-1);
        right_event.push_back(e);
    }

    Adjacency aa(a), ab(b);
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> states;
    Automaton r;
    r.alphabet = pairs;
    auto intern = [&](int x, int y) {
        auto it = ids.find({x, y});
        if (it != ids.end()) return it->second;
        int id = r.add_state(detail::pair_name(a.state_names[x], b.state_names[y]),
                             a.marked[x] && b.marked[y]);
        ids.emplace(std::make_pair(x, y), id);
        states.push_back({x, y});
        return id;
    };
    r.initial = intern(a.initial, b.initial);
    for (int cur = 0; cur < static_cast<int>(states.size()); ++cur) {
        auto [x, y] = states[cur];
        for (int pe = 0; pe < pairs.size(); ++pe) {
            int le = left_event[pe], re = right_event[pe];
            if (le >= 0 && re >= 0) {
                for (int nx : aa.step(x, le))
                    for (int ny : ab.step(y, re)) r.add_transition(cur, pe, intern(nx, ny));
            } else if (le >= 0) {
                for (int nx : aa.step(x, le)) r.add_transition(cur, pe, intern(nx, y));
            } else {
                for (int ny : ab.step(y, re)) r.add_transition(cur, pe, intern(x, ny));
            }
        }
    }
    PairAutomaton out;
    out.aut = validate(std::move(r));
    out.left_alphabet = a.alphabet;
    out.right_alphabet = b.alphabet;
    out.sync = syncset;
    return out;
}

namespace detail {

/// Relabels pair events and eliminates the ones that become fully silent.
inline PairAutomaton map_pair_events(const PairAutomaton& pa,
                                     const std::function<PairEvent(const PairEvent&)>& f,
                                     Alphabet new_left, Alphabet new_right,
                                     std::vector<std::string> new_sync) {
    const Automaton& a = pa.aut;
    int m = a.alphabet.size();
    std::vector<int> mapped(m, -1);  // old event -> new event, -1 = silent
    Alphabet na;
    for (int e = 0; e < m; ++e) {
        PairEvent pe = f(PairEvent::parse(a.alphabet.events[e]));
        if (pe.left.empty() && pe.right.empty()) continue;
        std::string name = pe.name();
        int idx = na.index_of(name);
        if (idx < 0) {
            idx = na.size();
            na.add_event(name);
        }
        mapped[e] = idx;
    }

    Adjacency adj(a);
    auto eclose = [&](int s) {
        std::set<int> c{s};
        std::deque<int> q{s};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (const auto& [e, d] : adj.out[x])
                if (mapped[e] < 0 && !c.count(d)) {
                    c.insert(d);
                    q.push_back(d);
                }
        }
        return c;
    };

    Automaton r;
    r.alphabet = na;
    r.state_names = a.state_names;
    r.initial = a.initial;
    r.marked.assign(a.num_states(), false);
    for (int s = 0; s < a.num_states(); ++s)
        for (int x : eclose(s))
            if (a.marked[x]) r.marked[s] = true;
    for (int s = 0; s < a.num_states(); ++s)
        for (int x : eclose(s))
            for (const auto& [e, d] : adj.out[x])
                if (mapped[e] >= 0) r.add_transition(s, mapped[e], d);

    PairAutomaton out;
    out.aut = validate(std::move(r));
    out.left_alphabet = std::move(new_left);
    out.right_alphabet = std::move(new_right);
    out.sync = std::move(new_sync);
    return out;
}

inline Alphabet restrict_alphabet(const Alphabet& a, const std::vector<bool>& keep) {
    Alphabet r;
    for (int e = 0; e < a.size(); ++e)
        if (keep[e]) r.add_event(a.events[e], a.controllable[e], a.observable[e], a.highlevel[e]);
    return r;
}

}  // namespace detail

inline Alphabet high_alphabet(const ProjectionContext& ctx) {
    return detail::restrict_alphabet(ctx.alphabet, ctx.alphabet.highlevel);
}

inline Alphabet observable_alphabet(const ProjectionContext& ctx) {
    return detail::restrict_alphabet(ctx.alphabet, ctx.alphabet.observable);
}

/// Applies the abstraction to both components of every pair event; events
/// that become fully silent are erased.
inline PairAutomaton map_pairs_abstraction(const PairAutomaton& pa, const ProjectionContext& ctx) {
    auto abs1 = [&](const std::string& e) -> std::string {
        if (e.empty()) return e;
        return ctx.highlevel(ctx.alphabet.require(e)) ? e : "";
    };
    std::vector<std::string> nsync;
    for (const auto& s : pa.sync)
        if (ctx.highlevel(ctx.alphabet.require(s))) nsync.push_back(s);
    auto keep = [&](const Alphabet& comp) {
        std::vector<bool> k(comp.size());
        for (int e = 0; e < comp.size(); ++e)
            k[e] = ctx.highlevel(ctx.alphabet.require(comp.events[e]));
        return k;
    };
    return detail::map_pair_events(
        pa, [&](const PairEvent& pe) { return PairEvent{abs1(pe.left), abs1(pe.right)}; },
        detail::restrict_alphabet(pa.left_alphabet, keep(pa.left_alphabet)),
        detail::restrict_alphabet(pa.right_alphabet, keep(pa.right_alphabet)), nsync);
}

/// Applies the abstraction to the right component only.
inline PairAutomaton map_pairs_right_abstraction(const PairAutomaton& pa,
                                                 const ProjectionContext& ctx) {
    auto abs1 = [&](const std::string& e) -> std::string {
        if (e.empty()) return e;
        return ctx.highlevel(ctx.alphabet.require(e)) ? e : "";
    };
    std::vector<std::string> nsync;
    for (const auto& s : pa.sync)
        if (ctx.highlevel(ctx.alphabet.require(s))) nsync.push_back(s);
    auto keep = [&](const Alphabet& comp) {
        std::vector<bool> k(comp.size());
        for (int e = 0; e < comp.size(); ++e)
            k[e] = ctx.highlevel(ctx.alphabet.require(comp.events[e]));
        return k;
    };
    return detail::map_pair_events(
        pa, [&](const PairEvent& pe) { return PairEvent{pe.left, abs1(pe.right)}; },
        pa.left_alphabet, detail::restrict_alphabet(pa.right_alphabet, keep(pa.right_alphabet)),
        nsync);
}

/// Decides whether high-level strings t, t' lift to low-level strings with a
/// common observation: P(Q^-1(t) cap L) cap P(Q^-1(t') cap L) nonempty. On
/// success returns shortest witnesses (s, s') with matching observation.
inline std::optional<std::pair<Word, Word>> oc_pair_witness(const Automaton& l,
                                                            const ProjectionContext& ctx,
                                                            const Word& t, const Word& tp) {
    Alphabet hi = high_alphabet(ctx);
    Alphabet obs = observable_alphabet(ctx);
    auto lang_of = [&](const Word& w) {
        return combine(SetOp::Intersection, inverse_project(word_automaton(hi, w), ctx.alphabet),
                       l);
    };
    Automaton wt = lang_of(t);
    Automaton wtp = lang_of(tp);
    Automaton obs_t = project(wt, obs.events);
    Automaton obs_tp = project(wtp, obs.events);
    if (obs_t.alphabet.events != obs_tp.alphabet.events) return std::nullopt;
    Automaton common = combine(SetOp::Intersection, obs_t, obs_tp);
    auto o = shortest_marked(common);
    if (!o) return std::nullopt;
    Automaton obs_line = inverse_project(word_automaton(obs, *o), ctx.alphabet);
    auto s = shortest_marked(combine(SetOp::Intersection, wt, obs_line));
    auto sp = shortest_marked(combine(SetOp::Intersection, wtp, obs_line));
    if (!s || !sp) return std::nullopt;
    return std::make_pair(*s, *sp);
}

/// Decides whether P(s) lies in P(Q^-1(t') cap L); returns a shortest witness
/// s' on success.
inline std::optional<Word> moc_pair_witness(const Automaton& l, const ProjectionContext& ctx,
                                            const Word& s, const Word& tp) {
    Alphabet hi = high_alphabet(ctx);
    Alphabet obs = observable_alphabet(ctx);
    Automaton w = combine(SetOp::Intersection, inverse_project(word_automaton(hi, tp), ctx.alphabet), l);
    Word o = ctx.observation(s);
    Automaton w2 = combine(SetOp::Intersection, w,
                           inverse_project(word_automaton(obs, o), ctx.alphabet));
    return shortest_marked(w2);
}

namespace detail {

inline int pair_weight(const std::string& pair_event_name) {
    PairEvent pe = PairEvent::parse(pair_event_name);
    return (pe.left.empty() ? 0 : 1) + (pe.right.empty() ? 0 : 1);
}

/// Longest combined |w| + |w'| over the pair automaton's strings; requires a
/// finite pair language.
inline int longest_pair_length(const Automaton& pair_aut) {
    Automaton t = trim(pair_aut);
    std::vector<int> best(t.num_states(), -1);
    best[t.initial] = 0;
    for (int pass = 0; pass <= t.num_states(); ++pass) {
        bool changed = false;
        for (const auto& tr : t.transitions) {
            int w = pair_weight(t.alphabet.events[tr.event]);
            if (best[tr.src] >= 0 && best[tr.src] + w > best[tr.dst]) {
                best[tr.dst] = best[tr.src] + w;
                changed = true;
            }
        }
        if (changed && pass == t.num_states())
            throw Error(ErrorKind::DomainViolation, "pair language is infinite");
    }
    int ans = 0;
    for (int i = 0; i < t.num_states(); ++i)
        if (t.marked[i] && best[i] > ans) ans = best[i];
    return ans;
}

/// A deterministic all-states-marked presentation of a prefix-closed marked
/// language; throws NotPrefixClosed otherwise.
inline Automaton closed_dfa(const Automaton& l, const char* who) {
    if (!is_prefix_closed(l))
        throw Error(ErrorKind::NotPrefixClosed, std::string("NotPrefixClosed(") + who + ")");
    Automaton d = trim(determinize(trim(l)));
    for (int i = 0; i < d.num_states(); ++i) d.marked[i] = true;
    return d;
}

/// Event-index strings, compared in declaration order.
using IWord = std::vector<int>;

/// Shared scaffolding for the bounded candidate searches: a monotone bucket
/// queue over combined candidate length (asynchronous steps cost 1,
/// synchronized steps cost 2), with memoization on a semantic key. Candidates
/// reaching a known key are pruned: the key determines every future verdict.
/// Within a bucket, candidates are processed in lexicographic order of their
/// component strings, so the reported counterexample is the canonical one.
template <typename Key, typename Expand, typename Violated, typename Package>
Verdict bucket_search(const Key& init, int bound, bool finite, int maxlen, Expand&& expand,
                      Violated&& violated, Package&& package) {
    struct Entry {
        Key key;
        IWord s, t;
    };
    std::vector<std::vector<Entry>> buckets(static_cast<size_t>(bound) + 3);
    buckets[0].push_back({init, {}, {}});
    std::set<Key> seen;
    for (int d = 0; d <= bound; ++d) {
        auto& bucket = buckets[d];
        std::stable_sort(bucket.begin(), bucket.end(), [](const Entry& a, const Entry& b) {
            if (a.s != b.s) return a.s < b.s;
            return a.t < b.t;
        });
        for (const auto& entry : bucket) {
            if (!seen.insert(entry.key).second) continue;
            if (violated(entry.key))
                return Verdict::violated_with(package(entry.s, entry.t), bound);
            expand(entry.key, entry.s, entry.t, d,
                   [&](const Key& k, const IWord& s, const IWord& t, int nd) {
                       if (nd <= bound) buckets[nd].push_back({k, s, t});
                   });
        }
        bucket.clear();
    }
    if (finite && bound >= maxlen) return Verdict::exhaustive(bound);
    return Verdict::bounded(bound);
}

inline Word decode(const Alphabet& a, const IWord& w) {
    Word out;
    out.reserve(w.size());
    for (int e : w) out.push_back(a.events[e]);
    return out;
}

}  // namespace detail

/// Modified observation consistency of the prefix-closed marked language of
/// l. Candidates (s, t') agreeing on the high-level observable events are
/// drawn breadth-first from the pair product of the plant with its
/// abstraction; each candidate is judged semantically: does some s' in L
/// satisfy Q(s') = t' and P(s') = P(s)? The witness configurations are
/// carried along the search (states of l plus the consumption offset into
/// the pending high-level suffix of t'), which keeps every judgement exact.
inline Verdict check_moc(const Automaton& l, const ProjectionContext& ctx, int bound = -1) {
    if (l.alphabet != ctx.alphabet)
        throw Error(ErrorKind::AlphabetMismatch, "AlphabetMismatch(check_moc)");
    if (sufficient_moc(ctx)) return Verdict::sufficient();
    Automaton L = detail::closed_dfa(l, "check_moc");
    Automaton QL = trim(project(L, L.alphabet.highlevel_events()));
    Adjacency ladj(L), qadj(QL);
    auto is_hi = [&](int e) { return L.alphabet.highlevel[e]; };
    auto is_obs = [&](int e) { return L.alphabet.observable[e]; };
    std::vector<int> q_event(L.alphabet.size(), -1);  // L event -> QL event
    for (int e = 0; e < L.alphabet.size(); ++e)
        if (is_hi(e)) q_event[e] = QL.alphabet.index_of(L.alphabet.events[e]);

    PairAutomaton candidates = sync_pair_product(L, QL, [&] {
        std::vector<std::string> sync;
        for (int e = 0; e < L.alphabet.size(); ++e)
            if (is_hi(e) && is_obs(e)) sync.push_back(L.alphabet.events[e]);
        return sync;
    }());
    Automaton cand_trim = trim(candidates.aut);
    if (bound < 0) bound = 2 * cand_trim.num_states();
    bool finite = has_finite_language(cand_trim);
    int maxlen = finite ? detail::longest_pair_length(cand_trim) : 0;

    // Search key: plant state, abstraction state, pending high-unobservable
    // suffix of t', and the witness configurations (plant state, consumed
    // offset into the pending suffix), closed under silent moves. Candidates
    // are enumerated in a canonical interleaving: all t'-events of a window
    // precede the observable s-events of that window (`frozen` marks that an
    // observable s-event happened since the last synchronized event, barring
    // further t'-growth until the window closes). Every pair (s, t') has such
    // an interleaving, and along it the witness tracking is exact.
    struct Key {
        int p, q;
        bool frozen;
        std::vector<int> rho;                   // pending events (L indices)
        std::vector<std::pair<int, int>> zset;  // sorted (state, offset)
        auto operator<=>(const Key&) const = default;
    };

    auto close = [&](std::vector<std::pair<int, int>> z, const std::vector<int>& rho) {
        std::set<std::pair<int, int>> s(z.begin(), z.end());
        std::deque<std::pair<int, int>> q(z.begin(), z.end());
        while (!q.empty()) {
            auto [x, k] = q.front();
            q.pop_front();
            for (const auto& [e, d] : ladj.out[x]) {
                if (!is_obs(e) && !is_hi(e)) {
                    if (s.insert({d, k}).second) q.push_back({d, k});
                } else if (is_hi(e) && !is_obs(e) && k < static_cast<int>(rho.size()) &&
                           e == rho[k]) {
                    if (s.insert({d, k + 1}).second) q.push_back({d, k + 1});
                }
            }
        }
        return std::vector<std::pair<int, int>>(s.begin(), s.end());
    };

    auto violated = [&](const Key& k) {
        int full = static_cast<int>(k.rho.size());
        for (const auto& [z, off] : k.zset)
            if (off == full) return false;
        return true;
    };

    Key init{L.initial, QL.initial, {}, close({{L.initial, 0}}, {})};

    auto expand = [&](const Key& key, const detail::IWord& s, const detail::IWord& t, int d,
                      auto&& push) {
        // Left steps: every plant transition that is not a synchronized event.
        for (const auto& [e, pn] : ladj.out[key.p]) {
            if (is_hi(e) && is_obs(e)) continue;
            Key nk;
            nk.p = pn;
            nk.q = key.q;
            nk.rho = key.rho;
            if (is_obs(e)) {
                std::vector<std::pair<int, int>> moved;
                for (const auto& [z, off] : key.zset)
                    for (int zd : ladj.step(z, e)) moved.push_back({zd, off});
                nk.zset = close(std::move(moved), nk.rho);
            } else {
                nk.zset = key.zset;
            }
            detail::IWord ns = s;
            ns.push_back(e);
            push(nk, ns, t, d + 1);
        }
        // Right steps: abstraction moves on high-level unobservable events.
        for (const auto& [qe, qn] : qadj.out[key.q]) {
            int e = L.alphabet.require(QL.alphabet.events[qe]);
            if (is_obs(e)) continue;
            Key nk;
            nk.p = key.p;
            nk.q = qn;
            nk.rho = key.rho;
            nk.rho.push_back(e);
            nk.zset = close(key.zset, nk.rho);
            detail::IWord nt = t;
            nt.push_back(e);
            push(nk, s, nt, d + 1);
        }
        // Synchronized steps: both sides move on a high-level observable
        // event; witnesses must be fully caught up, then consume it too.
        for (const auto& [e, pn] : ladj.out[key.p]) {
            if (!(is_hi(e) && is_obs(e))) continue;
            auto qnext = qadj.step(key.q, q_event[e]);
            if (qnext.empty()) continue;
            Key nk;
            nk.p = pn;
            nk.q = qnext[0];
            int full = static_cast<int>(key.rho.size());
            std::vector<std::pair<int, int>> moved;
            for (const auto& [z, off] : key.zset)
                if (off == full)
                    for (int zd : ladj.step(z, e)) moved.push_back({zd, 0});
            nk.zset = close(std::move(moved), nk.rho);
            detail::IWord ns = s, nt = t;
            ns.push_back(e);
            nt.push_back(e);
            push(nk, ns, nt, d + 2);
        }
    };

    return detail::bucket_search<Key>(init, bound, finite, maxlen, expand, violated,
                                      [&](const detail::IWord& s, const detail::IWord& t) {
                                          return std::vector<Word>{detail::decode(L.alphabet, s),
                                                                   detail::decode(L.alphabet, t)};
                                      });
}

/// Observation consistency of the prefix-closed marked language of l.
/// Candidates (t, t') with equal high-level observations come from the pair
/// product of the abstraction with itself; a candidate passes when some pair
/// (s, s') in L x L lifts it with equal observations. The witness pairs are
/// tracked jointly (two plant states plus consumption offsets into the two
/// pending suffixes), synchronized on every observable event.
inline Verdict check_oc(const Automaton& l, const ProjectionContext& ctx, int bound = -1) {
    if (l.alphabet != ctx.alphabet)
        throw Error(ErrorKind::AlphabetMismatch, "AlphabetMismatch(check_oc)");
    if (sufficient_moc(ctx)) return Verdict::sufficient();
    Automaton L = detail::closed_dfa(l, "check_oc");
    Automaton QL = trim(project(L, L.alphabet.highlevel_events()));
    Adjacency ladj(L), qadj(QL);
    auto is_hi = [&](int e) { return L.alphabet.highlevel[e]; };
    auto is_obs = [&](int e) { return L.alphabet.observable[e]; };

    PairAutomaton candidates = sync_pair_product(QL, QL, [&] {
        std::vector<std::string> sync;
        for (int e = 0; e < L.alphabet.size(); ++e)
            if (is_hi(e) && is_obs(e)) sync.push_back(L.alphabet.events[e]);
        return sync;
    }());
    Automaton cand_trim = trim(candidates.aut);
    if (bound < 0) bound = 2 * cand_trim.num_states();
    bool finite = has_finite_language(cand_trim);
    int maxlen = finite ? detail::longest_pair_length(cand_trim) : 0;

    struct ZC {
        int zl, zr, kl, kr;
        auto operator<=>(const ZC&) const = default;
    };
    struct Key {
        int q1, q2;
        std::vector<int> rho1, rho2;
        std::vector<ZC> zset;
        auto operator<=>(const Key&) const = default;
    };

    auto close = [&](std::vector<ZC> z, const std::vector<int>& rho1,
                     const std::vector<int>& rho2) {
        std::set<ZC> s(z.begin(), z.end());
        std::deque<ZC> q(z.begin(), z.end());
        while (!q.empty()) {
            ZC c = q.front();
            q.pop_front();
            // Left-witness silent moves.
            for (const auto& [e, d] : ladj.out[c.zl]) {
                if (!is_obs(e) && !is_hi(e)) {
                    ZC n{d, c.zr, c.kl, c.kr};
                    if (s.insert(n).second) q.push_back(n);
                } else if (is_hi(e) && !is_obs(e) && c.kl < static_cast<int>(rho1.size()) &&
                           e == rho1[c.kl]) {
                    ZC n{d, c.zr, c.kl + 1, c.kr};
                    if (s.insert(n).second) q.push_back(n);
                }
            }
            // Right-witness silent moves.
            for (const auto& [e, d] : ladj.out[c.zr]) {
                if (!is_obs(e) && !is_hi(e)) {
                    ZC n{c.zl, d, c.kl, c.kr};
                    if (s.insert(n).second) q.push_back(n);
                } else if (is_hi(e) && !is_obs(e) && c.kr < static_cast<int>(rho2.size()) &&
                           e == rho2[c.kr]) {
                    ZC n{c.zl, d, c.kl, c.kr + 1};
                    if (s.insert(n).second) q.push_back(n);
                }
            }
            // Joint moves on observable low-level events.
            for (const auto& [e, d] : ladj.out[c.zl]) {
                if (!is_obs(e) || is_hi(e)) continue;
                for (int dr : ladj.step(c.zr, e)) {
                    ZC n{d, dr, c.kl, c.kr};
                    if (s.insert(n).second) q.push_back(n);
                }
            }
        }
        return std::vector<ZC>(s.begin(), s.end());
    };

    auto violated = [&](const Key& k) {
        int f1 = static_cast<int>(k.rho1.size());
        int f2 = static_cast<int>(k.rho2.size());
        for (const auto& c : k.zset)
            if (c.kl == f1 && c.kr == f2) return false;
        return true;
    };

    Key init{QL.initial, QL.initial, {}, {}, close({{L.initial, L.initial, 0, 0}}, {}, {})};

    auto expand = [&](const Key& key, const detail::IWord& s, const detail::IWord& t, int d,
                      auto&& push) {
        // Left candidate steps: abstraction events outside the observable set.
        for (const auto& [qe, qn] : qadj.out[key.q1]) {
            int e = L.alphabet.require(QL.alphabet.events[qe]);
            if (is_obs(e)) continue;
            Key nk = key;
            nk.q1 = qn;
            nk.rho1.push_back(e);
            nk.zset = close(key.zset, nk.rho1, nk.rho2);
            detail::IWord ns = s;
            ns.push_back(e);
            push(nk, ns, t, d + 1);
        }
        // Right candidate steps.
        for (const auto& [qe, qn] : qadj.out[key.q2]) {
            int e = L.alphabet.require(QL.alphabet.events[qe]);
            if (is_obs(e)) continue;
            Key nk = key;
            nk.q2 = qn;
            nk.rho2.push_back(e);
            nk.zset = close(key.zset, nk.rho1, nk.rho2);
            detail::IWord nt = t;
            nt.push_back(e);
            push(nk, s, nt, d + 1);
        }
        // Synchronized candidate steps on high-level observable events.
        for (const auto& [qe, qn1] : qadj.out[key.q1]) {
            int e = L.alphabet.require(QL.alphabet.events[qe]);
            if (!is_obs(e)) continue;
            auto q2next = qadj.step(key.q2, qe);
            if (q2next.empty()) continue;
            Key nk;
            nk.q1 = qn1;
            nk.q2 = q2next[0];
            int f1 = static_cast<int>(key.rho1.size());
            int f2 = static_cast<int>(key.rho2.size());
            std::vector<ZC> moved;
            for (const auto& c : key.zset) {
                if (c.kl != f1 || c.kr != f2) continue;
                for (int dl : ladj.step(c.zl, e))
                    for (int dr : ladj.step(c.zr, e)) moved.push_back({dl, dr, 0, 0});
            }
            nk.zset = close(std::move(moved), nk.rho1, nk.rho2);
            detail::IWord ns = s, nt = t;
            ns.push_back(e);
            nt.push_back(e);
            push(nk, ns, nt, d + 2);
        }
    };

    return detail::bucket_search<Key>(init, bound, finite, maxlen, expand, violated,
                                      [&](const detail::IWord& s, const detail::IWord& t) {
                                          return std::vector<Word>{detail::decode(L.alphabet, s),
                                                                   detail::decode(L.alphabet, t)};
                                      });
}

/// Local observation consistency: every pair of observation-equivalent
/// strings whose abstractions both extend by a controllable high-level event
/// e admits low-level continuations with equal observations that enable e.
/// The per-candidate check is a joint reachability question over low-level
/// pairs; candidates are memoized on the two plant states plus the two
/// abstraction states.
inline Verdict check_loc(const Automaton& l, const ProjectionContext& ctx, int bound = -1) {
    if (l.alphabet != ctx.alphabet)
        throw Error(ErrorKind::AlphabetMismatch, "AlphabetMismatch(check_loc)");
    Automaton L = detail::closed_dfa(l, "check_loc");
    Automaton QL = trim(project(L, L.alphabet.highlevel_events()));
    Adjacency ladj(L), qadj(QL);
    auto is_hi = [&](int e) { return L.alphabet.highlevel[e]; };
    auto is_obs = [&](int e) { return L.alphabet.observable[e]; };
    auto is_ctrl = [&](int e) { return L.alphabet.controllable[e]; };

    std::vector<int> ctrl_hi;
    for (int e = 0; e < L.alphabet.size(); ++e)
        if (is_hi(e) && is_ctrl(e)) ctrl_hi.push_back(e);
    if (ctrl_hi.empty()) return Verdict::exhaustive(bound < 0 ? 0 : bound);

    PairAutomaton candidates = sync_pair_product(L, L, L.alphabet.observable_events());
    Automaton cand_trim = trim(candidates.aut);
    if (bound < 0) bound = 2 * cand_trim.num_states();
    bool finite = has_finite_language(cand_trim);
    int maxlen = finite ? detail::longest_pair_length(cand_trim) : 0;

    // Joint low-level reachability: from (x, x'), which pairs are reachable
    // by strings u, u' over non-high-level events with equal observations?
    std::map<std::pair<int, int>, std::set<std::pair<int, int>>> joint_memo;
    auto joint_low = [&](int x, int xp) -> const std::set<std::pair<int, int>>& {
        auto key = std::make_pair(x, xp);
        auto it = joint_memo.find(key);
        if (it != joint_memo.end()) return it->second;
        std::set<std::pair<int, int>> seen{{x, xp}};
        std::deque<std::pair<int, int>> q{{x, xp}};
        while (!q.empty()) {
            auto [y, yp] = q.front();
            q.pop_front();
            for (const auto& [e, d] : ladj.out[y]) {
                if (is_hi(e)) continue;
                if (is_obs(e)) {
                    for (int dp : ladj.step(yp, e))
                        if (seen.insert({d, dp}).second) q.push_back({d, dp});
                } else {
                    if (seen.insert({d, yp}).second) q.push_back({d, yp});
                }
            }
            for (const auto& [e, dp] : ladj.out[yp]) {
                if (is_hi(e) || is_obs(e)) continue;
                if (seen.insert({y, dp}).second) q.push_back({y, dp});
            }
        }
        return joint_memo.emplace(key, std::move(seen)).first->second;
    };

    struct Key {
        int x, xp, y, yp;
        auto operator<=>(const Key&) const = default;
    };

    std::optional<std::string> cex_event;
    auto violated = [&](const Key& k) {
        for (int e : ctrl_hi) {
            int qe = QL.alphabet.index_of(L.alphabet.events[e]);
            if (qadj.step(k.y, qe).empty() || qadj.step(k.yp, qe).empty()) continue;
            bool extendable = false;
            for (const auto& [w, wp] : joint_low(k.x, k.xp)) {
                if (!ladj.step(w, e).empty() && !ladj.step(wp, e).empty()) {
                    extendable = true;
                    break;
                }
            }
            if (!extendable) {
                cex_event = L.alphabet.events[e];
                return true;
            }
        }
        return false;
    };

    Key init{L.initial, L.initial, QL.initial, QL.initial};

    auto expand = [&](const Key& key, const detail::IWord& s, const detail::IWord& t, int d,
                      auto&& push) {
        // Asynchronous left steps (unobservable events).
        for (const auto& [e, d2] : ladj.out[key.x]) {
            if (is_obs(e)) continue;
            Key nk = key;
            nk.x = d2;
            if (is_hi(e)) nk.y = qadj.step(key.y, QL.alphabet.require(L.alphabet.events[e]))[0];
            detail::IWord ns = s;
            ns.push_back(e);
            push(nk, ns, t, d + 1);
        }
        // Asynchronous right steps.
        for (const auto& [e, d2] : ladj.out[key.xp]) {
            if (is_obs(e)) continue;
            Key nk = key;
            nk.xp = d2;
            if (is_hi(e)) nk.yp = qadj.step(key.yp, QL.alphabet.require(L.alphabet.events[e]))[0];
            detail::IWord nt = t;
            nt.push_back(e);
            push(nk, s, nt, d + 1);
        }
        // Synchronized steps on observable events.
        for (const auto& [e, d2] : ladj.out[key.x]) {
            if (!is_obs(e)) continue;
            for (int dp : ladj.step(key.xp, e)) {
                Key nk = key;
                nk.x = d2;
                nk.xp = dp;
                if (is_hi(e)) {
                    int qe = QL.alphabet.require(L.alphabet.events[e]);
                    nk.y = qadj.step(key.y, qe)[0];
                    nk.yp = qadj.step(key.yp, qe)[0];
                }
                detail::IWord ns = s, nt = t;
                ns.push_back(e);
                nt.push_back(e);
                push(nk, ns, nt, d + 2);
            }
        }
    };

    Verdict v = detail::bucket_search<Key>(init, bound, finite, maxlen, expand, violated,
                                           [&](const detail::IWord& s, const detail::IWord& t) {
                                               return std::vector<Word>{
                                                   detail::decode(L.alphabet, s),
                                                   detail::decode(L.alphabet, t)};
                                           });
    if (v.violated() && cex_event) v.counterexample.push_back(Word{*cex_event});
    return v;
}

}  // namespace hsc
