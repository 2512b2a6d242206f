/* testgen.hpp -- ground-truth machinery for the property suites
 *
 * Everything here is deliberately naive: the consistency conditions are
 * checked by exhaustive quantification over enumerated strings (with exact
 * per-candidate witness searches), the supremal sublanguages by unions over
 * all qualifying subsets of a finite language. These oracles are what the
 * algorithmic modules are tested against. The module also builds hard
 * instances: the universality reduction gadget, the two-train railroad
 * models, and seeded random plants.
 */

#pragma once

#include <random>

#include "hsc/relational.hpp"

namespace hsc::testgen {

// ---------------------------------------------------------------------------
// Definition-level consistency oracles.
// ---------------------------------------------------------------------------

namespace detail {

/// Is there w in L with Q(w) = t and P(w) = o? Exact search over
/// (state, position in t, position in o); L must be a trimmed all-marked DFA
/// of a prefix-closed language.
inline bool lift_exists(const Automaton& L, const Adjacency& adj, const ProjectionContext& ctx,
                        const Word& t, const Word& o) {
    std::set<std::tuple<int, size_t, size_t>> seen{{L.initial, 0, 0}};
    std::deque<std::tuple<int, size_t, size_t>> q{{L.initial, 0, 0}};
    while (!q.empty()) {
        auto [x, i, j] = q.front();
        q.pop_front();
        if (i == t.size() && j == o.size()) return true;
        for (const auto& [e, d] : adj.out[x]) {
            bool hi = ctx.highlevel(e), obs = ctx.observable(e);
            size_t ni = i, nj = j;
            if (hi) {
                if (i >= t.size() || L.alphabet.events[e] != t[i]) continue;
                ni = i + 1;
            }
            if (obs) {
                if (j >= o.size() || L.alphabet.events[e] != o[j]) continue;
                nj = j + 1;
            }
            if (seen.insert({d, ni, nj}).second) q.push_back({d, ni, nj});
        }
    }
    return false;
}

/// Is there a pair (s, s') in L x L with Q(s) = t, Q(s') = t' and equal
/// observations? Exact search over (state, state, position, position) with
/// observable events taken jointly.
inline bool lift_pair_exists(const Automaton& L, const Adjacency& adj,
                             const ProjectionContext& ctx, const Word& t, const Word& tp) {
    using Conf = std::tuple<int, int, size_t, size_t>;
    std::set<Conf> seen{{L.initial, L.initial, 0, 0}};
    std::deque<Conf> q{{L.initial, L.initial, 0, 0}};
    while (!q.empty()) {
        auto [x, xp, i, j] = q.front();
        q.pop_front();
        if (i == t.size() && j == tp.size()) return true;
        for (const auto& [e, d] : adj.out[x]) {
            bool hi = ctx.highlevel(e), obs = ctx.observable(e);
            if (obs) {
                // Joint observable move.
                size_t ni = i, nj = j;
                if (hi) {
                    if (i >= t.size() || j >= tp.size()) continue;
                    if (L.alphabet.events[e] != t[i] || L.alphabet.events[e] != tp[j]) continue;
                    ni = i + 1;
                    nj = j + 1;
                }
                for (int dp : adj.step(xp, e)) {
                    Conf c{d, dp, ni, nj};
                    if (seen.insert(c).second) q.push_back(c);
                }
            } else {
                // Left-only unobservable move.
                size_t ni = i;
                if (hi) {
                    if (i >= t.size() || L.alphabet.events[e] != t[i]) continue;
                    ni = i + 1;
                }
                Conf c{d, xp, ni, j};
                if (seen.insert(c).second) q.push_back(c);
            }
        }
        // Right-only unobservable moves.
        for (const auto& [e, dp] : adj.out[xp]) {
            bool hi = ctx.highlevel(e), obs = ctx.observable(e);
            if (obs) continue;
            size_t nj = j;
            if (hi) {
                if (j >= tp.size() || L.alphabet.events[e] != tp[j]) continue;
                nj = j + 1;
            }
            Conf c{x, dp, i, nj};
            if (seen.insert(c).second) q.push_back(c);
        }
    }
    return false;
}

/// Can s and s' be extended by low-level strings with equal observations so
/// that both enable `event`? Exact joint reachability over state pairs.
inline bool joint_low_extension(const Automaton& L, const Adjacency& adj,
                                const ProjectionContext& ctx, int x, int xp, int event) {
    std::set<std::pair<int, int>> seen{{x, xp}};
    std::deque<std::pair<int, int>> q{{x, xp}};
    while (!q.empty()) {
        auto [y, yp] = q.front();
        q.pop_front();
        if (!adj.step(y, event).empty() && !adj.step(yp, event).empty()) return true;
        for (const auto& [e, d] : adj.out[y]) {
            if (ctx.highlevel(e)) continue;
            if (ctx.observable(e)) {
                for (int dp : adj.step(yp, e))
                    if (seen.insert({d, dp}).second) q.push_back({d, dp});
            } else {
                if (seen.insert({d, yp}).second) q.push_back({d, yp});
            }
        }
        for (const auto& [e, dp] : adj.out[yp]) {
            if (ctx.highlevel(e) || ctx.observable(e)) continue;
            if (seen.insert({y, dp}).second) q.push_back({y, dp});
        }
    }
    return false;
}

struct OracleInput {
    Automaton L;                 // trimmed all-marked DFA
    std::vector<Word> strings;   // L up to depth, length-lex
    std::vector<Word> abstract;  // Q(L) image of `strings`, deduplicated
};

inline OracleInput oracle_input(const Automaton& l, const ProjectionContext& ctx, int depth) {
    if (l.alphabet != ctx.alphabet)
        throw Error(ErrorKind::AlphabetMismatch, "AlphabetMismatch(oracle)");
    if (!is_prefix_closed(l)) throw Error(ErrorKind::NotPrefixClosed, "NotPrefixClosed(oracle)");
    OracleInput in;
    in.L = trim(determinize(trim(l)));
    for (int i = 0; i < in.L.num_states(); ++i) in.L.marked[i] = true;
    in.strings = enumerate_language(in.L, depth).strings;
    std::set<std::string> seen;
    for (const auto& s : in.strings) {
        Word q = ctx.abstraction(s);
        if (seen.insert(word_key(q)).second) in.abstract.push_back(q);
    }
    std::stable_sort(in.abstract.begin(), in.abstract.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return in;
}

inline bool exhaustive(const Automaton& l, int depth) {
    Automaton t = trim(l);
    return has_finite_language(t) && longest_marked_length(t) <= depth;
}

template <typename Cand>
void sort_candidates(std::vector<Cand>& cands) {
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        size_t la = a.first.size() + a.second.size();
        size_t lb = b.first.size() + b.second.size();
        if (la != lb) return la < lb;
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
}

}  // namespace detail

/// Observation consistency checked literally: all pairs (t, t') of enumerated
/// abstract strings with equal high-level observations must lift to
/// observation-equivalent strings. Complete for finite languages covered by
/// `depth`.
inline Verdict brute_oc(const Automaton& l, const ProjectionContext& ctx, int depth) {
    auto in = detail::oracle_input(l, ctx, depth);
    Adjacency adj(in.L);
    std::vector<std::pair<Word, Word>> cands;
    for (const auto& t : in.abstract)
        for (const auto& tp : in.abstract)
            if (ctx.high_observation(t) == ctx.high_observation(tp)) cands.push_back({t, tp});
    detail::sort_candidates(cands);
    for (const auto& [t, tp] : cands)
        if (!detail::lift_pair_exists(in.L, adj, ctx, t, tp))
            return Verdict::violated_with({t, tp}, depth);
    return detail::exhaustive(l, depth) ? Verdict::exhaustive(depth) : Verdict::bounded(depth);
}

/// Modified observation consistency checked literally over pairs (s, t').
inline Verdict brute_moc(const Automaton& l, const ProjectionContext& ctx, int depth) {
    auto in = detail::oracle_input(l, ctx, depth);
    Adjacency adj(in.L);
    // Group by the shared high-level observation to avoid the full product.
    std::map<std::string, std::vector<const Word*>> by_obs_s, by_obs_t;
    for (const auto& s : in.strings)
        by_obs_s[word_key(ctx.high_observation(ctx.abstraction(s)))].push_back(&s);
    for (const auto& t : in.abstract)
        by_obs_t[word_key(ctx.high_observation(t))].push_back(&t);
    std::vector<std::pair<Word, Word>> cands;
    for (const auto& [k, ss] : by_obs_s) {
        auto it = by_obs_t.find(k);
        if (it == by_obs_t.end()) continue;
        for (const Word* s : ss)
            for (const Word* t : it->second) cands.push_back({*s, *t});
    }
    detail::sort_candidates(cands);
    std::map<std::pair<std::string, std::string>, bool> memo;
    for (const auto& [s, tp] : cands) {
        Word o = ctx.observation(s);
        auto key = std::make_pair(word_key(tp), word_key(o));
        auto it = memo.find(key);
        bool ok = it != memo.end() ? it->second : detail::lift_exists(in.L, adj, ctx, tp, o);
        if (it == memo.end()) memo.emplace(key, ok);
        if (!ok) return Verdict::violated_with({s, tp}, depth);
    }
    return detail::exhaustive(l, depth) ? Verdict::exhaustive(depth) : Verdict::bounded(depth);
}

/// Local observation consistency checked literally over triples (s, s', e).
inline Verdict brute_loc(const Automaton& l, const ProjectionContext& ctx, int depth) {
    auto in = detail::oracle_input(l, ctx, depth);
    Adjacency adj(in.L);
    std::vector<int> ctrl_hi;
    for (int e = 0; e < in.L.alphabet.size(); ++e)
        if (ctx.highlevel(e) && ctx.controllable(e)) ctrl_hi.push_back(e);
    if (ctrl_hi.empty())
        return detail::exhaustive(l, depth) ? Verdict::exhaustive(depth) : Verdict::bounded(depth);

    Automaton ql = project(in.L, in.L.alphabet.highlevel_events());
    std::map<std::string, std::vector<const Word*>> by_obs;
    for (const auto& s : in.strings) by_obs[word_key(ctx.observation(s))].push_back(&s);
    std::vector<std::pair<Word, Word>> cands;
    for (const auto& [k, ss] : by_obs)
        for (const Word* s : ss)
            for (const Word* sp : ss) cands.push_back({*s, *sp});
    detail::sort_candidates(cands);

    auto state_of = [&](const Word& w) {
        Adjacency a(in.L);
        int x = in.L.initial;
        for (const auto& ev : w) x = a.step(x, in.L.alphabet.require(ev))[0];
        return x;
    };
    for (const auto& [s, sp] : cands) {
        int x = state_of(s), xp = state_of(sp);
        for (int e : ctrl_hi) {
            Word qse = ctx.abstraction(s);
            qse.push_back(in.L.alphabet.events[e]);
            Word qspe = ctx.abstraction(sp);
            qspe.push_back(in.L.alphabet.events[e]);
            if (!member(ql, qse) || !member(ql, qspe)) continue;
            if (!detail::joint_low_extension(in.L, adj, ctx, x, xp, e))
                return Verdict::violated_with({s, sp, Word{in.L.alphabet.events[e]}}, depth);
        }
    }
    return detail::exhaustive(l, depth) ? Verdict::exhaustive(depth) : Verdict::bounded(depth);
}

// ---------------------------------------------------------------------------
// Brute-force supremal sublanguages: unions of all qualifying subsets.
// ---------------------------------------------------------------------------

namespace detail {

struct SubsetOracle {
    std::vector<Word> kset;
    std::vector<Word> lset;          // plant closed language within depth
    Automaton lgen;                  // plant generated-language automaton
    const ProjectionContext* ctx;

    std::set<std::string> prefixes(uint32_t mask) const {
        std::set<std::string> bar;
        for (size_t i = 0; i < kset.size(); ++i) {
            if (!(mask >> i & 1)) continue;
            Word w = kset[i];
            for (size_t cut = 0; cut <= w.size(); ++cut)
                bar.insert(word_key(Word(w.begin(), w.begin() + cut)));
        }
        return bar;
    }

    bool normal(const std::set<std::string>& bar) const {
        std::set<std::string> obs;
        for (const auto& w : lset)
            if (bar.count(word_key(w))) obs.insert(word_key(ctx->observation(w)));
        for (const auto& w : lset) {
            if (obs.count(word_key(ctx->observation(w))) && !bar.count(word_key(w))) return false;
        }
        return true;
    }

    bool controllable(const std::set<std::string>& bar) const {
        for (const auto& w : lset) {
            if (!bar.count(word_key(w))) continue;
            for (int e = 0; e < lgen.alphabet.size(); ++e) {
                if (ctx->controllable(e)) continue;
                Word wu = w;
                wu.push_back(lgen.alphabet.events[e]);
                if (member(lgen, wu) && !bar.count(word_key(wu))) return false;
            }
        }
        return true;
    }
};

inline SubsetOracle subset_oracle(const Automaton& k, const Automaton& g,
                                  const ProjectionContext& ctx, int depth) {
    SubsetOracle o;
    o.kset = enumerate_language(k, depth).strings;
    if (o.kset.size() > 20)
        throw Error(ErrorKind::DomainViolation, "subset oracle: spec language too large");
    o.lgen = generated_automaton(g);
    o.lset = enumerate_language(o.lgen, depth + 1).strings;
    o.ctx = &ctx;
    return o;
}

template <typename Pred>
std::vector<Word> subset_union(const SubsetOracle& o, Pred&& qualifies) {
    std::set<size_t> keep;
    uint32_t n = static_cast<uint32_t>(o.kset.size());
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool skip = true;
        for (size_t i = 0; i < n; ++i)
            if ((mask >> i & 1) && !keep.count(i)) skip = false;
        if (mask != 0 && skip) continue;  // adds nothing new
        if (qualifies(mask)) {
            for (size_t i = 0; i < n; ++i)
                if (mask >> i & 1) keep.insert(i);
        }
    }
    std::vector<Word> out;
    for (size_t i : keep) out.push_back(o.kset[i]);
    std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

}  // namespace detail

/// Union of all sublanguages of L_m(k) whose closure is normal with respect
/// to the plant's generated language and the observation map.
inline std::vector<Word> brute_sup_normal(const Automaton& k, const Automaton& g,
                                          const ProjectionContext& ctx, int depth) {
    auto o = detail::subset_oracle(k, g, ctx, depth);
    return detail::subset_union(o, [&](uint32_t m) { return o.normal(o.prefixes(m)); });
}

/// Union of all controllable sublanguages of L_m(k).
inline std::vector<Word> brute_sup_controllable(const Automaton& k, const Automaton& g,
                                                const ProjectionContext& ctx, int depth) {
    auto o = detail::subset_oracle(k, g, ctx, depth);
    return detail::subset_union(o, [&](uint32_t m) { return o.controllable(o.prefixes(m)); });
}

/// Union of all sublanguages that are controllable and normal at once.
inline std::vector<Word> brute_sup_con_normal(const Automaton& k, const Automaton& g,
                                              const ProjectionContext& ctx, int depth) {
    auto o = detail::subset_oracle(k, g, ctx, depth);
    return detail::subset_union(o, [&](uint32_t m) {
        auto bar = o.prefixes(m);
        return o.controllable(bar) && o.normal(bar);
    });
}

// ---------------------------------------------------------------------------
// Universality and the hardness gadget.
// ---------------------------------------------------------------------------

/// Universality of an NFA with all states marked (prefix-closed language):
/// the language is Sigma* iff the empty subset is unreachable in the subset
/// construction.
inline bool nfa_universal(const Automaton& a) {
    for (int i = 0; i < a.num_states(); ++i)
        if (!a.marked[i])
            throw Error(ErrorKind::UnmarkedState, "UnmarkedState(" + a.state_names[i] + ")");
    Automaton d = determinize(a);
    for (int i = 0; i < d.num_states(); ++i)
        if (!d.marked[i] && reachable_states(d)[i]) return false;
    return true;
}

/// Shortest string outside the (prefix-closed) language of an all-marked NFA,
/// or nullopt when universal.
inline std::optional<Word> nfa_non_member_witness(const Automaton& a) {
    for (int i = 0; i < a.num_states(); ++i)
        if (!a.marked[i])
            throw Error(ErrorKind::UnmarkedState, "UnmarkedState(" + a.state_names[i] + ")");
    return included(universal_automaton(a.alphabet), a).witness;
}

struct GadgetInstance {
    Automaton b;                       // the constructed plant
    Alphabet base;                     // the original alphabet Sigma
    std::vector<std::string> fresh;    // the per-transition events Sigma'
    ProjectionContext ctx() const { return ProjectionContext{b.alphabet}; }
};

/// Reduction from NFA universality: splits every transition p -a-> q through
/// a fresh marked state on a fresh event, then assembles a DFA whose marked
/// language is @#L(A') + @(S'S)* + #(S'S)* + L(A'), with the abstraction
/// removing S' and '@' and the observation removing S' and '#'. The result
/// is modified-observation-consistent exactly when the input is universal.
inline GadgetInstance pspace_gadget(const Automaton& a) {
    for (int i = 0; i < a.num_states(); ++i)
        if (!a.marked[i])
            throw Error(ErrorKind::UnmarkedState, "UnmarkedState(" + a.state_names[i] + ")");
    if (a.alphabet.contains("@") || a.alphabet.contains("#"))
        throw Error(ErrorKind::ParseError, "gadget: base alphabet reserves @ and #");

    GadgetInstance out;
    out.base = a.alphabet;

    // Alphabet: base events (observable + high-level), then the fresh
    // per-transition events (neither), then @ (observable) and # (high-level).
    Alphabet alpha;
    for (int e = 0; e < a.alphabet.size(); ++e)
        alpha.add_event(a.alphabet.events[e], true, true, true);
    std::vector<Transition> ts = a.transitions;
    std::sort(ts.begin(), ts.end());
    std::vector<std::string> fresh_names(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        const auto& t = ts[i];
        std::string name = a.alphabet.events[t.event] + "_" + a.state_names[t.src] + "_" +
                           a.state_names[t.dst];
        if (alpha.contains(name))
            throw Error(ErrorKind::ParseError, "gadget: event name collision '" + name + "'");
        alpha.add_event(name, true, false, false);
        fresh_names[i] = name;
    }
    alpha.add_event("@", true, true, false);
    alpha.add_event("#", true, false, true);
    out.fresh = fresh_names;

    Automaton b;
    b.alphabet = alpha;
    // Split-automaton states: the originals plus one per transition, shared
    // by the plain entry (from $n1) and the @#-entry (from $c2).
    std::vector<int> orig(a.num_states());
    for (int i = 0; i < a.num_states(); ++i) orig[i] = b.add_state("p_" + a.state_names[i], true);
    std::vector<int> mid(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) mid[i] = b.add_state("x_" + fresh_names[i], true);
    int n1 = b.add_state("$n1", true);
    int c1 = b.add_state("$c1", true);
    int c1b = b.add_state("$c1b", true);
    int d1 = b.add_state("$d1", false);
    int c2 = b.add_state("$c2", true);
    int e1 = b.add_state("$e1", true);
    int e2 = b.add_state("$e2", false);
    b.initial = n1;

    int at = alpha.require("@");
    int hash = alpha.require("#");
    int nbase = a.alphabet.size();
    auto fresh_event = [&](size_t i) { return nbase + static_cast<int>(i); };

    for (size_t i = 0; i < ts.size(); ++i) {
        const auto& t = ts[i];
        b.add_transition(orig[t.src], fresh_event(i), mid[i]);
        b.add_transition(mid[i], t.event, orig[t.dst]);
        if (t.src == a.initial) {
            b.add_transition(n1, fresh_event(i), mid[i]);
            b.add_transition(c2, fresh_event(i), mid[i]);
        }
    }
    b.add_transition(n1, at, c1);
    b.add_transition(n1, hash, e1);
    b.add_transition(c1, hash, c2);
    for (size_t i = 0; i < ts.size(); ++i) {
        b.add_transition(c1, fresh_event(i), d1);
        b.add_transition(c1b, fresh_event(i), d1);
        b.add_transition(e1, fresh_event(i), e2);
    }
    for (int e = 0; e < nbase; ++e) {
        b.add_transition(d1, e, c1b);
        b.add_transition(e2, e, e1);
    }
    out.b = validate(std::move(b));
    return out;
}

// ---------------------------------------------------------------------------
// Worked models.
// ---------------------------------------------------------------------------

struct RailroadModels {
    Automaton west;   // train on the western track
    Automaton east;   // train on the eastern track
    Automaton spec;   // bridge access specification over the high-level events
};

/// Two circular tracks merging on a bridge. Each train announces itself
/// (a_*), then either waits (w_*) or enters the bridge (e_*), and signals
/// when leaving (l_*). All events are controllable; the leave signals are
/// unobservable; the enter events are below the high-level alphabet. The
/// specification alternates bridge grants between the trains and leaves
/// waiting unconstrained.
inline RailroadModels railroad_models() {
    auto flags = [](const std::string& name) {
        bool obs = name[0] != 'l';
        bool hi = name[0] != 'e';
        return std::make_pair(obs, hi);
    };
    auto make_train = [&](const std::string& suffix, const std::string& prefix) {
        Alphabet al;
        for (const std::string& stem : {"a_", "w_", "e_", "l_"}) {
            std::string n = stem + suffix;
            auto [obs, hi] = flags(n);
            al.add_event(n, true, obs, hi);
        }
        Automaton t;
        t.alphabet = al;
        int away = t.add_state(prefix + "0", true);
        int atgate = t.add_state(prefix + "1", false);
        int onbridge = t.add_state(prefix + "2", false);
        t.initial = away;
        t.add_transition(away, al.require("a_" + suffix), atgate);
        t.add_transition(atgate, al.require("w_" + suffix), away);
        t.add_transition(atgate, al.require("e_" + suffix), onbridge);
        t.add_transition(onbridge, al.require("l_" + suffix), away);
        return validate(std::move(t));
    };

    RailroadModels m;
    m.west = make_train("w", "t");
    m.east = make_train("e", "u");

    Alphabet hi;
    for (const std::string& n : {"a_w", "w_w", "l_w", "a_e", "w_e", "l_e"}) {
        auto [obs, h] = flags(n);
        hi.add_event(n, true, obs, h);
    }
    Automaton k;
    k.alphabet = hi;
    int k0 = k.add_state("k0", true);
    int k1 = k.add_state("k1", false);
    int k2 = k.add_state("k2", false);
    int k3 = k.add_state("k3", false);
    k.initial = k0;
    k.add_transition(k0, hi.require("a_w"), k1);
    k.add_transition(k1, hi.require("l_w"), k2);
    k.add_transition(k2, hi.require("a_e"), k3);
    k.add_transition(k3, hi.require("l_e"), k0);
    for (int s = 0; s < 4; ++s) {
        k.add_transition(s, hi.require("w_w"), s);
        k.add_transition(s, hi.require("w_e"), s);
    }
    m.spec = validate(std::move(k));
    return m;
}

// ---------------------------------------------------------------------------
// Seeded random instances.
// ---------------------------------------------------------------------------

enum class Profile { MocByConstruction, Unconstrained, AcyclicSmall };

struct RandomInstance {
    Automaton plant;
    Automaton spec;  // sub-automaton of the plant (marked language included)
};

namespace detail {

/// All randomness below flows through std::mt19937_64 seeded directly with
/// the instance seed; draws use plain modulo so a seed replays bit-exactly on
/// any platform.
struct Rand {
    std::mt19937_64 gen;
    explicit Rand(uint64_t seed) : gen(seed) {}
    int below(int n) { return static_cast<int>(gen() % static_cast<uint64_t>(n)); }
    bool coin(int percent) { return below(100) < percent; }
};

inline Automaton random_plant(Rand& r, Profile profile) {
    int m = 2 + r.below(2);
    std::vector<std::string> names{"a", "b", "c"};
    names.resize(m);
    Alphabet alpha = make_alphabet(names);
    for (int e = 0; e < m; ++e) {
        alpha.controllable[e] = r.coin(60);
        alpha.observable[e] = r.coin(60);
        alpha.highlevel[e] = r.coin(60);
    }
    if (profile == Profile::MocByConstruction) {
        if (r.coin(50)) {
            for (int e = 0; e < m; ++e)
                if (alpha.observable[e]) alpha.highlevel[e] = true;
        } else {
            for (int e = 0; e < m; ++e)
                if (alpha.highlevel[e]) alpha.observable[e] = true;
        }
    }
    bool acyclic = profile == Profile::AcyclicSmall;
    int n = acyclic ? 4 + r.below(4) : 3 + r.below(4);
    Automaton g;
    g.alphabet = alpha;
    for (int i = 0; i < n; ++i) g.add_state("q" + std::to_string(i), r.coin(60));
    g.marked[0] = true;
    g.initial = 0;
    for (int i = 0; i < n; ++i)
        for (int e = 0; e < m; ++e) {
            if (!r.coin(55)) continue;
            int dst = acyclic ? (i + 1 < n ? i + 1 + r.below(n - i - 1) : -1) : r.below(n);
            if (dst >= 0) g.add_transition(i, e, dst);
        }
    return trim(validate(std::move(g)));
}

inline Automaton random_subautomaton(Rand& r, const Automaton& g) {
    Automaton k = g;
    std::vector<Transition> kept;
    for (const auto& t : k.transitions)
        if (!r.coin(30)) kept.push_back(t);
    k.transitions = kept;
    for (int i = 0; i < k.num_states(); ++i)
        if (k.marked[i] && r.coin(30)) k.marked[i] = false;
    return trim(validate(std::move(k)));
}

}  // namespace detail

inline bool language_empty(const Automaton& a) {
    return !shortest_marked(a).has_value();
}

/// Reproducible pseudo-random plant/spec pair; the same seed always yields
/// the same instance. Seeds whose draw collapses to an empty language are
/// retried under a derived seed.
inline RandomInstance random_instance(uint64_t seed, Profile profile) {
    for (uint64_t attempt = 0;; ++attempt) {
        detail::Rand r(seed + 0x9e3779b97f4a7c15ull * attempt);
        Automaton plant = detail::random_plant(r, profile);
        if (language_empty(plant)) continue;
        Automaton spec = detail::random_subautomaton(r, plant);
        if (language_empty(spec)) continue;
        return RandomInstance{std::move(plant), std::move(spec)};
    }
}

/// Random prefix-closed subspecification of an abstraction: a trimmed
/// all-marked sub-automaton of the determinized projection.
inline Automaton random_closed_subspec(uint64_t seed, const Automaton& abstraction) {
    Automaton base = trim(determinize(trim(abstraction)));
    for (int i = 0; i < base.num_states(); ++i) base.marked[i] = true;
    for (uint64_t attempt = 0;; ++attempt) {
        detail::Rand r(seed ^ (0xc2b2ae3d27d4eb4full + attempt));
        Automaton k = base;
        std::vector<Transition> kept;
        for (const auto& t : k.transitions)
            if (!r.coin(35)) kept.push_back(t);
        k.transitions = kept;
        k = trim(validate(std::move(k)));
        if (!language_empty(k)) return k;
    }
}

}  // namespace hsc::testgen
