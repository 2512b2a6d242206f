/* ops.hpp -- language operations on acceptors
 *
 * Determinization, boolean combinations, closures, language queries and the
 * enumeration substrate the oracles are built on. All results are fresh
 * values; deterministic ordering throughout (declaration order for events,
 * length-lex for strings) so outputs are reproducible.
 */

#pragma once

#include <deque>
#include <queue>
#include <unordered_set>

#include "hsc/automaton.hpp"

namespace hsc {

namespace detail {

inline std::string subset_name(const Automaton& a, const std::vector<int>& subset) {
    std::string n = "{";
    for (size_t i = 0; i < subset.size(); ++i) {
        if (i) n += ",";
        n += a.state_names[subset[i]];
    }
    n += "}";
    return n;
}

inline std::string pair_name(const std::string& l, const std::string& r) {
    return "(" + l + "," + r + ")";
}

}  // namespace detail

/// States reachable from the initial state.
inline std::vector<bool> reachable_states(const Automaton& a) {
    Adjacency adj(a);
    std::vector<bool> seen(a.num_states(), false);
    std::deque<int> q{a.initial};
    seen[a.initial] = true;
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (const auto& [e, d] : adj.out[s])
            if (!seen[d]) {
                seen[d] = true;
                q.push_back(d);
            }
    }
    return seen;
}

/// States from which a marked state is reachable.
inline std::vector<bool> coreachable_states(const Automaton& a) {
    std::vector<std::vector<int>> rev(a.num_states());
    for (const auto& t : a.transitions) rev[t.dst].push_back(t.src);
    std::vector<bool> seen(a.num_states(), false);
    std::deque<int> q;
    for (int i = 0; i < a.num_states(); ++i)
        if (a.marked[i]) {
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
}

/// The canonical automaton for the empty language over `alphabet`.
inline Automaton empty_automaton(const Alphabet& alphabet) {
    Automaton e;
    e.alphabet = alphabet;
    e.add_state("s0", false);
    e.initial = 0;
    e.deterministic = true;
    return e;
}

/// Restricts to states both reachable and coreachable. An empty result is
/// returned as the explicit single-state empty automaton.
inline Automaton trim(const Automaton& a) {
    auto reach = reachable_states(a);
    auto coreach = coreachable_states(a);
    std::vector<int> remap(a.num_states(), -1);
    Automaton t;
    t.alphabet = a.alphabet;
    for (int i = 0; i < a.num_states(); ++i)
        if (reach[i] && coreach[i]) remap[i] = t.add_state(a.state_names[i], a.marked[i]);
    if (remap[a.initial] < 0) return empty_automaton(a.alphabet);
    t.initial = remap[a.initial];
    for (const auto& tr : a.transitions)
        if (remap[tr.src] >= 0 && remap[tr.dst] >= 0)
            t.add_transition(remap[tr.src], tr.event, remap[tr.dst]);
    return validate(std::move(t));
}

/// The plant view of an automaton: marks every reachable state, so the
/// marked language of the result is the generated language L(a).
inline Automaton generated_automaton(const Automaton& a) {
    auto reach = reachable_states(a);
    std::vector<int> remap(a.num_states(), -1);
    Automaton g;
    g.alphabet = a.alphabet;
    for (int i = 0; i < a.num_states(); ++i)
        if (reach[i]) remap[i] = g.add_state(a.state_names[i], true);
    g.initial = remap[a.initial];
    for (const auto& tr : a.transitions)
        if (remap[tr.src] >= 0 && remap[tr.dst] >= 0)
            g.add_transition(remap[tr.src], tr.event, remap[tr.dst]);
    return validate(std::move(g));
}

/// Subset construction. The result is deterministic and complete over the
/// alphabet (the empty subset "{}" acts as the sink), with the same marked
/// language; only reachable subsets are built.
inline Automaton determinize(const Automaton& a) {
    Adjacency adj(a);
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> subsets;
    Automaton d;
    d.alphabet = a.alphabet;

    auto intern = [&](const std::vector<int>& subset) {
        auto it = ids.find(subset);
        if (it != ids.end()) return it->second;
        bool m = false;
        for (int s : subset) m = m || a.marked[s];
        int id = d.add_state(detail::subset_name(a, subset), m);
        ids.emplace(subset, id);
        subsets.push_back(subset);
        return id;
    };

    int init = intern({a.initial});
    d.initial = init;
    for (int cur = 0; cur < static_cast<int>(subsets.size()); ++cur) {
        std::vector<int> subset = subsets[cur];
        for (int e = 0; e < a.alphabet.size(); ++e) {
            std::set<int> next;
            for (int s : subset)
                for (int t : adj.step(s, e)) next.insert(t);
            std::vector<int> nv(next.begin(), next.end());
            int id = intern(nv);
            d.add_transition(cur, e, id);
        }
    }
    return validate(std::move(d));
}

/// Marked language complement: Sigma* minus L_m(a), over the same alphabet.
inline Automaton complement(const Automaton& a) {
    Automaton d = determinize(a);
    for (int i = 0; i < d.num_states(); ++i) d.marked[i] = !d.marked[i];
    return d;
}

enum class SetOp { Union, Intersection, Difference };

/// Boolean combination of marked languages over one shared alphabet.
inline Automaton combine(SetOp op, const Automaton& a, const Automaton& b) {
    if (a.alphabet != b.alphabet)
        throw Error(ErrorKind::AlphabetMismatch, "AlphabetMismatch(combine)");
    Automaton da = determinize(a);
    Automaton db = determinize(b);
    Adjacency aa(da), ab(db);
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> pairs;
    Automaton r;
    r.alphabet = a.alphabet;

    auto markp = [&](int x, int y) {
        switch (op) {
            case SetOp::Union: return da.marked[x] || db.marked[y];
            case SetOp::Intersection: return da.marked[x] && db.marked[y];
            case SetOp::Difference: return da.marked[x] && !db.marked[y];
        }
        return false;
    };
    auto intern = [&](int x, int y) {
        auto it = ids.find({x, y});
        if (it != ids.end()) return it->second;
        int id = r.add_state(detail::pair_name(da.state_names[x], db.state_names[y]), markp(x, y));
        ids.emplace(std::make_pair(x, y), id);
        pairs.push_back({x, y});
        return id;
    };

    r.initial = intern(da.initial, db.initial);
    for (int cur = 0; cur < static_cast<int>(pairs.size()); ++cur) {
        auto [x, y] = pairs[cur];
        for (int e = 0; e < r.alphabet.size(); ++e) {
            int nx = aa.step(x, e)[0];  // determinize() output is complete
            int ny = ab.step(y, e)[0];
            r.add_transition(cur, e, intern(nx, ny));
        }
    }
    return validate(std::move(r));
}

/// Marked language becomes L_m(a) . Sigma*.
inline Automaton concat_sigma_star(const Automaton& a) {
    Automaton r = a;
    int uni = r.add_state("$univ", true);
    for (int e = 0; e < r.alphabet.size(); ++e) r.add_transition(uni, e, uni);
    for (int s = 0; s + 1 < r.num_states(); ++s)
        if (r.marked[s])
            for (int e = 0; e < r.alphabet.size(); ++e) r.add_transition(s, e, uni);
    return validate(std::move(r));
}

/// Marks every state on a path to a marked state, so the marked language
/// becomes the prefix closure of L_m(a).
inline Automaton prefix_closure(const Automaton& a) {
    auto coreach = coreachable_states(a);
    Automaton r = a;
    for (int i = 0; i < r.num_states(); ++i) r.marked[i] = coreach[i];
    return validate(std::move(r));
}

/// Minimal DFA for the marked language, states renamed s0, s1, ... in BFS
/// order (events scanned in declaration order) for reproducible output.
inline Automaton minimize(const Automaton& a) {
    Automaton d = determinize(trim(a));
    int n = d.num_states();
    int m = d.alphabet.size();
    Adjacency adj(d);
    std::vector<std::vector<int>> delta(n, std::vector<int>(m));
    for (int s = 0; s < n; ++s)
        for (int e = 0; e < m; ++e) delta[s][e] = adj.step(s, e)[0];

    // Moore partition refinement.
    std::vector<int> cls(n);
    for (int s = 0; s < n; ++s) cls[s] = d.marked[s] ? 1 : 0;
    for (;;) {
        std::map<std::vector<int>, int> sig_ids;
        std::vector<int> next(n);
        for (int s = 0; s < n; ++s) {
            std::vector<int> sig{cls[s]};
            for (int e = 0; e < m; ++e) sig.push_back(cls[delta[s][e]]);
            auto [it, inserted] = sig_ids.emplace(sig, static_cast<int>(sig_ids.size()));
            next[s] = it->second;
        }
        if (next == cls) break;
        cls = next;
    }

    // Quotient, then drop classes that cannot reach marking.
    int k = *std::max_element(cls.begin(), cls.end()) + 1;
    Automaton q;
    q.alphabet = d.alphabet;
    for (int c = 0; c < k; ++c) q.add_state("c" + std::to_string(c), false);
    for (int s = 0; s < n; ++s)
        if (d.marked[s]) q.marked[cls[s]] = true;
    q.initial = cls[d.initial];
    std::set<Transition> qt;
    for (int s = 0; s < n; ++s)
        for (int e = 0; e < m; ++e) qt.insert({cls[s], e, cls[delta[s][e]]});
    q.transitions.assign(qt.begin(), qt.end());
    Automaton t = trim(validate(std::move(q)));

    // Canonical BFS renaming.
    Adjacency tadj(t);
    std::vector<int> order;
    std::vector<int> pos(t.num_states(), -1);
    std::deque<int> bfs{t.initial};
    pos[t.initial] = 0;
    order.push_back(t.initial);
    while (!bfs.empty()) {
        int s = bfs.front();
        bfs.pop_front();
        for (const auto& [e, dst] : tadj.out[s]) {
            if (pos[dst] < 0) {
                pos[dst] = static_cast<int>(order.size());
                order.push_back(dst);
                bfs.push_back(dst);
            }
        }
    }
    Automaton out;
    out.alphabet = t.alphabet;
    for (size_t i = 0; i < order.size(); ++i)
        out.add_state("s" + std::to_string(i), t.marked[order[i]]);
    out.initial = pos[t.initial];
    for (const auto& tr : t.transitions) out.add_transition(pos[tr.src], tr.event, pos[tr.dst]);
    return validate(std::move(out));
}

/// Membership of a word in the marked language (subset walk; works on NFAs).
inline bool member(const Automaton& a, const Word& w) {
    Adjacency adj(a);
    std::set<int> cur{a.initial};
    for (const auto& name : w) {
        int e = a.alphabet.index_of(name);
        if (e < 0) return false;
        std::set<int> next;
        for (int s : cur)
            for (int t : adj.step(s, e)) next.insert(t);
        cur = std::move(next);
        if (cur.empty()) return false;
    }
    for (int s : cur)
        if (a.marked[s]) return true;
    return false;
}

/// Finite witness of a marked language: exactly the marked strings of length
/// <= depth, in length-then-lexicographic order (declaration order of events).
struct LanguageSample {
    std::vector<Word> strings;
    int depth = 0;

    bool contains(const Word& w) const {
        for (const auto& s : strings)
            if (s == w) return true;
        return false;
    }
};

inline LanguageSample enumerate_language(const Automaton& a, int depth) {
    if (depth < 0) throw Error(ErrorKind::DomainViolation, "enumerate: negative depth");
    LanguageSample out;
    out.depth = depth;
    Automaton d = trim(a);
    // In a trimmed DFA every path is a distinct live word.
    d = determinize(d);
    d = trim(d);
    Adjacency adj(d);
    std::vector<std::pair<int, Word>> layer{{d.initial, {}}};
    if (d.num_states() == 1 && d.transitions.empty() && !d.marked[0]) layer.clear();
    for (int len = 0; len <= depth && !layer.empty(); ++len) {
        for (const auto& [s, w] : layer)
            if (d.marked[s]) out.strings.push_back(w);
        if (len == depth) break;
        std::vector<std::pair<int, Word>> next;
        for (const auto& [s, w] : layer) {
            for (const auto& [e, dst] : adj.out[s]) {
                Word w2 = w;
                w2.push_back(d.alphabet.events[e]);
                next.push_back({dst, std::move(w2)});
            }
        }
        layer = std::move(next);
    }
    return out;
}

struct InclusionResult {
    bool holds = true;
    std::optional<Word> witness;  // shortest member of L_m(a) \ L_m(b)
};

/// Decides L_m(a) subseteq L_m(b); a failed inclusion carries a shortest
/// (length-lex) witness.
inline InclusionResult included(const Automaton& a, const Automaton& b) {
    if (a.alphabet.events != b.alphabet.events)
        throw Error(ErrorKind::AlphabetMismatch, "AlphabetMismatch(included)");
    Automaton da = determinize(trim(a));
    Automaton db = determinize(b);
    Adjacency aa(da), ab(db);
    // BFS over pairs; expanding events in declaration order yields the
    // length-lex least witness.
    std::map<std::pair<int, int>, std::pair<std::pair<int, int>, int>> parent;
    std::deque<std::pair<int, int>> q;
    auto start = std::make_pair(da.initial, db.initial);
    parent[start] = {{-1, -1}, -1};
    q.push_back(start);
    std::optional<std::pair<int, int>> bad;
    while (!q.empty() && !bad) {
        auto cur = q.front();
        q.pop_front();
        if (da.marked[cur.first] && !db.marked[cur.second]) {
            bad = cur;
            break;
        }
        for (int e = 0; e < da.alphabet.size(); ++e) {
            auto nxt = std::make_pair(aa.step(cur.first, e)[0], ab.step(cur.second, e)[0]);
            if (!parent.count(nxt)) {
                parent[nxt] = {cur, e};
                q.push_back(nxt);
            }
        }
    }
    InclusionResult r;
    if (bad) {
        r.holds = false;
        Word w;
        auto cur = *bad;
        while (parent[cur].second >= 0) {
            w.push_back(da.alphabet.events[parent[cur].second]);
            cur = parent[cur].first;
        }
        std::reverse(w.begin(), w.end());
        r.witness = w;
    }
    return r;
}

inline bool equivalent(const Automaton& a, const Automaton& b) {
    return included(a, b).holds && included(b, a).holds;
}

inline bool is_prefix_closed(const Automaton& a) {
    return equivalent(prefix_closure(a), a);
}

/// Nonblocking: the closure of the marked language equals the generated
/// language (language-level check).
inline bool is_nonblocking(const Automaton& a) {
    return equivalent(prefix_closure(a), generated_automaton(a));
}

/// Shortest marked string, length-lex order; nullopt for the empty language.
inline std::optional<Word> shortest_marked(const Automaton& a) {
    Automaton d = trim(a);
    if (d.num_states() == 1 && d.transitions.empty() && !d.marked[0]) return std::nullopt;
    if (d.marked[d.initial]) return Word{};
    Adjacency adj(d);
    std::vector<int> par_state(d.num_states(), -1), par_event(d.num_states(), -1);
    std::vector<bool> seen(d.num_states(), false);
    std::deque<int> q{d.initial};
    seen[d.initial] = true;
    int found = -1;
    while (!q.empty() && found < 0) {
        int s = q.front();
        q.pop_front();
        for (const auto& [e, dst] : adj.out[s]) {
            if (seen[dst]) continue;
            seen[dst] = true;
            par_state[dst] = s;
            par_event[dst] = e;
            if (d.marked[dst]) {
                found = dst;
                break;
            }
            q.push_back(dst);
        }
    }
    if (found < 0) return std::nullopt;
    Word w;
    for (int cur = found; par_state[cur] >= 0; cur = par_state[cur])
        w.push_back(d.alphabet.events[par_event[cur]]);
    std::reverse(w.begin(), w.end());
    return w;
}

/// True when the trimmed automaton has no cycle, i.e. the marked language is
/// finite.
inline bool has_finite_language(const Automaton& a) {
    Automaton t = trim(a);
    if (t.num_states() == 1 && t.transitions.empty()) return true;
    // Kahn's algorithm on the trimmed graph.
    std::vector<int> indeg(t.num_states(), 0);
    for (const auto& tr : t.transitions) indeg[tr.dst]++;
    std::deque<int> q;
    for (int i = 0; i < t.num_states(); ++i)
        if (indeg[i] == 0) q.push_back(i);
    int seen = 0;
    Adjacency adj(t);
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        ++seen;
        for (const auto& [e, d] : adj.out[s])
            if (--indeg[d] == 0) q.push_back(d);
    }
    return seen == t.num_states();
}

/// Length of the longest marked string of a finite-language automaton.
inline int longest_marked_length(const Automaton& a) {
    Automaton t = trim(a);
    if (!has_finite_language(t)) throw Error(ErrorKind::DomainViolation, "language is infinite");
    // Longest path to a marked state, DAG DP via repeated relaxation.
    std::vector<int> best(t.num_states(), -1);
    best[t.initial] = 0;
    for (int pass = 0; pass < t.num_states() + 1; ++pass) {
        bool changed = false;
        for (const auto& tr : t.transitions) {
            if (best[tr.src] >= 0 && best[tr.src] + 1 > best[tr.dst]) {
                best[tr.dst] = best[tr.src] + 1;
                changed = true;
            }
        }
        if (!changed) break;
    }
    int ans = 0;
    for (int i = 0; i < t.num_states(); ++i)
        if (t.marked[i] && best[i] > ans) ans = best[i];
    return ans;
}

/// Line automaton marking exactly {w}.
inline Automaton word_automaton(const Alphabet& alphabet, const Word& w) {
    Automaton a;
    a.alphabet = alphabet;
    for (size_t i = 0; i <= w.size(); ++i) a.add_state("w" + std::to_string(i), i == w.size());
    a.initial = 0;
    for (size_t i = 0; i < w.size(); ++i)
        a.add_transition(static_cast<int>(i), a.alphabet.require(w[i]), static_cast<int>(i) + 1);
    return validate(std::move(a));
}

/// Single-state automaton marking Sigma*.
inline Automaton universal_automaton(const Alphabet& alphabet) {
    Automaton a;
    a.alphabet = alphabet;
    a.add_state("u", true);
    a.initial = 0;
    for (int e = 0; e < alphabet.size(); ++e) a.add_transition(0, e, 0);
    return validate(std::move(a));
}

}  // namespace hsc
