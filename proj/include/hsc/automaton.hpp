/* automaton.hpp -- finite-state acceptors with event attribute sets
 *
 * The kernel type of the library: an acceptor over a named alphabet whose
 * events carry controllability / observability / high-level attributes.
 * Automaton values are treated as immutable once validated; every operation
 * in the library is a pure function returning a fresh value.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hsc {

/// A string over an alphabet, as a sequence of event names.
using Word = std::vector<std::string>;

enum class ErrorKind {
    DanglingState,
    UnknownEvent,
    MultipleInitial,
    AlphabetMismatch,
    SyncSetNotShared,
    NotPrefixClosed,
    NotSublanguage,
    BlockingPlant,
    UnmarkedState,
    SpecNotInAbstraction,
    DomainViolation,
    ParseError,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::DanglingState: return "DanglingState";
        case ErrorKind::UnknownEvent: return "UnknownEvent";
        case ErrorKind::MultipleInitial: return "MultipleInitial";
        case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
        case ErrorKind::SyncSetNotShared: return "SyncSetNotShared";
        case ErrorKind::NotPrefixClosed: return "NotPrefixClosed";
        case ErrorKind::NotSublanguage: return "NotSublanguage";
        case ErrorKind::BlockingPlant: return "BlockingPlant";
        case ErrorKind::UnmarkedState: return "UnmarkedState";
        case ErrorKind::SpecNotInAbstraction: return "SpecNotInAbstraction";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Error";
}

/// Event names: printable tokens without whitespace. The base charset is
/// [A-Za-z0-9_@#$']; '|' and '-' additionally appear in pair-event names.
inline bool valid_event_name(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '@' || c == '#' || c == '$' || c == '\'' || c == '|' || c == '-';
        if (!ok) return false;
    }
    return true;
}

/// An ordered event set with attribute subsets. Events are identified by
/// their declaration index; the uncontrollable / unobservable / low-level
/// sets are the complements and are never stored.
struct Alphabet {
    std::vector<std::string> events;
    std::vector<bool> controllable;
    std::vector<bool> observable;
    std::vector<bool> highlevel;

    Alphabet() = default;

    int size() const { return static_cast<int>(events.size()); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (events[i] == name) return i;
        return -1;
    }

    bool contains(const std::string& name) const { return index_of(name) >= 0; }

    int require(const std::string& name) const {
        int i = index_of(name);
        if (i < 0) throw Error(ErrorKind::UnknownEvent, "UnknownEvent(" + name + ")");
        return i;
    }

    void add_event(const std::string& name, bool ctrl = false, bool obs = false, bool hi = false) {
        if (!valid_event_name(name))
            throw Error(ErrorKind::ParseError, "invalid event name '" + name + "'");
        if (contains(name))
            throw Error(ErrorKind::ParseError, "duplicate event '" + name + "'");
        events.push_back(name);
        controllable.push_back(ctrl);
        observable.push_back(obs);
        highlevel.push_back(hi);
    }

    std::vector<std::string> subset(const std::vector<bool>& flags) const {
        std::vector<std::string> out;
        for (int i = 0; i < size(); ++i)
            if (flags[i]) out.push_back(events[i]);
        return out;
    }

    std::vector<std::string> controllable_events() const { return subset(controllable); }
    std::vector<std::string> observable_events() const { return subset(observable); }
    std::vector<std::string> highlevel_events() const { return subset(highlevel); }

    bool operator==(const Alphabet& o) const {
        return events == o.events && controllable == o.controllable &&
               observable == o.observable && highlevel == o.highlevel;
    }
    bool operator!=(const Alphabet& o) const { return !(*this == o); }
};

/// Builds an alphabet from names plus attribute name lists.
inline Alphabet make_alphabet(const std::vector<std::string>& events,
                              const std::vector<std::string>& controllable = {},
                              const std::vector<std::string>& observable = {},
                              const std::vector<std::string>& highlevel = {}) {
    Alphabet a;
    for (const auto& e : events) a.add_event(e);
    auto mark = [&](const std::vector<std::string>& names, std::vector<bool>& flags) {
        for (const auto& n : names) flags[a.require(n)] = true;
    };
    mark(controllable, a.controllable);
    mark(observable, a.observable);
    mark(highlevel, a.highlevel);
    return a;
}

struct Transition {
    int src;
    int event;
    int dst;
    auto operator<=>(const Transition&) const = default;
};

/// Finite acceptor. `marked` selects the marked language; the generated
/// language is the set of labels of paths from the initial state. The
/// `deterministic` flag is computed by validate().
struct Automaton {
    Alphabet alphabet;
    std::vector<std::string> state_names;
    int initial = 0;
    std::vector<bool> marked;
    std::vector<Transition> transitions;  // kept sorted and unique
    bool deterministic = false;

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_transitions() const { return static_cast<int>(transitions.size()); }

    int state_index(const std::string& name) const {
        for (int i = 0; i < num_states(); ++i)
            if (state_names[i] == name) return i;
        return -1;
    }

    int add_state(const std::string& name, bool is_marked = false) {
        state_names.push_back(name);
        marked.push_back(is_marked);
        return num_states() - 1;
    }

    void add_transition(int src, int event, int dst) {
        transitions.push_back({src, event, dst});
    }

    void normalize_transitions() {
        std::sort(transitions.begin(), transitions.end());
        transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
    }

    bool operator==(const Automaton& o) const {
        return alphabet == o.alphabet && state_names == o.state_names && initial == o.initial &&
               marked == o.marked && transitions == o.transitions;
    }
};

/// Per-state outgoing transition lists, built once per algorithm run.
struct Adjacency {
    std::vector<std::vector<std::pair<int, int>>> out;  // state -> (event, dst)

    explicit Adjacency(const Automaton& a) : out(a.num_states()) {
        for (const auto& t : a.transitions) out[t.src].push_back({t.event, t.dst});
        for (auto& v : out) std::sort(v.begin(), v.end());
    }

    /// Successors of `s` on `e` (events sorted, so a range scan suffices).
    std::vector<int> step(int s, int e) const {
        std::vector<int> r;
        for (const auto& [ev, dst] : out[s])
            if (ev == e) r.push_back(dst);
        return r;
    }
};

/// Checks structural invariants, deduplicates transitions, and computes the
/// deterministic flag. Errors name the offending element.
inline Automaton validate(Automaton a) {
    std::set<std::string> seen_states;
    for (const auto& s : a.state_names) {
        if (s.empty() || s.find_first_of(" \t\r\n") != std::string::npos)
            throw Error(ErrorKind::ParseError, "invalid state name '" + s + "'");
        if (!seen_states.insert(s).second)
            throw Error(ErrorKind::ParseError, "duplicate state '" + s + "'");
    }
    std::set<std::string> seen_events;
    for (const auto& e : a.alphabet.events) {
        if (!valid_event_name(e))
            throw Error(ErrorKind::ParseError, "invalid event name '" + e + "'");
        if (!seen_events.insert(e).second)
            throw Error(ErrorKind::ParseError, "duplicate event '" + e + "'");
    }
    if (a.num_states() == 0) throw Error(ErrorKind::ParseError, "automaton has no states");
    if (a.initial < 0 || a.initial >= a.num_states())
        throw Error(ErrorKind::DanglingState, "DanglingState(initial)");
    if (static_cast<int>(a.marked.size()) != a.num_states())
        throw Error(ErrorKind::ParseError, "marked set size mismatch");
    for (const auto& t : a.transitions) {
        if (t.src < 0 || t.src >= a.num_states())
            throw Error(ErrorKind::DanglingState, "DanglingState(#" + std::to_string(t.src) + ")");
        if (t.dst < 0 || t.dst >= a.num_states())
            throw Error(ErrorKind::DanglingState, "DanglingState(#" + std::to_string(t.dst) + ")");
        if (t.event < 0 || t.event >= a.alphabet.size())
            throw Error(ErrorKind::UnknownEvent, "UnknownEvent(#" + std::to_string(t.event) + ")");
    }
    a.normalize_transitions();
    a.deterministic = true;
    for (size_t i = 1; i < a.transitions.size(); ++i) {
        if (a.transitions[i].src == a.transitions[i - 1].src &&
            a.transitions[i].event == a.transitions[i - 1].event) {
            a.deterministic = false;
            break;
        }
    }
    return a;
}

/// Convenience builder used by tests and generators: states and transitions
/// are given by name; transition events must be declared in `alphabet`.
inline Automaton make_automaton(Alphabet alphabet, const std::vector<std::string>& states,
                                const std::string& initial,
                                const std::vector<std::string>& marked,
                                const std::vector<std::array<std::string, 3>>& trans) {
    Automaton a;
    a.alphabet = std::move(alphabet);
    for (const auto& s : states) a.add_state(s);
    int init = a.state_index(initial);
    if (init < 0) throw Error(ErrorKind::DanglingState, "DanglingState(" + initial + ")");
    a.initial = init;
    for (const auto& m : marked) {
        int i = a.state_index(m);
        if (i < 0) throw Error(ErrorKind::DanglingState, "DanglingState(" + m + ")");
        a.marked[i] = true;
    }
    for (const auto& [src, ev, dst] : trans) {
        int s = a.state_index(src);
        if (s < 0) throw Error(ErrorKind::DanglingState, "DanglingState(" + src + ")");
        int d = a.state_index(dst);
        if (d < 0) throw Error(ErrorKind::DanglingState, "DanglingState(" + dst + ")");
        a.add_transition(s, a.alphabet.require(ev), d);
    }
    return validate(std::move(a));
}

/// Renders a word for human output. Single-character alphabets print
/// concatenated ("bac"); otherwise events are joined with '.'. The empty
/// word prints as "-".
inline std::string format_word(const Word& w) {
    if (w.empty()) return "-";
    bool all_single = true;
    for (const auto& e : w)
        if (e.size() != 1) all_single = false;
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i > 0 && !all_single) out += '.';
        out += w[i];
    }
    return out;
}

/// Canonical string key for hashing words in set-based oracles.
inline std::string word_key(const Word& w) {
    std::string k;
    for (const auto& e : w) {
        k += e;
        k += '\x1f';
    }
    return k;
}

inline Word word_from(const std::string& compact) {
    Word w;
    for (char c : compact) w.push_back(std::string(1, c));
    return w;
}

}  // namespace hsc
