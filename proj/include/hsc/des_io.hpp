/* des_io.hpp -- the line-oriented `.des` text format
 *
 * Sections: `events:`, `states:`, `initial:`, `marked:`, `trans:` (one
 * transition per line). Event entries may carry attribute flags in brackets,
 * e.g. `a[co]`: c = controllable, o = observable, h = high-level. Parsing is
 * whitespace-insensitive and '#' starts a comment; serialization is canonical
 * (fixed section order, declaration order for events and states, sorted
 * transitions) and bit-exact for a validated automaton.
 */

#pragma once

#include <sstream>

#include "hsc/automaton.hpp"

namespace hsc {

namespace detail {

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace detail

inline Automaton parse_des(const std::string& text) {
    std::vector<std::string> event_entries;
    std::vector<std::string> states;
    std::vector<std::string> initial_tokens;
    std::vector<std::string> marked;
    std::vector<std::array<std::string, 3>> trans;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = detail::strip_comment(raw);
        auto colon = line.find(':');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (colon == std::string::npos)
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(lineno) + ": missing section keyword");
        std::string key;
        for (char c : line.substr(0, colon))
            if (!isspace(static_cast<unsigned char>(c))) key += c;
        std::string rest = line.substr(colon + 1);
        if (key == "events") {
            // Entries may contain bracketed flags with internal spaces.
            std::string cur;
            bool in_brackets = false;
            auto flush = [&]() {
                if (!cur.empty()) event_entries.push_back(cur);
                cur.clear();
            };
            for (char c : rest) {
                if (isspace(static_cast<unsigned char>(c)) && !in_brackets) {
                    flush();
                } else if (!isspace(static_cast<unsigned char>(c)) || in_brackets) {
                    if (c == '[') in_brackets = true;
                    if (c == ']') in_brackets = false;
                    if (!isspace(static_cast<unsigned char>(c))) cur += c;
                }
            }
            flush();
        } else if (key == "states") {
            for (auto& t : detail::split_ws(rest)) states.push_back(t);
        } else if (key == "initial") {
            for (auto& t : detail::split_ws(rest)) initial_tokens.push_back(t);
        } else if (key == "marked") {
            for (auto& t : detail::split_ws(rest)) marked.push_back(t);
        } else if (key == "trans") {
            auto toks = detail::split_ws(rest);
            if (toks.size() != 3)
                throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) +
                                                       ": trans expects 'src event dst'");
            trans.push_back({toks[0], toks[1], toks[2]});
        } else {
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(lineno) + ": unknown section '" + key + "'");
        }
    }

    Alphabet alphabet;
    for (const auto& entry : event_entries) {
        std::string name = entry;
        bool ctrl = false, obs = false, hi = false;
        auto lb = entry.find('[');
        if (lb != std::string::npos) {
            if (entry.back() != ']')
                throw Error(ErrorKind::ParseError, "malformed event entry '" + entry + "'");
            name = entry.substr(0, lb);
            for (char c : entry.substr(lb + 1, entry.size() - lb - 2)) {
                if (c == 'c') ctrl = true;
                else if (c == 'o') obs = true;
                else if (c == 'h') hi = true;
                else
                    throw Error(ErrorKind::ParseError,
                                std::string("unknown event flag '") + c + "'");
            }
        }
        if (!valid_event_name(name))
            throw Error(ErrorKind::ParseError, "invalid event name '" + name + "'");
        if (alphabet.contains(name))
            throw Error(ErrorKind::ParseError, "duplicate event '" + name + "'");
        alphabet.add_event(name, ctrl, obs, hi);
    }

    if (initial_tokens.empty())
        throw Error(ErrorKind::ParseError, "no initial state declared");
    if (initial_tokens.size() > 1)
        throw Error(ErrorKind::MultipleInitial,
                    "MultipleInitial(" + initial_tokens[0] + "," + initial_tokens[1] + ")");

    Automaton a;
    a.alphabet = std::move(alphabet);
    for (const auto& s : states) {
        if (a.state_index(s) >= 0)
            throw Error(ErrorKind::ParseError, "duplicate state '" + s + "'");
        a.add_state(s);
    }
    int init = a.state_index(initial_tokens[0]);
    if (init < 0) throw Error(ErrorKind::DanglingState, "DanglingState(" + initial_tokens[0] + ")");
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
        int e = a.alphabet.index_of(ev);
        if (e < 0) throw Error(ErrorKind::UnknownEvent, "UnknownEvent(" + ev + ")");
        a.add_transition(s, e, d);
    }
    return validate(std::move(a));
}

inline std::string serialize_des(const Automaton& a) {
    std::ostringstream out;
    out << "events:";
    for (int i = 0; i < a.alphabet.size(); ++i) {
        out << " " << a.alphabet.events[i];
        std::string flags;
        if (a.alphabet.controllable[i]) flags += 'c';
        if (a.alphabet.observable[i]) flags += 'o';
        if (a.alphabet.highlevel[i]) flags += 'h';
        if (!flags.empty()) out << "[" << flags << "]";
    }
    out << "\n";
    out << "states:";
    for (const auto& s : a.state_names) out << " " << s;
    out << "\n";
    out << "initial: " << a.state_names[a.initial] << "\n";
    out << "marked:";
    for (int i = 0; i < a.num_states(); ++i)
        if (a.marked[i]) out << " " << a.state_names[i];
    out << "\n";
    std::vector<Transition> ts = a.transitions;
    std::sort(ts.begin(), ts.end());
    for (const auto& t : ts)
        out << "trans: " << a.state_names[t.src] << " " << a.alphabet.events[t.event] << " "
            << a.state_names[t.dst] << "\n";
    return out.str();
}

/// Graphviz rendering (dot syntax) of an acceptor.
inline std::string to_dot(const Automaton& a, const std::string& name = "des") {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  __init [shape=point];\n";
    for (int i = 0; i < a.num_states(); ++i) {
        out << "  q" << i << " [label=\"" << a.state_names[i] << "\""
            << (a.marked[i] ? ", shape=doublecircle" : "") << "];\n";
    }
    out << "  __init -> q" << a.initial << ";\n";
    for (const auto& t : a.transitions)
        out << "  q" << t.src << " -> q" << t.dst << " [label=\"" << a.alphabet.events[t.event]
            << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace hsc
