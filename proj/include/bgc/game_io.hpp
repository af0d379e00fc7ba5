#pragma once

#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bgc/game.hpp"

namespace bgc {

namespace detail {

inline std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::istringstream in{std::string(text)};
    for (std::string w; in >> w;) {
        words.push_back(w);
    }
    return words;
}

// Splits "<agent>: <rest>" after a keyword. Throws ParseError on malformed input.
inline std::pair<std::size_t, std::string_view> split_agent_prefix(std::string_view text, std::size_t line) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("expected '<agent>:'", line);
    }
    std::string_view agent = trim(text.substr(0, colon));
    if (!all_digits(agent)) {
        throw ParseError("expected an agent number, got '" + std::string(agent) + "'", line);
    }
    return {static_cast<std::size_t>(std::stoul(std::string(agent))), trim(text.substr(colon + 1))};
}

// Splits "<assignment> -> <rational>".
inline std::pair<std::string_view, std::string_view> split_arrow(std::string_view text, std::size_t line) {
    auto arrow = text.rfind("->");
    if (arrow == std::string_view::npos) {
        throw ParseError("expected '<assignment> -> <rational>'", line);
    }
    return {trim(text.substr(0, arrow)), trim(text.substr(arrow + 2))};
}

inline std::string_view strip_comment(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
    }
    return trim(line);
}

// Returns the keyword and the remainder; the keyword ends at whitespace or ':'.
inline std::pair<std::string_view, std::string_view> split_keyword(std::string_view line) {
    std::size_t end = 0;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end])) && line[end] != ':') {
        ++end;
    }
    return {line.substr(0, end), line.substr(end)};
}

template <class Fn>
auto rethrow_with_line(std::size_t line, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        if (e.line() != 0) {
            throw;
        }
        throw ParseError(e.what(), line);
    }
}

}  // namespace detail

inline GameDraft parse_game_draft(std::istream& in) {
    GameDraft draft;
    bool have_agents = false;
    bool have_vars = false;
    bool have_observable = false;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        std::string_view line = detail::strip_comment(raw);
        if (line.empty()) {
            continue;
        }
        auto [keyword, rest] = detail::split_keyword(line);
        if (keyword == "agents") {
            auto words = detail::split_words(rest);
            if (have_agents || words.size() != 1 || !detail::all_digits(words[0])) {
                throw ParseError("expected 'agents <n>' exactly once", line_no);
            }
            draft.agents = std::stoul(words[0]);
            have_agents = true;
        } else if (keyword == "vars") {
            if (have_vars) {
                throw ParseError("duplicate 'vars' line", line_no);
            }
            draft.variables = detail::split_words(rest);
            for (const auto& name : draft.variables) {
                if (!is_identifier(name)) {
                    throw ParseError("invalid variable name '" + name + "'", line_no);
                }
            }
            have_vars = true;
        } else if (keyword == "control") {
            auto [agent, names] = detail::split_agent_prefix(rest, line_no);
            draft.control.push_back({agent, detail::split_words(names), line_no});
        } else if (keyword == "goal") {
            auto [agent, text] = detail::split_agent_prefix(rest, line_no);
            draft.goals.push_back({agent, std::string(text), line_no});
        } else if (keyword == "observable") {
            std::string_view names = detail::trim(rest);
            if (names.empty() || names.front() != ':') {
                throw ParseError("expected 'observable: <name>*'", line_no);
            }
            if (have_observable) {
                throw ParseError("duplicate 'observable' line", line_no);
            }
            draft.observable = detail::split_words(names.substr(1));
            have_observable = true;
        } else if (keyword == "costdefault") {
            auto [agent, value] = detail::split_agent_prefix(rest, line_no);
            Rational cost = detail::rethrow_with_line(line_no, [&] { return parse_rational(value); });
            draft.cost_defaults.push_back({agent, cost, line_no});
        } else if (keyword == "cost") {
            auto [agent, body] = detail::split_agent_prefix(rest, line_no);
            auto [assignment, value] = detail::split_arrow(body, line_no);
            GameDraft::CostEntry entry;
            entry.agent = agent;
            entry.line = line_no;
            entry.assignment = detail::rethrow_with_line(line_no, [&] { return parse_assignment_list(assignment); });
            entry.cost = detail::rethrow_with_line(line_no, [&] { return parse_rational(value); });
            draft.costs.push_back(std::move(entry));
        } else {
            throw ParseError("unknown directive '" + std::string(keyword) + "'", line_no);
        }
    }
    if (!have_agents) {
        throw ParseError("missing 'agents' line");
    }
    if (!have_vars) {
        throw ParseError("missing 'vars' line");
    }
    return draft;
}

inline BooleanGame parse_game(std::istream& in) { return validate_game(parse_game_draft(in)); }

inline BooleanGame parse_game(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_game(in);
}

// Canonical text form; reading it back yields an identical game.
inline std::string write_game(const BooleanGame& game) {
    std::ostringstream out;
    const auto& vars = game.variables();
    out << "agents " << game.num_agents() << '\n';
    out << "vars";
    for (const auto& v : vars) {
        out << ' ' << v;
    }
    out << '\n';
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        out << "control " << i + 1 << ':';
        for (std::size_t j : game.controlled_variables(i)) {
            out << ' ' << vars[j];
        }
        out << '\n';
    }
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        out << "goal " << i + 1 << ": " << print_formula(game.goal(i)) << '\n';
    }
    out << "observable:";
    for (std::size_t j : game.observable()) {
        out << ' ' << vars[j];
    }
    out << '\n';
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        const auto& table = game.cost_table(i);
        out << "costdefault " << i + 1 << ": " << to_string(table.default_cost) << '\n';
        for (const auto& [bits, c] : table.overrides) {
            out << "cost " << i + 1 << ": " << format_assignment(vars, bits) << " -> " << to_string(c) << '\n';
        }
    }
    return out.str();
}

}  // namespace bgc
