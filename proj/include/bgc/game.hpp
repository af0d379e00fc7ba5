#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bgc/error.hpp"
#include "bgc/formula.hpp"
#include "bgc/rational.hpp"

namespace bgc {

// Profiles are enumerated exhaustively, so the variable count is capped.
inline constexpr std::size_t kMaxVariables = 24;

using AgentId = std::size_t;  // 0-based internally, printed 1-based

// Total truth assignment over the game's variables. Variable j (canonical
// order) is bit width-1-j, so numeric order equals lexicographic order of
// the tuple (p1,...,pm).
struct Valuation {
    std::uint32_t bits = 0;
    std::uint8_t width = 0;

    bool operator[](std::size_t j) const { return ((bits >> (width - 1 - j)) & 1u) != 0; }

    friend auto operator<=>(const Valuation&, const Valuation&) = default;
};

// Restriction of a valuation to an ordered variable subset; same bit layout.
struct Observation {
    std::uint32_t bits = 0;
    std::uint8_t width = 0;

    bool operator[](std::size_t k) const { return ((bits >> (width - 1 - k)) & 1u) != 0; }

    friend auto operator<=>(const Observation&, const Observation&) = default;
};

// Restricts v to the variables listed in `subset` (canonical indices, in order).
inline Observation restrict(Valuation v, std::span<const std::size_t> subset) {
    Observation o{0, static_cast<std::uint8_t>(subset.size())};
    for (std::size_t var : subset) {
        o.bits = (o.bits << 1) | (v[var] ? 1u : 0u);
    }
    return o;
}

struct CostTable {
    Rational default_cost = 0;
    std::map<std::uint32_t, Rational> overrides;  // keyed by Valuation::bits

    const Rational& lookup(Valuation v) const {
        auto it = overrides.find(v.bits);
        return it == overrides.end() ? default_cost : it->second;
    }
};

// Unvalidated game description, as read from a file or built in code.
struct GameDraft {
    struct CostEntry {
        std::size_t agent = 0;  // 1-based, as written
        std::vector<std::pair<std::string, bool>> assignment;
        Rational cost;
        std::size_t line = 0;
    };
    struct AgentLine {
        std::size_t agent = 0;  // 1-based
        std::vector<std::string> names;
        std::size_t line = 0;
    };
    struct GoalLine {
        std::size_t agent = 0;
        std::string formula;
        std::size_t line = 0;
    };
    struct DefaultLine {
        std::size_t agent = 0;
        Rational cost;
        std::size_t line = 0;
    };

    std::size_t agents = 0;
    std::vector<std::string> variables;
    std::vector<AgentLine> control;
    std::vector<GoalLine> goals;
    std::vector<std::string> observable;
    std::vector<DefaultLine> cost_defaults;
    std::vector<CostEntry> costs;
};

class BooleanGame;
BooleanGame validate_game(const GameDraft& draft);

// A Boolean game with costs plus the principal's observable set. Immutable.
class BooleanGame {
public:
    std::size_t num_agents() const { return goals_.size(); }
    std::size_t num_variables() const { return variables_.size(); }
    const std::vector<std::string>& variables() const { return variables_; }
    std::uint32_t profile_count() const { return std::uint32_t{1} << num_variables(); }

    std::optional<std::size_t> variable_index(std::string_view name) const {
        for (std::size_t j = 0; j < variables_.size(); ++j) {
            if (variables_[j] == name) {
                return j;
            }
        }
        return std::nullopt;
    }

    std::uint32_t control_mask(AgentId i) const { return control_masks_[i]; }
    const std::vector<std::size_t>& controlled_variables(AgentId i) const { return controlled_[i]; }
    AgentId owner(std::size_t var) const { return owner_[var]; }

    const Formula& goal(AgentId i) const { return goals_[i]; }
    const CostTable& cost_table(AgentId i) const { return costs_[i]; }
    const Rational& cost(AgentId i, Valuation v) const { return costs_[i].lookup(v); }
    const Rational& c_star(AgentId i) const { return c_star_[i]; }

    const std::vector<std::size_t>& observable() const { return observable_; }
    std::uint32_t observable_mask() const { return observable_mask_; }
    std::uint32_t observation_count() const { return std::uint32_t{1} << observable_.size(); }

    Valuation valuation(std::uint32_t bits) const { return Valuation{bits, static_cast<std::uint8_t>(num_variables())}; }
    Observation observation(std::uint32_t bits) const {
        return Observation{bits, static_cast<std::uint8_t>(observable_.size())};
    }

    Observation observe(Valuation v) const { return restrict(v, observable_); }
    bool indistinguishable(Valuation v, Valuation w) const {
        return ((v.bits ^ w.bits) & observable_mask_) == 0;
    }
    bool consistent(Valuation v, Observation o) const { return observe(v) == o; }

    bool satisfies(Valuation v, const Formula& f) const {
        return eval(f, [&](std::size_t j) { return v[j]; });
    }
    bool is_winner(AgentId i, Valuation v) const {
        if (!winners_cache_.empty()) {
            return ((winners_cache_[v.bits] >> i) & 1u) != 0;
        }
        return satisfies(v, goals_[i]);
    }
    // Bit i set iff agent i wins under v.
    std::uint32_t winners(Valuation v) const {
        if (!winners_cache_.empty()) {
            return winners_cache_[v.bits];
        }
        return compute_winners(v);
    }

    // 1 + c* - c(v) for winners, -c(v) for losers.
    Rational utility(AgentId i, Valuation v) const {
        if (is_winner(i, v)) {
            return 1 + c_star_[i] - cost(i, v);
        }
        return -cost(i, v);
    }

    const BooleanGame& base() const { return *this; }

    // Calls fn(alternative) for every v' != v that differs from v only on
    // agent i's variables, in increasing canonical order.
    template <class Fn>
    void for_each_alternative(AgentId i, Valuation v, Fn&& fn) const {
        const std::uint32_t mask = control_masks_[i];
        const std::uint32_t rest = v.bits & ~mask;
        std::uint32_t sub = 0;
        do {
            if ((rest | sub) != v.bits) {
                fn(valuation(rest | sub));
            }
            sub = (sub - mask) & mask;
        } while (sub != 0);
    }

    bool is_unilateral(Valuation v, Valuation w, AgentId i) const {
        return v.bits != w.bits && ((v.bits ^ w.bits) & ~control_masks_[i]) == 0;
    }

    friend BooleanGame validate_game(const GameDraft& draft);
    friend BooleanGame costless(const BooleanGame& game);

private:
    BooleanGame() = default;

    std::uint32_t compute_winners(Valuation v) const {
        std::uint32_t mask = 0;
        for (AgentId i = 0; i < goals_.size(); ++i) {
            if (satisfies(v, goals_[i])) {
                mask |= std::uint32_t{1} << i;
            }
        }
        return mask;
    }

    void finish() {
        c_star_.clear();
        const std::uint64_t total = std::uint64_t{1} << num_variables();
        for (const auto& table : costs_) {
            // Max over the full domain: the default counts only if some valuation falls through to it.
            std::optional<Rational> best;
            if (table.overrides.size() < total) {
                best = table.default_cost;
            }
            for (const auto& [bits, c] : table.overrides) {
                if (!best || c > *best) {
                    best = c;
                }
            }
            c_star_.push_back(best.value_or(Rational(0)));
        }
        winners_cache_.clear();
        if (num_variables() <= 16) {
            winners_cache_.resize(profile_count());
            for (std::uint32_t bits = 0; bits < profile_count(); ++bits) {
                winners_cache_[bits] = compute_winners(valuation(bits));
            }
        }
    }

    std::vector<std::string> variables_;
    std::vector<std::uint32_t> control_masks_;
    std::vector<std::vector<std::size_t>> controlled_;
    std::vector<AgentId> owner_;
    std::vector<Formula> goals_;
    std::vector<CostTable> costs_;
    std::vector<Rational> c_star_;
    std::vector<std::size_t> observable_;
    std::uint32_t observable_mask_ = 0;
    std::vector<std::uint32_t> winners_cache_;
};

template <class G>
concept GameView = requires(const G& g, AgentId i, Valuation v) {
    { g.base() } -> std::same_as<const BooleanGame&>;
    { g.utility(i, v) } -> std::convertible_to<Rational>;
};

namespace detail {

inline std::string agent_label(std::size_t agent) { return "agent " + std::to_string(agent); }

inline std::string at_line(std::size_t line) { return line == 0 ? "" : "line " + std::to_string(line) + ": "; }

inline std::uint32_t var_bit(std::size_t width, std::size_t j) { return std::uint32_t{1} << (width - 1 - j); }

}  // namespace detail

inline BooleanGame validate_game(const GameDraft& draft) {
    using detail::at_line;
    BooleanGame g;
    const std::size_t n = draft.agents;
    const std::size_t m = draft.variables.size();
    if (n == 0) {
        throw ValidationError("a game needs at least one agent");
    }
    if (n > 32) {
        throw ValidationError("at most 32 agents are supported");
    }
    if (m > kMaxVariables) {
        throw CapExceeded("too many variables for exhaustive enumeration: " + std::to_string(m), kMaxVariables);
    }
    for (std::size_t j = 0; j < m; ++j) {
        const auto& name = draft.variables[j];
        if (!is_identifier(name) || is_reserved_word(name)) {
            throw ValidationError("invalid variable name '" + name + "'");
        }
        for (std::size_t k = 0; k < j; ++k) {
            if (draft.variables[k] == name) {
                throw ValidationError("variable '" + name + "' declared twice");
            }
        }
    }
    g.variables_ = draft.variables;
    auto index_of = [&](const std::string& name, std::size_t line, const char* what) {
        auto idx = g.variable_index(name);
        if (!idx) {
            throw ValidationError(at_line(line) + "undeclared variable '" + name + "' in " + what);
        }
        return *idx;
    };
    auto check_agent = [&](std::size_t agent, std::size_t line) {
        if (agent < 1 || agent > n) {
            throw ValidationError(at_line(line) + "agent " + std::to_string(agent) + " out of range 1.." +
                                  std::to_string(n));
        }
        return agent - 1;
    };

    // Control partition.
    constexpr AgentId unowned = static_cast<AgentId>(-1);
    g.owner_.assign(m, unowned);
    g.control_masks_.assign(n, 0);
    g.controlled_.assign(n, {});
    std::vector<bool> seen_agent(n, false);
    for (const auto& line : draft.control) {
        AgentId i = check_agent(line.agent, line.line);
        if (seen_agent[i]) {
            throw ValidationError(at_line(line.line) + "duplicate control line for agent " + std::to_string(line.agent));
        }
        seen_agent[i] = true;
        for (const auto& name : line.names) {
            std::size_t j = index_of(name, line.line, "control");
            if (g.owner_[j] != unowned) {
                throw ValidationError(at_line(line.line) + "partition violation: '" + name +
                                      "' is controlled by agents " + std::to_string(g.owner_[j] + 1) + " and " +
                                      std::to_string(i + 1));
            }
            g.owner_[j] = i;
            g.control_masks_[i] |= detail::var_bit(m, j);
        }
    }
    for (AgentId i = 0; i < n; ++i) {
        if (g.control_masks_[i] == 0) {
            throw ValidationError("agent " + std::to_string(i + 1) + " controls no variables");
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (g.owner_[j] == unowned) {
            throw ValidationError("partition violation: '" + g.variables_[j] + "' is controlled by no agent");
        }
        g.controlled_[g.owner_[j]].push_back(j);
    }

    // Goals.
    std::vector<std::optional<Formula>> goals(n);
    for (const auto& line : draft.goals) {
        AgentId i = check_agent(line.agent, line.line);
        if (goals[i]) {
            throw ValidationError(at_line(line.line) + "duplicate goal for agent " + std::to_string(line.agent));
        }
        try {
            goals[i] = parse_formula(line.formula, g.variables_);
        } catch (const ParseError& e) {
            throw ValidationError(at_line(line.line) + "goal of agent " + std::to_string(line.agent) + ": " + e.what());
        }
    }
    for (AgentId i = 0; i < n; ++i) {
        if (!goals[i]) {
            throw ValidationError("missing goal for agent " + std::to_string(i + 1));
        }
        g.goals_.push_back(*goals[i]);
    }

    // Observable set, stored in canonical order.
    for (const auto& name : draft.observable) {
        std::size_t j = index_of(name, 0, "observable set");
        if ((g.observable_mask_ & detail::var_bit(m, j)) != 0) {
            throw ValidationError("variable '" + name + "' listed twice in observable set");
        }
        g.observable_mask_ |= detail::var_bit(m, j);
    }
    for (std::size_t j = 0; j < m; ++j) {
        if ((g.observable_mask_ & detail::var_bit(m, j)) != 0) {
            g.observable_.push_back(j);
        }
    }

    // Costs.
    g.costs_.assign(n, CostTable{});
    std::vector<bool> seen_default(n, false);
    for (const auto& line : draft.cost_defaults) {
        AgentId i = check_agent(line.agent, line.line);
        if (seen_default[i]) {
            throw ValidationError(at_line(line.line) + "duplicate costdefault for agent " + std::to_string(line.agent));
        }
        if (line.cost < 0) {
            throw ValidationError(at_line(line.line) + "negative cost " + to_string(line.cost));
        }
        seen_default[i] = true;
        g.costs_[i].default_cost = line.cost;
    }
    for (const auto& entry : draft.costs) {
        AgentId i = check_agent(entry.agent, entry.line);
        if (entry.cost < 0) {
            throw ValidationError(at_line(entry.line) + "negative cost " + to_string(entry.cost));
        }
        std::uint32_t bits = 0;
        std::uint32_t assigned = 0;
        for (const auto& [name, value] : entry.assignment) {
            std::size_t j = index_of(name, entry.line, "cost assignment");
            std::uint32_t bit = detail::var_bit(m, j);
            if ((assigned & bit) != 0) {
                throw ValidationError(at_line(entry.line) + "variable '" + name + "' assigned twice");
            }
            assigned |= bit;
            if (value) {
                bits |= bit;
            }
        }
        if (assigned != (m == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << m) - 1))) {
            throw ValidationError(at_line(entry.line) + "cost assignment must cover all variables");
        }
        if (!g.costs_[i].overrides.emplace(bits, entry.cost).second) {
            throw ValidationError(at_line(entry.line) + "duplicate cost entry for agent " + std::to_string(entry.agent));
        }
    }
    g.finish();
    return g;
}

// Same game with every cost zero.
inline BooleanGame costless(const BooleanGame& game) {
    BooleanGame g = game;
    for (auto& table : g.costs_) {
        table.default_cost = 0;
        table.overrides.clear();
    }
    g.finish();
    return g;
}

inline bool indistinguishable(const BooleanGame& game, Valuation v, Valuation w) { return game.indistinguishable(v, w); }

inline bool consistent(const BooleanGame& game, Valuation v, Observation o) { return game.consistent(v, o); }

inline std::uint32_t winners(const BooleanGame& game, Valuation v) { return game.winners(v); }

inline Rational utility(const BooleanGame& game, AgentId i, Valuation v) { return game.utility(i, v); }

// "p1=0,p2=1" over the given variables.
inline std::string format_assignment(std::span<const std::string> names, std::uint32_t bits) {
    std::string out;
    const std::size_t w = names.size();
    for (std::size_t k = 0; k < w; ++k) {
        if (k != 0) {
            out += ',';
        }
        out += names[k];
        out += ((bits >> (w - 1 - k)) & 1u) != 0 ? "=1" : "=0";
    }
    return out;
}

inline std::string format_valuation(const BooleanGame& game, Valuation v) {
    return format_assignment(game.variables(), v.bits);
}

inline std::vector<std::string> observable_names(const BooleanGame& game) {
    std::vector<std::string> names;
    for (std::size_t j : game.observable()) {
        names.push_back(game.variables()[j]);
    }
    return names;
}

inline std::string format_observation(const BooleanGame& game, Observation o) {
    return format_assignment(observable_names(game), o.bits);
}

// Tuple form "(1,0,1)" used for compact reports.
inline std::string format_bits(std::uint32_t bits, std::size_t width) {
    std::string out = "(";
    for (std::size_t k = 0; k < width; ++k) {
        if (k != 0) {
            out += ',';
        }
        out += ((bits >> (width - 1 - k)) & 1u) != 0 ? '1' : '0';
    }
    return out + ")";
}

// Parses "name=bit,..." into (name, value) pairs; empty text is the empty list.
inline std::vector<std::pair<std::string, bool>> parse_assignment_list(std::string_view text) {
    std::vector<std::pair<std::string, bool>> out;
    text = detail::trim(text);
    if (text.empty()) {
        return out;
    }
    while (true) {
        auto comma = text.find(',');
        std::string_view item = detail::trim(text.substr(0, comma));
        auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected name=bit, got '" + std::string(item) + "'");
        }
        std::string name(detail::trim(item.substr(0, eq)));
        std::string_view bit = detail::trim(item.substr(eq + 1));
        if (!is_identifier(name) || (bit != "0" && bit != "1")) {
            throw ParseError("expected name=bit, got '" + std::string(item) + "'");
        }
        out.emplace_back(std::move(name), bit == "1");
        if (comma == std::string_view::npos) {
            break;
        }
        text = text.substr(comma + 1);
    }
    return out;
}

namespace detail {

inline std::uint32_t assignment_bits(const std::vector<std::pair<std::string, bool>>& items,
                                     std::span<const std::string> names, const char* what) {
    std::uint32_t bits = 0;
    std::uint32_t assigned = 0;
    const std::size_t w = names.size();
    for (const auto& [name, value] : items) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
            throw ValidationError(std::string("'") + name + "' is not a variable of the " + what);
        }
        std::uint32_t bit = std::uint32_t{1} << (w - 1 - static_cast<std::size_t>(it - names.begin()));
        if ((assigned & bit) != 0) {
            throw ValidationError("variable '" + name + "' assigned twice");
        }
        assigned |= bit;
        if (value) {
            bits |= bit;
        }
    }
    if (assigned != static_cast<std::uint32_t>((std::uint64_t{1} << w) - 1)) {
        throw ValidationError(std::string("assignment must cover every variable of the ") + what);
    }
    return bits;
}

}  // namespace detail

inline Valuation parse_valuation(const BooleanGame& game, std::string_view text) {
    auto items = parse_assignment_list(text);
    return game.valuation(detail::assignment_bits(items, game.variables(), "game"));
}

inline Observation parse_observation(const BooleanGame& game, std::string_view text) {
    auto items = parse_assignment_list(text);
    auto names = observable_names(game);
    return game.observation(detail::assignment_bits(items, names, "observable set"));
}

}  // namespace bgc
