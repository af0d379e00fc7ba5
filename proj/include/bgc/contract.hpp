#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bgc/game.hpp"
#include "bgc/game_io.hpp"

namespace bgc {

// Unvalidated payments, in terms of variable names.
struct ContractDraft {
    struct DefaultLine {
        std::size_t agent = 0;  // 1-based
        Rational payment;
        std::size_t line = 0;
    };
    struct PaymentLine {
        std::size_t agent = 0;
        std::vector<std::pair<std::string, bool>> observation;
        Rational payment;
        std::size_t line = 0;
    };
    std::vector<DefaultLine> defaults;
    std::vector<PaymentLine> payments;
};

// Per-agent nonnegative payment for every observation over O. Stored as a
// default plus overrides; kappa_star is the maximum over all 2^|O| observations.
class Contract {
public:
    struct Schedule {
        Rational default_payment = 0;
        std::map<std::uint32_t, Rational> overrides;  // keyed by Observation::bits
    };

    std::size_t num_agents() const { return schedules_.size(); }
    std::size_t observation_width() const { return width_; }

    const Rational& payment(AgentId i, Observation o) const {
        const auto& s = schedules_[i];
        auto it = s.overrides.find(o.bits);
        return it == s.overrides.end() ? s.default_payment : it->second;
    }
    const Rational& kappa_star(AgentId i) const { return kappa_star_[i]; }
    const Schedule& schedule(AgentId i) const { return schedules_[i]; }

    bool is_null() const {
        for (const auto& k : kappa_star_) {
            if (k != 0) {
                return false;
            }
        }
        return true;
    }

    // Builds a contract from per-agent schedules. Rejects negative payments
    // and keys outside the observation space.
    static Contract from_schedules(std::vector<Schedule> schedules, std::size_t observation_width) {
        Contract c;
        c.width_ = observation_width;
        const std::uint64_t space = std::uint64_t{1} << observation_width;
        for (std::size_t i = 0; i < schedules.size(); ++i) {
            auto& s = schedules[i];
            if (s.default_payment < 0) {
                throw ValidationError("negative payment " + to_string(s.default_payment) + " for agent " +
                                      std::to_string(i + 1));
            }
            for (const auto& [bits, p] : s.overrides) {
                if (bits >= space) {
                    throw ValidationError("payment key outside the observation space");
                }
                if (p < 0) {
                    throw ValidationError("negative payment " + to_string(p) + " for agent " + std::to_string(i + 1));
                }
            }
        }
        c.schedules_ = std::move(schedules);
        c.finish();
        return c;
    }

private:
    void finish() {
        kappa_star_.clear();
        const std::uint64_t space = std::uint64_t{1} << width_;
        for (const auto& s : schedules_) {
            Rational best = 0;
            bool default_reachable = s.overrides.size() < space;
            if (default_reachable) {
                best = s.default_payment;
            }
            for (const auto& [bits, p] : s.overrides) {
                if (p > best) {
                    best = p;
                }
            }
            kappa_star_.push_back(best);
        }
    }

    std::size_t width_ = 0;
    std::vector<Schedule> schedules_;
    std::vector<Rational> kappa_star_;
};

inline Contract null_contract(const BooleanGame& game) {
    return Contract::from_schedules(std::vector<Contract::Schedule>(game.num_agents()), game.observable().size());
}

inline Contract validate_contract(const BooleanGame& game, const ContractDraft& draft) {
    std::vector<Contract::Schedule> schedules(game.num_agents());
    std::vector<bool> seen_default(game.num_agents(), false);
    auto names = observable_names(game);
    auto check_agent = [&](std::size_t agent, std::size_t line) {
        if (agent < 1 || agent > game.num_agents()) {
            throw ValidationError(detail::at_line(line) + "agent " + std::to_string(agent) + " out of range");
        }
        return agent - 1;
    };
    for (const auto& d : draft.defaults) {
        AgentId i = check_agent(d.agent, d.line);
        if (seen_default[i]) {
            throw ValidationError(detail::at_line(d.line) + "duplicate contractdefault for agent " +
                                  std::to_string(d.agent));
        }
        if (d.payment < 0) {
            throw ValidationError(detail::at_line(d.line) + "negative payment " + to_string(d.payment));
        }
        seen_default[i] = true;
        schedules[i].default_payment = d.payment;
    }
    for (const auto& p : draft.payments) {
        AgentId i = check_agent(p.agent, p.line);
        if (p.payment < 0) {
            throw ValidationError(detail::at_line(p.line) + "negative payment " + to_string(p.payment));
        }
        for (const auto& [name, value] : p.observation) {
            if (game.variable_index(name) && std::find(names.begin(), names.end(), name) == names.end()) {
                throw ValidationError(detail::at_line(p.line) + "payment conditioned on non-observable variable '" +
                                      name + "'");
            }
        }
        std::uint32_t bits = 0;
        try {
            bits = detail::assignment_bits(p.observation, names, "observable set");
        } catch (const ValidationError& e) {
            throw ValidationError(detail::at_line(p.line) + e.what());
        }
        if (!schedules[i].overrides.emplace(bits, p.payment).second) {
            throw ValidationError(detail::at_line(p.line) + "duplicate payment entry for agent " +
                                  std::to_string(p.agent));
        }
    }
    return Contract::from_schedules(std::move(schedules), names.size());
}

// u_i^k(v): 1 + c* + k(v|O) - c(v) for winners, -k* + k(v|O) - c(v) for losers.
inline Rational utility_k(const BooleanGame& game, const Contract& contract, AgentId i, Valuation v) {
    const Rational& pay = contract.payment(i, game.observe(v));
    if (game.is_winner(i, v)) {
        return 1 + game.c_star(i) + pay - game.cost(i, v);
    }
    return pay - contract.kappa_star(i) - game.cost(i, v);
}

// B^k as a view: game and contract must outlive it.
class InducedGame {
public:
    InducedGame(const BooleanGame& game, const Contract& contract) : game_(&game), contract_(&contract) {
        if (contract.num_agents() != game.num_agents() || contract.observation_width() != game.observable().size()) {
            throw PreconditionError("contract does not match the game's agents and observation space");
        }
    }

    const BooleanGame& base() const { return *game_; }
    const Contract& contract() const { return *contract_; }
    Rational utility(AgentId i, Valuation v) const { return utility_k(*game_, *contract_, i, v); }

private:
    const BooleanGame* game_;
    const Contract* contract_;
};

inline InducedGame induced_game(const BooleanGame& game, const Contract& contract) {
    return InducedGame(game, contract);
}

// --- contract file format -------------------------------------------------

namespace detail {

inline void parse_contract_line(std::string_view line, std::size_t line_no, ContractDraft& draft, bool inline_form) {
    std::string_view rest = line;
    std::string_view keyword = "contract";
    if (!inline_form) {
        auto split = split_keyword(line);
        keyword = split.first;
        rest = split.second;
    }
    if (keyword == "contractdefault") {
        auto [agent, value] = split_agent_prefix(rest, line_no);
        Rational payment = rethrow_with_line(line_no, [&] { return parse_rational(value); });
        draft.defaults.push_back({agent, payment, line_no});
    } else if (keyword == "contract") {
        auto [agent, body] = split_agent_prefix(rest, line_no);
        auto [assignment, value] = split_arrow(body, line_no);
        ContractDraft::PaymentLine p;
        p.agent = agent;
        p.line = line_no;
        p.observation = rethrow_with_line(line_no, [&] { return parse_assignment_list(assignment); });
        p.payment = rethrow_with_line(line_no, [&] { return parse_rational(value); });
        draft.payments.push_back(std::move(p));
    } else {
        throw ParseError("unknown directive '" + std::string(keyword) + "'", line_no);
    }
}

}  // namespace detail

inline ContractDraft parse_contract_draft(std::istream& in) {
    ContractDraft draft;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        std::string_view line = detail::strip_comment(raw);
        if (!line.empty()) {
            detail::parse_contract_line(line, line_no, draft, false);
        }
    }
    return draft;
}

inline ContractDraft parse_contract_draft(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_contract_draft(in);
}

// Adds an inline fragment such as "1: p1=1 -> 10".
inline void add_payment_fragment(ContractDraft& draft, std::string_view fragment) {
    detail::parse_contract_line(detail::trim(fragment), 0, draft, true);
}

inline std::string write_contract(const BooleanGame& game, const Contract& contract) {
    std::ostringstream out;
    auto names = observable_names(game);
    for (AgentId i = 0; i < contract.num_agents(); ++i) {
        const auto& s = contract.schedule(i);
        out << "contractdefault " << i + 1 << ": " << to_string(s.default_payment) << '\n';
        for (const auto& [bits, p] : s.overrides) {
            out << "contract " << i + 1 << ": " << format_assignment(names, bits) << " -> " << to_string(p) << '\n';
        }
    }
    return out.str();
}

}  // namespace bgc
