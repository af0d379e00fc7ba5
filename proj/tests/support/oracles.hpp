#pragma once

// Reference implementations used only by the tests. They recompute
// everything from the raw game data (goals, cost tables, observable set) by
// enumeration and never call the characterisation-based library code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bgc/bgc.hpp"

namespace oracle {

using namespace bgc;

// --- random inputs ------------------------------------------------------------

inline Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
    std::uniform_int_distribution<int> pick(0, 9);
    const int r = pick(rng);
    if (depth <= 0 || r < 3) {
        if (vars.empty() || r == 0) {
            return Formula::constant(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
        }
        std::size_t j = std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng);
        return Formula::variable({j, vars[j]});
    }
    if (r == 3) {
        return Formula::negation(random_formula(rng, vars, depth - 1));
    }
    Formula l = random_formula(rng, vars, depth - 1);
    Formula rr = random_formula(rng, vars, depth - 1);
    switch (r) {
        case 4:
        case 5: return Formula::conjunction(l, rr);
        case 6:
        case 7: return Formula::disjunction(l, rr);
        case 8: return Formula::implication(l, rr);
        default: return Formula::equivalence(l, rr);
    }
}

struct RandomGameOptions {
    std::size_t max_vars = 4;
    std::size_t max_agents = 3;
    int max_cost = 3;
    int goal_depth = 3;
    bool rational_costs = false;
};

inline BooleanGame random_game(std::mt19937_64& rng, const RandomGameOptions& opt = {}) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, opt.max_vars)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, std::min(m, opt.max_agents))(rng);
    GameDraft d;
    d.agents = n;
    for (std::size_t j = 0; j < m; ++j) {
        d.variables.push_back("p" + std::to_string(j + 1));
    }
    // Every agent gets one variable, the rest are scattered.
    std::vector<std::size_t> owner(m);
    std::vector<std::size_t> order(m);
    for (std::size_t j = 0; j < m; ++j) {
        order[j] = j;
    }
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < m; ++k) {
        owner[order[k]] = k < n ? k : std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
        GameDraft::AgentLine line;
        line.agent = i + 1;
        for (std::size_t j = 0; j < m; ++j) {
            if (owner[j] == i) {
                line.names.push_back(d.variables[j]);
            }
        }
        d.control.push_back(line);
        d.goals.push_back({i + 1, print_formula(random_formula(rng, d.variables, opt.goal_depth)), 0});
    }
    for (const auto& v : d.variables) {
        if (std::uniform_int_distribution<int>(0, 1)(rng)) {
            d.observable.push_back(v);
        }
    }
    std::uniform_int_distribution<int> cost(0, opt.max_cost);
    std::uniform_int_distribution<int> denom(1, 4);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << m); ++bits) {
            GameDraft::CostEntry e;
            e.agent = i + 1;
            e.cost = opt.rational_costs ? Rational(cost(rng), denom(rng)) : Rational(cost(rng));
            for (std::size_t j = 0; j < m; ++j) {
                e.assignment.emplace_back(d.variables[j], ((bits >> (m - 1 - j)) & 1U) != 0);
            }
            d.costs.push_back(std::move(e));
        }
    }
    return validate_game(d);
}

// Uniformly random nonnegative integer payments.
inline Contract random_contract(std::mt19937_64& rng, const BooleanGame& game, int max_payment = 12) {
    std::vector<Contract::Schedule> schedules(game.num_agents());
    std::uniform_int_distribution<int> pay(0, max_payment);
    for (auto& s : schedules) {
        s.default_payment = pay(rng);
        for (std::uint32_t o = 0; o < game.observation_count(); ++o) {
            if (std::uniform_int_distribution<int>(0, 1)(rng)) {
                s.overrides[o] = pay(rng);
            }
        }
    }
    return Contract::from_schedules(std::move(schedules), game.observable().size());
}

// --- utilities and equilibria from the definitions -----------------------------

inline bool wins(const BooleanGame& g, AgentId i, Valuation v) {
    return eval(g.goal(i), [&](std::size_t j) { return v[j]; });
}

inline Rational max_cost(const BooleanGame& g, AgentId i) {
    Rational best = 0;
    for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
        best = std::max(best, g.cost_table(i).lookup(g.valuation(b)));
    }
    return best;
}

inline std::uint32_t observation_bits(const BooleanGame& g, Valuation v) {
    std::uint32_t o = 0;
    for (std::size_t j : g.observable()) {
        o = (o << 1) | (v[j] ? 1U : 0U);
    }
    return o;
}

// payment(i, observation bits); empty function means the null contract.
using PaymentFn = std::function<Rational(AgentId, std::uint32_t)>;

struct Evaluator {
    const BooleanGame& g;
    PaymentFn pay;
    std::vector<Rational> cstar;
    std::vector<Rational> kstar;

    Evaluator(const BooleanGame& game, PaymentFn p) : g(game), pay(std::move(p)) {
        for (AgentId i = 0; i < g.num_agents(); ++i) {
            cstar.push_back(max_cost(g, i));
            Rational k = 0;
            if (pay) {
                for (std::uint32_t o = 0; o < g.observation_count(); ++o) {
                    k = std::max(k, pay(i, o));
                }
            }
            kstar.push_back(k);
        }
    }

    Rational utility(AgentId i, Valuation v) const {
        const Rational k = pay ? pay(i, observation_bits(g, v)) : Rational(0);
        const Rational c = g.cost_table(i).lookup(v);
        if (wins(g, i, v)) {
            return 1 + cstar[i] + k - c;
        }
        return k - kstar[i] - c;
    }

    // Agent i's unilateral alternatives: profiles differing from v only on
    // variables agent i controls.
    std::vector<Valuation> alternatives(AgentId i, Valuation v) const {
        std::vector<Valuation> out;
        for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
            Valuation w = g.valuation(b);
            if (w == v) {
                continue;
            }
            bool ok = true;
            for (std::size_t j = 0; j < g.num_variables() && ok; ++j) {
                if (w[j] != v[j] && g.owner(j) != i) {
                    ok = false;
                }
            }
            if (ok) {
                out.push_back(w);
            }
        }
        return out;
    }

    bool agent_stable(AgentId i, Valuation v) const {
        const Rational u = utility(i, v);
        for (Valuation w : alternatives(i, v)) {
            if (utility(i, w) > u) {
                return false;
            }
        }
        return true;
    }

    bool is_ne(Valuation v) const {
        for (AgentId i = 0; i < g.num_agents(); ++i) {
            if (!agent_stable(i, v)) {
                return false;
            }
        }
        return true;
    }

    std::vector<Valuation> equilibria() const {
        std::vector<Valuation> out;
        for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
            if (is_ne(g.valuation(b))) {
                out.push_back(g.valuation(b));
            }
        }
        return out;
    }
};

inline PaymentFn payments_of(const Contract& k) {
    const std::size_t width = k.observation_width();
    return [&k, width](AgentId i, std::uint32_t o) {
        return k.payment(i, Observation{o, static_cast<std::uint8_t>(width)});
    };
}

inline bool initial(const BooleanGame& g, Valuation v) {
    // Costless game: only goal status matters.
    Evaluator e(g, {});
    for (AgentId i = 0; i < g.num_agents(); ++i) {
        if (wins(g, i, v)) {
            continue;
        }
        for (Valuation w : e.alternatives(i, v)) {
            if (wins(g, i, w)) {
                return false;
            }
        }
    }
    return true;
}

// --- contract-family oracles ------------------------------------------------------

// Payments from {0, c_i*+1}. Agent i's incentives depend only on kappa_i,
// and lowering payments away from v's observation never helps a deviation,
// so for each agent it suffices to try "paid at v's observation" x "paid
// elsewhere".
inline bool inducible_by_family(const BooleanGame& g, Valuation v) {
    const std::uint32_t ov = observation_bits(g, v);
    for (AgentId i = 0; i < g.num_agents(); ++i) {
        const Rational high = max_cost(g, i) + 1;
        bool found = false;
        for (int at_v = 0; at_v < 2 && !found; ++at_v) {
            for (int rest = 0; rest < 2 && !found; ++rest) {
                Evaluator e(g, [&](AgentId a, std::uint32_t o) -> Rational {
                    if (a != i) {
                        return 0;
                    }
                    return (o == ov ? at_v : rest) ? high : Rational(0);
                });
                found = e.agent_stable(i, v);
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

// Some family contract knocks v out of equilibrium: pay one agent c_i*+1 at
// a single observation (or nothing at all).
inline bool eliminable_by_family(const BooleanGame& g, Valuation v) {
    if (!Evaluator(g, {}).is_ne(v)) {
        return true;
    }
    for (AgentId i = 0; i < g.num_agents(); ++i) {
        const Rational high = max_cost(g, i) + 1;
        for (std::uint32_t target = 0; target < g.observation_count(); ++target) {
            Evaluator e(g, [&](AgentId a, std::uint32_t o) -> Rational {
                return (a == i && o == target) ? high : Rational(0);
            });
            if (!e.is_ne(v)) {
                return true;
            }
        }
    }
    return false;
}

// --- bounded-grid elimination oracle ------------------------------------------------

// Payments k_i(o) = level_i(o) * (c_i*+1) with levels in 0..2^|Phi|. With
// integer costs only the relative order of levels matters, so agent i's grid
// is covered by the weak orders of the observations. Utilities are computed
// in plain int64 arithmetic from the cost tables.
struct GridOracle {
    const BooleanGame& g;
    std::vector<Valuation> xs;
    std::size_t contracts_tried = 0;

    std::int64_t cost(AgentId i, Valuation v) const {
        const Rational& c = g.cost_table(i).lookup(v);
        return static_cast<std::int64_t>(numerator(c));
    }

    // Subsets of X (bitmask) that agent i alone can destabilise under some
    // grid contract.
    std::vector<bool> agent_masks(AgentId i) {
        const std::size_t nobs = g.observation_count();
        std::int64_t cstar = 0;
        for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
            cstar = std::max(cstar, cost(i, g.valuation(b)));
        }
        Evaluator alt(g, {});
        std::vector<std::vector<Valuation>> alternatives;
        for (Valuation v : xs) {
            alternatives.push_back(alt.alternatives(i, v));
        }
        std::vector<bool> reachable(std::size_t{1} << xs.size(), false);
        std::vector<int> level(nobs, 0);
        std::vector<std::vector<std::uint32_t>> blocks;

        auto evaluate = [&] {
            ++contracts_tried;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                for (std::uint32_t o : blocks[b]) {
                    level[o] = static_cast<int>(b);
                }
            }
            const std::int64_t unit = cstar + 1;
            const std::int64_t kstar = static_cast<std::int64_t>(blocks.size() - 1) * unit;
            auto u = [&](Valuation v) {
                const std::int64_t k = level[observation_bits(g, v)] * unit;
                return wins(g, i, v) ? 1 + cstar + k - cost(i, v) : -kstar + k - cost(i, v);
            };
            std::uint32_t mask = 0;
            for (std::size_t x = 0; x < xs.size(); ++x) {
                const std::int64_t base = u(xs[x]);
                for (Valuation w : alternatives[x]) {
                    if (u(w) > base) {
                        mask |= 1U << x;
                        break;
                    }
                }
            }
            reachable[mask] = true;
        };

        // Weak orders, built by inserting observation o into an existing
        // block or as a new block at any position.
        std::function<void(std::uint32_t)> build = [&](std::uint32_t o) {
            if (o == nobs) {
                evaluate();
                return;
            }
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                blocks[b].push_back(o);
                build(o + 1);
                blocks[b].pop_back();
            }
            for (std::size_t pos = 0; pos <= blocks.size(); ++pos) {
                blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(pos), std::vector<std::uint32_t>{o});
                build(o + 1);
                blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(pos));
            }
        };
        build(0);
        return reachable;
    }

    bool eliminable() {
        const std::size_t full = (std::size_t{1} << xs.size()) - 1;
        std::vector<bool> combined(full + 1, false);
        combined[0] = true;
        for (AgentId i = 0; i < g.num_agents(); ++i) {
            auto masks = agent_masks(i);
            std::vector<bool> next(full + 1, false);
            for (std::size_t a = 0; a <= full; ++a) {
                if (!combined[a]) {
                    continue;
                }
                for (std::size_t b = 0; b <= full; ++b) {
                    if (masks[b]) {
                        next[a | b] = true;
                    }
                }
            }
            combined = std::move(next);
        }
        return combined[full];
    }
};

}  // namespace oracle
