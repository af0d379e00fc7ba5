#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bgc/contract.hpp"
#include "bgc/deviation.hpp"
#include "bgc/equilibria.hpp"
#include "bgc/linear.hpp"

namespace bgc {

struct SynthesisOptions {
    // Upper bound on linear systems solved (and on deviation-graph choices tried).
    std::size_t max_systems = 1'000'000;
};

struct SynthesisCertificate {
    bool answer = false;
    std::optional<Contract> contract;
    std::optional<Valuation> witness_profile;
    std::vector<Valuation> eliminated;
    bool verified = false;
    // How the contract was obtained: "null-contract", "induce", "backward-induction", "linear-feasibility".
    std::string method;
    // Deviation edges the contract was built to make beneficial.
    std::vector<DeviationEdge> deviation_graph;
    std::size_t systems_solved = 0;
};

// --- brute-force checks -----------------------------------------------------

inline bool verify_induces(const BooleanGame& game, const Contract& contract, Valuation v) {
    return is_nash_equilibrium(induced_game(game, contract), v);
}

inline bool verify_eliminates(const BooleanGame& game, const Contract& contract, const std::vector<Valuation>& xs) {
    InducedGame view(game, contract);
    return std::none_of(xs.begin(), xs.end(), [&](Valuation v) { return is_nash_equilibrium(view, v); });
}

// NE(B^k) is nonempty and every member satisfies the objective.
inline bool verify_all_equilibria_satisfy(const BooleanGame& game, const Contract& contract, const Formula& objective) {
    auto ne = nash_equilibria(induced_game(game, contract));
    return !ne.empty() &&
           std::all_of(ne.begin(), ne.end(), [&](Valuation v) { return game.satisfies(v, objective); });
}

// --- inducing a single profile ----------------------------------------------

// Pays each agent c_i*+1 exactly when v's observation is seen.
inline std::optional<Contract> induce_contract(const BooleanGame& game, Valuation v) {
    if (!is_inducible_equilibrium(game, v)) {
        return std::nullopt;
    }
    std::vector<Contract::Schedule> schedules(game.num_agents());
    const std::uint32_t o = game.observe(v).bits;
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        schedules[i].overrides[o] = game.c_star(i) + 1;
    }
    Contract contract = Contract::from_schedules(std::move(schedules), game.observable().size());
    if (!verify_induces(game, contract, v)) {
        throw VerificationFailure("profile " + format_valuation(game, v) +
                                  " is inducible but the constructed contract does not make it an equilibrium");
    }
    return contract;
}

// --- linearisation of deviations --------------------------------------------

enum class WitnessClass { ConstantTrue, ConstantFalse, Linear };

// Whether the move v -> w by agent i is beneficial under a contract, as a
// function of the payments.
struct DeviationCondition {
    AgentId agent = 0;
    Valuation to;
    WitnessClass cls = WitnessClass::ConstantFalse;
    LinearConstraint constraint;  // meaningful when cls == Linear
};

// Comparisons between profiles with the same goal status are linear in
// payments (the -k* loser offset cancels); across statuses they do not depend
// on payments at all.
inline DeviationCondition deviation_condition(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    DeviationCondition d;
    d.agent = i;
    d.to = w;
    const bool wins_v = game.is_winner(i, v);
    const bool wins_w = game.is_winner(i, w);
    if (wins_v != wins_w) {
        d.cls = wins_w ? WitnessClass::ConstantTrue : WitnessClass::ConstantFalse;
        return d;
    }
    if (game.indistinguishable(v, w)) {
        d.cls = game.cost(i, w) < game.cost(i, v) ? WitnessClass::ConstantTrue : WitnessClass::ConstantFalse;
        return d;
    }
    d.cls = WitnessClass::Linear;
    d.constraint = payment_difference(i, game.observe(w).bits, game.observe(v).bits, game.cost(i, w) - game.cost(i, v),
                                      true);
    return d;
}

// Payment constraints that keep v stable, or nullopt if no contract can.
inline std::optional<std::vector<LinearConstraint>> stability_constraints(const BooleanGame& game, Valuation v) {
    std::vector<LinearConstraint> out;
    bool impossible = false;
    for (AgentId i = 0; i < game.num_agents() && !impossible; ++i) {
        game.for_each_alternative(i, v, [&](Valuation w) {
            if (impossible) {
                return;
            }
            auto d = deviation_condition(game, v, w, i);
            if (d.cls == WitnessClass::ConstantTrue) {
                impossible = true;
            } else if (d.cls == WitnessClass::Linear) {
                // not (x_w - x_v > c(w) - c(v))  <=>  x_v - x_w >= c(v) - c(w)
                out.push_back(payment_difference(i, game.observe(v).bits, game.observe(w).bits,
                                                 game.cost(i, v) - game.cost(i, w), false));
            }
        });
    }
    if (impossible) {
        return std::nullopt;
    }
    return out;
}

// How profile v can be knocked out of equilibrium.
struct EliminationOptions {
    Valuation profile;
    bool always = false;  // some deviation is beneficial under every contract
    std::vector<DeviationCondition> linear;
};

inline EliminationOptions elimination_options(const BooleanGame& game, Valuation v) {
    EliminationOptions out;
    out.profile = v;
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        game.for_each_alternative(i, v, [&](Valuation w) {
            auto d = deviation_condition(game, v, w, i);
            if (d.cls == WitnessClass::ConstantTrue) {
                out.always = true;
            } else if (d.cls == WitnessClass::Linear) {
                out.linear.push_back(std::move(d));
            }
        });
    }
    return out;
}

// --- disjunctive linear search ----------------------------------------------

using PaymentPoint = std::map<PaymentVar, Rational>;

struct Clause {
    std::vector<LinearConstraint> options;
};

namespace detail {

inline bool clause_satisfied(const Clause& clause, const PaymentPoint& point) {
    return std::any_of(clause.options.begin(), clause.options.end(),
                       [&](const LinearConstraint& c) { return c.satisfied_by(point); });
}

// Finds a point satisfying `base` and at least one option of every clause.
// Branches only on the first clause the current point violates, so each
// level commits to one more clause; complete because every solution satisfies
// some option of that clause.
inline std::optional<PaymentPoint> solve_disjunctive(std::vector<LinearConstraint> base,
                                                     const std::vector<Clause>& clauses, std::size_t& systems,
                                                     std::size_t max_systems) {
    std::vector<Clause> pruned;
    for (const auto& clause : clauses) {
        Clause kept;
        for (const auto& option : clause.options) {
            if (std::find(kept.options.begin(), kept.options.end(), option) != kept.options.end()) {
                continue;
            }
            auto trial = base;
            trial.push_back(option);
            if (++systems > max_systems) {
                throw CapExceeded("linear-system budget exhausted", max_systems);
            }
            if (fm_feasible(trial)) {
                kept.options.push_back(option);
            }
        }
        if (kept.options.empty()) {
            return std::nullopt;
        }
        pruned.push_back(std::move(kept));
    }

    std::function<std::optional<PaymentPoint>(std::vector<LinearConstraint>&)> search =
        [&](std::vector<LinearConstraint>& system) -> std::optional<PaymentPoint> {
        if (++systems > max_systems) {
            throw CapExceeded("linear-system budget exhausted", max_systems);
        }
        auto point = fm_feasible(system);
        if (!point) {
            return std::nullopt;
        }
        const Clause* open = nullptr;
        for (const auto& clause : pruned) {
            if (!clause_satisfied(clause, *point)) {
                open = &clause;
                break;
            }
        }
        if (open == nullptr) {
            return point;
        }
        for (const auto& option : open->options) {
            system.push_back(option);
            auto found = search(system);
            system.pop_back();
            if (found) {
                return found;
            }
        }
        return std::nullopt;
    };
    return search(base);
}

inline Contract contract_from_point(const BooleanGame& game, const PaymentPoint& point) {
    std::vector<Contract::Schedule> schedules(game.num_agents());
    for (const auto& [var, value] : point) {
        if (value != 0) {
            schedules[var.agent].overrides[var.observation] = value;
        }
    }
    return Contract::from_schedules(std::move(schedules), game.observable().size());
}

inline std::string format_profiles(const BooleanGame& game, const std::vector<Valuation>& vs) {
    std::string out;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        out += (k ? "; " : "") + format_valuation(game, vs[k]);
    }
    return out;
}

}  // namespace detail

// --- eliminating a set of initial equilibria ----------------------------------

namespace detail {

// Longest path (in edges) from each observation in agent i's projected DAG.
inline std::map<std::uint32_t, std::size_t> longest_paths(const ObservationProjection& p) {
    std::map<std::uint32_t, std::size_t> memo;
    std::function<std::size_t(std::uint32_t)> depth = [&](std::uint32_t o) -> std::size_t {
        if (auto it = memo.find(o); it != memo.end()) {
            return it->second;
        }
        std::size_t best = 0;
        if (auto it = p.successors.find(o); it != p.successors.end()) {
            for (const auto& [next, edge] : it->second) {
                best = std::max(best, 1 + depth(next));
            }
        }
        memo[o] = best;
        return best;
    };
    for (const auto& [o, succ] : p.successors) {
        depth(o);
    }
    return memo;
}

// Backward-induction contract for a deviation graph whose per-agent
// distinguishable projections are acyclic:
//   k_i(o) = (l_i - d_i(o)) * (c_i* + 1)  if some agent-i edge enters o, else 0.
inline Contract backward_induction_contract(const BooleanGame& game, const DeviationGraph& graph) {
    std::vector<Contract::Schedule> schedules(game.num_agents());
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        auto projection = project(game, graph, i, false);
        auto depth = longest_paths(projection);
        std::size_t longest = 0;
        for (const auto& [o, d] : depth) {
            longest = std::max(longest, d);
        }
        std::set<std::uint32_t> entered;
        for (const auto& [o, succ] : projection.successors) {
            for (const auto& [next, edge] : succ) {
                entered.insert(next);
            }
        }
        for (std::uint32_t o : entered) {
            std::size_t d = depth.count(o) ? depth.at(o) : 0;
            Rational pay = Rational(static_cast<long long>(longest - d)) * (game.c_star(i) + 1);
            if (pay != 0) {
                schedules[i].overrides[o] = pay;
            }
        }
    }
    return Contract::from_schedules(std::move(schedules), game.observable().size());
}

// Edge (u,v) by agent i on distinguishable profiles would close a cycle in
// agent i's projection iff obs(u) is reachable from obs(v).
inline bool closes_cycle(const BooleanGame& game, const std::vector<DeviationEdge>& chosen, const DeviationEdge& e) {
    const std::uint32_t from = game.observe(e.from).bits;
    const std::uint32_t to = game.observe(e.to).bits;
    if (from == to) {
        return false;  // indistinguishable edges need no payment difference
    }
    std::vector<std::uint32_t> frontier{to};
    std::set<std::uint32_t> seen{to};
    while (!frontier.empty()) {
        std::uint32_t o = frontier.back();
        frontier.pop_back();
        if (o == from) {
            return true;
        }
        for (const auto& c : chosen) {
            if (c.agent != e.agent) {
                continue;
            }
            std::uint32_t a = game.observe(c.from).bits;
            std::uint32_t b = game.observe(c.to).bits;
            if (a == o && a != b && seen.insert(b).second) {
                frontier.push_back(b);
            }
        }
    }
    return false;
}

}  // namespace detail

// Searches for a contract under which no member of X is a Nash equilibrium.
// First tries a deviation graph with one outgoing inducible edge per member
// and no single-agent cycle among distinguishable observations, paying by
// backward induction; if none exists, solves the exact linear problem (one
// beneficial deviation per member) by Fourier-Motzkin elimination. Every
// returned contract has been re-checked by brute force.
inline SynthesisCertificate decide_eliminability(const BooleanGame& game, std::vector<Valuation> xs,
                                                 const SynthesisOptions& options = {}) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.empty()) {
        throw PreconditionError("the set to eliminate must be nonempty");
    }
    std::vector<Valuation> outside;
    for (Valuation v : xs) {
        if (!is_initial_equilibrium(game, v)) {
            outside.push_back(v);
        }
    }
    if (!outside.empty()) {
        throw PreconditionError("not initial equilibria: " + detail::format_profiles(game, outside));
    }

    SynthesisCertificate cert;
    cert.eliminated = xs;

    // Route 1: single-edge deviation graphs, smallest choices first.
    std::vector<std::vector<DeviationEdge>> choices;
    for (Valuation v : xs) {
        choices.push_back(inducible_deviations_from(game, v));
    }
    const bool coverable = std::none_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); });
    if (!coverable) {
        return cert;  // some member has no inducible deviation at all: it is hard
    }
    std::vector<DeviationEdge> chosen;
    std::size_t tried = 0;
    bool budget_hit = false;
    std::function<bool(std::size_t)> pick = [&](std::size_t k) -> bool {
        if (k == xs.size()) {
            return true;
        }
        for (const auto& e : choices[k]) {
            if (++tried > options.max_systems) {
                budget_hit = true;
                return false;
            }
            if (detail::closes_cycle(game, chosen, e)) {
                continue;
            }
            chosen.push_back(e);
            if (pick(k + 1)) {
                return true;
            }
            chosen.pop_back();
            if (budget_hit) {
                return false;
            }
        }
        return false;
    };
    if (pick(0)) {
        DeviationGraph graph;
        for (const auto& e : chosen) {
            graph.add_edge(e);
        }
        Contract contract = detail::backward_induction_contract(game, graph);
        for (const auto& e : chosen) {
            if (!game.indistinguishable(e.from, e.to)) {
                const Rational gap =
                    contract.payment(e.agent, game.observe(e.to)) - contract.payment(e.agent, game.observe(e.from));
                if (gap < game.c_star(e.agent) + 1) {
                    throw VerificationFailure("backward-induction contract pays less than c*+1 extra along an edge");
                }
            }
        }
        if (!verify_eliminates(game, contract, xs)) {
            throw VerificationFailure("backward-induction contract fails to eliminate " +
                                      detail::format_profiles(game, xs));
        }
        cert.answer = true;
        cert.verified = true;
        cert.method = "backward-induction";
        cert.contract = std::move(contract);
        cert.deviation_graph = chosen;
        cert.systems_solved = tried;
        return cert;
    }

    // Route 2: exact linear feasibility.
    std::vector<Clause> clauses;
    for (Valuation v : xs) {
        auto opts = elimination_options(game, v);
        if (opts.always) {
            continue;
        }
        Clause clause;
        for (const auto& d : opts.linear) {
            clause.options.push_back(d.constraint);
        }
        if (clause.options.empty()) {
            return cert;
        }
        clauses.push_back(std::move(clause));
    }
    std::size_t systems = 0;
    auto point = detail::solve_disjunctive({}, clauses, systems, options.max_systems);
    cert.systems_solved = tried + systems;
    if (!point) {
        return cert;
    }
    Contract contract = detail::contract_from_point(game, *point);
    if (!verify_eliminates(game, contract, xs)) {
        throw VerificationFailure("linear-feasibility contract fails to eliminate " + detail::format_profiles(game, xs));
    }
    cert.answer = true;
    cert.verified = true;
    cert.method = "linear-feasibility";
    cert.contract = std::move(contract);
    return cert;
}

inline std::optional<Contract> eliminate_contract(const BooleanGame& game, const std::vector<Valuation>& xs,
                                                  const SynthesisOptions& options = {}) {
    return decide_eliminability(game, xs, options).contract;
}

inline SynthesisCertificate decide_inducibility(const BooleanGame& game, Valuation v) {
    SynthesisCertificate cert;
    cert.witness_profile = v;
    if (auto contract = induce_contract(game, v)) {
        cert.answer = true;
        cert.verified = true;
        cert.method = "induce";
        cert.contract = std::move(contract);
    }
    return cert;
}

// --- contractibility ------------------------------------------------------------

// Some contract makes a profile satisfying the objective an equilibrium.
inline SynthesisCertificate decide_e_contractibility(const BooleanGame& game, const Formula& objective) {
    SynthesisCertificate cert;
    for (Valuation v : inducible_equilibria(game)) {
        if (!game.satisfies(v, objective)) {
            continue;
        }
        Contract contract = *induce_contract(game, v);
        InducedGame view(game, contract);
        if (env(view, game.observe(v), objective).empty()) {
            throw VerificationFailure("E-contractibility witness " + format_valuation(game, v) + " failed re-check");
        }
        cert.answer = true;
        cert.verified = true;
        cert.method = "induce";
        cert.witness_profile = v;
        cert.contract = std::move(contract);
        return cert;
    }
    return cert;
}

// Some contract leaves a nonempty equilibrium set, all of whose members
// satisfy the objective.
inline SynthesisCertificate decide_a_contractibility(const BooleanGame& game, const Formula& objective,
                                                     const SynthesisOptions& options = {}) {
    SynthesisCertificate cert;

    Contract zero = null_contract(game);
    if (verify_all_equilibria_satisfy(game, zero, objective)) {
        cert.answer = true;
        cert.verified = true;
        cert.method = "null-contract";
        cert.witness_profile = nash_equilibria(game).front();
        cert.contract = std::move(zero);
        return cert;
    }

    std::vector<Valuation> good;
    for (Valuation v : inducible_equilibria(game)) {
        if (game.satisfies(v, objective)) {
            good.push_back(v);
        }
    }
    if (good.empty()) {
        return cert;
    }

    // Only initial equilibria can survive any contract; those violating the
    // objective must each be given a beneficial deviation.
    std::vector<Clause> clauses;
    std::vector<Valuation> bad;
    for (Valuation v : initial_equilibria(game)) {
        if (game.satisfies(v, objective)) {
            continue;
        }
        bad.push_back(v);
        auto opts = elimination_options(game, v);
        if (opts.always) {
            continue;
        }
        Clause clause;
        for (const auto& d : opts.linear) {
            clause.options.push_back(d.constraint);
        }
        if (clause.options.empty()) {
            return cert;  // an equilibrium under every contract that violates the objective
        }
        clauses.push_back(std::move(clause));
    }

    std::size_t systems = 0;
    for (Valuation candidate : good) {
        auto stability = stability_constraints(game, candidate);
        if (!stability) {
            continue;
        }
        auto point = detail::solve_disjunctive(*stability, clauses, systems, options.max_systems);
        if (!point) {
            continue;
        }
        Contract contract = detail::contract_from_point(game, *point);
        if (!verify_induces(game, contract, candidate) || !verify_all_equilibria_satisfy(game, contract, objective)) {
            throw VerificationFailure("A-contractibility contract for " + format_valuation(game, candidate) +
                                      " failed re-check");
        }
        cert.answer = true;
        cert.verified = true;
        cert.method = "linear-feasibility";
        cert.witness_profile = candidate;
        cert.eliminated = bad;
        cert.contract = std::move(contract);
        cert.systems_solved = systems;
        return cert;
    }
    cert.systems_solved = systems;
    return cert;
}

}  // namespace bgc
