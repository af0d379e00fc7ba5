#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bgc/formula.hpp"
#include "bgc/game.hpp"
#include "bgc/synthesis.hpp"

namespace bgc {

// Exists X1. Forall X2. Exists X3. matrix
struct Qsat3Instance {
    std::vector<std::string> variables;  // X, in declaration order
    std::vector<std::string> exists1;
    std::vector<std::string> forall;
    std::vector<std::string> exists2;
    Formula matrix;  // variable indices refer to `variables`
};

inline constexpr std::size_t kQsatMaxVariables = 20;
inline constexpr const char* kQsatP = "__p";
inline constexpr const char* kQsatQ = "__q";

// Builds an instance from the three blocks; variables are listed block by block.
inline Qsat3Instance make_qsat3(std::vector<std::string> exists1, std::vector<std::string> forall,
                                std::vector<std::string> exists2, std::string_view matrix) {
    Qsat3Instance q;
    q.exists1 = std::move(exists1);
    q.forall = std::move(forall);
    q.exists2 = std::move(exists2);
    for (const auto* block : {&q.exists1, &q.forall, &q.exists2}) {
        for (const auto& name : *block) {
            if (!is_identifier(name) || is_reserved_word(name)) {
                throw ValidationError("invalid variable name '" + name + "'");
            }
            if (name == kQsatP || name == kQsatQ) {
                throw ValidationError("variable name '" + name + "' is reserved by the reduction");
            }
            if (std::find(q.variables.begin(), q.variables.end(), name) != q.variables.end()) {
                throw ValidationError("variable '" + name + "' appears in more than one block");
            }
            q.variables.push_back(name);
        }
    }
    q.matrix = parse_formula(matrix, q.variables);
    return q;
}

namespace detail {

inline void require_qsat_blocks(const Qsat3Instance& q) {
    if (q.exists1.empty() || q.forall.empty() || q.exists2.empty()) {
        throw ValidationError("every quantifier block must be nonempty");
    }
}

inline std::vector<std::size_t> block_indices(const Qsat3Instance& q, const std::vector<std::string>& block) {
    std::vector<std::size_t> out;
    for (const auto& name : block) {
        auto it = std::find(q.variables.begin(), q.variables.end(), name);
        if (it == q.variables.end()) {
            throw ValidationError("block variable '" + name + "' is not declared");
        }
        out.push_back(static_cast<std::size_t>(it - q.variables.begin()));
    }
    return out;
}

}  // namespace detail

// Three-agent game: agent 1 (owning X1, goal T) is the one the principal
// pays; agents 2 and 3 play matching pennies on p, q unless the matrix
// settles it, and agent 3 pays 1 for every profile falsifying the matrix.
// Observable set X1, objective the matrix.
inline std::pair<BooleanGame, Formula> reduce_qsat3(const Qsat3Instance& q) {
    detail::require_qsat_blocks(q);
    GameDraft d;
    d.agents = 3;
    d.variables = q.variables;
    d.variables.push_back(kQsatP);
    d.variables.push_back(kQsatQ);

    auto with = [](std::vector<std::string> names, const char* extra) {
        if (extra) {
            names.push_back(extra);
        }
        return names;
    };
    d.control.push_back({1, q.exists1, 0});
    d.control.push_back({2, with(q.forall, kQsatP), 0});
    d.control.push_back({3, with(q.exists2, kQsatQ), 0});

    const std::string phi = print_formula(q.matrix);
    const std::string pq = std::string(kQsatP) + " <-> " + kQsatQ;
    d.goals.push_back({1, "T", 0});
    d.goals.push_back({2, "~(" + phi + ") | (" + pq + ")", 0});
    d.goals.push_back({3, "(" + phi + ") | ~(" + pq + ")", 0});
    d.observable = q.exists1;

    const std::size_t m = d.variables.size();
    if (m > kMaxVariables) {
        throw CapExceeded("too many variables", kMaxVariables);
    }
    const std::size_t x = q.variables.size();
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << m); ++bits) {
        // The matrix ignores p and q, the last two bits.
        const std::uint32_t xbits = bits >> 2;
        bool sat = eval(q.matrix, [&](std::size_t j) { return (xbits >> (x - 1 - j)) & 1U; });
        if (sat) {
            continue;
        }
        GameDraft::CostEntry e;
        e.agent = 3;
        e.cost = 1;
        for (std::size_t j = 0; j < m; ++j) {
            e.assignment.emplace_back(d.variables[j], ((bits >> (m - 1 - j)) & 1U) != 0);
        }
        d.costs.push_back(std::move(e));
    }
    BooleanGame game = validate_game(d);
    Formula objective = parse_formula(phi, game.variables());
    return {std::move(game), std::move(objective)};
}

// Truth of the quantified formula by nested enumeration.
inline bool brute_force_qsat3(const Qsat3Instance& q) {
    if (q.variables.size() > kQsatMaxVariables) {
        throw CapExceeded("QSAT3 enumeration", kQsatMaxVariables);
    }
    const auto b1 = detail::block_indices(q, q.exists1);
    const auto b2 = detail::block_indices(q, q.forall);
    const auto b3 = detail::block_indices(q, q.exists2);
    std::vector<bool> value(q.variables.size(), false);
    auto assign = [&](const std::vector<std::size_t>& block, std::uint32_t bits) {
        for (std::size_t k = 0; k < block.size(); ++k) {
            value[block[k]] = ((bits >> k) & 1U) != 0;
        }
    };
    auto holds = [&] { return eval(q.matrix, [&](std::size_t j) { return value[j]; }); };
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << b1.size()); ++a) {
        assign(b1, a);
        bool all = true;
        for (std::uint32_t b = 0; all && b < (std::uint32_t{1} << b2.size()); ++b) {
            assign(b2, b);
            bool some = false;
            for (std::uint32_t c = 0; !some && c < (std::uint32_t{1} << b3.size()); ++c) {
                assign(b3, c);
                some = holds();
            }
            all = some;
        }
        if (all) {
            return true;
        }
    }
    return false;
}

struct Qsat3Check {
    bool oracle = false;
    bool decider = false;
    SynthesisCertificate certificate;

    bool agree() const { return oracle == decider; }
};

inline Qsat3Check cross_check_details(const Qsat3Instance& q, const SynthesisOptions& options = {}) {
    Qsat3Check r;
    r.oracle = brute_force_qsat3(q);
    auto [game, objective] = reduce_qsat3(q);
    r.certificate = decide_a_contractibility(game, objective, options);
    r.decider = r.certificate.answer;
    return r;
}

inline bool cross_check(const Qsat3Instance& q, const SynthesisOptions& options = {}) {
    return cross_check_details(q, options).agree();
}

// Random instance over x1..xn (3 <= n <= max_vars), each block nonempty. The
// matrix is three terms of two or three literals, joined as a CNF or a DNF.
template <class Rng>
Qsat3Instance random_qsat3(Rng& rng, std::size_t max_vars = 6) {
    std::uniform_int_distribution<std::size_t> size_dist(3, std::max<std::size_t>(3, max_vars));
    const std::size_t n = size_dist(rng);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < n; ++j) {
        names.push_back("x" + std::to_string(j + 1));
    }
    // Cut points so every block gets at least one variable.
    std::uniform_int_distribution<std::size_t> cut1(1, n - 2);
    const std::size_t a = cut1(rng);
    std::uniform_int_distribution<std::size_t> cut2(a + 1, n - 1);
    const std::size_t b = cut2(rng);

    Qsat3Instance q;
    q.variables = names;
    q.exists1.assign(names.begin(), names.begin() + a);
    q.forall.assign(names.begin() + a, names.begin() + b);
    q.exists2.assign(names.begin() + b, names.end());

    std::uniform_int_distribution<std::size_t> var_dist(0, n - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> width(2, 3);
    const bool cnf = coin(rng) == 1;
    std::optional<Formula> matrix;
    for (int t = 0; t < 3; ++t) {
        std::optional<Formula> term;
        const int w = width(rng);
        for (int k = 0; k < w; ++k) {
            const std::size_t j = var_dist(rng);
            Formula lit = Formula::variable({j, names[j]});
            if (coin(rng)) {
                lit = Formula::negation(lit);
            }
            if (!term) {
                term = lit;
            } else {
                term = cnf ? Formula::disjunction(*term, lit) : Formula::conjunction(*term, lit);
            }
        }
        if (!matrix) {
            matrix = *term;
        } else {
            matrix = cnf ? Formula::conjunction(*matrix, *term) : Formula::disjunction(*matrix, *term);
        }
    }
    q.matrix = *matrix;
    return q;
}

}  // namespace bgc
