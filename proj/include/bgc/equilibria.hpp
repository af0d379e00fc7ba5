#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bgc/game.hpp"

namespace bgc {

struct Deviation {
    AgentId agent = 0;
    Valuation to;

    friend bool operator==(const Deviation&, const Deviation&) = default;
};

// First agent (ascending) with a strictly improving unilateral move, and the
// smallest such target profile.
template <GameView G>
std::optional<Deviation> beneficial_deviation(const G& game, Valuation v) {
    const BooleanGame& base = game.base();
    for (AgentId i = 0; i < base.num_agents(); ++i) {
        const Rational current = game.utility(i, v);
        std::optional<Valuation> found;
        base.for_each_alternative(i, v, [&](Valuation w) {
            if (!found && game.utility(i, w) > current) {
                found = w;
            }
        });
        if (found) {
            return Deviation{i, *found};
        }
    }
    return std::nullopt;
}

// Whether agent i alone has a strictly improving move from v.
template <GameView G>
bool has_beneficial_deviation(const G& game, AgentId i, Valuation v) {
    const Rational current = game.utility(i, v);
    bool found = false;
    game.base().for_each_alternative(i, v, [&](Valuation w) {
        if (!found && game.utility(i, w) > current) {
            found = true;
        }
    });
    return found;
}

template <GameView G>
bool is_nash_equilibrium(const G& game, Valuation v) {
    return !beneficial_deviation(game, v).has_value();
}

// NE(B), sorted canonically.
template <GameView G>
std::vector<Valuation> nash_equilibria(const G& game) {
    const BooleanGame& base = game.base();
    std::vector<Valuation> out;
    for (std::uint32_t bits = 0; bits < base.profile_count(); ++bits) {
        Valuation v = base.valuation(bits);
        if (is_nash_equilibrium(game, v)) {
            out.push_back(v);
        }
    }
    return out;
}

template <GameView G>
std::vector<Valuation> ne_phi(const G& game, const Formula& objective) {
    std::vector<Valuation> out;
    for (Valuation v : nash_equilibria(game)) {
        if (game.base().satisfies(v, objective)) {
            out.push_back(v);
        }
    }
    return out;
}

// Init(B) = NE(B^0).
inline std::vector<Valuation> initial_equilibria(const BooleanGame& game) { return nash_equilibria(costless(game)); }

// Membership in Init(B) without building B^0: no loser can become a winner.
inline bool is_initial_equilibrium(const BooleanGame& game, Valuation v) {
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        if (game.is_winner(i, v)) {
            continue;
        }
        bool escapes = false;
        game.for_each_alternative(i, v, [&](Valuation w) { escapes = escapes || game.is_winner(i, w); });
        if (escapes) {
            return false;
        }
    }
    return true;
}

template <GameView G>
std::vector<Valuation> consistent_ne(const G& game, Observation o) {
    if (o.width != game.base().observable().size()) {
        throw PreconditionError("observation width does not match the observable set");
    }
    std::vector<Valuation> out;
    for (Valuation v : nash_equilibria(game)) {
        if (game.base().consistent(v, o)) {
            out.push_back(v);
        }
    }
    return out;
}

// ENV(B, o, phi).
template <GameView G>
std::vector<Valuation> env(const G& game, Observation o, const Formula& objective) {
    std::vector<Valuation> out;
    for (Valuation v : consistent_ne(game, o)) {
        if (game.base().satisfies(v, objective)) {
            out.push_back(v);
        }
    }
    return out;
}

struct VerificationResult {
    bool answer = false;
    // E: smallest member of ENV. A: smallest consistent NE violating the objective.
    std::optional<Valuation> witness;
    std::vector<Valuation> consistent;  // the consistent set the answer was read from
};

template <GameView G>
VerificationResult decide_e_verifiability(const G& game, Observation o, const Formula& objective) {
    VerificationResult r;
    r.consistent = consistent_ne(game, o);
    for (Valuation v : r.consistent) {
        if (game.base().satisfies(v, objective)) {
            r.answer = true;
            r.witness = v;
            break;
        }
    }
    return r;
}

template <GameView G>
VerificationResult decide_a_verifiability(const G& game, Observation o, const Formula& objective) {
    VerificationResult r;
    r.consistent = consistent_ne(game, o);
    r.answer = true;
    for (Valuation v : r.consistent) {
        if (!game.base().satisfies(v, objective)) {
            r.answer = false;
            r.witness = v;
            break;
        }
    }
    return r;
}

}  // namespace bgc
