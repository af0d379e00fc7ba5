#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bgc/equilibria.hpp"
#include "bgc/game.hpp"

namespace bgc {

enum class DeviationKind { Initial, Inducible, Soft, Hard };

inline const char* to_string(DeviationKind kind) {
    switch (kind) {
        case DeviationKind::Initial: return "initial";
        case DeviationKind::Inducible: return "inducible";
        case DeviationKind::Soft: return "soft";
        case DeviationKind::Hard: return "hard";
    }
    return "?";
}

namespace detail {

inline void require_unilateral(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    if (i >= game.num_agents()) {
        throw PreconditionError("agent index out of range");
    }
    if (!game.is_unilateral(v, w, i)) {
        throw PreconditionError("profiles must differ, and only on variables of agent " + std::to_string(i + 1));
    }
}

inline bool initial_unchecked(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    return !game.is_winner(i, v) || game.is_winner(i, w);
}

// Distinguishable and goal-status-preserving, or indistinguishable and
// strictly preferred under the base utility.
inline bool inducible_unchecked(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    if (!initial_unchecked(game, v, w, i)) {
        return false;
    }
    if (!game.indistinguishable(v, w)) {
        return true;
    }
    return game.utility(i, w) > game.utility(i, v);
}

}  // namespace detail

// v ⇀_i w: a winner at v stays a winner at w.
inline bool is_initial_deviation(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    detail::require_unilateral(game, v, w, i);
    return detail::initial_unchecked(game, v, w, i);
}

// v →_i w: some contract makes w strictly better than v for i.
inline bool is_inducible_deviation(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    detail::require_unilateral(game, v, w, i);
    return detail::inducible_unchecked(game, v, w, i);
}

inline bool is_soft_deviation(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    detail::require_unilateral(game, v, w, i);
    return detail::inducible_unchecked(game, v, w, i) && detail::inducible_unchecked(game, w, v, i);
}

inline bool is_hard_deviation(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    detail::require_unilateral(game, v, w, i);
    return detail::inducible_unchecked(game, v, w, i) && !detail::inducible_unchecked(game, w, v, i);
}

// v ∈ Ind(B,O): v ∈ Init(B), and no indistinguishable status-preserving
// alternative is strictly cheaper.
inline bool is_inducible_equilibrium(const BooleanGame& game, Valuation v) {
    if (!is_initial_equilibrium(game, v)) {
        return false;
    }
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        const bool wins = game.is_winner(i, v);
        const Rational& c = game.cost(i, v);
        bool blocked = false;
        game.for_each_alternative(i, v, [&](Valuation w) {
            if (!blocked && game.indistinguishable(v, w) && game.is_winner(i, w) == wins && game.cost(i, w) < c) {
                blocked = true;
            }
        });
        if (blocked) {
            return false;
        }
    }
    return true;
}

// Some agent has a distinguishable, goal-status-preserving alternative.
inline bool has_distinguishable_status_preserving_move(const BooleanGame& game, Valuation v) {
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        const bool wins = game.is_winner(i, v);
        bool found = false;
        game.for_each_alternative(i, v, [&](Valuation w) {
            found = found || (!game.indistinguishable(v, w) && game.is_winner(i, w) == wins);
        });
        if (found) {
            return true;
        }
    }
    return false;
}

inline bool is_soft_equilibrium(const BooleanGame& game, Valuation v) {
    return is_nash_equilibrium(game, v) && is_initial_equilibrium(game, v) &&
           has_distinguishable_status_preserving_move(game, v);
}

inline bool is_hard_equilibrium(const BooleanGame& game, Valuation v) {
    return is_nash_equilibrium(game, v) &&
           !(is_initial_equilibrium(game, v) && has_distinguishable_status_preserving_move(game, v));
}

// Hard-equilibrium test read off the deviation relations: v ∈ NE(B) and every
// distinguishable alternative w satisfies w ⇉_i v.
inline bool is_hard_equilibrium_by_deviations(const BooleanGame& game, Valuation v) {
    if (!is_nash_equilibrium(game, v)) {
        return false;
    }
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        bool ok = true;
        game.for_each_alternative(i, v, [&](Valuation w) {
            if (ok && !game.indistinguishable(v, w)) {
                ok = detail::inducible_unchecked(game, w, v, i) && !detail::inducible_unchecked(game, v, w, i);
            }
        });
        if (!ok) {
            return false;
        }
    }
    return true;
}

inline std::vector<Valuation> inducible_equilibria(const BooleanGame& game) {
    std::vector<Valuation> out;
    for (std::uint32_t bits = 0; bits < game.profile_count(); ++bits) {
        if (is_inducible_equilibrium(game, game.valuation(bits))) {
            out.push_back(game.valuation(bits));
        }
    }
    return out;
}

inline std::vector<Valuation> soft_equilibria(const BooleanGame& game) {
    std::vector<Valuation> out;
    for (Valuation v : nash_equilibria(game)) {
        if (is_initial_equilibrium(game, v) && has_distinguishable_status_preserving_move(game, v)) {
            out.push_back(v);
        }
    }
    return out;
}

inline std::vector<Valuation> hard_equilibria(const BooleanGame& game) {
    std::vector<Valuation> out;
    for (Valuation v : nash_equilibria(game)) {
        if (!(is_initial_equilibrium(game, v) && has_distinguishable_status_preserving_move(game, v))) {
            out.push_back(v);
        }
    }
    return out;
}

// --- deviation graphs -------------------------------------------------------

struct DeviationEdge {
    Valuation from;
    Valuation to;
    AgentId agent = 0;
    DeviationKind kind = DeviationKind::Inducible;

    friend bool operator==(const DeviationEdge& a, const DeviationEdge& b) {
        return a.from == b.from && a.to == b.to && a.agent == b.agent;
    }
    friend bool operator<(const DeviationEdge& a, const DeviationEdge& b) {
        return std::tie(a.from, a.to, a.agent) < std::tie(b.from, b.to, b.agent);
    }
};

// Directed graph over profiles; edges are inducible deviations labelled by
// agent, with kind Soft or Hard.
class DeviationGraph {
public:
    const std::vector<Valuation>& vertices() const { return vertices_; }
    const std::vector<DeviationEdge>& edges() const { return edges_; }

    void add_vertex(Valuation v) {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
        if (it == vertices_.end() || *it != v) {
            vertices_.insert(it, v);
        }
    }

    void add_edge(const DeviationEdge& e) {
        add_vertex(e.from);
        add_vertex(e.to);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
        if (it == edges_.end() || !(*it == e)) {
            edges_.insert(it, e);
        }
    }

    bool contains(Valuation v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }

    std::vector<DeviationEdge> out_edges(Valuation v) const {
        std::vector<DeviationEdge> out;
        for (const auto& e : edges_) {
            if (e.from == v) {
                out.push_back(e);
            }
        }
        return out;
    }

private:
    std::vector<Valuation> vertices_;
    std::vector<DeviationEdge> edges_;
};

inline DeviationKind classify_inducible_edge(const BooleanGame& game, Valuation v, Valuation w, AgentId i) {
    return detail::inducible_unchecked(game, w, v, i) ? DeviationKind::Soft : DeviationKind::Hard;
}

// Every inducible outgoing deviation from v, agents ascending, targets ascending.
inline std::vector<DeviationEdge> inducible_deviations_from(const BooleanGame& game, Valuation v) {
    std::vector<DeviationEdge> out;
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        game.for_each_alternative(i, v, [&](Valuation w) {
            if (detail::inducible_unchecked(game, v, w, i)) {
                out.push_back({v, w, i, classify_inducible_edge(game, v, w, i)});
            }
        });
    }
    return out;
}

// G(B,O): every profile, every inducible deviation.
inline DeviationGraph potential_deviation_graph(const BooleanGame& game) {
    DeviationGraph g;
    for (std::uint32_t bits = 0; bits < game.profile_count(); ++bits) {
        g.add_vertex(game.valuation(bits));
    }
    for (std::uint32_t bits = 0; bits < game.profile_count(); ++bits) {
        for (const auto& e : inducible_deviations_from(game, game.valuation(bits))) {
            g.add_edge(e);
        }
    }
    return g;
}

struct ObservedPath {
    std::vector<Observation> observations;
    std::vector<Valuation> witness_profiles;
    std::vector<AgentId> agents;  // one per step
};

namespace detail {

// Agent i's edges of D projected onto observations. Each observation pair
// keeps its first witness edge in canonical order.
struct ObservationProjection {
    std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, DeviationEdge>>> successors;
};

inline ObservationProjection project(const BooleanGame& game, const DeviationGraph& graph, AgentId agent,
                                     bool include_indistinguishable) {
    ObservationProjection p;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& e : graph.edges()) {
        if (e.agent != agent) {
            continue;
        }
        std::uint32_t a = game.observe(e.from).bits;
        std::uint32_t b = game.observe(e.to).bits;
        if (a == b && !include_indistinguishable) {
            continue;
        }
        if (seen.emplace(a, b).second) {
            p.successors[a].emplace_back(b, e);
        }
    }
    return p;
}

// Returns the edges of the first cycle found by DFS from ascending observations.
inline std::optional<std::vector<DeviationEdge>> find_projected_cycle(const ObservationProjection& p) {
    enum class Color { White, Grey, Black };
    std::map<std::uint32_t, Color> color;
    std::vector<std::pair<std::uint32_t, DeviationEdge>> stack;  // (node, edge that entered it)
    std::optional<std::vector<DeviationEdge>> cycle;

    std::function<bool(std::uint32_t)> visit = [&](std::uint32_t node) -> bool {
        color[node] = Color::Grey;
        auto it = p.successors.find(node);
        if (it != p.successors.end()) {
            for (const auto& [next, edge] : it->second) {
                auto c = color.count(next) ? color[next] : Color::White;
                if (c == Color::Grey) {
                    std::vector<DeviationEdge> edges;
                    std::size_t start = stack.size();
                    while (start > 0 && stack[start - 1].first != next) {
                        --start;
                    }
                    // stack[k] holds the edge into stack[k].first; the cycle starts after `next`.
                    for (std::size_t k = start; k < stack.size(); ++k) {
                        edges.push_back(stack[k].second);
                    }
                    edges.push_back(edge);
                    cycle = std::move(edges);
                    return true;
                }
                if (c == Color::White) {
                    stack.emplace_back(next, edge);
                    if (visit(next)) {
                        return true;
                    }
                    stack.pop_back();
                }
            }
        }
        color[node] = Color::Black;
        return false;
    };

    for (const auto& [node, succ] : p.successors) {
        auto c = color.count(node) ? color[node] : Color::White;
        if (c == Color::White) {
            stack.clear();
            stack.emplace_back(node, DeviationEdge{});
            if (visit(node)) {
                return cycle;
            }
        }
    }
    return std::nullopt;
}

// Rotates the cycle so that as many consecutive witness edges as possible
// chain into a real deviation path; ties keep the earliest rotation.
inline std::vector<DeviationEdge> best_rotation(const std::vector<DeviationEdge>& cycle) {
    const std::size_t k = cycle.size();
    std::size_t best = 0;
    std::size_t best_score = 0;
    for (std::size_t r = 0; r < k; ++r) {
        std::size_t score = 0;
        for (std::size_t j = 0; j + 1 < k; ++j) {
            if (cycle[(r + j) % k].to == cycle[(r + j + 1) % k].from) {
                ++score;
            }
        }
        if (score > best_score) {
            best = r;
            best_score = score;
        }
    }
    std::vector<DeviationEdge> out;
    for (std::size_t j = 0; j < k; ++j) {
        out.push_back(cycle[(best + j) % k]);
    }
    return out;
}

inline ObservedPath to_observed_path(const BooleanGame& game, const std::vector<DeviationEdge>& edges) {
    ObservedPath path;
    for (const auto& e : edges) {
        path.witness_profiles.push_back(e.from);
        path.observations.push_back(game.observe(e.from));
        path.agents.push_back(e.agent);
    }
    path.witness_profiles.push_back(edges.back().to);
    path.observations.push_back(game.observe(edges.back().to));
    return path;
}

}  // namespace detail

// A single-agent observed deviation cycle in D, if one exists. An edge between
// indistinguishable profiles is itself such a cycle (of length 2).
inline std::optional<ObservedPath> find_single_agent_observed_cycle(const BooleanGame& game,
                                                                    const DeviationGraph& graph) {
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        auto projection = detail::project(game, graph, i, true);
        if (auto cycle = detail::find_projected_cycle(projection)) {
            return detail::to_observed_path(game, detail::best_rotation(*cycle));
        }
    }
    return std::nullopt;
}

// --- DOT export ---------------------------------------------------------------

inline std::string to_dot(const BooleanGame& game, const DeviationGraph& graph,
                          const std::optional<ObservedPath>& highlight = std::nullopt) {
    std::set<std::uint32_t> marked;
    std::set<std::pair<std::uint32_t, std::uint32_t>> marked_edges;
    if (highlight) {
        const auto& w = highlight->witness_profiles;
        for (std::size_t j = 0; j < w.size(); ++j) {
            marked.insert(w[j].bits);
        }
        for (std::size_t j = 0; j + 1 < w.size(); ++j) {
            // The step from w[j] lands on a profile observed like w[j+1].
            for (const auto& e : graph.edges()) {
                if (e.from == w[j] && e.agent == highlight->agents[j] &&
                    game.observe(e.to) == game.observe(w[j + 1]) &&
                    (j + 2 < w.size() || e.to == w[j + 1])) {
                    marked_edges.emplace(e.from.bits, e.to.bits);
                    break;
                }
            }
        }
    }
    std::ostringstream out;
    out << "digraph deviations {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box, fontname=\"monospace\"];\n";
    for (Valuation v : graph.vertices()) {
        out << "  v" << v.bits << " [label=\"" << format_valuation(game, v) << "\\no: "
            << (game.observable().empty() ? std::string("()") : format_observation(game, game.observe(v))) << "\"";
        if (marked.count(v.bits)) {
            out << ", color=red, penwidth=2";
        }
        out << "];\n";
    }
    for (const auto& e : graph.edges()) {
        out << "  v" << e.from.bits << " -> v" << e.to.bits << " [label=\"agent " << e.agent + 1 << "\", style="
            << (e.kind == DeviationKind::Soft ? "dashed" : "solid");
        if (marked_edges.count({e.from.bits, e.to.bits})) {
            out << ", color=red, penwidth=2";
        }
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace bgc
