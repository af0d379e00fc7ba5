#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bgc/contract.hpp"
#include "bgc/deviation.hpp"
#include "bgc/equilibria.hpp"
#include "bgc/synthesis.hpp"

namespace bgc {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string bits_text(Valuation v) { return format_bits(v.bits, v.width); }
inline std::string bits_text(Observation o) { return format_bits(o.bits, o.width); }

inline Json profile_list(const std::vector<Valuation>& vs) {
    Json out = Json::array();
    for (Valuation v : vs) {
        out.push_back(bits_text(v));
    }
    return out;
}

inline bool contains(const std::vector<Valuation>& sorted, Valuation v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace detail

inline Json contract_json(const BooleanGame& game, const Contract& contract) {
    Json out = Json::object();
    auto names = observable_names(game);
    for (AgentId i = 0; i < contract.num_agents(); ++i) {
        const auto& s = contract.schedule(i);
        Json overrides = Json::array();
        for (const auto& [bits, p] : s.overrides) {
            overrides.push_back({{"observation", format_assignment(names, bits)}, {"payment", to_string(p)}});
        }
        out[std::to_string(i + 1)] = {{"default", to_string(s.default_payment)}, {"overrides", overrides}};
    }
    return out;
}

// One row per profile, in the canonical (lexicographic) order. With a
// contract, "ne" refers to the induced game; the other sets are properties of
// the base game.
inline Json classify_json(const BooleanGame& game, const std::optional<Formula>& objective = std::nullopt,
                          const Contract* contract = nullptr) {
    const auto ne = contract ? nash_equilibria(InducedGame(game, *contract)) : nash_equilibria(game);
    const auto init = initial_equilibria(game);
    const auto ind = inducible_equilibria(game);
    const auto soft = soft_equilibria(game);
    const auto hard = hard_equilibria(game);

    Json rows = Json::array();
    for (std::uint32_t bits = 0; bits < game.profile_count(); ++bits) {
        Valuation v = game.valuation(bits);
        Json row;
        row["valuation"] = detail::bits_text(v);
        row["observation"] = detail::bits_text(game.observe(v));
        row["ne"] = detail::contains(ne, v);
        row["init"] = detail::contains(init, v);
        row["ind"] = detail::contains(ind, v);
        row["hard"] = detail::contains(hard, v);
        row["soft"] = detail::contains(soft, v);
        if (objective) {
            row["satisfies_objective"] = game.satisfies(v, *objective);
        }
        Json winners = Json::array();
        for (AgentId i = 0; i < game.num_agents(); ++i) {
            if (game.is_winner(i, v)) {
                winners.push_back(i + 1);
            }
        }
        row["winners"] = winners;
        rows.push_back(row);
    }

    Json out;
    out["problem"] = "classify";
    out["variables"] = game.variables();
    out["observable"] = observable_names(game);
    if (objective) {
        out["objective"] = print_formula(*objective);
    }
    if (contract) {
        out["contract"] = contract_json(game, *contract);
    }
    out["rows"] = rows;
    out["ne"] = detail::profile_list(ne);
    out["init"] = detail::profile_list(init);
    out["ind"] = detail::profile_list(ind);
    out["hard"] = detail::profile_list(hard);
    out["soft"] = detail::profile_list(soft);
    return out;
}

inline Json verification_json(const BooleanGame& game, char mode, Observation o, const Formula& objective,
                              const VerificationResult& r) {
    Json out;
    out["problem"] = mode == 'e' ? "e-nash-verifiability" : "a-nash-verifiability";
    out["observation"] = format_observation(game, o);
    out["objective"] = print_formula(objective);
    out["answer"] = r.answer;
    out["witness"] = r.witness ? Json(format_valuation(game, *r.witness)) : Json(nullptr);
    out["equilibria"] = detail::profile_list(r.consistent);
    return out;
}

inline Json certificate_json(const BooleanGame& game, const std::string& problem, const SynthesisCertificate& c) {
    Json out;
    out["problem"] = problem;
    out["answer"] = c.answer;
    out["contract"] = c.contract ? contract_json(game, *c.contract) : Json(nullptr);
    out["witness"] = c.witness_profile ? Json(format_valuation(game, *c.witness_profile)) : Json(nullptr);
    Json eliminated = Json::array();
    for (Valuation v : c.eliminated) {
        eliminated.push_back(format_valuation(game, v));
    }
    out["eliminated"] = eliminated;
    out["verified"] = c.verified;
    out["method"] = c.method.empty() ? Json(nullptr) : Json(c.method);
    if (!c.deviation_graph.empty()) {
        Json edges = Json::array();
        for (const auto& e : c.deviation_graph) {
            edges.push_back({{"from", format_valuation(game, e.from)},
                             {"to", format_valuation(game, e.to)},
                             {"agent", e.agent + 1}});
        }
        out["deviation_graph"] = edges;
    }
    return out;
}

inline Json graph_json(const BooleanGame& game, const DeviationGraph& graph, const std::optional<ObservedPath>& cycle) {
    Json out;
    out["problem"] = "graph";
    Json vertices = Json::array();
    for (Valuation v : graph.vertices()) {
        vertices.push_back({{"valuation", detail::bits_text(v)}, {"observation", detail::bits_text(game.observe(v))}});
    }
    out["vertices"] = vertices;
    Json edges = Json::array();
    for (const auto& e : graph.edges()) {
        edges.push_back({{"from", detail::bits_text(e.from)},
                         {"to", detail::bits_text(e.to)},
                         {"agent", e.agent + 1},
                         {"kind", to_string(e.kind)}});
    }
    out["edges"] = edges;
    if (cycle) {
        Json obs = Json::array();
        for (Observation o : cycle->observations) {
            obs.push_back(detail::bits_text(o));
        }
        Json agents = Json::array();
        for (AgentId a : cycle->agents) {
            agents.push_back(a + 1);
        }
        out["observed_cycle"] = {{"observations", obs},
                                 {"profiles", detail::profile_list(cycle->witness_profiles)},
                                 {"agents", agents}};
    } else {
        out["observed_cycle"] = nullptr;
    }
    return out;
}

// --- text rendering (from the JSON form only) ---------------------------------

inline std::string render_classify_text(const Json& j) {
    const bool with_objective = j.contains("objective");
    std::vector<std::string> header{"valuation", "observation", "ne", "init", "ind", "hard", "soft"};
    if (with_objective) {
        header.push_back("objective");
    }
    header.push_back("winners");

    std::vector<std::vector<std::string>> table{header};
    for (const auto& row : j["rows"]) {
        std::vector<std::string> cells{row["valuation"].get<std::string>(), row["observation"].get<std::string>()};
        for (const char* key : {"ne", "init", "ind", "hard", "soft"}) {
            cells.push_back(detail::yes_no(row[key].get<bool>()));
        }
        if (with_objective) {
            cells.push_back(detail::yes_no(row["satisfies_objective"].get<bool>()));
        }
        std::string winners;
        for (const auto& w : row["winners"]) {
            winners += (winners.empty() ? "" : ",") + std::to_string(w.get<int>());
        }
        cells.push_back(winners.empty() ? "-" : winners);
        table.push_back(cells);
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& r : table) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            width[c] = std::max(width[c], r[c].size());
        }
    }
    std::ostringstream out;
    for (const auto& r : table) {
        std::string line;
        for (std::size_t c = 0; c < r.size(); ++c) {
            std::string cell = r[c];
            if (c + 1 < r.size()) {
                cell.resize(width[c] + 2, ' ');
            }
            line += cell;
        }
        out << line << '\n';
    }
    auto list = [&](const char* label, const Json& xs) {
        out << label << ':';
        for (const auto& x : xs) {
            out << ' ' << x.get<std::string>();
        }
        out << '\n';
    };
    out << '\n';
    list("NE", j["ne"]);
    list("Init", j["init"]);
    list("Ind", j["ind"]);
    list("Hard", j["hard"]);
    list("Soft", j["soft"]);
    return out.str();
}

inline std::string render_contract_text(const Json& contract) {
    std::ostringstream out;
    for (const auto& [agent, schedule] : contract.items()) {
        out << "  agent " << agent << ": default " << schedule["default"].get<std::string>();
        for (const auto& o : schedule["overrides"]) {
            out << "; " << o["observation"].get<std::string>() << " -> " << o["payment"].get<std::string>();
        }
        out << '\n';
    }
    return out.str();
}

inline std::string render_text(const Json& j) {
    const std::string problem = j.value("problem", "");
    if (problem == "classify") {
        return render_classify_text(j);
    }
    std::ostringstream out;
    if (j.contains("answer")) {
        out << "answer: " << detail::yes_no(j["answer"].get<bool>()) << '\n';
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "answer" || key == "problem" || value.is_null()) {
            continue;
        }
        if (key == "contract") {
            out << "contract:\n" << render_contract_text(value);
        } else if (value.is_array()) {
            out << key << ':';
            for (const auto& x : value) {
                if (x.is_object() && x.contains("from")) {
                    out << "\n  " << x["from"].get<std::string>() << " -> " << x["to"].get<std::string>() << " (agent "
                        << x["agent"].dump() << ')';
                } else {
                    out << ' ' << (x.is_string() ? x.get<std::string>() : x.dump());
                }
            }
            out << '\n';
        } else if (value.is_string()) {
            out << key << ": " << value.get<std::string>() << '\n';
        } else if (value.is_boolean()) {
            out << key << ": " << detail::yes_no(value.get<bool>()) << '\n';
        } else {
            out << key << ": " << value.dump() << '\n';
        }
    }
    return out.str();
}

}  // namespace bgc
