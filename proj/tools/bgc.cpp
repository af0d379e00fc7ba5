// bgc: command-line front end for Boolean games with costs under a partially
// observing principal.
//
// Exit codes: 0 yes / success, 1 no, 2 input error, 3 cap exceeded,
// 4 internal verification failure.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bgc/bgc.hpp"

namespace {

using namespace bgc;

enum ExitCode { kYes = 0, kNo = 1, kInputError = 2, kCapExceeded = 3, kInternalError = 4 };

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string format;
    std::uint64_t seed = 0;
    std::size_t max_systems = 1'000'000;
    std::string out;
};

struct GameArgs {
    std::string game_path;
    std::string objective;
    std::string objective_file;
    std::string contract_path;
    std::vector<std::string> pays;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    out << text;
}

BooleanGame load_game(const std::string& path) {
    try {
        return parse_game(read_file(path));
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw InputError(path + ": " + e.what());
    }
}

// First non-comment line of an objective file, or the inline text.
std::optional<Formula> load_objective(const BooleanGame& game, const GameArgs& args, bool required) {
    std::string text = args.objective;
    if (!args.objective_file.empty()) {
        std::istringstream in(read_file(args.objective_file));
        std::string line;
        text.clear();
        while (std::getline(in, line)) {
            auto body = detail::strip_comment(line);
            if (!body.empty()) {
                text = std::string(body);
                break;
            }
        }
    }
    if (text.empty()) {
        if (required) {
            throw InputError("an objective is required (--objective or --objective-file)");
        }
        return std::nullopt;
    }
    try {
        return parse_formula(text, game.variables());
    } catch (const ParseError& e) {
        throw InputError(std::string("objective: ") + e.what());
    }
}

std::optional<Contract> load_contract(const BooleanGame& game, const GameArgs& args) {
    if (args.contract_path.empty() && args.pays.empty()) {
        return std::nullopt;
    }
    try {
        ContractDraft draft;
        if (!args.contract_path.empty()) {
            draft = parse_contract_draft(read_file(args.contract_path));
        }
        for (const auto& fragment : args.pays) {
            add_payment_fragment(draft, fragment);
        }
        return validate_contract(game, draft);
    } catch (const ParseError& e) {
        throw InputError(std::string("contract: ") + e.what());
    } catch (const ValidationError& e) {
        throw InputError(std::string("contract: ") + e.what());
    }
}

template <class Fn>
auto as_input(const std::string& what, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw InputError(what + ": " + e.what());
    } catch (const ValidationError& e) {
        throw InputError(what + ": " + e.what());
    }
}

std::string resolve_format(const Globals& g, const std::string& fallback) {
    std::string f = g.format.empty() ? fallback : g.format;
    if (f != "json" && f != "text" && f != "dot") {
        throw InputError("unknown format '" + f + "'");
    }
    return f;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

std::string render(const Json& j, const std::string& format) {
    if (format == "json") {
        return j.dump(2) + "\n";
    }
    if (format == "dot") {
        throw InputError("dot output is only available for the graph command");
    }
    return render_text(j);
}

// Writes the contract out, reads it back, and re-runs the property check on
// the re-loaded copy.
template <class Check>
Contract self_check(const BooleanGame& game, const Contract& contract, Check&& check) {
    const std::string text = write_contract(game, contract);
    Contract reloaded = validate_contract(game, parse_contract_draft(text));
    for (AgentId i = 0; i < game.num_agents(); ++i) {
        for (std::uint32_t o = 0; o < game.observation_count(); ++o) {
            Observation obs{o, static_cast<std::uint8_t>(game.observable().size())};
            if (reloaded.payment(i, obs) != contract.payment(i, obs)) {
                throw VerificationFailure("contract file does not round-trip");
            }
        }
    }
    if (!check(reloaded)) {
        throw VerificationFailure("re-loaded contract fails its brute-force check");
    }
    return reloaded;
}

int finish_certificate(const BooleanGame& game, const std::string& problem, const SynthesisCertificate& cert,
                       const Globals& g) {
    const std::string format = resolve_format(g, "text");
    std::cout << render(certificate_json(game, problem, cert), format);
    if (cert.answer && cert.contract && !g.out.empty()) {
        write_file(g.out, write_contract(game, *cert.contract));
    }
    return cert.answer ? kYes : kNo;
}

// --- commands -------------------------------------------------------------------

int cmd_classify(const GameArgs& args, const Globals& g) {
    BooleanGame game = load_game(args.game_path);
    auto objective = load_objective(game, args, false);
    auto contract = load_contract(game, args);
    Json j = classify_json(game, objective, contract ? &*contract : nullptr);
    emit(render(j, resolve_format(g, "text")), g.out);
    return kYes;
}

int cmd_verify(const GameArgs& args, const std::string& mode, const std::string& obs_text, const Globals& g) {
    BooleanGame game = load_game(args.game_path);
    Formula objective = *load_objective(game, args, true);
    Observation o = as_input("observation", [&] { return parse_observation(game, obs_text); });
    auto contract = load_contract(game, args);
    auto run = [&](const auto& view) {
        return mode == "e" ? decide_e_verifiability(view, o, objective) : decide_a_verifiability(view, o, objective);
    };
    VerificationResult r = contract ? run(InducedGame(game, *contract)) : run(game);
    emit(render(verification_json(game, mode[0], o, objective, r), resolve_format(g, "text")), g.out);
    return r.answer ? kYes : kNo;
}

int cmd_contract(const GameArgs& args, const std::string& mode, const Globals& g) {
    BooleanGame game = load_game(args.game_path);
    Formula objective = *load_objective(game, args, true);
    SynthesisCertificate cert;
    if (mode == "e") {
        cert = decide_e_contractibility(game, objective);
        if (cert.answer) {
            const Observation o = game.observe(*cert.witness_profile);
            self_check(game, *cert.contract,
                       [&](const Contract& k) { return !env(InducedGame(game, k), o, objective).empty(); });
        }
    } else {
        cert = decide_a_contractibility(game, objective, SynthesisOptions{g.max_systems});
        if (cert.answer) {
            self_check(game, *cert.contract,
                       [&](const Contract& k) { return verify_all_equilibria_satisfy(game, k, objective); });
        }
    }
    return finish_certificate(game, mode == "e" ? "e-nash-contractibility" : "a-nash-contractibility", cert, g);
}

int cmd_induce(const GameArgs& args, const std::string& profile, const Globals& g) {
    BooleanGame game = load_game(args.game_path);
    Valuation v = as_input("profile", [&] { return parse_valuation(game, profile); });
    SynthesisCertificate cert = decide_inducibility(game, v);
    if (cert.answer) {
        self_check(game, *cert.contract, [&](const Contract& k) { return verify_induces(game, k, v); });
    }
    return finish_certificate(game, "induce", cert, g);
}

int cmd_eliminate(const GameArgs& args, const std::vector<std::string>& profiles, const Globals& g) {
    BooleanGame game = load_game(args.game_path);
    std::vector<Valuation> xs;
    for (const auto& p : profiles) {
        xs.push_back(as_input("profile", [&] { return parse_valuation(game, p); }));
    }
    SynthesisCertificate cert;
    try {
        cert = decide_eliminability(game, xs, SynthesisOptions{g.max_systems});
    } catch (const PreconditionError& e) {
        throw InputError(e.what());
    }
    if (cert.answer) {
        self_check(game, *cert.contract, [&](const Contract& k) { return verify_eliminates(game, k, cert.eliminated); });
    }
    return finish_certificate(game, "eliminate", cert, g);
}

int cmd_graph(const GameArgs& args, bool highlight, const Globals& g) {
    BooleanGame game = load_game(args.game_path);
    DeviationGraph graph = potential_deviation_graph(game);
    auto cycle = find_single_agent_observed_cycle(game, graph);
    const std::string format = resolve_format(g, "dot");
    std::string text;
    if (format == "dot") {
        text = to_dot(game, graph, highlight ? cycle : std::nullopt);
    } else {
        text = render(graph_json(game, graph, cycle), format);
    }
    emit(text, g.out);
    return kYes;
}

std::vector<std::string> split_names(const std::string& text) {
    std::string spaced = text;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    return detail::split_words(spaced);
}

struct QsatArgs {
    std::string exists1;
    std::string forall;
    std::string exists2;
    std::string matrix;
    bool random = false;
    std::size_t max_vars = 6;
    bool check = false;
    std::string objective_out;
};

int cmd_reduce(const QsatArgs& a, const Globals& g) {
    Qsat3Instance q;
    if (a.random) {
        std::mt19937_64 rng(g.seed);
        q = random_qsat3(rng, a.max_vars);
    } else {
        q = as_input("instance", [&] {
            return make_qsat3(split_names(a.exists1), split_names(a.forall), split_names(a.exists2), a.matrix);
        });
    }
    auto [game, objective] = as_input("instance", [&] { return reduce_qsat3(q); });
    const std::string objective_text = print_formula(objective);

    Json j;
    j["problem"] = "reduce-qsat3";
    j["matrix"] = print_formula(q.matrix);
    j["exists"] = q.exists1;
    j["forall"] = q.forall;
    j["exists2"] = q.exists2;
    j["objective"] = objective_text;
    int code = kYes;
    if (a.check) {
        Qsat3Check c = cross_check_details(q, SynthesisOptions{g.max_systems});
        j["oracle"] = c.oracle;
        j["decider"] = c.decider;
        j["agree"] = c.agree();
        code = c.agree() ? kYes : kNo;
    }
    j["game"] = write_game(game);

    const std::string format = resolve_format(g, "text");
    std::string text;
    if (format == "json") {
        text = j.dump(2) + "\n";
    } else if (format == "dot") {
        throw InputError("dot output is only available for the graph command");
    } else {
        text = write_game(game) + "# objective: " + objective_text + "\n";
        if (a.check) {
            text += std::string("# qsat3: ") + (j["oracle"].get<bool>() ? "true" : "false") +
                    "\n# a-nash-contractibility: " + (j["decider"].get<bool>() ? "yes" : "no") + "\n";
        }
    }
    emit(text, g.out);
    if (!a.objective_out.empty()) {
        write_file(a.objective_out, objective_text + "\n");
    }
    return code;
}

void add_game_options(CLI::App* cmd, GameArgs& args, bool objective, bool contract) {
    cmd->add_option("game", args.game_path, "game file")->required();
    if (objective) {
        cmd->add_option("--objective", args.objective, "objective formula");
        cmd->add_option("--objective-file", args.objective_file, "file whose first line is the objective");
    }
    if (contract) {
        cmd->add_option("--contract", args.contract_path, "contract file applied before analysis");
        cmd->add_option("--pay", args.pays, "inline payment, e.g. \"1: p1=1 -> 10\" (repeatable)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boolean games with costs under a partially observing principal"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--format", g.format, "json, text or dot")->check(CLI::IsMember({"json", "text", "dot"}));
    app.add_option("--seed", g.seed, "seed for randomised commands");
    app.add_option("--max-systems", g.max_systems, "cap on linear systems solved during synthesis");
    app.add_option("--out", g.out, "output path (synthesis commands: contract file)");

    GameArgs args;
    std::string mode = "e";
    std::string obs;
    std::string profile;
    std::vector<std::string> profiles;
    bool highlight = false;
    QsatArgs qsat;

    auto* classify = app.add_subcommand("classify", "per-profile equilibrium classification");
    add_game_options(classify, args, true, true);

    auto* verify = app.add_subcommand("verify", "E-/A-Nash verifiability for an observation");
    add_game_options(verify, args, true, true);
    verify->add_option("-m,--mode", mode, "e or a")->check(CLI::IsMember({"e", "a"}));
    verify->add_option("--obs", obs, "observation, e.g. \"p1=0\"")->required();

    auto* contract = app.add_subcommand("contract", "E-/A-Nash contractibility with a verified contract");
    add_game_options(contract, args, true, false);
    contract->add_option("-m,--mode", mode, "e or a")->check(CLI::IsMember({"e", "a"}));

    auto* induce = app.add_subcommand("induce", "contract making a profile an equilibrium");
    add_game_options(induce, args, false, false);
    induce->add_option("--profile", profile, "profile, e.g. \"p1=1,p2=1\"")->required();

    auto* eliminate = app.add_subcommand("eliminate", "contract removing initial equilibria");
    add_game_options(eliminate, args, false, false);
    eliminate->add_option("--profile", profiles, "profile to eliminate (repeatable)")->required();

    auto* graph = app.add_subcommand("graph", "potential deviation graph");
    add_game_options(graph, args, false, false);
    graph->add_flag("--highlight-cycle", highlight, "mark a single-agent observed deviation cycle");

    auto* reduce = app.add_subcommand("reduce-qsat3", "QSAT3 instance to an A-Nash contractibility game");
    reduce->add_option("--exists", qsat.exists1, "first existential block");
    reduce->add_option("--forall", qsat.forall, "universal block");
    reduce->add_option("--exists2", qsat.exists2, "second existential block");
    reduce->add_option("--matrix", qsat.matrix, "matrix formula");
    reduce->add_flag("--random", qsat.random, "generate a random instance from --seed");
    reduce->add_option("--max-vars", qsat.max_vars, "variable bound for --random");
    reduce->add_flag("--check", qsat.check, "compare brute-force QSAT3 with the decider");
    reduce->add_option("--objective-out", qsat.objective_out, "also write the objective to this file");

    for (auto* sub : {classify, verify, contract, induce, eliminate, graph, reduce}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kYes : kInputError;
    }

    try {
        if (*classify) return cmd_classify(args, g);
        if (*verify) return cmd_verify(args, mode, obs, g);
        if (*contract) return cmd_contract(args, mode, g);
        if (*induce) return cmd_induce(args, profile, g);
        if (*eliminate) return cmd_eliminate(args, profiles, g);
        if (*graph) return cmd_graph(args, highlight, g);
        if (*reduce) return cmd_reduce(qsat, g);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kCapExceeded;
    } catch (const VerificationFailure& e) {
        std::cerr << "internal verification failure: " << e.what() << '\n';
        return kInternalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
