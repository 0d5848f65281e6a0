#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qif/lint.hpp"
#include "qif/parser.hpp"
#include "qif/report.hpp"
#include "qif/scenario.hpp"

namespace qif::cli {

// Exit codes:
//   0  success
//   1  analysis error (e.g. Q undefined at a both-zero corner)
//   2  scenario validation error
//   3  observation impossible under the prebelief
//   4  cannot read an input file
//   5  program parse error
// CLI11 reports usage errors with its own nonzero codes.
enum ExitCode : int {
    kOk = 0,
    kAnalysis = 1,
    kScenario = 2,
    kImpossible = 3,
    kIo = 4,
    kProgram = 5,
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedScenario {
    Scenario scenario;
    Program program;
    Experiment experiment;
};

inline LoadedScenario load(const std::string& scenario_path) {
    Scenario sc = load_scenario(scenario_path);
    std::filesystem::path prog_path = sc.program_path;
    if (prog_path.is_relative()) prog_path = std::filesystem::path(scenario_path).parent_path() / prog_path;
    Program program = parse_program(read_file(prog_path));
    for (const auto& var : output_reads_before_write(program))
        std::cerr << "warning: output variable '" << var << "' may be read before it is written\n";
    Experiment e = to_experiment(sc, program);
    return LoadedScenario{std::move(sc), std::move(program), std::move(e)};
}

inline int run_analyze(const std::string& scenario_path, bool machine, bool enumerate_all) {
    LoadedScenario ls = load(scenario_path);
    std::optional<std::map<std::string, std::string>> obs;
    if (!ls.scenario.observation.empty()) obs = ls.scenario.observation;

    if (!enumerate_all) {
        ExperimentOutcome outcome = run_experiment(ls.experiment, obs);
        FlowReport rep = make_report(ls.experiment, outcome);
        if (machine) {
            std::cout << report_json(ls.experiment, outcome, rep).dump(2) << "\n";
        } else {
            std::cout << render_report(ls.experiment, outcome, rep);
        }
        return kOk;
    }

    // Every observation the true high state can produce, with its
    // probability and the report it leads to.
    HighDomain dom = HighDomain::of(ls.program);
    ProgramState init =
        initial_state(ls.program, dom.as_assignment(ls.experiment.reality.point), ls.experiment.low_input);
    StateDistribution marginal = observe(run(ls.program, init), default_observables(ls.program));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [st, prob] : marginal.support) {
        std::optional<ExperimentOutcome> outcome;
        try {
            outcome = run_experiment(ls.experiment, st.vars);
        } catch (const ImpossibleObservationError&) {
        }
        if (machine) {
            nlohmann::json entry;
            entry["observation"] = st.vars;
            entry["probability"] = rat_to_string(prob);
            entry["probability_double"] = to_double(prob);
            if (outcome) {
                entry["report"] = report_json(ls.experiment, *outcome, make_report(ls.experiment, *outcome));
            } else {
                entry["report"] = nullptr;
            }
            arr.push_back(entry);
        } else {
            std::cout << "--- observation " << observation_label(st.vars) << " (probability "
                      << rat_to_string(prob) << ") ---\n";
            if (outcome) {
                std::cout << render_report(ls.experiment, *outcome, make_report(ls.experiment, *outcome));
            } else {
                std::cout << "impossible under the prebelief\n";
            }
        }
    }
    if (machine) std::cout << arr.dump(2) << "\n";
    return kOk;
}

inline int run_check(const std::string& scenario_path, const std::string& epsilon_text) {
    LoadedScenario ls = load(scenario_path);
    double eta_bits = eta(ls.program);
    const Belief& pre = ls.experiment.prebelief;
    const Reality& r = ls.experiment.reality;

    FlowRange rr{ExtendedReal::finite(-eta_bits), ExtendedReal::finite(eta_bits)};
    FlowRange rq = range_q(pre, r);
    FlowRange rqd = range_q_double(pre, r, eta_bits);
    auto verdict = [&](const char* name, const FlowRange& range) {
        std::cout << name << ": " << (size_consistent(range, eta_bits) ? "size-consistent" : "NOT size-consistent")
                  << ", range " << qif::detail::range_str(range) << "\n";
    };
    std::cout << "secret size eta = " << qif::detail::fmt4(eta_bits) << " bits\n";
    verdict("R", rr);
    verdict("Q", rq);
    verdict("Q''", rqd);

    std::optional<Rat> eps;
    if (!epsilon_text.empty()) {
        eps = parse_rat(epsilon_text);
        if (*eps <= 0) throw ScenarioError("epsilon must be positive");
    } else if (ls.scenario.epsilon) {
        eps = ls.scenario.epsilon;
    }
    if (eps) {
        bool ok = admissible(pre, *eps);
        std::cout << "admissibility (epsilon = " << rat_to_string(*eps)
                  << "): " << (ok ? "admissible" : "inadmissible") << "\n";
    } else {
        std::cout << "admissibility: not checked (no epsilon given)\n";
    }
    return kOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"Belief-based quantitative information flow analysis for tiny probabilistic programs"};
    app.require_subcommand(1);

    std::string scenario_path;
    bool machine = false;
    bool enumerate_all = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "Run one experiment and print its flow report");
    analyze_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    analyze_cmd->add_flag("--machine", machine, "emit JSON with full precision");
    analyze_cmd->add_flag("--enumerate-observations", enumerate_all,
                          "report every observation the true state can produce");

    std::string kind;
    int steps = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Emit comparison curves as CSV on stdout");
    sweep_cmd
        ->add_option("--kind", kind,
                     "disc: per-state discrimination constructs over prebelief t in (0,1] with the postbelief "
                     "pinned at 1; div: divergences from Bernoulli(t) to a point mass on the first outcome; "
                     "metric: Q and Q'' over the postbelief grid for a 0.01 prebelief and a 3-state secret")
        ->required()
        ->check(CLI::IsMember({"disc", "div", "metric"}));
    sweep_cmd->add_option("--steps", steps, "number of grid rows")->required()->check(CLI::Range(2, 1000000));

    std::string check_path;
    std::string epsilon_text;
    auto* check_cmd = app.add_subcommand("check", "Size-consistency and admissibility verdicts for a scenario");
    check_cmd->add_option("scenario", check_path, "scenario file")->required();
    check_cmd->add_option("--epsilon", epsilon_text, "admissibility factor (overrides the scenario's)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (analyze_cmd->parsed()) return detail::run_analyze(scenario_path, machine, enumerate_all);
        if (sweep_cmd->parsed()) {
            std::cout << sweep_csv(kind, steps);
            return kOk;
        }
        return detail::run_check(check_path, epsilon_text);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        std::cerr << "error: program " << e.what() << "\n";
        return kProgram;
    } catch (const ImpossibleObservationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kImpossible;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kScenario;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kScenario;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAnalysis;
    }
}

}  // namespace qif::cli
