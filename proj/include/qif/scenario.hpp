#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qif/belief.hpp"
#include "qif/error.hpp"
#include "qif/metrics.hpp"
#include "qif/rational.hpp"

// Scenario files are line-oriented `key = value` text:
//
//   program = pwc.qif            # path, relative to the scenario file
//   reality = C                  # joint high state, comma-separated tuple
//   low.g = A
//   belief.A = 0.98              # prebelief entry per joint state
//   belief.B = 0.01
//   belief.C = 0.01
//   observe.a = 0                # optional: the observation to condition on
//   epsilon = 0.03               # optional: admissibility factor
//
// '#' starts a comment; unlisted joint states carry prebelief 0.

namespace qif {

struct Scenario {
    std::string program_path;
    std::map<JointState, Rat> prebelief;
    JointState reality;
    std::map<std::string, std::string> low_input;
    std::map<std::string, std::string> observation;  // empty when absent
    std::optional<Rat> epsilon;
};

namespace detail {

inline std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline JointState parse_tuple(const std::string& text) {
    JointState out;
    std::string cur;
    std::stringstream ss(text);
    while (std::getline(ss, cur, ',')) {
        std::string v = trim(cur);
        if (v.empty()) throw ScenarioError("empty component in tuple '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ScenarioError("empty tuple");
    return out;
}

inline Rat parse_scenario_rat(const std::string& text, int line) {
    try {
        return parse_rat(text);
    } catch (const ValidationError& e) {
        throw ScenarioError("line " + std::to_string(line) + ": " + e.what());
    }
}

}  // namespace detail

/// Parses scenario text. Purely syntactic plus file-local checks; everything
/// that needs the program's declarations is validated by to_experiment.
inline Scenario parse_scenario(std::string_view text) {
    Scenario sc;
    bool have_reality = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string line = detail::trim(raw);
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) -> ScenarioError {
            return ScenarioError("line " + std::to_string(lineno) + ": " + msg);
        };
        auto eq = line.find('=');
        if (eq == std::string::npos) throw fail("expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw fail("expected 'key = value'");

        if (key == "program") {
            if (!sc.program_path.empty()) throw fail("duplicate 'program'");
            sc.program_path = value;
        } else if (key == "reality") {
            if (have_reality) throw fail("duplicate 'reality'");
            sc.reality = detail::parse_tuple(value);
            have_reality = true;
        } else if (key == "epsilon") {
            if (sc.epsilon) throw fail("duplicate 'epsilon'");
            Rat e = detail::parse_scenario_rat(value, lineno);
            if (e <= 0) throw fail("epsilon must be positive");
            sc.epsilon = e;
        } else if (key.rfind("low.", 0) == 0) {
            std::string var = detail::trim(key.substr(4));
            if (var.empty()) throw fail("missing variable name in '" + key + "'");
            if (!sc.low_input.emplace(var, value).second) throw fail("duplicate 'low." + var + "'");
        } else if (key.rfind("observe.", 0) == 0) {
            std::string var = detail::trim(key.substr(8));
            if (var.empty()) throw fail("missing variable name in '" + key + "'");
            if (!sc.observation.emplace(var, value).second) throw fail("duplicate 'observe." + var + "'");
        } else if (key.rfind("belief.", 0) == 0) {
            JointState state = detail::parse_tuple(detail::trim(key.substr(7)));
            // Literals are unsigned, so negatives are impossible here.
            Rat p = detail::parse_scenario_rat(value, lineno);
            if (!sc.prebelief.emplace(std::move(state), p).second) throw fail("duplicate belief entry");
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    if (sc.program_path.empty()) throw ScenarioError("scenario misses 'program'");
    if (!have_reality) throw ScenarioError("scenario misses 'reality'");
    if (sc.prebelief.empty()) throw ScenarioError("scenario misses 'belief.*' entries");
    return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read scenario file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

/// Canonical text form; parse_scenario(serialize_scenario(s)) is
/// semantically identical to s, probabilities compared as exact rationals.
inline std::string serialize_scenario(const Scenario& sc) {
    std::string out;
    out += "program = " + sc.program_path + "\n";
    out += "reality = " + HighDomain::label(sc.reality) + "\n";
    for (const auto& [var, value] : sc.low_input) out += "low." + var + " = " + value + "\n";
    for (const auto& [state, p] : sc.prebelief)
        out += "belief." + HighDomain::label(state) + " = " + rat_to_string(p) + "\n";
    for (const auto& [var, value] : sc.observation) out += "observe." + var + " = " + value + "\n";
    if (sc.epsilon) out += "epsilon = " + rat_to_string(*sc.epsilon) + "\n";
    return out;
}

/// Binds a scenario to its parsed program: validates every tuple against
/// the declared domains, checks the prebelief normalizes (within 1e-9, then
/// rescaled exactly), and checks observed variables are outputs.
inline Experiment to_experiment(const Scenario& sc, const Program& program) {
    HighDomain dom = HighDomain::of(program);
    std::vector<Rat> weights(dom.cardinality(), Rat(0));
    Rat sum = 0;
    for (const auto& [state, p] : sc.prebelief) {
        size_t idx;
        try {
            idx = dom.index_of(state);
        } catch (const ValidationError& e) {
            throw ScenarioError(std::string("belief entry: ") + e.what());
        }
        weights[idx] = p;
        sum += p;
    }
    if (std::abs(to_double(sum) - 1.0) > 1e-9)
        throw ScenarioError("prebelief does not normalize: probabilities sum to " + rat_to_string(sum));
    for (auto& w : weights) w /= sum;

    JointState reality = sc.reality;
    try {
        dom.index_of(reality);
    } catch (const ValidationError& e) {
        throw ScenarioError(std::string("reality: ") + e.what());
    }

    for (const auto& [var, value] : sc.low_input) {
        const VarDecl* d = program.find_decl(var);
        if (!d || d->cls != VarClass::Low) throw ScenarioError("'" + var + "' is not a declared low variable");
        if (!d->has_value(value)) throw ScenarioError("value '" + value + "' is not in the domain of '" + var + "'");
    }
    for (const auto& d : program.decls)
        if (d.cls == VarClass::Low && !sc.low_input.count(d.name))
            throw ScenarioError("missing low variable '" + d.name + "'");

    for (const auto& [var, value] : sc.observation) {
        const VarDecl* d = program.find_decl(var);
        if (!d || d->cls != VarClass::Output)
            throw ScenarioError("'" + var + "' is not a declared output variable");
        if (!d->has_value(value)) throw ScenarioError("value '" + value + "' is not in the domain of '" + var + "'");
    }

    Belief pre = Belief::from_probs(dom, std::move(weights));
    return Experiment{program, std::move(pre), Reality{std::move(reality)}, sc.low_input};
}

}  // namespace qif
