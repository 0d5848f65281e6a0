#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "qif/belief.hpp"
#include "qif/divergence.hpp"
#include "qif/metrics.hpp"

namespace qif {

namespace detail {

inline std::string fmt(double x, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, x);
    return buf;
}

/// Human rendering: 4 decimal places. Machine rendering: shortest
/// round-trippable form.
inline std::string fmt4(double x) { return fmt(x, "%.4f"); }
inline std::string fmt_full(double x) { return fmt(x, "%.17g"); }

inline std::string fmt4(const ExtendedReal& x) {
    if (x.is_pos_inf()) return "inf";
    if (x.is_neg_inf()) return "-inf";
    return fmt4(x.value());
}

inline std::string fmt_csv(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt(x, "%.10g");
}

inline std::string range_str(const FlowRange& r) {
    std::string lo = r.lo.is_neg_inf() ? "(-inf" : "[" + fmt4(r.lo.value());
    std::string hi = r.hi.is_pos_inf() ? "inf)" : fmt4(r.hi.value()) + "]";
    return lo + ", " + hi;
}

inline std::string belief_line(const Belief& b) {
    std::string out;
    auto states = b.domain().states();
    for (size_t i = 0; i < states.size(); ++i) {
        if (i) out += "  ";
        out += HighDomain::label(states[i]) + "=" + fmt4(to_double(b.at(i)));
    }
    return out;
}

inline nlohmann::json json_of(const ExtendedReal& x) {
    if (x.is_pos_inf()) return "inf";
    if (x.is_neg_inf()) return "-inf";
    return x.value();
}

inline nlohmann::json json_of(const Belief& b) {
    nlohmann::json arr = nlohmann::json::array();
    auto states = b.domain().states();
    for (size_t i = 0; i < states.size(); ++i) {
        arr.push_back({{"state", HighDomain::label(states[i])},
                       {"prob", rat_to_string(b.at(i))},
                       {"prob_double", to_double(b.at(i))}});
    }
    return arr;
}

inline nlohmann::json json_of(const FlowRange& r) { return {{"lo", json_of(r.lo)}, {"hi", json_of(r.hi)}}; }

}  // namespace detail

inline std::string observation_label(const std::map<std::string, std::string>& obs) {
    if (obs.empty()) return "(nothing observable)";
    std::string out;
    for (const auto& [var, value] : obs) {
        if (!out.empty()) out += " ";
        out += var + "=" + value;
    }
    return out;
}

/// Plain-text report, 4 decimal places.
inline std::string render_report(const Experiment& e, const ExperimentOutcome& outcome, const FlowReport& rep) {
    using detail::fmt4;
    std::string out;
    out += "observation          " + observation_label(outcome.observation) + "\n";
    out += "prebelief            " + detail::belief_line(e.prebelief) + "\n";
    out += "postbelief           " + detail::belief_line(outcome.postbelief) + "\n";
    out += "secret size          eta = " + fmt4(rep.eta) + " bits\n";
    out += "uncertainty          U = " + fmt4(rep.uncertainty_pre) + " bits before, U' = " +
           fmt4(rep.uncertainty_post) + " bits after\n";
    out += "uncertainty flow     R = " + fmt4(rep.r) + " bits, range [" + fmt4(-rep.eta) + ", " + fmt4(rep.eta) +
           "], size-consistent: yes\n";
    out += "accuracy flow        Q = " + fmt4(rep.q) + " bits, range " + detail::range_str(rep.range_q) +
           ", size-consistent: " + (rep.size_consistent_q ? "yes" : "NO") + "\n";
    out += "normalized flow      Q' = " + fmt4(rep.q_prime) + ", range [-1, 1]\n";
    out += "sized flow           Q'' = " + fmt4(rep.q_double_prime) + " bits, range " +
           detail::range_str(rep.range_q_double) +
           ", size-consistent: " + (rep.size_consistent_q_double ? "yes" : "NO") + "\n";
    out += "distance to reality  " + fmt4(rep.pre_distance) + " bits before -> " + fmt4(rep.post_distance) +
           " bits after\n";
    out += "guess likelihood     " + detail::fmt4(rep.multiplier) + "x the prebelief's\n";
    out += "search via Q''       residual " + fmt4(rep.search_q_double.residual_bits) + " bits, about " +
           fmt4(rep.search_q_double.space) + " candidates\n";
    if (rep.search_q) {
        out += "search via Q         residual " + fmt4(rep.search_q->residual_bits) + " bits, about " +
               fmt4(rep.search_q->space) + " candidates\n";
    } else {
        out += "search via Q         undefined: reported flow exceeds the secret size, so the residual\n";
        out += "                     search space cannot be determined\n";
    }
    return out;
}

/// JSON report: full precision, rationals as strings, infinities as
/// "inf"/"-inf".
inline nlohmann::json report_json(const Experiment& e, const ExperimentOutcome& outcome, const FlowReport& rep) {
    using detail::json_of;
    nlohmann::json j;
    j["observation"] = outcome.observation;
    j["prebelief"] = json_of(e.prebelief);
    j["postbelief"] = json_of(outcome.postbelief);
    j["eta"] = rep.eta;
    j["uncertainty_pre"] = rep.uncertainty_pre;
    j["uncertainty_post"] = rep.uncertainty_post;
    j["r"] = rep.r;
    j["q"] = json_of(rep.q);
    j["q_prime"] = rep.q_prime;
    j["q_double_prime"] = rep.q_double_prime;
    j["range_q"] = json_of(rep.range_q);
    j["range_q_double"] = json_of(rep.range_q_double);
    j["range_r"] = {{"lo", -rep.eta}, {"hi", rep.eta}};
    j["pre_distance"] = rep.pre_distance;
    j["post_distance"] = rep.post_distance;
    j["multiplier"] = json_of(rep.multiplier);
    if (rep.search_q) {
        j["search_q"] = {{"residual_bits", rep.search_q->residual_bits}, {"space", rep.search_q->space}};
    } else {
        j["search_q"] = nullptr;
    }
    j["search_q_double"] = {{"residual_bits", rep.search_q_double.residual_bits},
                            {"space", rep.search_q_double.space}};
    j["size_consistent_q"] = rep.size_consistent_q;
    j["size_consistent_q_double"] = rep.size_consistent_q_double;
    return j;
}

// ---------------------------------------------------------------------------
// Sweeps: the CSV data behind the three curve comparisons.
// ---------------------------------------------------------------------------

namespace detail {

inline HighDomain sweep_domain() { return HighDomain{{"x"}, {{"v0", "v1"}}}; }

}  // namespace detail

/// Per-state discrimination constructs against a postbelief pinned at 1,
/// over prebelief t in (0, 1]. Columns: the KL construct, half of it, the
/// mean-referenced construct, and the shifted construct.
inline std::string sweep_disc_csv(int steps) {
    std::string out = "t,disc_kl,disc_kl_half,disc_js,disc_alt\n";
    for (int i = 0; i < steps; ++i) {
        Rat t(i + 1, steps);
        ExtendedReal kl = disc_kl(t, Rat(1));
        out += detail::fmt_csv(to_double(t)) + "," + detail::fmt_csv(kl.value()) + "," +
               detail::fmt_csv(kl.half().value()) + "," + detail::fmt_csv(disc_js(t, Rat(1))) + "," +
               detail::fmt_csv(disc_alt(t, Rat(1))) + "\n";
    }
    return out;
}

/// D and its bounded replacement from a Bernoulli(t) belief to a point mass
/// on the first outcome, t in [0, 1].
inline std::string sweep_div_csv(int steps) {
    std::string out = "t,kl,js_asym\n";
    HighDomain dom = detail::sweep_domain();
    Belief target = point_mass(Reality{{"v0"}}, dom);
    for (int i = 0; i < steps; ++i) {
        Rat t(i, steps - 1);
        Belief bern = Belief::from_probs(dom, {t, Rat(1) - t});
        out += detail::fmt_csv(to_double(t)) + "," + detail::fmt_csv(kl_divergence(bern, target).value()) + "," +
               detail::fmt_csv(js_asym_divergence(bern, target)) + "\n";
    }
    return out;
}

/// Q and Q'' as the postbelief in reality sweeps [0, 1], for the prebelief
/// that puts 0.01 on the true state of a 3-state secret. The eta columns
/// mark the size-consistency band.
inline std::string sweep_metric_csv(int steps) {
    std::string out = "post,q,q_double,eta,neg_eta\n";
    const Rat pre(1, 100);
    const double eta_bits = std::log2(3.0);
    for (int i = 0; i < steps; ++i) {
        Rat post(i, steps - 1);
        ExtendedReal q = metric_q(pre, post);
        double qd = metric_q_double(pre, post, eta_bits);
        out += detail::fmt_csv(to_double(post)) + "," + detail::fmt_csv(q.value()) + "," + detail::fmt_csv(qd) +
               "," + detail::fmt_csv(eta_bits) + "," + detail::fmt_csv(-eta_bits) + "\n";
    }
    return out;
}

inline std::string sweep_csv(const std::string& kind, int steps) {
    if (steps < 2) throw ValidationError("steps must be at least 2");
    if (kind == "disc") return sweep_disc_csv(steps);
    if (kind == "div") return sweep_div_csv(steps);
    if (kind == "metric") return sweep_metric_csv(steps);
    throw ValidationError("unknown sweep kind '" + kind + "'");
}

}  // namespace qif
