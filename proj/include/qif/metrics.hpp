#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qif/belief.hpp"
#include "qif/divergence.hpp"
#include "qif/extended_real.hpp"
#include "qif/semantics.hpp"

namespace qif {

/// One interaction with a program: the attacker's prebelief, the true high
/// state, and the low input fed to the execution.
struct Experiment {
    Program program;
    Belief prebelief;
    Reality reality;
    std::map<std::string, std::string> low_input;
};

/// Inclusive range of flow a metric can report for a given prebelief.
struct FlowRange {
    ExtendedReal lo;
    ExtendedReal hi;
};

struct SearchEffort {
    double residual_bits;
    double space;
};

struct MultiplierResult {
    double post_at_reality;
    ExtendedReal fold_increase;
};

struct ExperimentOutcome {
    Belief postbelief;
    std::map<std::string, std::string> observation;
};

struct FlowReport {
    double eta = 0;
    double uncertainty_pre = 0;
    double uncertainty_post = 0;
    double r = 0;
    ExtendedReal q;
    double q_prime = 0;
    double q_double_prime = 0;
    FlowRange range_q;
    FlowRange range_q_double;
    double pre_distance = 0;
    double post_distance = 0;
    ExtendedReal multiplier;
    std::optional<SearchEffort> search_q;
    SearchEffort search_q_double{};
    bool size_consistent_q = false;
    bool size_consistent_q_double = false;
};

// ---------------------------------------------------------------------------
// Metrics. Each has a scalar form over (prebelief, postbelief) probabilities
// of the true high state, and a Belief form that extracts those scalars.
// ---------------------------------------------------------------------------

/// Uncertainty reduction R = S(pre) - S(post), in
/// [-log2 |domain|, +log2 |domain|]. Ignores which state is actually true.
inline double metric_r(const Belief& pre, const Belief& post) {
    check_same_domain(pre, post);
    return shannon_entropy(pre) - shannon_entropy(post);
}

/// Accuracy flow Q = -log2 pre(r) + log2 post(r): the drop in the
/// distance-to-certainty. Unbounded: +inf when pre(r) = 0 < post(r), -inf
/// when post(r) = 0 < pre(r); undefined when both vanish.
inline ExtendedReal metric_q(const Rat& pre_at_r, const Rat& post_at_r) {
    if (pre_at_r == 0 && post_at_r == 0)
        throw UndefinedMetricError("Q is undefined: pre- and postbelief both vanish at reality");
    if (pre_at_r == 0) return ExtendedReal::pos_inf();
    if (post_at_r == 0) return ExtendedReal::neg_inf();
    return ExtendedReal::finite(detail::log2_ratio(post_at_r, pre_at_r));
}

inline ExtendedReal metric_q(const Belief& pre, const Belief& post, const Reality& r) {
    check_same_domain(pre, post);
    return metric_q(pre.at(r.point), post.at(r.point));
}

/// Normalized flow Q' = log2(1 + post(r)) - log2(1 + pre(r)), always finite,
/// inside [-1, 1].
inline double metric_q_prime(const Rat& pre_at_r, const Rat& post_at_r) {
    return detail::log2_ratio(Rat(1) + post_at_r, Rat(1) + pre_at_r);
}

inline double metric_q_prime(const Belief& pre, const Belief& post, const Reality& r) {
    check_same_domain(pre, post);
    return metric_q_prime(pre.at(r.point), post.at(r.point));
}

inline void check_eta(double eta_bits) {
    if (!(eta_bits > 0)) throw ValidationError("eta must be positive");
}

/// Size-consistent flow Q'' = eta * Q', bounded by [-eta, +eta].
inline double metric_q_double(const Rat& pre_at_r, const Rat& post_at_r, double eta_bits) {
    check_eta(eta_bits);
    return eta_bits * metric_q_prime(pre_at_r, post_at_r);
}

inline double metric_q_double(const Belief& pre, const Belief& post, const Reality& r, double eta_bits) {
    check_same_domain(pre, post);
    return metric_q_double(pre.at(r.point), post.at(r.point), eta_bits);
}

/// Range of Q for a prebelief: (-inf, -log2 pre(r)].
inline FlowRange range_q(const Belief& pre, const Reality& r) {
    const Rat& p = pre.at(r.point);
    ExtendedReal hi = p == 0 ? ExtendedReal::pos_inf() : ExtendedReal::finite(-std::log2(to_double(p)));
    return FlowRange{ExtendedReal::neg_inf(), hi};
}

/// Range of Q'': [-eta * log2(1+pre(r)), eta * (1 - log2(1+pre(r)))]. Both
/// ends finite; always inside [-eta, +eta].
inline FlowRange range_q_double(const Belief& pre, const Reality& r, double eta_bits) {
    check_eta(eta_bits);
    double lg = std::log2(to_double(Rat(1) + pre.at(r.point)));
    return FlowRange{ExtendedReal::finite(-eta_bits * lg), ExtendedReal::finite(eta_bits * (1.0 - lg))};
}

/// A quantifier is size-consistent when everything it can report lies in
/// [-eta, +eta].
inline bool size_consistent(const FlowRange& range, double eta_bits) {
    check_eta(eta_bits);
    return range.hi <= eta_bits && range.lo >= -eta_bits;
}

/// Inverts a flow of k bits into the postbelief it implies:
/// post(r) = 2^(k/eta) * pre(r) + 2^(k/eta) - 1, plus the fold increase in
/// the likelihood of a correct guess. Errors when k lies outside the
/// feasible range for this prebelief.
inline MultiplierResult multiplier(double k, double eta_bits, double pre_at_reality) {
    check_eta(eta_bits);
    if (pre_at_reality < 0.0 || pre_at_reality > 1.0)
        throw ValidationError("prebelief probability outside [0, 1]");
    double factor = std::exp2(k / eta_bits);
    // (factor - 1) first keeps k = 0 an exact no-op.
    double post = factor * pre_at_reality + (factor - 1.0);
    constexpr double slack = 1e-9;
    if (post < -slack || post > 1.0 + slack)
        throw ValidationError("flow of " + std::to_string(k) + " bits is outside the feasible range");
    post = std::clamp(post, 0.0, 1.0);
    ExtendedReal fold = ExtendedReal::finite(1.0);
    if (pre_at_reality == 0.0) {
        fold = post > 0.0 ? ExtendedReal::pos_inf() : ExtendedReal::finite(1.0);
    } else {
        fold = ExtendedReal::finite(post / pre_at_reality);
    }
    return MultiplierResult{post, fold};
}

/// Residual secret after k informing bits: eta - k bits, i.e. a search
/// space of 2^(eta-k) candidates. Empty when k > eta: the residual cannot
/// be determined, so no search space exists.
inline std::optional<SearchEffort> search_effort(double eta_bits, double k) {
    if (k > eta_bits) return std::nullopt;
    double residual = eta_bits - k;
    return SearchEffort{residual, std::exp2(residual)};
}

/// Admissibility of a prebelief: it never deviates by more than the factor
/// epsilon from uniform, i.e. min_s pre(s) >= epsilon / |domain|.
inline bool admissible(const Belief& pre, const Rat& epsilon) {
    if (epsilon <= 0) throw ValidationError("epsilon must be positive");
    Rat bound = epsilon / Rat(pre.domain().cardinality());
    Rat min = pre.at(size_t{0});
    for (size_t i = 1; i < pre.size(); ++i) min = std::min(min, pre.at(i));
    return min >= bound;
}

// ---------------------------------------------------------------------------
// Experiment orchestration.
// ---------------------------------------------------------------------------

namespace detail {

// Canonical order on projected states: variables in declaration order,
// values in domain order. Used only to break ties deterministically.
inline bool canonical_less(const Program& program, const ProgramState& a, const ProgramState& b) {
    for (const auto& d : program.decls) {
        auto ia = a.vars.find(d.name);
        auto ib = b.vars.find(d.name);
        if (ia == a.vars.end() || ib == b.vars.end()) continue;
        size_t pa = 0, pb = 0;
        while (d.domain[pa] != ia->second) ++pa;
        while (d.domain[pb] != ib->second) ++pb;
        if (pa != pb) return pa < pb;
    }
    return false;
}

inline std::map<std::string, std::string> default_observation(const Program& program, const HighDomain& dom,
                                                              const Reality& reality,
                                                              const std::map<std::string, std::string>& low) {
    ProgramState init = initial_state(program, dom.as_assignment(reality.point), low);
    StateDistribution marginal = observe(run(program, init), default_observables(program));
    const ProgramState* best = nullptr;
    Rat best_p = 0;
    for (const auto& [st, p] : marginal.support) {
        if (!best || p > best_p || (p == best_p && canonical_less(program, st, *best))) {
            best = &st;
            best_p = p;
        }
    }
    return best->vars;
}

}  // namespace detail

/// Runs one experiment: picks the observation (the most probable one under
/// the true high state unless the caller supplies one) and revises the
/// prebelief against it.
inline ExperimentOutcome run_experiment(const Experiment& e,
                                        std::optional<std::map<std::string, std::string>> observation = {}) {
    HighDomain dom = HighDomain::of(e.program);
    if (!(dom == e.prebelief.domain()))
        throw DomainMismatchError("prebelief domain does not match the program's high variables");
    dom.index_of(e.reality.point);  // validates reality
    std::map<std::string, std::string> obs =
        observation ? *observation : detail::default_observation(e.program, dom, e.reality, e.low_input);
    Belief post = revise_belief(e.prebelief, e.program, e.low_input, obs);
    return ExperimentOutcome{std::move(post), std::move(obs)};
}

/// Computes every metric for an already-run experiment.
inline FlowReport make_report(const Experiment& e, const ExperimentOutcome& outcome) {
    FlowReport rep;
    rep.eta = eta(e.program);
    rep.uncertainty_pre = shannon_entropy(e.prebelief);
    rep.uncertainty_post = shannon_entropy(outcome.postbelief);
    rep.r = rep.uncertainty_pre - rep.uncertainty_post;

    const Rat& pre_at_r = e.prebelief.at(e.reality.point);
    const Rat& post_at_r = outcome.postbelief.at(e.reality.point);
    rep.q = metric_q(pre_at_r, post_at_r);
    rep.q_prime = metric_q_prime(pre_at_r, post_at_r);
    rep.q_double_prime = rep.eta * rep.q_prime;
    rep.range_q = range_q(e.prebelief, e.reality);
    rep.range_q_double = range_q_double(e.prebelief, e.reality, rep.eta);

    auto refined_distance = [&](const Rat& at_r) { return rep.eta * (1.0 - std::log2(to_double(Rat(1) + at_r))); };
    rep.pre_distance = refined_distance(pre_at_r);
    rep.post_distance = refined_distance(post_at_r);

    if (pre_at_r == 0) {
        rep.multiplier = post_at_r > 0 ? ExtendedReal::pos_inf() : ExtendedReal::finite(1.0);
    } else {
        rep.multiplier = ExtendedReal::finite(to_double(post_at_r / pre_at_r));
    }

    rep.search_q = search_effort(rep.eta, rep.q.value());
    rep.search_q_double = search_effort(rep.eta, rep.q_double_prime).value();
    rep.size_consistent_q = size_consistent(rep.range_q, rep.eta);
    rep.size_consistent_q_double = size_consistent(rep.range_q_double, rep.eta);
    return rep;
}

/// Runs the experiment and bundles every metric into one report.
inline FlowReport analyze(const Experiment& e,
                          std::optional<std::map<std::string, std::string>> observation = {}) {
    return make_report(e, run_experiment(e, std::move(observation)));
}

}  // namespace qif
