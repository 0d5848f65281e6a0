#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qif/ast.hpp"
#include "qif/error.hpp"
#include "qif/rational.hpp"
#include "qif/semantics.hpp"

namespace qif {

/// One joint assignment of the high variables, in declaration order.
using JointState = std::vector<std::string>;

/// The ordered joint domain of a program's high variables. Beliefs are
/// distributions over this domain; two beliefs are comparable only when
/// their domains are equal.
struct HighDomain {
    std::vector<std::string> vars;
    std::vector<std::vector<std::string>> domains;

    static HighDomain of(const Program& p) {
        HighDomain d;
        for (const auto& decl : p.decls) {
            if (decl.cls == VarClass::High) {
                d.vars.push_back(decl.name);
                d.domains.push_back(decl.domain);
            }
        }
        if (d.vars.empty()) throw ValidationError("program declares no high variables");
        return d;
    }

    size_t cardinality() const {
        size_t n = 1;
        for (const auto& dom : domains) n *= dom.size();
        return n;
    }

    /// States in odometer order: the first variable is most significant,
    /// values ordered as declared.
    std::vector<JointState> states() const {
        std::vector<JointState> out;
        JointState cur(vars.size());
        enumerate(0, cur, out);
        return out;
    }

    bool contains(const JointState& s) const {
        if (s.size() != vars.size()) return false;
        for (size_t i = 0; i < s.size(); ++i) {
            bool found = false;
            for (const auto& v : domains[i])
                if (v == s[i]) found = true;
            if (!found) return false;
        }
        return true;
    }

    /// Position of a state in states() order.
    size_t index_of(const JointState& s) const {
        if (!contains(s)) throw ValidationError("state " + label(s) + " is outside the high domain");
        size_t idx = 0;
        for (size_t i = 0; i < vars.size(); ++i) {
            size_t pos = 0;
            while (domains[i][pos] != s[i]) ++pos;
            idx = idx * domains[i].size() + pos;
        }
        return idx;
    }

    std::map<std::string, std::string> as_assignment(const JointState& s) const {
        std::map<std::string, std::string> out;
        for (size_t i = 0; i < vars.size(); ++i) out[vars[i]] = s[i];
        return out;
    }

    static std::string label(const JointState& s) {
        std::string out;
        for (size_t i = 0; i < s.size(); ++i) {
            if (i) out += ",";
            out += s[i];
        }
        return out;
    }

    friend bool operator==(const HighDomain&, const HighDomain&) = default;

private:
    void enumerate(size_t i, JointState& cur, std::vector<JointState>& out) const {
        if (i == vars.size()) {
            out.push_back(cur);
            return;
        }
        for (const auto& v : domains[i]) {
            cur[i] = v;
            enumerate(i + 1, cur, out);
        }
    }
};

/// The true joint high state.
struct Reality {
    JointState point;
};

/// Attacker belief: an exact probability distribution over the joint high
/// domain. Probabilities are nonnegative rationals summing to exactly 1.
class Belief {
public:
    static Belief from_probs(HighDomain domain, std::vector<Rat> probs) {
        if (probs.size() != domain.cardinality())
            throw ValidationError("belief has " + std::to_string(probs.size()) + " entries for a domain of " +
                                  std::to_string(domain.cardinality()) + " states");
        Rat sum = 0;
        for (const auto& p : probs) {
            if (p < 0) throw ValidationError("belief probability is negative");
            sum += p;
        }
        if (sum != 1) throw ValidationError("belief probabilities sum to " + rat_to_string(sum) + ", not 1");
        return Belief(std::move(domain), std::move(probs));
    }

    /// Rescales nonnegative weights to an exact distribution.
    static Belief normalized(HighDomain domain, std::vector<Rat> weights) {
        Rat sum = 0;
        for (const auto& w : weights) {
            if (w < 0) throw ValidationError("belief weight is negative");
            sum += w;
        }
        if (sum == 0) throw ValidationError("belief weights sum to zero");
        for (auto& w : weights) w /= sum;
        return from_probs(std::move(domain), std::move(weights));
    }

    static Belief uniform(HighDomain domain) {
        size_t n = domain.cardinality();
        return Belief(std::move(domain), std::vector<Rat>(n, Rat(1, n)));
    }

    const HighDomain& domain() const { return dom_; }
    const std::vector<Rat>& probs() const { return p_; }
    size_t size() const { return p_.size(); }

    const Rat& at(size_t i) const { return p_.at(i); }
    const Rat& at(const JointState& s) const { return p_[dom_.index_of(s)]; }

    friend bool operator==(const Belief& a, const Belief& b) { return a.dom_ == b.dom_ && a.p_ == b.p_; }

private:
    Belief(HighDomain domain, std::vector<Rat> probs) : dom_(std::move(domain)), p_(std::move(probs)) {}

    HighDomain dom_;
    std::vector<Rat> p_;
};

inline void check_same_domain(const Belief& a, const Belief& b) {
    if (!(a.domain() == b.domain())) throw DomainMismatchError("beliefs range over different high domains");
}

/// Certainty about the true high state: probability 1 at `reality.point`.
inline Belief point_mass(const Reality& reality, const HighDomain& domain) {
    std::vector<Rat> p(domain.cardinality(), Rat(0));
    p[domain.index_of(reality.point)] = 1;
    return Belief::from_probs(domain, std::move(p));
}

/// Shannon uncertainty in bits, with 0 * log 0 = 0. Lies in
/// [0, log2(cardinality)], the maximum attained by the uniform belief.
inline double shannon_entropy(const Belief& b) {
    double h = 0.0;
    for (const auto& p : b.probs()) {
        if (p == 0) continue;
        double x = to_double(p);
        h -= x * std::log2(x);
    }
    return h < 0.0 ? 0.0 : h;
}

/// The probability the belief assigns to the true high state.
inline Rat belief_in_reality(const Belief& b, const Reality& r) { return b.at(r.point); }

namespace detail {

inline void check_low_assignment(const Program& program, const std::map<std::string, std::string>& low) {
    for (const auto& d : program.decls) {
        if (d.cls != VarClass::Low) continue;
        auto it = low.find(d.name);
        if (it == low.end()) throw ValidationError("missing low variable '" + d.name + "'");
        if (!d.has_value(it->second))
            throw ValidationError("value '" + it->second + "' is not in the domain of '" + d.name + "'");
    }
    for (const auto& [name, value] : low) {
        const VarDecl* d = program.find_decl(name);
        if (!d || d->cls != VarClass::Low)
            throw ValidationError("'" + name + "' is not a declared low variable");
    }
}

// An empty observation is allowed: a program with nothing observable
// conditions on nothing, so revision returns the prebelief unchanged.
inline void check_observation(const Program& program, const std::map<std::string, std::string>& observation) {
    for (const auto& [name, value] : observation) {
        const VarDecl* d = program.find_decl(name);
        if (!d) throw ValidationError("observation names undeclared variable '" + name + "'");
        if (!d->has_value(value))
            throw ValidationError("value '" + value + "' is not in the domain of '" + name + "'");
    }
}

}  // namespace detail

/// Probability of seeing `observation` when the high state is `high` and the
/// low input is `low`: run the program, marginalize onto the observed
/// variables, read off the observation's mass.
inline Rat observation_likelihood(const Program& program, const std::map<std::string, std::string>& high,
                                  const std::map<std::string, std::string>& low,
                                  const std::map<std::string, std::string>& observation) {
    ProgramState init = initial_state(program, high, low);
    std::set<std::string> obs_vars;
    for (const auto& [name, value] : observation) obs_vars.insert(name);
    StateDistribution marginal = observe(run(program, init), obs_vars);
    return marginal.prob_of(ProgramState{observation});
}

/// Bayesian revision of a prebelief against one observed execution:
/// post(s) = pre(s) * Pr(observation | high = s, low) / Z. Throws
/// ImpossibleObservationError when Z = 0 (the observation cannot occur under
/// any high state the attacker considers possible).
inline Belief revise_belief(const Belief& prebelief, const Program& program,
                            const std::map<std::string, std::string>& low_input,
                            const std::map<std::string, std::string>& observation) {
    HighDomain dom = HighDomain::of(program);
    if (!(dom == prebelief.domain()))
        throw DomainMismatchError("prebelief domain does not match the program's high variables");
    detail::check_low_assignment(program, low_input);
    detail::check_observation(program, observation);

    std::vector<JointState> states = dom.states();
    std::vector<Rat> weights(states.size(), Rat(0));
    Rat z = 0;
    for (size_t i = 0; i < states.size(); ++i) {
        if (prebelief.at(i) == 0) continue;
        Rat likelihood = observation_likelihood(program, dom.as_assignment(states[i]), low_input, observation);
        weights[i] = prebelief.at(i) * likelihood;
        z += weights[i];
    }
    if (z == 0)
        throw ImpossibleObservationError("observation has zero probability under the prebelief");
    for (auto& w : weights) w /= z;
    return Belief::from_probs(std::move(dom), std::move(weights));
}

}  // namespace qif
