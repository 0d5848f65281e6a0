#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qif/ast.hpp"
#include "qif/error.hpp"
#include "qif/rational.hpp"

namespace qif {

/// Total assignment of declared variables to values of their domains.
struct ProgramState {
    std::map<std::string, std::string> vars;

    const std::string& at(const std::string& name) const {
        auto it = vars.find(name);
        if (it == vars.end()) throw ValidationError("state has no variable '" + name + "'");
        return it->second;
    }

    friend auto operator<=>(const ProgramState&, const ProgramState&) = default;
};

/// Finite distribution over states. Stored entries always have probability
/// > 0 and the entries of a run/observe result sum to exactly 1.
struct StateDistribution {
    std::map<ProgramState, Rat> support;

    void add(const ProgramState& s, const Rat& p) {
        if (p == 0) return;
        support[s] += p;
    }

    Rat total() const {
        Rat t = 0;
        for (const auto& [s, p] : support) t += p;
        return t;
    }

    Rat prob_of(const ProgramState& s) const {
        auto it = support.find(s);
        return it == support.end() ? Rat(0) : it->second;
    }
};

namespace detail {

inline bool eval_cond(const CondPtr& c, const ProgramState& st) {
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, EqValue>) {
                return st.at(x.var) == x.value;
            } else if constexpr (std::is_same_v<T, EqVar>) {
                return st.at(x.lhs) == st.at(x.rhs);
            } else if constexpr (std::is_same_v<T, Not>) {
                return !eval_cond(x.inner, st);
            } else if constexpr (std::is_same_v<T, And>) {
                return eval_cond(x.lhs, st) && eval_cond(x.rhs, st);
            } else {
                return eval_cond(x.lhs, st) || eval_cond(x.rhs, st);
            }
        },
        c->node);
}

// Distribution transformer: pushes every (state, mass) pair through the
// statement, splitting mass at each probabilistic choice.
inline StateDistribution step(const StmtPtr& s, const StateDistribution& in) {
    return std::visit(
        [&](const auto& x) -> StateDistribution {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Skip>) {
                return in;
            } else if constexpr (std::is_same_v<T, Assign>) {
                StateDistribution out;
                for (const auto& [st, p] : in.support) {
                    ProgramState next = st;
                    next.vars[x.var] = x.value;
                    out.add(next, p);
                }
                return out;
            } else if constexpr (std::is_same_v<T, Seq>) {
                return step(x.second, step(x.first, in));
            } else if constexpr (std::is_same_v<T, If>) {
                StateDistribution then_in, else_in;
                for (const auto& [st, p] : in.support) {
                    (eval_cond(x.cond, st) ? then_in : else_in).add(st, p);
                }
                StateDistribution out = step(x.then_branch, then_in);
                for (const auto& [st, p] : step(x.else_branch, else_in).support) out.add(st, p);
                return out;
            } else {
                StateDistribution left_in, right_in;
                Rat q = Rat(1) - x.prob;
                for (const auto& [st, p] : in.support) {
                    left_in.add(st, p * x.prob);
                    right_in.add(st, p * q);
                }
                StateDistribution out = step(x.left, left_in);
                for (const auto& [st, p] : step(x.right, right_in).support) out.add(st, p);
                return out;
            }
        },
        s->node);
}

}  // namespace detail

inline void check_state_matches(const Program& program, const ProgramState& st) {
    for (const auto& d : program.decls) {
        auto it = st.vars.find(d.name);
        if (it == st.vars.end()) throw ValidationError("initial state misses variable '" + d.name + "'");
        if (!d.has_value(it->second))
            throw ValidationError("value '" + it->second + "' is not in the domain of '" + d.name + "'");
    }
    for (const auto& [name, value] : st.vars)
        if (!program.find_decl(name)) throw ValidationError("state assigns undeclared variable '" + name + "'");
}

/// Runs the program on a concrete initial state, enumerating every
/// probabilistic branch. The result is the exact distribution over final
/// states; for a deterministic program it is a single state at probability 1.
inline StateDistribution run(const Program& program, const ProgramState& initial) {
    check_state_matches(program, initial);
    StateDistribution in;
    in.add(initial, Rat(1));
    return detail::step(program.body, in);
}

/// Marginalizes a distribution onto the given variables.
inline StateDistribution observe(const StateDistribution& dist, const std::set<std::string>& observable_vars) {
    StateDistribution out;
    for (const auto& [st, p] : dist.support) {
        ProgramState proj;
        for (const auto& v : observable_vars) proj.vars[v] = st.at(v);
        out.add(proj, p);
    }
    return out;
}

/// The variables an attacker sees in a run: those classed `output`.
inline std::set<std::string> default_observables(const Program& program) {
    std::set<std::string> out;
    for (const auto& d : program.decls)
        if (d.cls == VarClass::Output) out.insert(d.name);
    return out;
}

/// Builds the total initial state from a high-variable assignment and a
/// low-variable assignment; output variables are seeded with the first
/// element of their domain.
inline ProgramState initial_state(const Program& program, const std::map<std::string, std::string>& high,
                                  const std::map<std::string, std::string>& low) {
    ProgramState st;
    for (const auto& d : program.decls) {
        const std::map<std::string, std::string>* src = nullptr;
        switch (d.cls) {
            case VarClass::High: src = &high; break;
            case VarClass::Low: src = &low; break;
            case VarClass::Output: break;
        }
        if (!src) {
            st.vars[d.name] = d.domain.front();
            continue;
        }
        auto it = src->find(d.name);
        if (it == src->end())
            throw ValidationError(std::string("missing ") + to_string(d.cls) + " variable '" + d.name + "'");
        st.vars[d.name] = it->second;
    }
    return st;
}

}  // namespace qif
