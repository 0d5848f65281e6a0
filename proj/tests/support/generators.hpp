#pragma once

// Hand-rolled generators for property tests: random (always valid) programs,
// states, and exact-rational beliefs.

#include <random>
#include <string>
#include <vector>

#include "qif/ast.hpp"
#include "qif/belief.hpp"
#include "qif/semantics.hpp"

namespace qif_testing {

struct Rng {
    explicit Rng(uint64_t seed) : eng(seed) {}

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(eng); }
    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(eng) < p; }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng); }

    std::mt19937_64 eng;
};

inline const std::vector<std::string>& value_pool() {
    static const std::vector<std::string> pool = {"A", "B", "C", "D", "0", "1"};
    return pool;
}

inline qif::VarDecl random_decl(Rng& rng, std::string name, qif::VarClass cls, int max_domain = 4) {
    qif::VarDecl d;
    d.name = std::move(name);
    d.cls = cls;
    int size = 1 + rng.below(max_domain);
    for (int i = 0; i < size; ++i) d.domain.push_back(value_pool()[i]);
    return d;
}

inline qif::Rat random_prob(Rng& rng) {
    int den = 2 + rng.below(99);
    int num = 1 + rng.below(den - 1);
    return qif::Rat(num, den);
}

struct ProgramGen {
    Rng& rng;
    const qif::Program& program;
    int pchoice_budget;

    qif::CondPtr cond(int depth) {
        if (depth > 0 && rng.chance(0.4)) {
            switch (rng.below(3)) {
                case 0: return qif::cond_not(cond(depth - 1));
                case 1: return qif::cond_and(cond(depth - 1), cond(depth - 1));
                default: return qif::cond_or(cond(depth - 1), cond(depth - 1));
            }
        }
        const auto& a = program.decls[rng.below(static_cast<int>(program.decls.size()))];
        if (program.decls.size() > 1 && rng.chance(0.3)) {
            const auto& b = program.decls[rng.below(static_cast<int>(program.decls.size()))];
            return qif::eq_var(a.name, b.name);
        }
        return qif::eq_value(a.name, a.domain[rng.below(static_cast<int>(a.domain.size()))]);
    }

    qif::StmtPtr stmt(int depth) {
        int kind = depth > 0 ? rng.below(5) : rng.below(2);
        switch (kind) {
            case 0: return qif::make_skip();
            case 1: {
                const auto& d = program.decls[rng.below(static_cast<int>(program.decls.size()))];
                return qif::make_assign(d.name, d.domain[rng.below(static_cast<int>(d.domain.size()))]);
            }
            case 2: return qif::make_seq(stmt(depth - 1), stmt(depth - 1));
            case 3: return qif::make_if(cond(2), stmt(depth - 1), stmt(depth - 1));
            default:
                if (pchoice_budget <= 0) return qif::make_skip();
                --pchoice_budget;
                return qif::make_pchoice(random_prob(rng), stmt(depth - 1), stmt(depth - 1));
        }
    }
};

inline qif::Program random_program(Rng& rng, int max_pchoices = 3, int depth = 3) {
    qif::Program p;
    p.decls.push_back(random_decl(rng, "h", qif::VarClass::High));
    if (rng.chance(0.5)) p.decls.push_back(random_decl(rng, "k", qif::VarClass::High, 3));
    if (rng.chance(0.7)) p.decls.push_back(random_decl(rng, "g", qif::VarClass::Low));
    if (rng.chance(0.8)) p.decls.push_back(random_decl(rng, "o", qif::VarClass::Output, 3));
    ProgramGen gen{rng, p, max_pchoices};
    p.body = gen.stmt(depth);
    return p;
}

inline qif::ProgramState random_state(Rng& rng, const qif::Program& p) {
    qif::ProgramState st;
    for (const auto& d : p.decls) st.vars[d.name] = d.domain[rng.below(static_cast<int>(d.domain.size()))];
    return st;
}

/// Random exact distribution over n states; with_zeros sprinkles hard zeros.
inline std::vector<qif::Rat> random_belief_probs(Rng& rng, size_t n, bool with_zeros = true) {
    std::vector<qif::Rat> w(n);
    qif::Rat sum = 0;
    for (auto& x : w) {
        if (with_zeros && rng.chance(0.2)) continue;
        x = qif::Rat(1 + rng.below(1000));
        sum += x;
    }
    if (sum == 0) {
        w[static_cast<size_t>(rng.below(static_cast<int>(n)))] = 1;
        sum = 1;
    }
    for (auto& x : w) x /= sum;
    return w;
}

inline qif::Belief random_belief(Rng& rng, const qif::HighDomain& dom, bool with_zeros = true) {
    return qif::Belief::from_probs(dom, random_belief_probs(rng, dom.cardinality(), with_zeros));
}

/// A belief over {A,B,C} with the given exact probability at C.
inline qif::Belief belief_with_at_reality(const qif::HighDomain& dom, const qif::Rat& at_reality) {
    std::vector<qif::Rat> p(dom.cardinality(), qif::Rat(0));
    p.back() = at_reality;
    p.front() = qif::Rat(1) - at_reality;
    return qif::Belief::from_probs(dom, std::move(p));
}

inline qif::HighDomain abc_domain() { return qif::HighDomain{{"p"}, {{"A", "B", "C"}}}; }

}  // namespace qif_testing
