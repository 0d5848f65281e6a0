#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qif/error.hpp"
#include "qif/rational.hpp"

namespace qif {

enum class VarClass { High, Low, Output };

inline const char* to_string(VarClass c) {
    switch (c) {
        case VarClass::High: return "high";
        case VarClass::Low: return "low";
        case VarClass::Output: return "output";
    }
    return "?";
}

/// A declared variable: a name, a finite ordered domain of symbolic values,
/// and its security class.
struct VarDecl {
    std::string name;
    std::vector<std::string> domain;
    VarClass cls = VarClass::Low;

    bool has_value(const std::string& v) const {
        for (const auto& d : domain)
            if (d == v) return true;
        return false;
    }

    friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

// ---------------------------------------------------------------------------
// Conditions: boolean combinations of equality atoms.
// ---------------------------------------------------------------------------

struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

struct EqValue {
    std::string var;
    std::string value;
};
struct EqVar {
    std::string lhs;
    std::string rhs;
};
struct Not {
    CondPtr inner;
};
struct And {
    CondPtr lhs, rhs;
};
struct Or {
    CondPtr lhs, rhs;
};

struct Cond {
    std::variant<EqValue, EqVar, Not, And, Or> node;
};

inline CondPtr eq_value(std::string var, std::string value) {
    return std::make_shared<Cond>(Cond{EqValue{std::move(var), std::move(value)}});
}
inline CondPtr eq_var(std::string lhs, std::string rhs) {
    return std::make_shared<Cond>(Cond{EqVar{std::move(lhs), std::move(rhs)}});
}
inline CondPtr cond_not(CondPtr inner) { return std::make_shared<Cond>(Cond{Not{std::move(inner)}}); }
inline CondPtr cond_and(CondPtr l, CondPtr r) { return std::make_shared<Cond>(Cond{And{std::move(l), std::move(r)}}); }
inline CondPtr cond_or(CondPtr l, CondPtr r) { return std::make_shared<Cond>(Cond{Or{std::move(l), std::move(r)}}); }

bool operator==(const Cond& a, const Cond& b);

inline bool equal(const CondPtr& a, const CondPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

inline bool operator==(const Cond& a, const Cond& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&b](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, EqValue>) {
                return x.var == y.var && x.value == y.value;
            } else if constexpr (std::is_same_v<T, EqVar>) {
                return x.lhs == y.lhs && x.rhs == y.rhs;
            } else if constexpr (std::is_same_v<T, Not>) {
                return equal(x.inner, y.inner);
            } else {
                return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
            }
        },
        a.node);
}

// ---------------------------------------------------------------------------
// Statements.
// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Skip {};
struct Assign {
    std::string var;
    std::string value;
};
struct Seq {
    StmtPtr first, second;
};
struct If {
    CondPtr cond;
    StmtPtr then_branch, else_branch;
};
/// Probabilistic choice: run `left` with probability `prob`, `right` with
/// probability 1-prob. prob is a rational strictly inside (0,1).
struct PChoice {
    Rat prob;
    StmtPtr left, right;
};

struct Stmt {
    std::variant<Skip, Assign, Seq, If, PChoice> node;
};

inline StmtPtr make_skip() { return std::make_shared<Stmt>(Stmt{Skip{}}); }
inline StmtPtr make_assign(std::string var, std::string value) {
    return std::make_shared<Stmt>(Stmt{Assign{std::move(var), std::move(value)}});
}
inline StmtPtr make_seq(StmtPtr a, StmtPtr b) { return std::make_shared<Stmt>(Stmt{Seq{std::move(a), std::move(b)}}); }
inline StmtPtr make_if(CondPtr c, StmtPtr t, StmtPtr e) {
    return std::make_shared<Stmt>(Stmt{If{std::move(c), std::move(t), std::move(e)}});
}
inline StmtPtr make_pchoice(Rat prob, StmtPtr l, StmtPtr r) {
    return std::make_shared<Stmt>(Stmt{PChoice{std::move(prob), std::move(l), std::move(r)}});
}

bool operator==(const Stmt& a, const Stmt& b);

inline bool equal(const StmtPtr& a, const StmtPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

inline bool operator==(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&b](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Skip>) {
                return true;
            } else if constexpr (std::is_same_v<T, Assign>) {
                return x.var == y.var && x.value == y.value;
            } else if constexpr (std::is_same_v<T, Seq>) {
                return equal(x.first, y.first) && equal(x.second, y.second);
            } else if constexpr (std::is_same_v<T, If>) {
                return equal(x.cond, y.cond) && equal(x.then_branch, y.then_branch) &&
                       equal(x.else_branch, y.else_branch);
            } else {
                return x.prob == y.prob && equal(x.left, y.left) && equal(x.right, y.right);
            }
        },
        a.node);
}

// ---------------------------------------------------------------------------
// Program.
// ---------------------------------------------------------------------------

struct Program {
    std::vector<VarDecl> decls;
    StmtPtr body;

    const VarDecl* find_decl(const std::string& name) const {
        for (const auto& d : decls)
            if (d.name == name) return &d;
        return nullptr;
    }

    std::vector<const VarDecl*> vars_of(VarClass c) const {
        std::vector<const VarDecl*> out;
        for (const auto& d : decls)
            if (d.cls == c) out.push_back(&d);
        return out;
    }

    friend bool operator==(const Program& a, const Program& b) {
        return a.decls == b.decls && equal(a.body, b.body);
    }
};

/// Size of the program's secret input in bits: log2 of the cardinality of
/// the joint domain of all high variables.
inline double eta(const Program& p) {
    double card = 1.0;
    bool any = false;
    for (const auto& d : p.decls) {
        if (d.cls == VarClass::High) {
            any = true;
            card *= static_cast<double>(d.domain.size());
        }
    }
    if (!any) throw ValidationError("program declares no high variables");
    return std::log2(card);
}

/// Number of PChoice nodes syntactically in a statement tree.
inline int count_pchoices(const StmtPtr& s) {
    if (!s) return 0;
    return std::visit(
        [](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Seq>) {
                return count_pchoices(x.first) + count_pchoices(x.second);
            } else if constexpr (std::is_same_v<T, If>) {
                return count_pchoices(x.then_branch) + count_pchoices(x.else_branch);
            } else if constexpr (std::is_same_v<T, PChoice>) {
                return 1 + count_pchoices(x.left) + count_pchoices(x.right);
            } else {
                return 0;
            }
        },
        s->node);
}

}  // namespace qif
