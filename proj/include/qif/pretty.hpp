#pragma once

#include <string>

#include "qif/ast.hpp"

namespace qif {

namespace detail {

// Conditions print with 'or' < 'and' < 'not'. The parser folds chains of the
// same operator to the right, so a left-nested child of the same kind needs
// parentheses to survive a round trip.
inline void print_cond(std::string& out, const CondPtr& c, int min_prec) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, EqValue>) {
                out += x.var + " == " + x.value;
            } else if constexpr (std::is_same_v<T, EqVar>) {
                out += x.lhs + " == " + x.rhs;
            } else if constexpr (std::is_same_v<T, Not>) {
                out += "not ";
                print_cond(out, x.inner, 3);
            } else if constexpr (std::is_same_v<T, And>) {
                bool paren = min_prec > 2;
                if (paren) out += "(";
                print_cond(out, x.lhs, 3);
                out += " and ";
                print_cond(out, x.rhs, 2);
                if (paren) out += ")";
            } else {
                bool paren = min_prec > 1;
                if (paren) out += "(";
                print_cond(out, x.lhs, 2);
                out += " or ";
                print_cond(out, x.rhs, 1);
                if (paren) out += ")";
            }
        },
        c->node);
}

inline void indent(std::string& out, int depth) { out.append(static_cast<size_t>(depth) * 2, ' '); }

// allow_seq: whether a bare ';' chain may appear here. The left operand of a
// Seq and the arms of pchoice braces are delimited contexts; a Seq in a
// non-seq position gets grouping braces so the tree shape round-trips.
inline void print_stmt(std::string& out, const StmtPtr& s, int depth, bool allow_seq) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Skip>) {
                indent(out, depth);
                out += "skip";
            } else if constexpr (std::is_same_v<T, Assign>) {
                indent(out, depth);
                out += x.var + " := " + x.value;
            } else if constexpr (std::is_same_v<T, Seq>) {
                if (!allow_seq) {
                    indent(out, depth);
                    out += "{\n";
                    print_stmt(out, s, depth + 1, true);
                    out += "\n";
                    indent(out, depth);
                    out += "}";
                    return;
                }
                print_stmt(out, x.first, depth, false);
                out += ";\n";
                print_stmt(out, x.second, depth, true);
            } else if constexpr (std::is_same_v<T, If>) {
                indent(out, depth);
                out += "if ";
                print_cond(out, x.cond, 1);
                out += " then\n";
                print_stmt(out, x.then_branch, depth + 1, true);
                out += "\n";
                indent(out, depth);
                out += "else\n";
                print_stmt(out, x.else_branch, depth + 1, true);
                out += "\n";
                indent(out, depth);
                out += "end";
            } else {
                indent(out, depth);
                out += "pchoice " + rat_to_string(x.prob) + " {\n";
                print_stmt(out, x.left, depth + 1, true);
                out += "\n";
                indent(out, depth);
                out += "} {\n";
                print_stmt(out, x.right, depth + 1, true);
                out += "\n";
                indent(out, depth);
                out += "}";
            }
        },
        s->node);
}

}  // namespace detail

inline std::string pretty(const CondPtr& c) {
    std::string out;
    detail::print_cond(out, c, 1);
    return out;
}

inline std::string pretty(const StmtPtr& s) {
    std::string out;
    detail::print_stmt(out, s, 0, true);
    return out;
}

/// Canonical source text. parse_program(pretty(p)) reproduces a structurally
/// identical Program.
inline std::string pretty(const Program& p) {
    std::string out;
    for (const auto& d : p.decls) {
        out += to_string(d.cls);
        out += " " + d.name + " in {";
        for (size_t i = 0; i < d.domain.size(); ++i) {
            if (i) out += ", ";
            out += d.domain[i];
        }
        out += "};\n";
    }
    out += pretty(p.body);
    out += "\n";
    return out;
}

}  // namespace qif
