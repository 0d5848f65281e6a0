#pragma once

#include <set>
#include <string>
#include <vector>

#include "qif/ast.hpp"

namespace qif {

namespace detail {

inline void cond_vars(const CondPtr& c, std::set<std::string>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, EqValue>) {
                out.insert(x.var);
            } else if constexpr (std::is_same_v<T, EqVar>) {
                out.insert(x.lhs);
                out.insert(x.rhs);
            } else if constexpr (std::is_same_v<T, Not>) {
                cond_vars(x.inner, out);
            } else {
                cond_vars(x.lhs, out);
                cond_vars(x.rhs, out);
            }
        },
        c->node);
}

// Tracks the set of variables assigned on every path so far; reads found in
// guards before a sure write are reported.
inline void scan_reads(const StmtPtr& s, std::set<std::string>& written, const std::set<std::string>& outputs,
                       std::set<std::string>& flagged) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Assign>) {
                written.insert(x.var);
            } else if constexpr (std::is_same_v<T, Seq>) {
                scan_reads(x.first, written, outputs, flagged);
                scan_reads(x.second, written, outputs, flagged);
            } else if constexpr (std::is_same_v<T, If>) {
                std::set<std::string> read;
                cond_vars(x.cond, read);
                for (const auto& v : read)
                    if (outputs.count(v) && !written.count(v)) flagged.insert(v);
                std::set<std::string> wt = written, we = written;
                scan_reads(x.then_branch, wt, outputs, flagged);
                scan_reads(x.else_branch, we, outputs, flagged);
                written.clear();
                for (const auto& v : wt)
                    if (we.count(v)) written.insert(v);
            } else if constexpr (std::is_same_v<T, PChoice>) {
                std::set<std::string> wl = written, wr = written;
                scan_reads(x.left, wl, outputs, flagged);
                scan_reads(x.right, wr, outputs, flagged);
                written.clear();
                for (const auto& v : wl)
                    if (wr.count(v)) written.insert(v);
            }
        },
        s->node);
}

}  // namespace detail

/// Output variables that some path may read (in a guard) before writing.
/// The interpreter seeds output variables with the first element of their
/// domain, so such a read sees the seed, not attacker-visible data; this is
/// usually a program bug worth a warning.
inline std::vector<std::string> output_reads_before_write(const Program& p) {
    std::set<std::string> outputs;
    for (const auto& d : p.decls)
        if (d.cls == VarClass::Output) outputs.insert(d.name);
    std::set<std::string> written, flagged;
    detail::scan_reads(p.body, written, outputs, flagged);
    return {flagged.begin(), flagged.end()};
}

}  // namespace qif
