#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qnr/ratio.hpp"
#include "qnr/routing.hpp"

namespace qnr {

struct LpTerm {
    int64_t coeff = 0;
    std::string var;
    bool operator==(const LpTerm&) const = default;
};

// terms . x <= rhs
struct LpConstraint {
    std::vector<LpTerm> terms;
    Ratio rhs;
    bool operator==(const LpConstraint&) const = default;
};

struct LpProblem {
    std::vector<LpTerm> objective;  // minimized
    int64_t objective_constant = 0;
    std::vector<LpConstraint> constraints;
    bool operator==(const LpProblem&) const = default;

    // Text format: a "min" line, then the objective terms as "coeff var"
    // pairs on one line, then "# constant k", then one constraint per line
    // "a1 x1 + a2 x2 ... <= b". Variables are named A_i_j_f.
    std::string to_text() const;
    static LpProblem parse(std::string_view text);
};

// The nonnegative-coefficient variant of the reconfiguration problem:
// objective sum(A + A0) plus the rows A_ijf + A0_ijf <= 1, alongside the
// capacity and flow-conservation rows, for use with external optimizers.
// Variables exist only for links that exist. The canonical internal objective
// is unchanged by this export.
LpProblem export_nonneg_form(const ReconfigProblem& prob);

} // namespace qnr
