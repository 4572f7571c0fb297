#include "qnr/lp_export.hpp"

#include <sstream>

#include "qnr/errors.hpp"

namespace qnr {
namespace {

std::string var_name(int32_t i, int32_t j, int32_t f) {
    return "A_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(f);
}

} // namespace

std::string LpProblem::to_text() const {
    std::ostringstream out;
    out << "min\n";
    for (size_t k = 0; k < objective.size(); ++k) {
        out << (k == 0 ? "" : " ") << objective[k].coeff << " " << objective[k].var;
    }
    out << "\n";
    out << "# constant " << objective_constant << "\n";
    for (const LpConstraint& c : constraints) {
        for (size_t k = 0; k < c.terms.size(); ++k) {
            if (k > 0) out << " + ";
            out << c.terms[k].coeff << " " << c.terms[k].var;
        }
        out << " <= " << c.rhs.str() << "\n";
    }
    return out.str();
}

LpProblem LpProblem::parse(std::string_view text) {
    LpProblem lp;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool saw_min = false;
    bool saw_objective = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("# constant ", 0) == 0) {
            lp.objective_constant = std::stoll(line.substr(11));
            continue;
        }
        if (!line.empty() && line[0] == '#') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        if (!saw_min) {
            if (line != "min") throw ParseError("expected 'min'", line_no);
            saw_min = true;
            continue;
        }
        if (!saw_objective) {
            std::istringstream tok(line);
            int64_t coeff;
            std::string var;
            while (tok >> coeff >> var) {
                lp.objective.push_back({coeff, var});
            }
            saw_objective = true;
            continue;
        }
        size_t le = line.find("<=");
        if (le == std::string::npos) {
            throw ParseError("constraint without '<='", line_no);
        }
        LpConstraint c;
        c.rhs = Ratio::parse(line.substr(le + 2).substr(line.substr(le + 2).find_first_not_of(' ')));
        std::string lhs = line.substr(0, le);
        size_t pos = 0;
        while ((pos = lhs.find('+')) != std::string::npos) lhs.erase(pos, 1);
        std::istringstream tok(lhs);
        int64_t coeff;
        std::string var;
        while (tok >> coeff >> var) {
            c.terms.push_back({coeff, var});
        }
        if (c.terms.empty()) throw ParseError("empty constraint", line_no);
        lp.constraints.push_back(std::move(c));
    }
    if (!saw_min || !saw_objective) throw ParseError("missing objective");
    return lp;
}

LpProblem export_nonneg_form(const ReconfigProblem& prob) {
    const Topology& t = prob.topology;
    const FlowSet& flows = prob.flows;
    const RoutingMatrix& a0 = prob.current;
    int32_t n = t.n;
    int32_t p = flows.p();
    LpProblem lp;

    // Objective (A + A0): one unit coefficient per variable plus the constant
    // contribution of the fixed current routing.
    for (int32_t i = 0; i < n; ++i) {
        for (int32_t j = 0; j < n; ++j) {
            if (!t.has_link(i, j)) continue;
            for (int32_t f = 0; f < p; ++f) {
                lp.objective.push_back({1, var_name(i, j, f)});
            }
        }
    }
    lp.objective_constant = a0.entry_count();

    // Capacity rows.
    for (int32_t i = 0; i < n; ++i) {
        for (int32_t j = 0; j < n; ++j) {
            if (!t.has_link(i, j)) continue;
            LpConstraint c;
            for (int32_t f = 0; f < p; ++f) {
                c.terms.push_back({flows.by_index(f).demand_mbps, var_name(i, j, f)});
            }
            c.rhs = prob.mu * Ratio(t.bw(i, j));
            lp.constraints.push_back(std::move(c));
        }
    }

    auto equality_rows = [&lp](LpConstraint base, Ratio rhs) {
        LpConstraint neg;
        for (const LpTerm& term : base.terms) neg.terms.push_back({-term.coeff, term.var});
        neg.rhs = Ratio(0) - rhs;
        base.rhs = rhs;
        lp.constraints.push_back(std::move(base));
        lp.constraints.push_back(std::move(neg));
    };

    for (int32_t f = 0; f < p; ++f) {
        const Flow& flow = flows.by_index(f);
        // (3): nothing may enter the source. Sum <= 0 pins every term to zero.
        LpConstraint no_return;
        for (int32_t i = 0; i < n; ++i) {
            if (t.has_link(i, flow.src)) no_return.terms.push_back({1, var_name(i, flow.src, f)});
        }
        if (!no_return.terms.empty()) {
            no_return.rhs = Ratio(0);
            lp.constraints.push_back(std::move(no_return));
        }
        // (4): nothing may leave the destination.
        LpConstraint no_exit;
        for (int32_t j = 0; j < n; ++j) {
            if (t.has_link(flow.dst, j)) no_exit.terms.push_back({1, var_name(flow.dst, j, f)});
        }
        if (!no_exit.terms.empty()) {
            no_exit.rhs = Ratio(0);
            lp.constraints.push_back(std::move(no_exit));
        }
        // (5): exactly one link out of the source.
        LpConstraint src_out;
        for (int32_t j = 0; j < n; ++j) {
            if (t.has_link(flow.src, j)) src_out.terms.push_back({1, var_name(flow.src, j, f)});
        }
        if (!src_out.terms.empty()) equality_rows(std::move(src_out), Ratio(1));
        // (6): exactly one link into the destination.
        LpConstraint dst_in;
        for (int32_t i = 0; i < n; ++i) {
            if (t.has_link(i, flow.dst)) dst_in.terms.push_back({1, var_name(i, flow.dst, f)});
        }
        if (!dst_in.terms.empty()) equality_rows(std::move(dst_in), Ratio(1));
        // (7): conservation at transit switches.
        for (int32_t i = 0; i < n; ++i) {
            if (i == flow.src || i == flow.dst) continue;
            LpConstraint balance;
            for (int32_t j = 0; j < n; ++j) {
                if (t.has_link(i, j)) balance.terms.push_back({1, var_name(i, j, f)});
            }
            for (int32_t j = 0; j < n; ++j) {
                if (t.has_link(j, i)) balance.terms.push_back({-1, var_name(j, i, f)});
            }
            if (!balance.terms.empty()) equality_rows(std::move(balance), Ratio(0));
        }
    }

    // (8): no branching.
    for (int32_t i = 0; i < n; ++i) {
        for (int32_t f = 0; f < p; ++f) {
            LpConstraint c;
            for (int32_t j = 0; j < n; ++j) {
                if (t.has_link(i, j)) c.terms.push_back({1, var_name(i, j, f)});
            }
            if (c.terms.empty()) continue;
            c.rhs = Ratio(1);
            lp.constraints.push_back(std::move(c));
        }
    }

    // (12): A + A0 <= 1, folded to A <= 1 - A0 since A0 is data.
    for (int32_t i = 0; i < n; ++i) {
        for (int32_t j = 0; j < n; ++j) {
            if (!t.has_link(i, j)) continue;
            for (int32_t f = 0; f < p; ++f) {
                LpConstraint c;
                c.terms.push_back({1, var_name(i, j, f)});
                c.rhs = Ratio(a0.at(i, j, f) ? 0 : 1);
                lp.constraints.push_back(std::move(c));
            }
        }
    }

    return lp;
}

} // namespace qnr
