#pragma once

// Checks that a competing numerator matrix L, testing the same functions as
// H (sp(X'L) = sp(X'H), sp(H) in sp(X)), is no better than H: same or more
// numerator df and an ncp that is never larger.

#include "rmfm/exactlin.hpp"

namespace rmfm {

struct DfBounds {
    std::size_t nu_h = 0;
    std::size_t nu_pxl = 0;
    std::size_t nu_l = 0;
    std::size_t upper = 0;  // nu_h + n - nu_x
    bool holds() const { return nu_h == nu_pxl && nu_pxl <= nu_l && nu_l <= upper; }
};

struct DominanceReport {
    bool span_recovered = false;  // sp(P_X L) = sp(H)
    bool containment = false;     // sp(L) in sp(H) + sp(X)^perp
    bool nnd_holds = false;       // X'P_H X - X'P_L X nnd
    DfBounds df;
    bool q_idempotent = false;    // P_H + (I - P_X) - P_L symmetric idempotent

    bool all_hold() const { return span_recovered && containment && nnd_holds && df.holds() && q_idempotent; }
};

/// Throws PreconditionError naming the failed precondition.
DominanceReport check_dominance(const RatMatrix& x, const RatMatrix& h, const RatMatrix& l);

}  // namespace rmfm
