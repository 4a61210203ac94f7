#pragma once

#include <vector>

#include "whflip/symbol.hpp"

namespace whflip {

// Fourier coefficient table c_lo, ..., c_hi of a symbol plus a bound on what was cut off.
struct FourierSeries {
    int rows = 0, cols = 0;
    int lo = 0;
    std::vector<CMatrix> c;
    // Sum of ||c_k||_F outside [lo, hi] not represented in c.
    double truncation = 0.0;

    int hi() const { return lo + int(c.size()) - 1; }
    CMatrix at(int k) const;
    // Sum of ||c_k||_F over |k| > window, plus the truncation term.
    double tail(int window) const;
    // Sum of ||c_k||_F over all k, an operator norm bound for M(A).
    double l1_norm() const;
};

// Full expansion: exact for Laurent polynomials, geometric series otherwise.
FourierSeries expand_symbol(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());

struct CoefficientTable {
    int lo = 0;
    std::vector<CMatrix> c;
    double tail_bound = 0.0;
};

// Coefficients on [lo, hi]; tail_bound covers every coefficient outside the window.
CoefficientTable fourier_coeffs(const RationalMatrixFunction& a, int lo, int hi,
                                const Tolerances& tol = default_tolerances());

}  // namespace whflip
