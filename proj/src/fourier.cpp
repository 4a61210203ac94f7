#include "whflip/fourier.hpp"

#include <algorithm>
#include <cmath>

#include "whflip/errors.hpp"

namespace whflip {

CMatrix FourierSeries::at(int k) const {
    if (k < lo || k > hi()) return CMatrix::Zero(rows, cols);
    return c[std::size_t(k - lo)];
}

double FourierSeries::tail(int window) const {
    double s = truncation;
    for (int k = lo; k <= hi(); ++k)
        if (std::abs(k) > window) s += c[std::size_t(k - lo)].norm();
    return s;
}

double FourierSeries::l1_norm() const {
    double s = truncation;
    for (const auto& m : c) s += m.norm();
    return s;
}

namespace {

// Power series of 1 / prod (1 - r_i x), truncated to length K.
std::vector<cplx> reciprocal_series(const std::vector<cplx>& r, int K) {
    std::vector<cplx> s(K, 0.0);
    s[0] = 1.0;
    for (cplx z : r)
        for (int k = 1; k < K; ++k) s[k] += z * s[k - 1];
    return s;
}

bool settled(const std::vector<cplx>& s) {
    double peak = 0.0;
    for (cplx v : s) peak = std::max(peak, std::abs(v));
    const std::size_t n = s.size();
    for (std::size_t k = n - std::min<std::size_t>(8, n); k < n; ++k)
        if (std::abs(s[k]) > 1e-18 * peak) return false;
    return true;
}

}  // namespace

FourierSeries expand_symbol(const RationalMatrixFunction& a, const Tolerances& tol) {
    FourierSeries out;
    out.rows = a.rows();
    out.cols = a.cols();
    const LaurentMatrix& num = a.num();
    if (a.is_laurent()) {
        out.lo = num.low();
        for (int k = num.low(); k <= num.high(); ++k) out.c.push_back(num.coeff(k));
        return out;
    }

    PolyRoots pr = find_roots(a.den());
    std::vector<cplx> inner, outer_inv;
    cplx s = 1.0 / pr.lead;
    double rho = 0.0;
    for (cplx z : pr.roots) {
        double r = std::abs(z);
        if (std::abs(r - 1.0) <= tol.circle) fail(ErrorKind::NotInvertibleOnCircle, "pole on the unit circle");
        if (r < 1.0) {
            inner.push_back(z);
            rho = std::max(rho, r);
        } else {
            outer_inv.push_back(1.0 / z);
            s /= -z;
            rho = std::max(rho, 1.0 / r);
        }
    }
    const int shift = pr.zero_order + int(inner.size());

    int K = 64;
    std::vector<cplx> alpha, beta;
    for (;;) {
        alpha = reciprocal_series(inner, K);
        beta = reciprocal_series(outer_inv, K);
        if ((settled(alpha) && settled(beta)) || K >= 8192) break;
        K *= 2;
    }

    // 1/den = s * t^{-shift} * sum_m gamma_m t^m
    std::vector<cplx> gamma(std::size_t(2 * K - 1), 0.0);
    for (int m = -(K - 1); m <= K - 1; ++m) {
        cplx acc = 0.0;
        for (int k = std::max(0, -m); k < K && m + k < K; ++k) acc += alpha[k] * beta[std::size_t(m + k)];
        gamma[std::size_t(m + K - 1)] = s * acc;
    }

    const int glo = -(K - 1) - shift;
    out.lo = num.low() + glo;
    const int span = (num.high() - num.low()) + int(gamma.size());
    out.c.assign(std::size_t(span), CMatrix::Zero(out.rows, out.cols));
    for (int p = num.low(); p <= num.high(); ++p) {
        CMatrix np = num.coeff(p);
        if (np.isZero(0.0)) continue;
        for (std::size_t g = 0; g < gamma.size(); ++g) out.c[std::size_t(p - num.low()) + g] += np * gamma[g];
    }

    double peak = 0.0;
    for (const auto& m : out.c) peak = std::max(peak, m.norm());
    double dropped = 0.0;
    while (out.c.size() > 1 && out.c.back().norm() < 1e-17 * peak) {
        dropped += out.c.back().norm();
        out.c.pop_back();
    }
    while (out.c.size() > 1 && out.c.front().norm() < 1e-17 * peak) {
        dropped += out.c.front().norm();
        out.c.erase(out.c.begin());
        ++out.lo;
    }
    double edge = std::max(std::abs(alpha.back()), std::abs(beta.back()));
    double num_l1 = 0.0;
    for (int p = num.low(); p <= num.high(); ++p) num_l1 += num.coeff(p).norm();
    out.truncation = dropped + std::abs(s) * num_l1 * edge * (rho < 1.0 ? 1.0 / (1.0 - rho) : 1.0);
    return out;
}

CoefficientTable fourier_coeffs(const RationalMatrixFunction& a, int lo, int hi, const Tolerances& tol) {
    if (hi < lo) fail(ErrorKind::InputError, "empty coefficient window");
    FourierSeries f = expand_symbol(a, tol);
    CoefficientTable t;
    t.lo = lo;
    for (int k = lo; k <= hi; ++k) t.c.push_back(f.at(k));
    t.tail_bound = f.truncation;
    for (int k = f.lo; k <= f.hi(); ++k)
        if (k < lo || k > hi) t.tail_bound += f.c[std::size_t(k - f.lo)].norm();
    return t;
}

}  // namespace whflip
