#pragma once

#include <algorithm>
#include <limits>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "whflip/op_calculus.hpp"
#include "whflip/symbol.hpp"
#include "whflip/wh_factor.hpp"

namespace th {

using whflip::cplx;
using whflip::LaurentMatrix;
using whflip::LaurentPoly;
using whflip::RationalMatrixFunction;

inline LaurentPoly lp(std::initializer_list<std::pair<int, cplx>> terms) {
    std::map<int, cplx> m;
    for (const auto& [k, c] : terms) m[k] += c;
    return LaurentPoly(m);
}

inline LaurentPoly mono(int k, cplx c = 1.0) { return LaurentPoly::monomial(k, c); }

inline RationalMatrixFunction mat(std::initializer_list<std::initializer_list<LaurentPoly>> rows) {
    int r = int(rows.size());
    int c = int(rows.begin()->size());
    LaurentMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (const auto& e : row) m(i, j++) = e;
        ++i;
    }
    return RationalMatrixFunction(m);
}

inline RationalMatrixFunction scalar(const LaurentPoly& num, const LaurentPoly& den = LaurentPoly(1.0)) {
    LaurentMatrix m(1, 1);
    m(0, 0) = num;
    return RationalMatrixFunction(m, den);
}

// Winding number by accumulating the argument of f on a fine circle grid.
template <class F>
int argument_winding(F f, int points = 4096) {
    double total = 0.0;
    cplx prev = f(cplx(1.0, 0.0));
    for (int m = 1; m <= points; ++m) {
        cplx cur = f(std::polar(1.0, 2.0 * std::numbers::pi * m / points));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return int(std::lround(total / (2.0 * std::numbers::pi)));
}

// k-th Fourier coefficient by trapezoidal quadrature.
template <class F>
cplx quadrature_coeff(F f, int k, int points = 4096) {
    cplx s = 0.0;
    for (int m = 0; m < points; ++m) {
        cplx z = std::polar(1.0, 2.0 * std::numbers::pi * m / points);
        s += f(z) * std::pow(z, -k);
    }
    return s / double(points);
}

inline double max_abs(const whflip::CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Constant near I plus small negative powers, kept only if det has its roots inside |z| < 1 - margin.
inline RationalMatrixFunction random_minus(std::mt19937_64& rng, int n, int deg, double margin = 0.05) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        LaurentMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::map<int, cplx> c;
                c[0] = (i == j ? 1.0 : 0.0) + 0.4 * cplx(u(rng), u(rng));
                for (int k = 1; k <= deg; ++k) c[-k] = 0.35 * cplx(u(rng), u(rng));
                m(i, j) = LaurentPoly(c);
            }
        RationalMatrixFunction r(m);
        whflip::Tolerances tol;
        tol.circle = margin;
        if (whflip::in_minus_group(r, tol)) return r;
    }
}

inline RationalMatrixFunction random_laurent(std::mt19937_64& rng, int rows, int cols, int lo, int hi) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LaurentMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            std::map<int, cplx> c;
            for (int k = lo; k <= hi; ++k) c[k] = cplx(u(rng), u(rng));
            m(i, j) = LaurentPoly(c);
        }
    return RationalMatrixFunction(m);
}

// Rejection sampled until min |det a| over 256 circle points is at least min_det.
inline RationalMatrixFunction random_invertible(std::mt19937_64& rng, int n, int lo, int hi, double min_det = 0.1) {
    for (;;) {
        RationalMatrixFunction a = random_laurent(rng, n, n, lo, hi);
        double worst = std::numeric_limits<double>::infinity();
        for (int m = 0; m < 256; ++m)
            worst = std::min(worst, std::abs(a.evaluate(std::polar(1.0, 2.0 * std::numbers::pi * m / 256)).determinant()));
        if (worst >= min_det) return a;
    }
}

// Sup over the circle of |W a(1/z) W - a(z)| relative to sup |a|.
inline double bw_defect(const RationalMatrixFunction& a, const whflip::CMatrix& w, int points = 256) {
    double worst = 0.0, scale = 0.0;
    for (int m = 0; m < points; ++m) {
        cplx z = std::polar(1.0, 2.0 * std::numbers::pi * m / points);
        whflip::CMatrix az = a.evaluate(z);
        worst = std::max(worst, (w * a.evaluate(1.0 / z) * w - az).norm());
        scale = std::max(scale, az.norm());
    }
    return worst / scale;
}

inline whflip::FourierVec random_vec(std::mt19937_64& rng, int dim, int lo, int hi) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    whflip::FourierVec v(dim);
    for (int m = lo; m <= hi; ++m) {
        whflip::CVector x(dim);
        for (int c = 0; c < dim; ++c) x(c) = cplx(u(rng), u(rng));
        v.add(m, x);
    }
    return v;
}

// |X v - Y v| relative to the larger image and |v|.
inline double op_gap(const whflip::OperatorExpr& x, const whflip::OperatorExpr& y, const whflip::FourierVec& v) {
    auto a = whflip::apply_auto(x, v).v;
    auto b = whflip::apply_auto(y, v).v;
    double s = std::max({a.norm(), b.norm(), v.norm()});
    return (a - b).norm() / s;
}

}  // namespace th
