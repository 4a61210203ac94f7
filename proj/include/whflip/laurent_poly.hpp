#pragma once

#include <complex>
#include <map>
#include <vector>

namespace whflip {

using cplx = std::complex<double>;

// Relative cutoff below which a coefficient is treated as rounding noise.
inline constexpr double kCoeffDrop = 1e-13;

// Finite sum  sum_k c_k t^k  with complex coefficients.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(cplx c);  // NOLINT: constants convert implicitly
    LaurentPoly(double c) : LaurentPoly(cplx(c)) {}  // NOLINT
    explicit LaurentPoly(std::map<int, cplx> coeffs);

    static LaurentPoly monomial(int k, cplx c = 1.0);

    const std::map<int, cplx>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_monomial() const { return c_.size() == 1; }
    int low() const;
    int high() const;
    cplx coeff(int k) const;
    double max_abs() const;
    double l1_norm() const;

    cplx operator()(cplx z) const;

    LaurentPoly tilde() const;
    LaurentPoly shifted(int k) const;
    // Symbol of the adjoint: on the circle, conj(p(t)).
    LaurentPoly adjoint() const;
    LaurentPoly conj_coeffs() const;

    // Drop coefficients below kCoeffDrop * max(scale, max_abs()).
    LaurentPoly normalized(double scale = 0.0) const;

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(cplx s);

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(cplx s, const LaurentPoly& a);
    friend LaurentPoly operator*(const LaurentPoly& a, cplx s) { return s * a; }

    // Coefficientwise distance, relative to the larger operand.
    friend double rel_distance(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }

private:
    std::map<int, cplx> c_;
};

// p(t) = lead * t^zero_order * prod (t - r_i), all r_i nonzero.
struct PolyRoots {
    cplx lead = 0.0;
    int zero_order = 0;
    std::vector<cplx> roots;
};

PolyRoots find_roots(const LaurentPoly& p);

// Replace members of numerically coalesced clusters by the cluster mean.
std::vector<cplx> cluster_roots(const std::vector<cplx>& roots, double rel = 1e-5);

// Divide by (t - z), discarding the remainder. Stable for either |z| <= 1 or |z| > 1.
LaurentPoly divide_linear(const LaurentPoly& p, cplx z);

LaurentPoly poly_from_roots(const std::vector<cplx>& roots, cplx lead = 1.0);

}  // namespace whflip
