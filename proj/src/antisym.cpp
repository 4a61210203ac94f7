#include "whflip/antisym.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "whflip/errors.hpp"

namespace whflip {

RationalMatrixFunction middle_factor(const std::vector<CharPair>& pairs) {
    std::vector<LaurentPoly> d;
    for (const auto& p : pairs) d.push_back(LaurentPoly::monomial(p.kappa, double(p.rho)));
    return RationalMatrixFunction(LaurentMatrix::diagonal(d));
}

RationalMatrixFunction AntisymFactorization::product() const {
    return minus_factor * middle() * inverse(minus_factor.tilde());
}

double antisymmetry_defect(const RationalMatrixFunction& f) {
    if (!f.is_square()) fail(ErrorKind::ShapeMismatch, "antisymmetry check needs a square symbol");
    const int n = f.rows();
    LaurentMatrix lhs = f.num() * f.num().tilde();
    LaurentPoly dd = f.den() * f.den().tilde();
    LaurentMatrix rhs = dd * LaurentMatrix::identity(n);
    double scale = std::max(lhs.max_abs(), rhs.max_abs());
    if (scale == 0.0) return 0.0;
    return (lhs - rhs).max_abs() / scale;
}

namespace {

constexpr double kPi = std::numbers::pi;

cplx grid_point(int m, int M) { return std::polar(1.0, 2.0 * kPi * m / M); }

// Sup over a grid of |F-(z) D(z) F-(1/z)^{-1} - F(z)|, relative to sup |F|.
double antisym_residual(const RationalMatrixFunction& fm, const std::vector<CharPair>& pairs,
                        const RationalMatrixFunction& f, int points) {
    double worst = 0.0, scale = 0.0;
    const int n = f.rows();
    for (int m = 0; m < points; ++m) {
        cplx z = grid_point(m, points);
        CMatrix d = CMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = double(pairs[std::size_t(i)].rho) * std::pow(z, pairs[std::size_t(i)].kappa);
        CMatrix right = fm.evaluate(1.0 / z).partialPivLu().solve(CMatrix::Identity(n, n));
        CMatrix fz = f.evaluate(z);
        worst = std::max(worst, (fm.evaluate(z) * d * right - fz).norm());
        scale = std::max(scale, fz.norm());
    }
    return scale > 0.0 ? worst / scale : worst;
}

double binomial_half(int m) {
    double c = 1.0;
    for (int i = 0; i < m; ++i) c *= (0.5 - i) / (i + 1);
    return c;
}

// Column basis of the range of a projector; nonzero singular values of a projector are >= 1.
CMatrix projector_range(const CMatrix& p) {
    Eigen::JacobiSVD<CMatrix> svd(p, Eigen::ComputeFullU);
    int r = 0;
    while (r < p.rows() && svd.singularValues()(r) > 0.5) ++r;
    return svd.matrixU().leftCols(r);
}

void require_antisymmetric(const RationalMatrixFunction& f, const Tolerances& tol) {
    double defect = antisymmetry_defect(f);
    if (defect > tol.antisym) {
        std::ostringstream os;
        os << "F * tilde(F) differs from I (relative defect " << defect << ")";
        fail(ErrorKind::NotAntisymmetric, os.str());
    }
}

}  // namespace

AntisymFactorization antisym_factor(const RationalMatrixFunction& f, const Tolerances& tol) {
    require_antisymmetric(f, tol);
    return antisym_factor(f, factor_matrix(f, tol), tol);
}

AntisymFactorization antisym_factor(const RationalMatrixFunction& f, const WHFactorization& wh, const Tolerances& tol) {
    require_antisymmetric(f, tol);
    const int n = f.rows();
    AntisymTrace tr;
    tr.indices = wh.partial_indices;
    if (!std::is_sorted(tr.indices.begin(), tr.indices.end()))
        fail(ErrorKind::InputError, "partial indices must be ascending");
    tr.blocks = index_blocks(tr.indices);
    const auto& bl = tr.blocks;
    const int R = int(bl.sizes.size());
    const int spread = tr.indices.back() - tr.indices.front();

    // U = F+ tilde(F-) sampled on the circle; its coefficients must fit the block triangular shape.
    int M = 64;
    while (M < 4 * (spread + 1)) M *= 2;
    std::vector<CMatrix> samples(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        cplx z = grid_point(m, M);
        samples[std::size_t(m)] = wh.plus_factor.evaluate(z) * wh.minus_factor.evaluate(1.0 / z);
    }
    auto coeff = [&](int k) {
        CMatrix c = CMatrix::Zero(n, n);
        for (int m = 0; m < M; ++m) c += samples[std::size_t(m)] * std::conj(std::pow(grid_point(m, M), k));
        return CMatrix(c / double(M));
    };
    std::vector<CMatrix> uc(static_cast<std::size_t>(M));
    double peak = 0.0;
    for (int k = -M / 2; k < M / 2; ++k) {
        uc[std::size_t(k + M / 2)] = coeff(k);
        peak = std::max(peak, uc[std::size_t(k + M / 2)].cwiseAbs().maxCoeff());
    }
    tr.u = LaurentMatrix(n, n);
    double leftover = 0.0;
    for (int bj = 0; bj < R; ++bj)
        for (int bk = 0; bk < R; ++bk) {
            const int top = bj <= bk ? bl.values[std::size_t(bk)] - bl.values[std::size_t(bj)] : -1;
            for (int k = -M / 2; k < M / 2; ++k) {
                const CMatrix& c = uc[std::size_t(k + M / 2)];
                for (int i = 0; i < bl.sizes[std::size_t(bj)]; ++i)
                    for (int j = 0; j < bl.sizes[std::size_t(bk)]; ++j) {
                        int r = bl.offsets[std::size_t(bj)] + i, s = bl.offsets[std::size_t(bk)] + j;
                        if (k >= 0 && k <= top) {
                            std::map<int, cplx> e = tr.u(r, s).coeffs();
                            e[k] = c(r, s);
                            tr.u(r, s) = LaurentPoly(std::move(e));
                        } else {
                            leftover = std::max(leftover, std::abs(c(r, s)));
                        }
                    }
            }
        }
    tr.u = tr.u.normalized(peak);
    tr.u_leftover = peak > 0.0 ? leftover / peak : leftover;
    if (!(tr.u_leftover <= tol.split)) {
        std::ostringstream os;
        os << "F+ tilde(F-) is not block triangular (leftover " << tr.u_leftover << ")";
        fail(ErrorKind::FactorizationFailed, os.str());
    }

    // Constant diagonal blocks X_j must be involutions.
    std::vector<CMatrix> inv_blocks;
    for (int b = 0; b < R; ++b) {
        const int o = bl.offsets[std::size_t(b)], l = bl.sizes[std::size_t(b)];
        CMatrix xj = tr.u.block(o, o, l, l).coeff(0);
        double err = (xj * xj - CMatrix::Identity(l, l)).norm() / std::max(1.0, xj.norm());
        if (!(err <= tol.invol)) {
            std::ostringstream os;
            os << "diagonal block " << b << " is not an involution (defect " << err << ")";
            fail(ErrorKind::FactorizationFailed, os.str());
        }
        tr.x.push_back(xj);
        inv_blocks.push_back(xj.inverse());
    }

    // N1 = X X0^{-1} - I, block (j,k) = t^{kbar_j - kbar_k} U_jk A_kk^{-1} above the diagonal.
    tr.n1 = LaurentMatrix(n, n);
    for (int bj = 0; bj < R; ++bj)
        for (int bk = bj + 1; bk < R; ++bk) {
            const int oj = bl.offsets[std::size_t(bj)], ok = bl.offsets[std::size_t(bk)];
            LaurentMatrix blk = tr.u.block(oj, ok, bl.sizes[std::size_t(bj)], bl.sizes[std::size_t(bk)]) *
                                inv_blocks[std::size_t(bk)];
            tr.n1.set_block(oj, ok, blk.shifted(bl.values[std::size_t(bj)] - bl.values[std::size_t(bk)]));
        }
    tr.sqrt_n1 = LaurentMatrix::identity(n);
    LaurentMatrix power = LaurentMatrix::identity(n);
    for (int m = 1; m < R; ++m) {
        power = power * tr.n1;
        tr.sqrt_n1 = tr.sqrt_n1 + LaurentPoly(binomial_half(m)) * power;
    }

    // Diagonalize each X_j, eigenvalue -1 first so the pairs come out ascending in (kappa, rho).
    tr.t = CMatrix::Zero(n, n);
    std::vector<CharPair> pairs;
    for (int b = 0; b < R; ++b) {
        const int o = bl.offsets[std::size_t(b)], l = bl.sizes[std::size_t(b)];
        const CMatrix& xj = tr.x[std::size_t(b)];
        CMatrix id = CMatrix::Identity(l, l);
        CMatrix minus = projector_range((id - xj) / 2.0), plus = projector_range((id + xj) / 2.0);
        if (minus.cols() + plus.cols() != l) fail(ErrorKind::FactorizationFailed, "involution eigenspaces do not span");
        tr.t.block(o, o, l, minus.cols()) = minus;
        tr.t.block(o, o + minus.cols(), l, plus.cols()) = plus;
        for (int i = 0; i < minus.cols(); ++i) pairs.push_back({-1, bl.values[std::size_t(b)]});
        for (int i = 0; i < plus.cols(); ++i) pairs.push_back({1, bl.values[std::size_t(b)]});
    }

    AntisymFactorization out;
    out.minus_factor = RationalMatrixFunction(wh.minus_factor.num() * tr.sqrt_n1 * tr.t, wh.minus_factor.den());
    out.pairs = std::move(pairs);
    out.trace = std::move(tr);

    double res = antisym_residual(out.minus_factor, out.pairs, f, tol.grid);
    bool member = in_minus_group(out.minus_factor, tol);
    if (!(res <= tol.resid) || !member) {
        std::ostringstream os;
        os << "antisymmetric factorization failed verification (residual " << res << ")";
        if (!member) os << "; minus factor outside the minus group";
        fail(ErrorKind::FactorizationFailed, os.str());
    }
    return out;
}

SignatureCounts signature_counts(const std::vector<CharPair>& pairs) {
    SignatureCounts c;
    for (const auto& p : pairs) {
        bool even = p.kappa % 2 == 0;
        if (p.rho == 1) (even ? c.alpha : c.beta)++;
        else (even ? c.delta : c.gamma)++;
    }
    return c;
}

Signature involution_signature(const CMatrix& m, const Tolerances& tol) {
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    Signature s;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        cplx ev = es.eigenvalues()(i);
        if (std::abs(ev - 1.0) <= tol.split) ++s.plus;
        else if (std::abs(ev + 1.0) <= tol.split) ++s.minus;
        else fail(ErrorKind::SignatureMismatch, "eigenvalue away from +1 and -1");
    }
    return s;
}

bool check_signatures(const RationalMatrixFunction& f, const SignatureCounts& c, const Tolerances& tol) {
    Signature at1 = involution_signature(f.evaluate(1.0, tol), tol);
    Signature atm1 = involution_signature(f.evaluate(-1.0, tol), tol);
    return at1 == Signature{c.alpha + c.beta, c.gamma + c.delta} && atm1 == Signature{c.alpha + c.gamma, c.beta + c.delta};
}

RationalMatrixFunction build_middle_R(const std::vector<CharPair>& pairs, const InvolutionMatrix& w, RVariant variant,
                                      const Tolerances& tol) {
    const int n = w.size();
    if (int(pairs.size()) != n) fail(ErrorKind::ShapeMismatch, "pair count differs from the size of W");
    SignatureCounts c = signature_counts(pairs);
    Signature sw = involution_signature(w.matrix(), tol);
    if (sw.plus != c.alpha + c.beta || sw.plus != c.alpha + c.gamma || sw.minus != c.gamma + c.delta ||
        sw.minus != c.beta + c.delta)
        fail(ErrorKind::SignatureMismatch, "D(1), D(-1) and W are not similar");

    CMatrix id = CMatrix::Identity(n, n);
    CMatrix bp = projector_range((id + w.matrix()) / 2.0), bm = projector_range((id - w.matrix()) / 2.0);
    std::vector<int> even_p, even_m, odd_p, odd_m;
    for (int i = 0; i < n; ++i) {
        bool even = pairs[std::size_t(i)].kappa % 2 == 0;
        if (pairs[std::size_t(i)].rho == 1) (even ? even_p : odd_p).push_back(i);
        else (even ? even_m : odd_m).push_back(i);
    }

    // order[new] = original position; v holds the matching eigenvectors of W.
    std::vector<int> order;
    CMatrix v(n, n);
    int col = 0;
    for (std::size_t k = 0; k < even_p.size(); ++k) {
        order.push_back(even_p[k]);
        v.col(col++) = bp.col(Eigen::Index(k));
    }
    for (std::size_t k = 0; k < even_m.size(); ++k) {
        order.push_back(even_m[k]);
        v.col(col++) = bm.col(Eigen::Index(k));
    }
    for (std::size_t k = 0; k < odd_p.size(); ++k) {
        order.push_back(odd_p[k]);
        v.col(col++) = bp.col(Eigen::Index(even_p.size() + k));
        order.push_back(odd_m[k]);
        v.col(col++) = bm.col(Eigen::Index(even_m.size() + k));
    }

    // Block diagonal middle part in the new order.
    LaurentMatrix mid(n, n);
    std::size_t pos = 0;
    for (; pos < even_p.size() + even_m.size(); ++pos) {
        int k = pairs[std::size_t(order[pos])].kappa;
        mid(int(pos), int(pos)) = LaurentPoly::monomial(k / 2);
    }
    for (; pos < std::size_t(n); pos += 2) {
        int k3 = pairs[std::size_t(order[pos])].kappa, k4 = pairs[std::size_t(order[pos + 1])].kappa;
        LaurentPoly a = LaurentPoly::monomial((k3 - k4) / 2), b = LaurentPoly::monomial((k3 + k4) / 2);
        LaurentPoly cc = LaurentPoly::monomial(k4), one(1.0);
        LaurentMatrix r3(2, 2);
        r3(0, 0) = LaurentPoly(0.5) * (a + b);
        r3(0, 1) = LaurentPoly(0.5) * (a - b);
        r3(1, 0) = LaurentPoly(0.5) * (one - cc);
        r3(1, 1) = LaurentPoly(0.5) * (one + cc);
        if (variant == RVariant::reflected) {
            // tilde(R3)^{-1} = adj(tilde(R3)) / det(tilde(R3)), det R3 = b.
            LaurentMatrix rt = r3.tilde();
            r3 = LaurentMatrix(2, 2);
            r3(0, 0) = rt(1, 1);
            r3(1, 1) = rt(0, 0);
            r3(0, 1) = -rt(0, 1);
            r3(1, 0) = -rt(1, 0);
            r3 = b * r3;
        }
        mid.set_block(int(pos), int(pos), r3);
    }

    CMatrix perm = CMatrix::Zero(n, n);  // perm e_new = e_original
    for (int k = 0; k < n; ++k) perm(order[std::size_t(k)], k) = 1.0;

    if (variant == RVariant::standard) return RationalMatrixFunction(perm * mid * v.inverse());
    // tilde(R)^{-1} = V tilde(mid)^{-1} perm^T, and the diagonal part t^{k/2} is its own tilde inverse.
    return RationalMatrixFunction(v * mid * perm.transpose());
}

namespace {

double grid_product_residual(const std::vector<RationalMatrixFunction>& factors, const RationalMatrixFunction& target,
                             int points) {
    double worst = 0.0, scale = 0.0;
    for (int m = 0; m < points; ++m) {
        cplx z = grid_point(m, points);
        CMatrix p = factors.front().evaluate(z);
        for (std::size_t i = 1; i < factors.size(); ++i) p = p * factors[i].evaluate(z);
        CMatrix tz = target.evaluate(z);
        worst = std::max(worst, (p - tz).norm());
        scale = std::max(scale, tz.norm());
    }
    return scale > 0.0 ? worst / scale : worst;
}

}  // namespace

LeftAsymFactorization asym_factor_left(const RationalMatrixFunction& a, const InvolutionMatrix& w, const Tolerances& tol) {
    if (!a.is_square() || a.rows() != w.size()) fail(ErrorKind::ShapeMismatch, "A and W sizes differ");
    RationalMatrixFunction f = a * w.symbol() * inverse(a.tilde());
    AntisymFactorization af = antisym_factor(f, tol);
    LeftAsymFactorization out;
    out.pairs = af.pairs;
    out.a_minus = af.minus_factor;
    out.r = build_middle_R(af.pairs, w, RVariant::standard, tol);
    out.a_zero = inverse(out.r) * inverse(out.a_minus) * a;
    double res = grid_product_residual({out.a_minus, out.r, out.a_zero}, a, tol.grid);
    if (!(res <= tol.resid)) {
        std::ostringstream os;
        os << "A- R A0 does not reproduce A (residual " << res << ")";
        fail(ErrorKind::FactorizationFailed, os.str());
    }
    return out;
}

RightAsymFactorization asym_factor_right(const RationalMatrixFunction& a, const InvolutionMatrix& w,
                                         const Tolerances& tol) {
    if (!a.is_square() || a.rows() != w.size()) fail(ErrorKind::ShapeMismatch, "A and W sizes differ");
    RationalMatrixFunction g = inverse(a.tilde()) * w.symbol() * a;
    AntisymFactorization ag = antisym_factor(g, tol);
    RightAsymFactorization out;
    out.pairs = ag.pairs;
    RationalMatrixFunction gm_tilde = ag.minus_factor.tilde();
    out.a_plus = inverse(gm_tilde);
    out.r = build_middle_R(ag.pairs, w, RVariant::reflected, tol);
    out.a_zero = a * gm_tilde * inverse(out.r);
    double res = grid_product_residual({out.a_zero, out.r, out.a_plus}, a, tol.grid);
    if (!(res <= tol.resid)) {
        std::ostringstream os;
        os << "A0 R A+ does not reproduce A (residual " << res << ")";
        fail(ErrorKind::FactorizationFailed, os.str());
    }
    return out;
}

}  // namespace whflip
