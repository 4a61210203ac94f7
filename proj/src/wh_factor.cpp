#include "whflip/wh_factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "whflip/errors.hpp"

namespace whflip {

RationalMatrixFunction WHFactorization::middle() const {
    std::vector<LaurentPoly> d;
    for (int k : partial_indices) d.push_back(LaurentPoly::monomial(k));
    return RationalMatrixFunction(LaurentMatrix::diagonal(d));
}

RationalMatrixFunction WHFactorization::product() const { return minus_factor * middle() * plus_factor; }

// ---------------------------------------------------------------- scalar splitting

PolySplit split_poly(const LaurentPoly& p, const Tolerances& tol) {
    if (p.is_zero()) fail(ErrorKind::NotInvertibleOnCircle, "zero function");
    PolyRoots pr = find_roots(p);
    std::vector<cplx> roots = cluster_roots(pr.roots);
    std::vector<cplx> outer;
    int inner = 0;
    for (cplx z : roots) {
        double r = std::abs(z);
        if (std::abs(r - 1.0) <= tol.circle) fail(ErrorKind::NotInvertibleOnCircle, "root on the unit circle");
        if (r < 1.0)
            ++inner;
        else
            outer.push_back(z);
    }
    PolySplit s;
    s.kappa = pr.zero_order + inner;
    cplx scale = 1.0;
    LaurentPoly rest = p;
    for (cplx z : outer) {
        rest = divide_linear(rest, z);
        scale *= -z;
    }
    s.minus = (scale * rest.shifted(-s.kappa)).normalized();
    cplx lead = 1.0;
    for (cplx z : outer) lead /= -z;
    s.plus = outer.empty() ? LaurentPoly(1.0) : poly_from_roots(outer, lead);
    return s;
}

ScalarSplit split_scalar(const RationalMatrixFunction& r, const Tolerances& tol) {
    if (r.rows() != 1 || r.cols() != 1) fail(ErrorKind::ShapeMismatch, "split_scalar expects a 1x1 symbol");
    PolySplit n = split_poly(r.num()(0, 0), tol);
    PolySplit d = split_poly(r.den(), tol);
    return {RationalMatrixFunction(n.minus) * inverse(RationalMatrixFunction(d.minus)), n.kappa - d.kappa,
            RationalMatrixFunction(n.plus) * inverse(RationalMatrixFunction(d.plus))};
}

// ---------------------------------------------------------------- membership

bool in_plus_group(const RationalMatrixFunction& a, const Tolerances& tol) {
    if (!a.is_square()) return false;
    for (cplx z : find_roots(a.den()).roots)
        if (std::abs(z) <= 1.0 + tol.circle) return false;
    if (!a.num().is_zero() && a.num().low() < 0) return false;
    PolyRoots pr = find_roots(a.num().det());
    if (pr.lead == 0.0 || pr.zero_order != 0) return false;
    for (cplx z : pr.roots)
        if (std::abs(z) <= 1.0 + tol.circle) return false;
    return true;
}

bool in_minus_group(const RationalMatrixFunction& a, const Tolerances& tol) { return in_plus_group(a.tilde(), tol); }

// ---------------------------------------------------------------- matrix polynomial factorization

namespace {

struct PolyFactor {
    LaurentMatrix minus, plus;
    std::vector<int> indices;
};

CVector smallest_right_singular(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().col(m.cols() - 1);
}

int column_degree(const LaurentMatrix& q, int j) {
    int d = std::numeric_limits<int>::min();
    for (int i = 0; i < q.rows(); ++i)
        if (!q(i, j).is_zero()) d = std::max(d, q(i, j).high());
    return d;
}

// Drop coefficients that are negligible against the whole column.
void clean_column(LaurentMatrix& q, int j) {
    double peak = 0.0;
    for (int i = 0; i < q.rows(); ++i) peak = std::max(peak, q(i, j).max_abs());
    for (int i = 0; i < q.rows(); ++i) q(i, j) = q(i, j).normalized(1e1 * peak);
}

PolyFactor factor_laurent(const LaurentMatrix& p, const Tolerances& tol) {
    const int n = p.rows();
    LaurentMatrix q = p.normalized(1e2 * p.max_abs());
    const int s = q.low();
    q = q.shifted(-s);
    LaurentMatrix right = LaurentMatrix::identity(n);

    // Peel off the zeros of det q outside the closed disk on the right.
    // Rounding noise in the top coefficients would show up as huge spurious roots.
    LaurentPoly dq = q.det();
    if (dq.is_zero()) fail(ErrorKind::NotInvertibleOnCircle, "determinant vanishes identically");
    {
        std::map<int, cplx> cs = dq.coeffs();
        const double peak = dq.max_abs();
        while (cs.size() > 1 && std::abs(cs.rbegin()->second) < 1e-10 * peak) cs.erase(std::prev(cs.end()));
        dq = LaurentPoly(std::move(cs));
    }
    PolyRoots pr = find_roots(dq);
    std::vector<cplx> roots = cluster_roots(pr.roots);
    int peeled = 0;
    for (cplx z : roots) {
        double r = std::abs(z);
        if (std::abs(r - 1.0) <= tol.circle) fail(ErrorKind::NotInvertibleOnCircle, "determinant vanishes on the circle");
        if (r < 1.0) continue;
        ++peeled;
        CVector u = smallest_right_singular(q.evaluate(z));
        int k = 0;
        u.cwiseAbs().maxCoeff(&k);
        for (int i = 0; i < n; ++i) {
            LaurentPoly acc;
            for (int j = 0; j < n; ++j) acc += u(j) * q(i, j);
            q(i, k) = divide_linear(acc, z);
        }
        clean_column(q, k);
        CMatrix sinv = CMatrix::Identity(n, n);
        CVector w = u;
        w(k) -= 1.0;
        sinv.col(k) -= w / u(k);
        LaurentMatrix e = LaurentMatrix::identity(n);
        e(k, k) = LaurentPoly(std::map<int, cplx>{{0, -z}, {1, 1.0}});
        right = e * (sinv * right);
    }

    // Column reduction of what is left; its determinant has zeros inside the disk only.
    std::vector<int> deg(n);
    int budget = 0;
    for (int j = 0; j < n; ++j) {
        clean_column(q, j);
        deg[j] = column_degree(q, j);
        if (deg[j] == std::numeric_limits<int>::min()) fail(ErrorKind::FactorizationFailed, "zero column");
        budget += deg[j] + 1;
    }
    // A column reduced matrix has column degrees summing to deg det, which is known from the roots.
    const int target = dq.high() - peeled;
    for (int iter = 0;; ++iter) {
        if (iter > budget + n) fail(ErrorKind::FactorizationFailed, "column reduction did not terminate");
        const int total = std::accumulate(deg.begin(), deg.end(), 0);
        CMatrix hc(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) hc(i, j) = q(i, j).coeff(deg[j]);
        Eigen::JacobiSVD<CMatrix> svd(hc, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (total < target) fail(ErrorKind::FactorizationFailed, "column degrees fell below the determinant degree");
        if (total == target) {
            if (sv(n - 1) <= tol.rank * sv(0)) fail(ErrorKind::FactorizationFailed, "leading coefficient matrix is singular");
            break;
        }
        // Pick the column whose leading coefficients are best explained by columns of no larger degree.
        const double scale = sv(0);
        int j = -1;
        double best = 0.0;
        CVector x_best;
        std::vector<int> basis_best;
        for (int cand = 0; cand < n; ++cand) {
            std::vector<int> basis;
            for (int i = 0; i < n; ++i)
                if (i != cand && deg[i] <= deg[cand]) basis.push_back(i);
            CVector x = CVector::Zero(Eigen::Index(basis.size()));
            CVector res = hc.col(cand);
            if (!basis.empty()) {
                CMatrix hb(n, Eigen::Index(basis.size()));
                for (std::size_t b = 0; b < basis.size(); ++b) hb.col(Eigen::Index(b)) = hc.col(basis[b]);
                Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(hb);
                cod.setThreshold(tol.rank);
                x = cod.solve(hc.col(cand));
                res -= hb * x;
            }
            const double r = res.norm() / scale;
            if (j < 0 || r < best - 1e-14 || (r <= best + 1e-14 && deg[cand] > deg[j])) {
                j = cand;
                best = r;
                x_best = x;
                basis_best = basis;
            }
        }
        LaurentMatrix v = LaurentMatrix::identity(n), vinv = LaurentMatrix::identity(n);
        std::vector<bool> used(n, false);
        for (std::size_t b = 0; b < basis_best.size(); ++b) {
            int i = basis_best[b];
            if (x_best(Eigen::Index(b)) == 0.0) continue;
            used[i] = true;
            LaurentPoly m = LaurentPoly::monomial(deg[j] - deg[i], -x_best(Eigen::Index(b)));
            v(i, j) = m;
            vinv(i, j) = -m;
        }
        for (int r = 0; r < n; ++r) {
            LaurentPoly acc = q(r, j);
            for (int i = 0; i < n; ++i)
                if (i != j && used[i]) acc += v(i, j) * q(r, i);
            std::map<int, cplx> cs = acc.coeffs();
            cs.erase(deg[j]);
            q(r, j) = LaurentPoly(std::move(cs));
        }
        clean_column(q, j);
        deg[j] = column_degree(q, j);
        if (deg[j] == std::numeric_limits<int>::min()) fail(ErrorKind::FactorizationFailed, "column vanished");
        right = vinv * right;
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return deg[a] < deg[b]; });
    PolyFactor out{LaurentMatrix(n, n), LaurentMatrix(n, n), {}};
    for (int c = 0; c < n; ++c) {
        int j = order[c];
        for (int i = 0; i < n; ++i) {
            out.minus(i, c) = q(i, j).shifted(-deg[j]);
            out.plus(c, i) = right(j, i);
        }
        out.indices.push_back(deg[j] + s);
    }
    return out;
}

// ---------------------------------------------------------------- refinement on the circle

using Grid = std::vector<CMatrix>;

int wrap(int k, int N) { return ((k % N) + N) % N; }

Grid to_grid(const LaurentMatrix& a, int N, Eigen::FFT<double>& fft) {
    const int n = a.rows(), m = a.cols();
    Grid g(static_cast<std::size_t>(N), CMatrix::Zero(n, m));
    std::vector<cplx> c(static_cast<std::size_t>(N)), v;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            std::fill(c.begin(), c.end(), 0.0);
            for (const auto& [k, x] : a(i, j).coeffs()) c[std::size_t(wrap(k, N))] += x;
            fft.inv(v, c);
            for (int t = 0; t < N; ++t) g[std::size_t(t)](i, j) = v[std::size_t(t)] * double(N);
        }
    return g;
}

// Coefficients of entry (i, j) of a grid function, index k stored at k mod N.
std::vector<cplx> entry_coeffs(const Grid& g, int i, int j, Eigen::FFT<double>& fft) {
    std::vector<cplx> v(g.size()), c;
    for (std::size_t t = 0; t < g.size(); ++t) v[t] = g[t](i, j);
    fft.fwd(c, v);
    for (auto& x : c) x /= double(g.size());
    return c;
}

std::vector<cplx> grid_of(const std::vector<cplx>& c, Eigen::FFT<double>& fft) {
    std::vector<cplx> v;
    fft.inv(v, c);
    for (auto& x : v) x *= double(c.size());
    return v;
}

// Newton steps on F = M D P with the supports of M (powers -lo..0) and P (0..hi) held fixed.
// The correction solves X D + D Y = M^{-1} (F - M D P) P^{-1} with X minus-type and Y plus-type.
void refine(const LaurentMatrix& f, PolyFactor& pf) {
    const int n = f.rows();
    const int mlo = std::min(0, pf.minus.low()), phi = std::max(0, pf.plus.high());
    const int span = (f.high() - f.low()) + (phi - mlo);
    int N = 2048;
    while (N < 8 * span) N *= 2;
    Eigen::FFT<double> fft;
    const Grid fg = to_grid(f, N, fft);
    double fscale = 0.0;
    for (const auto& m : fg) fscale = std::max(fscale, m.norm());

    auto residual = [&](const Grid& mg, const Grid& pg, Grid* e) {
        double worst = 0.0;
        for (int t = 0; t < N; ++t) {
            cplx z = std::polar(1.0, 2.0 * std::numbers::pi * t / N);
            CMatrix dp = pg[std::size_t(t)];
            for (int i = 0; i < n; ++i) dp.row(i) *= std::pow(z, pf.indices[std::size_t(i)]);
            CMatrix r = fg[std::size_t(t)] - mg[std::size_t(t)] * dp;
            worst = std::max(worst, r.norm());
            if (e) (*e)[std::size_t(t)] = r;
        }
        return worst;
    };

    Grid mg = to_grid(pf.minus, N, fft), pg = to_grid(pf.plus, N, fft), eg(static_cast<std::size_t>(N));
    double err = residual(mg, pg, &eg);
    for (int it = 0; it < 8 && err > 1e-15 * fscale; ++it) {
        Grid rg(static_cast<std::size_t>(N));
        for (int t = 0; t < N; ++t) {
            const auto& m = mg[std::size_t(t)];
            CMatrix left = m.partialPivLu().solve(eg[std::size_t(t)]);
            rg[std::size_t(t)] = pg[std::size_t(t)].transpose().partialPivLu().solve(left.transpose()).transpose();
        }
        Grid xg(static_cast<std::size_t>(N), CMatrix::Zero(n, n)), yg(static_cast<std::size_t>(N), CMatrix::Zero(n, n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int ki = pf.indices[std::size_t(i)], kj = pf.indices[std::size_t(j)];
                std::vector<cplx> r = entry_coeffs(rg, i, j, fft);
                std::vector<cplx> x(static_cast<std::size_t>(N), 0.0), y(static_cast<std::size_t>(N), 0.0);
                for (int k = -N / 2; k < N / 2; ++k) {
                    cplx v = r[std::size_t(wrap(k, N))];
                    if (k <= kj) x[std::size_t(wrap(k - kj, N))] = v;
                    else if (k >= ki) y[std::size_t(wrap(k - ki, N))] = v;
                }
                std::vector<cplx> xv = grid_of(x, fft), yv = grid_of(y, fft);
                for (int t = 0; t < N; ++t) {
                    xg[std::size_t(t)](i, j) = xv[std::size_t(t)];
                    yg[std::size_t(t)](i, j) = yv[std::size_t(t)];
                }
            }
        Grid dm(static_cast<std::size_t>(N)), dp(static_cast<std::size_t>(N));
        for (int t = 0; t < N; ++t) {
            dm[std::size_t(t)] = mg[std::size_t(t)] * xg[std::size_t(t)];
            dp[std::size_t(t)] = yg[std::size_t(t)] * pg[std::size_t(t)];
        }
        LaurentMatrix m2 = pf.minus, p2 = pf.plus;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<cplx> cm = entry_coeffs(dm, i, j, fft), cp = entry_coeffs(dp, i, j, fft);
                std::map<int, cplx> em = m2(i, j).coeffs(), ep = p2(i, j).coeffs();
                for (int k = mlo; k <= 0; ++k) em[k] += cm[std::size_t(wrap(k, N))];
                for (int k = 0; k <= phi; ++k) ep[k] += cp[std::size_t(wrap(k, N))];
                m2(i, j) = LaurentPoly(std::move(em)).normalized();
                p2(i, j) = LaurentPoly(std::move(ep)).normalized();
            }
        Grid mg2 = to_grid(m2, N, fft), pg2 = to_grid(p2, N, fft), eg2(static_cast<std::size_t>(N));
        double err2 = residual(mg2, pg2, &eg2);
        if (!(err2 < 0.5 * err)) break;
        pf.minus = std::move(m2);
        pf.plus = std::move(p2);
        mg = std::move(mg2);
        pg = std::move(pg2);
        eg = std::move(eg2);
        err = err2;
    }
}

}  // namespace

namespace {

WHFactorization factor_direct(const RationalMatrixFunction& f, const Tolerances& tol) {
    PolySplit d = split_poly(f.den(), tol);
    PolyFactor pf = factor_laurent(f.num(), tol);
    refine(f.num(), pf);
    WHFactorization out;
    out.minus_factor = RationalMatrixFunction(pf.minus, d.minus);
    out.plus_factor = RationalMatrixFunction(pf.plus, d.plus);
    for (int k : pf.indices) out.partial_indices.push_back(k - d.kappa);

    WHReport rep = verify_wh(out, f, tol);
    if (!rep.pass) {
        std::ostringstream os;
        os << "verification failed (residual " << rep.residual << ")";
        for (const auto& s : rep.issues) os << "; " << s;
        fail(ErrorKind::FactorizationFailed, os.str());
    }
    return out;
}

}  // namespace

WHFactorization factor_matrix(const RationalMatrixFunction& f, const Tolerances& tol) {
    if (!f.is_square()) fail(ErrorKind::ShapeMismatch, "factor_matrix expects a square symbol");
    if (!f.valid(tol)) fail(ErrorKind::NotInvertibleOnCircle, "pole on the unit circle");
    try {
        return factor_direct(f, tol);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::FactorizationFailed) throw;
        // Clustered roots (a common denominator raised to a power shows up in det num) can
        // wreck the column reduction. tilde(F)^T swaps the roles of the two half planes:
        // if tilde(F)^T = M L P then F = tilde(P)^T tilde(L) tilde(M)^T.
        WHFactorization g;
        try {
            g = factor_direct(f.tilde().transpose(), tol);
        } catch (const Error&) {
            throw e;
        }
        const int n = f.rows();
        CMatrix rev = CMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) rev(i, n - 1 - i) = 1.0;
        WHFactorization out;
        out.minus_factor = g.plus_factor.tilde().transpose() * RationalMatrixFunction(LaurentMatrix::constant(rev));
        out.plus_factor = RationalMatrixFunction(LaurentMatrix::constant(rev)) * g.minus_factor.tilde().transpose();
        for (auto it = g.partial_indices.rbegin(); it != g.partial_indices.rend(); ++it) out.partial_indices.push_back(-*it);
        WHReport rep = verify_wh(out, f, tol);
        if (!rep.pass) throw e;
        return out;
    }
}

WHReport verify_wh(const WHFactorization& fact, const RationalMatrixFunction& f, const Tolerances& tol) {
    WHReport r;
    const int n = f.rows();
    if (fact.minus_factor.rows() != n || fact.plus_factor.rows() != n || int(fact.partial_indices.size()) != n)
        fail(ErrorKind::ShapeMismatch, "factorization and symbol sizes differ");
    try {
        r.residual = grid_residual(fact.product(), f, tol.grid);
    } catch (const Error& e) {
        r.residual = std::numeric_limits<double>::infinity();
        r.issues.push_back(e.what());
    }
    r.minus_ok = in_minus_group(fact.minus_factor, tol);
    r.plus_ok = in_plus_group(fact.plus_factor, tol);
    r.index_sum = std::accumulate(fact.partial_indices.begin(), fact.partial_indices.end(), 0);
    try {
        r.winding = det_and_winding(f, tol).wind;
    } catch (const Error& e) {
        r.issues.push_back(e.what());
        r.winding = r.index_sum + 1;
    }
    if (!(r.residual <= tol.resid)) r.issues.push_back("residual above tolerance");
    if (!r.minus_ok) r.issues.push_back("minus factor outside the minus group");
    if (!r.plus_ok) r.issues.push_back("plus factor outside the plus group");
    if (r.index_sum != r.winding) r.issues.push_back("index sum differs from winding number");
    if (!std::is_sorted(fact.partial_indices.begin(), fact.partial_indices.end()))
        r.issues.push_back("indices not ascending");
    r.pass = r.issues.empty();
    return r;
}

IndexBlocks index_blocks(const std::vector<int>& idx) {
    IndexBlocks b;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i == 0 || idx[i] != idx[i - 1]) {
            b.offsets.push_back(int(i));
            b.values.push_back(idx[i]);
            b.sizes.push_back(0);
        }
        ++b.sizes.back();
    }
    return b;
}

WHFactorization perturb_factorization(const WHFactorization& fact, const LaurentMatrix& u) {
    const int n = int(fact.partial_indices.size());
    if (u.rows() != n || u.cols() != n) fail(ErrorKind::ShapeMismatch, "perturbation size");
    IndexBlocks b = index_blocks(fact.partial_indices);
    LaurentMatrix v(n, n);
    for (std::size_t j = 0; j < b.sizes.size(); ++j)
        for (std::size_t k = 0; k < b.sizes.size(); ++k)
            for (int r = 0; r < b.sizes[j]; ++r)
                for (int c = 0; c < b.sizes[k]; ++c) {
                    int i = b.offsets[j] + r, l = b.offsets[k] + c;
                    const LaurentPoly& e = u(i, l);
                    bool ok = k > j ? (e.is_zero() || (e.low() >= 0 && e.high() <= b.values[k] - b.values[j]))
                                    : (k == j ? (e.is_zero() || (e.low() == 0 && e.high() == 0)) : e.is_zero());
                    if (!ok) fail(ErrorKind::InputError, "perturbation is not of block triangular shape");
                    v(i, l) = e.shifted(b.values[j] - b.values[k]);
                }
    WHFactorization out;
    out.minus_factor = fact.minus_factor * RationalMatrixFunction(v);
    out.plus_factor = inverse(RationalMatrixFunction(u)) * fact.plus_factor;
    out.partial_indices = fact.partial_indices;
    return out;
}

LaurentMatrix random_block_triangular(const std::vector<int>& idx, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto draw = [&] { return cplx(uni(rng), uni(rng)); };
    const int n = int(idx.size());
    IndexBlocks b = index_blocks(idx);
    LaurentMatrix u(n, n);
    for (std::size_t j = 0; j < b.sizes.size(); ++j) {
        // Diagonal block: identity plus a small random part keeps it well conditioned.
        for (int r = 0; r < b.sizes[j]; ++r)
            for (int c = 0; c < b.sizes[j]; ++c)
                u(b.offsets[j] + r, b.offsets[j] + c) = LaurentPoly((r == c ? cplx(1.0) : cplx(0.0)) + 0.3 * draw());
        for (std::size_t k = j + 1; k < b.sizes.size(); ++k)
            for (int r = 0; r < b.sizes[j]; ++r)
                for (int c = 0; c < b.sizes[k]; ++c) {
                    std::map<int, cplx> m;
                    for (int d = 0; d <= b.values[k] - b.values[j]; ++d) m[d] = 0.5 * draw();
                    u(b.offsets[j] + r, b.offsets[k] + c) = LaurentPoly(std::move(m));
                }
    }
    return u;
}

WHFactorization perturb_factorization(const WHFactorization& fact, std::uint64_t seed) {
    return perturb_factorization(fact, random_block_triangular(fact.partial_indices, seed));
}

}  // namespace whflip
