#include "whflip/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "whflip/errors.hpp"

namespace whflip {

// ---------------------------------------------------------------- splitting

SplittingEstimate sv_splitting(const OperatorExpr& x, const std::vector<int>& sizes, const Tolerances& tol) {
    if (sizes.empty()) fail(ErrorKind::InputError, "sv_splitting needs at least one section size");
    SplittingEstimate est;
    for (int n : sizes) {
        if (n <= 0) fail(ErrorKind::InputError, "section sizes must be positive");
        CMatrix sec = finite_section(x, n, tol);
        Eigen::BDCSVD<CMatrix> svd(sec);
        std::vector<double> sv(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
        // a rectangular section has implicit zero singular values
        const std::size_t full = std::size_t(std::max(sec.rows(), sec.cols()));
        while (sv.size() < full) sv.push_back(0.0);
        std::sort(sv.begin(), sv.end());
        const double smax = sv.back();
        const double thr = tol.split * smax;
        int count = 0;
        while (count < int(sv.size()) && sv[std::size_t(count)] < thr) ++count;

        // Gap between the zero cluster and the rest. With an empty cluster the threshold
        // itself stands in for the cluster ceiling.
        double gap = std::numeric_limits<double>::infinity();
        if (count < int(sv.size())) {
            double keep = sv[std::size_t(count)];
            double ceiling = count > 0 ? sv[std::size_t(count - 1)] : thr;
            if (ceiling > 0.0) gap = keep / ceiling;
        }
        est.sizes_used.push_back(n);
        est.counts.push_back(count);
        est.gap_ratios.push_back(gap);
        std::size_t show = std::min(sv.size(), std::size_t(count) + 4);
        est.smallest_singular_values.emplace_back(sv.begin(), sv.begin() + std::ptrdiff_t(show));
    }
    for (int c : est.counts)
        if (c != est.counts.front()) {
            std::ostringstream os;
            os << "splitting counts differ between section sizes:";
            for (std::size_t i = 0; i < est.counts.size(); ++i) os << " " << est.sizes_used[i] << "->" << est.counts[i];
            fail(ErrorKind::Inconclusive, os.str());
        }
    est.total_defect = est.counts.front();
    est.confident = est.sizes_used.size() >= 2 &&
                    std::all_of(est.gap_ratios.begin(), est.gap_ratios.end(), [&](double g) { return g >= tol.gap; });
    // Empty cluster: the "gap" above is only sigma_min against the threshold, which says nothing
    // about a sigma_min still on its way to zero. Ask for it to have settled: it may not lose
    // more than half between the smallest and largest size.
    if (est.confident && est.total_defect == 0) {
        auto lo = std::min_element(est.sizes_used.begin(), est.sizes_used.end()) - est.sizes_used.begin();
        auto hi = std::max_element(est.sizes_used.begin(), est.sizes_used.end()) - est.sizes_used.begin();
        double first = est.smallest_singular_values[std::size_t(lo)].front();
        double last = est.smallest_singular_values[std::size_t(hi)].front();
        if (last < 0.5 * first) est.confident = false;
    }
    return est;
}

// ---------------------------------------------------------------- pseudoinverse check

namespace {

FourierVec random_support(std::mt19937_64& rng, int dim, int lo, int hi) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FourierVec v(dim);
    for (int m = lo; m <= hi; ++m) {
        CVector c(dim);
        for (int i = 0; i < dim; ++i) c(i) = cplx(u(rng), u(rng));
        v.add(m, c);
    }
    return v;
}

ApplyResult run(const OperatorExpr& x, const FourierVec& v, int window) {
    return window > 0 ? apply(x, v, window) : apply_auto(x, v);
}

}  // namespace

PseudoinverseCheck verify_pseudoinverse(const OperatorExpr& x, const OperatorExpr& xd, int trials, int window,
                                        double tol, Space space, std::uint64_t seed) {
    if (x.in_dim() != xd.out_dim() || x.out_dim() != xd.in_dim())
        fail(ErrorKind::ShapeMismatch, "pseudoinverse shape does not match the operator");
    PseudoinverseCheck out;
    out.trials = trials;
    out.window = window;
    std::mt19937_64 rng(seed);
    const int lo = space == Space::hardy ? 0 : -5;
    const OperatorExpr xxx = compose({x, xd, x}), ddd = compose({xd, x, xd});
    for (int t = 0; t < trials; ++t) {
        FourierVec v = random_support(rng, x.in_dim(), lo, 5);
        FourierVec w = random_support(rng, xd.in_dim(), lo, 5);
        const double nv = v.norm(), nw = w.norm();
        ApplyResult a = run(xxx, v, window), b = run(x, v, window);
        ApplyResult c = run(ddd, w, window), d = run(xd, w, window);
        out.residual = std::max({out.residual, (a.v - b.v).norm() / nv, (c.v - d.v).norm() / nw});
        out.tail = std::max({out.tail, (a.tail_bound + b.tail_bound) / nv, (c.tail_bound + d.tail_bound) / nw});
    }
    if (window > 0 && out.tail > tol) {
        std::ostringstream os;
        os << "tail bound " << out.tail << " exceeds " << tol << " at window " << window;
        fail(ErrorKind::WindowTooSmall, os.str());
    }
    out.pass = out.residual <= tol + out.tail;
    return out;
}

// ---------------------------------------------------------------- generators

RationalMatrixFunction random_symbol(std::mt19937_64& rng, int rows, int cols, int lo, int hi) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LaurentMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            std::map<int, cplx> c;
            for (int k = lo; k <= hi; ++k) c[k] = cplx(u(rng), u(rng));
            m(i, j) = LaurentPoly(std::move(c));
        }
    return RationalMatrixFunction(m);
}

RationalMatrixFunction random_invertible_symbol(std::mt19937_64& rng, int n, int lo, int hi, double min_det) {
    for (;;) {
        RationalMatrixFunction a = random_symbol(rng, n, n, lo, hi);
        double worst = std::numeric_limits<double>::infinity();
        for (int m = 0; m < 256 && worst >= min_det; ++m)
            worst = std::min(worst, std::abs(a.evaluate(std::polar(1.0, 2.0 * std::numbers::pi * m / 256)).determinant()));
        if (worst >= min_det) return a;
    }
}

InvolutionMatrix random_involution(std::mt19937_64& rng, int plus, int minus) {
    const int n = plus + minus;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix s = CMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) += 0.3 * cplx(u(rng), u(rng));
    CMatrix d = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = i < plus ? 1.0 : -1.0;
    return InvolutionMatrix(s * d * s.inverse(), 1e-10);
}

std::vector<CharPair> random_pairs(std::mt19937_64& rng, int n, int kmax) {
    std::uniform_int_distribution<int> kd(-kmax, kmax), sd(0, 1);
    for (;;) {
        std::vector<CharPair> p;
        for (int i = 0; i < n; ++i) p.push_back({sd(rng) ? 1 : -1, kd(rng)});
        SignatureCounts c = signature_counts(p);
        if (c.beta == c.gamma) {
            std::sort(p.begin(), p.end());
            return p;
        }
    }
}

InvolutionMatrix involution_for(std::mt19937_64& rng, const std::vector<CharPair>& pairs) {
    SignatureCounts c = signature_counts(pairs);
    return random_involution(rng, c.alpha + c.beta, c.gamma + c.delta);
}

// ---------------------------------------------------------------- identity suite

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> names = {
        "T(AB)",      "H(AB)",       "M_W(AB)",     "N_W(AB)",  "M_W mult", "N_W mult",   "M_W=T",
        "N_W=T",      "M_W=N_W",     "M_W N_W",     "adjoints", "P Q J",    "cT(AB)",     "cH(AB)",
        "Phi mult",   "Psi mult",    "Phi Psi",     "H(D) relations", "middle pseudoinverses", "middle kernels",
    };
    return names;
}

double IdentityReport::max_residual() const {
    double m = 0.0;
    for (const auto& r : results) m = std::max(m, r.max_residual);
    return m;
}

namespace {

enum Id {
    kTab, kHab, kMab, kNab, kMmult, kNmult, kMT, kNT, kMN, kMWNW, kAdj, kBasic,
    kcTab, kcHab, kPhimult, kPsimult, kPhiPsi, kHD, kMidPinv, kMidKer, kCount
};

cplx inner(const FourierVec& a, const FourierVec& b) {
    cplx s = 0.0;
    for (const auto& [m, x] : a.entries()) {
        auto it = b.entries().find(m);
        if (it != b.entries().end()) s += x.dot(it->second);
    }
    return s;
}

struct CaseRun {
    std::mt19937_64 rng;
    std::vector<double> worst = std::vector<double>(kCount, 0.0);
    std::vector<int> checks = std::vector<int>(kCount, 0);

    void record(Id id, double r) {
        worst[id] = std::max(worst[id], r);
        ++checks[id];
    }

    FourierVec vec(int dim, bool lebesgue) { return random_support(rng, dim, lebesgue ? -4 : 0, 4); }

    // |X v - Y v| against the sizes of both sides and of v
    void same(Id id, const OperatorExpr& x, const OperatorExpr& y, bool lebesgue) {
        FourierVec v = vec(x.in_dim(), lebesgue);
        FourierVec a = apply_auto(x, v).v, b = apply_auto(y, v).v;
        record(id, (a - b).norm() / std::max({a.norm(), b.norm(), v.norm()}));
    }

    void zero(Id id, const OperatorExpr& x, bool lebesgue) {
        FourierVec v = vec(x.in_dim(), lebesgue);
        record(id, apply_auto(x, v).v.norm() / v.norm());
    }

    // <X u, v> = <u, Y v>
    void adjoint_pair(Id id, const OperatorExpr& x, const OperatorExpr& y) {
        FourierVec u = vec(x.in_dim(), false), v = vec(x.out_dim(), false);
        FourierVec xu = apply_auto(x, u).v, yv = apply_auto(y, v).v;
        double scale = std::max({xu.norm() * v.norm(), u.norm() * yv.norm(), u.norm() * v.norm()});
        record(id, std::abs(inner(xu, v) - inner(u, yv)) / scale);
    }

    RationalMatrixFunction sym(int n, int lo, int hi) { return random_symbol(rng, n, n, lo, hi); }
    int deg() { return std::uniform_int_distribution<int>(0, 3)(rng); }
    RationalMatrixFunction any(int n) { return sym(n, -deg(), deg()); }
    RationalMatrixFunction minus_type(int n) { return sym(n, -deg(), 0); }
    RationalMatrixFunction plus_type(int n) { return sym(n, 0, deg()); }
    // W tilde(C) W + C lies in the W-symmetric class
    RationalMatrixFunction w_symmetric(int n, const InvolutionMatrix& w) {
        RationalMatrixFunction c = any(n);
        return c + w.symbol() * c.tilde() * w.symbol();
    }
};

void toeplitz_hankel_block(CaseRun& cr, int n) {
    const RationalMatrixFunction a = cr.any(n), b = cr.any(n);
    cr.same(kTab, toeplitz(a * b), toeplitz(a) * toeplitz(b) + hankel(a) * hankel(b.tilde()), false);
    cr.same(kHab, hankel(a * b), toeplitz(a) * hankel(b) + hankel(a) * toeplitz(b.tilde()), false);

    std::uniform_int_distribution<int> pd(0, n);
    const int plus = pd(cr.rng);
    const InvolutionMatrix w = random_involution(cr.rng, plus, n - plus);
    const RationalMatrixFunction ws = w.symbol();
    auto mw = [&](const RationalMatrixFunction& s) { return build_mw(s, w); };
    auto nw = [&](const RationalMatrixFunction& s) { return build_nw(s, w); };

    cr.same(kMab, mw(a * b), mw(a) * mw(b) + hankel(a * ws) * mw(ws * b.tilde() * ws - b), false);
    cr.same(kNab, nw(a * b), nw(a) * nw(b) + nw(ws * a.tilde() * ws - a) * hankel(ws * b.tilde()), false);

    const RationalMatrixFunction am = cr.minus_type(n), ap = cr.plus_type(n);
    const RationalMatrixFunction sw = cr.w_symmetric(n, w), sw2 = cr.w_symmetric(n, w);
    cr.same(kMmult, mw(am * b), mw(am) * mw(b), false);
    cr.same(kMmult, mw(a * sw), mw(a) * mw(sw), false);
    cr.same(kNmult, nw(sw2 * b), nw(sw2) * nw(b), false);
    cr.same(kNmult, nw(a * ap), nw(a) * nw(ap), false);
    cr.same(kMT, mw(am), toeplitz(am), false);
    cr.same(kNT, nw(ap), toeplitz(ap), false);
    cr.same(kMN, mw(sw), nw(sw), false);
    cr.same(kMWNW, mw(a) * nw(b), toeplitz(a * b) + hankel(a * ws * b.tilde()), false);

    const InvolutionMatrix wstar(w.matrix().adjoint(), 1e-10);
    const RationalMatrixFunction astar = a.adjoint();
    cr.adjoint_pair(kAdj, toeplitz(a), toeplitz(astar));
    cr.adjoint_pair(kAdj, hankel(a), hankel(a.tilde().adjoint()));
    cr.adjoint_pair(kAdj, mw(a), build_nw(astar, wstar));
    cr.adjoint_pair(kAdj, nw(a), build_mw(astar, wstar));
}

void basic_relations(CaseRun& cr, int n) {
    const OperatorExpr p = riesz_p(n), q = riesz_q(n), j = flip(n), id = identity_op(n);
    cr.same(kBasic, j * j, id, true);
    cr.same(kBasic, compose({j, p, j}), q, true);
    cr.same(kBasic, p + q, id, true);
    cr.zero(kBasic, p * q, true);
    cr.same(kBasic, p * j, j * q, true);
}

void flip_sio_block(CaseRun& cr, int n) {
    const int m = 2 * n;
    const RationalMatrixFunction a = cr.any(m), b = cr.any(m);
    cr.same(kcTab, cal_t(a * b), cal_t(a) * cal_t(b) + cal_h(a) * cal_h(hat(b)), true);
    cr.same(kcHab, cal_h(a * b), cal_t(a) * cal_h(b) + cal_h(a) * cal_t(hat(b)), true);

    const InvolutionMatrix w = InvolutionMatrix::flip_blocks(n);
    const RationalMatrixFunction am = cr.minus_type(m), ap = cr.plus_type(m);
    const RationalMatrixFunction sw = cr.w_symmetric(m, w), sw2 = cr.w_symmetric(m, w);
    cr.same(kPhimult, build_phi(am * b), build_phi(am) * build_phi(b), true);
    cr.same(kPhimult, build_phi(a * sw), build_phi(a) * build_phi(sw), true);
    cr.same(kPsimult, build_psi(sw2 * b), build_psi(sw2) * build_psi(b), true);
    cr.same(kPsimult, build_psi(a * ap), build_psi(a) * build_psi(ap), true);
    cr.same(kPhiPsi, build_phi(a) * build_psi(b), cal_t(a * b) + cal_h(a * hat(b)), true);
}

void middle_block(CaseRun& cr, int n) {
    const std::vector<CharPair> pairs = random_pairs(cr.rng, n, 3);
    const RationalMatrixFunction d = middle_factor(pairs);
    const OperatorExpr id = identity_op(n), hd = hankel(d);
    const OperatorExpr bb = id + hd;
    const OperatorExpr bd = id - hd * hd + scale(0.25, hd * hd + hd);
    cr.zero(kHD, toeplitz(d.tilde()) * hd, false);
    cr.zero(kHD, hd * toeplitz(d), false);
    cr.same(kHD, compose({hd, hd, hd}), hd, false);
    cr.same(kHD, compose({bb, bd, bb}), bb, false);
    cr.same(kHD, compose({bd, bb, bd}), bd, false);

    const InvolutionMatrix w = involution_for(cr.rng, pairs);
    const RationalMatrixFunction r = build_middle_R(pairs, w);
    const RationalMatrixFunction rinv = inverse(r).simplified();
    const OperatorExpr a1 = build_mw(r, w), a2 = build_nw(rinv, w);
    const OperatorExpr a1d = a2 * bd, a2d = bd * a1;
    const OperatorExpr half = id - scale(0.5, hd);
    cr.same(kMidPinv, a1 * a2, bb, false);
    cr.same(kMidPinv, a1d, a2 * half, false);
    cr.same(kMidPinv, a2d, half * a1, false);
    cr.same(kMidPinv, compose({a1d, a1, a1d}), a1d, false);
    cr.same(kMidPinv, compose({a1, a1d, a1}), a1, false);
    cr.same(kMidPinv, compose({a2d, a2, a2d}), a2d, false);
    cr.same(kMidPinv, compose({a2, a2d, a2}), a2, false);

    // ker B sits on modes below the largest kappa; A2 and A1* must kill all of it,
    // and its dimension must be the Theta count.
    int kmax = 0, theta_sum = 0;
    for (const auto& p : pairs)
        if (p.kappa > 0) {
            kmax = std::max(kmax, p.kappa);
            theta_sum += theta(p.rho, p.kappa);
        }
    int dim_ker = 0;
    if (kmax > 0) {
        CMatrix sec = finite_section(bb, kmax);
        Eigen::JacobiSVD<CMatrix> svd(sec, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const OperatorExpr a1s = adjoint(a1);
        for (Eigen::Index k = 0; k < sv.size(); ++k) {
            if (sv(k) > 1e-9 * std::max(1.0, sv(0))) continue;
            ++dim_ker;
            CVector x = svd.matrixV().col(k);
            FourierVec fx(n);
            for (int mode = 0; mode < kmax; ++mode) fx.add(mode, x.segment(mode * n, n));
            cr.record(kMidKer, apply_auto(a2, fx).v.norm());
            cr.record(kMidKer, apply_auto(a1s, fx).v.norm());
        }
    }
    cr.record(kMidKer, dim_ker == theta_sum ? 0.0 : 1.0);
}

CaseRun run_case(std::uint64_t seed, int k) {
    std::seed_seq sq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(k)};
    CaseRun cr{std::mt19937_64(sq)};
    const int n = 1 + k % 3;
    toeplitz_hankel_block(cr, n);
    basic_relations(cr, n);
    flip_sio_block(cr, n);
    middle_block(cr, n);
    return cr;
}

}  // namespace

IdentityReport identity_suite(std::uint64_t seed, int cases) {
    IdentityReport rep;
    rep.seed = seed;
    rep.cases = cases;
    for (const auto& name : identity_names()) rep.results.push_back({name, 0.0, 0});

    const int workers = std::max(1u, std::thread::hardware_concurrency());
    for (int start = 0; start < cases; start += workers) {
        std::vector<std::future<CaseRun>> batch;
        for (int k = start; k < std::min(cases, start + workers); ++k)
            batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_case, seed, k));
        for (auto& f : batch) {
            CaseRun cr = f.get();
            for (int i = 0; i < kCount; ++i) {
                rep.results[std::size_t(i)].max_residual = std::max(rep.results[std::size_t(i)].max_residual, cr.worst[std::size_t(i)]);
                rep.results[std::size_t(i)].checks += cr.checks[std::size_t(i)];
            }
        }
    }
    return rep;
}

}  // namespace whflip
