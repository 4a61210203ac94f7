#include "whflip/solver.hpp"

#include <algorithm>
#include <sstream>

#include "whflip/errors.hpp"

namespace whflip {

int theta(int rho, int kappa) {
    if (rho != 1 && rho != -1) fail(ErrorKind::InputError, "rho must be +1 or -1");
    if (kappa % 2 == 0) return kappa / 2;
    return (kappa - rho) / 2;
}

std::pair<int, int> dims_from_pairs(const std::vector<CharPair>& pairs, bool flip_rho) {
    int ker = 0, coker = 0;
    for (const auto& p : pairs) {
        int th = theta(flip_rho ? -p.rho : p.rho, p.kappa);
        if (p.kappa < 0) ker -= th;
        if (p.kappa > 0) coker += th;
    }
    return {ker, coker};
}

bool classify_invertibility(const std::vector<CharPair>& pairs, InvertKind kind) {
    const int s = kind == InvertKind::mw_phi ? 1 : -1;
    for (const auto& p : pairs) {
        bool ok = p.kappa == 0 || (p.kappa == 1 && p.rho == s) || (p.kappa == -1 && p.rho == -s);
        if (!ok) return false;
    }
    return true;
}

int middle_hankel_dims(const std::vector<CharPair>& pairs) {
    int s = 0;
    for (const auto& p : pairs)
        if (p.kappa > 0) s += theta(p.rho, p.kappa);
    return s;
}

MiddleHankelOps middle_hankel_ops(const std::vector<CharPair>& pairs) {
    const int n = int(pairs.size());
    OperatorExpr hd = hankel(middle_factor(pairs));
    OperatorExpr id = identity_op(n);
    OperatorExpr hd2 = hd * hd;
    return {hd, id + hd, id - hd2 + scale(0.25, hd2 + hd)};
}

namespace {

// Determinant winding of a square symbol, or nothing when det vanishes on the circle.
std::optional<int> symbol_winding(const RationalMatrixFunction& a, const Tolerances& tol) {
    if (!a.is_square()) fail(ErrorKind::ShapeMismatch, "symbol must be square");
    if (!a.valid(tol)) fail(ErrorKind::InputError, "symbol has a pole on the unit circle");
    try {
        return det_and_winding(a, tol).wind;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotInvertibleOnCircle) throw;
        return std::nullopt;
    }
}

FredholmReport not_fredholm(OperatorExpr op, Space space, const char* why) {
    FredholmReport r;
    r.op = std::move(op);
    r.space = space;
    r.note = why;
    return r;
}

void fill_dims(FredholmReport& r, int wind, const std::vector<CharPair>& pairs, bool flip_rho) {
    auto [ker, coker] = dims_from_pairs(pairs, flip_rho);
    if (ker - coker != -wind) {
        std::ostringstream os;
        os << "dimension formulas give index " << ker - coker << " but -wind det = " << -wind;
        fail(ErrorKind::FactorizationFailed, os.str());
    }
    r.fredholm = true;
    r.index = -wind;
    r.dim_ker = ker;
    r.dim_coker = coker;
    r.pairs = pairs;
    r.invertible = ker == 0 && coker == 0;
}

// Largest window needed to apply the pseudoinverse to low basis vectors within tolerance.
void probe_window(FredholmReport& r, const Tolerances& tol) {
    if (!r.pseudoinverse || r.pseudoinverse->exact()) return;
    const OperatorExpr& x = *r.pseudoinverse;
    try {
        for (int m = 0; m < 3; ++m)
            for (int c = 0; c < x.in_dim(); ++c) {
                int mode = r.space == Space::lebesgue && m == 2 ? -1 : m;
                r.window = std::max(r.window, apply_auto(x, FourierVec::basis(x.in_dim(), mode, c), tol).window);
            }
    } catch (const Error& e) {
        // symbol zeros close to the circle: the pseudoinverse is still right, just slow to converge
        if (e.kind() != ErrorKind::WindowTooSmall) throw;
        r.window = -1;
        r.note = e.what();
    }
}

RationalMatrixFunction d_inverse(const std::vector<CharPair>& pairs) {
    std::vector<CharPair> inv;
    for (const auto& p : pairs) inv.push_back({p.rho, -p.kappa});
    return middle_factor(inv);
}

RationalMatrixFunction rows_of(const RationalMatrixFunction& a, int r0, int n) { return a.block(r0, 0, n, a.cols()); }
RationalMatrixFunction cols_of(const RationalMatrixFunction& a, int c0, int n) { return a.block(0, c0, a.rows(), n); }

// Pseudoinverse of T(a) + H(b) on (H2)^N from either route.
OperatorExpr th_pseudoinverse(const RationalMatrixFunction& a, const RationalMatrixFunction& b, Route route,
                              FredholmReport& r, int wind, const Tolerances& tol) {
    const int n = a.rows();
    const InvolutionMatrix w = InvolutionMatrix::flip_blocks(n);
    const RationalMatrixFunction id = RationalMatrixFunction::identity(n);
    const RationalMatrixFunction zero = RationalMatrixFunction::zero(n, n);
    const OperatorExpr i2 = identity_op(2 * n);
    if (route == Route::left) {
        RationalMatrixFunction big = block_matrix({{a, b}, {zero, id}});
        RationalMatrixFunction f = (big * w.symbol() * inverse(big.tilde())).simplified();
        AntisymFactorization af = antisym_factor(f, tol);
        fill_dims(r, wind, af.pairs, false);
        RationalMatrixFunction u = inverse(big) * af.minus_factor;
        RationalMatrixFunction v = inverse(af.minus_factor);
        OperatorExpr first = toeplitz(rows_of(u, 0, n), tol) + hankel(rows_of(u, n, n).tilde(), tol);
        return compose({first, i2 - scale(0.5, hankel(af.middle(), tol)), toeplitz(cols_of(v, 0, n), tol)});
    }
    RationalMatrixFunction big = block_matrix({{a, zero}, {b.tilde(), id}});
    RationalMatrixFunction g = (inverse(big.tilde()) * w.symbol() * big).simplified();
    AntisymFactorization ag = antisym_factor(g, tol);
    fill_dims(r, wind, ag.pairs, true);
    RationalMatrixFunction bp_inv = ag.minus_factor.tilde();
    RationalMatrixFunction y = inverse(bp_inv) * inverse(big);
    OperatorExpr last = toeplitz(cols_of(y, 0, n), tol) + hankel(cols_of(y, n, n), tol);
    return compose({toeplitz(rows_of(bp_inv, 0, n), tol), i2 - scale(0.5, hankel(d_inverse(ag.pairs), tol)), last});
}

}  // namespace

FredholmReport analyze_toeplitz_hankel(const RationalMatrixFunction& a, const RationalMatrixFunction& b, Route route,
                                       const Tolerances& tol) {
    if (!a.is_square() || b.rows() != a.rows() || b.cols() != a.cols())
        fail(ErrorKind::ShapeMismatch, "a and b must be square of the same size");
    if (!b.valid(tol)) fail(ErrorKind::InputError, "b has a pole on the unit circle");
    OperatorExpr op = toeplitz(a, tol) + hankel(b, tol);
    auto wind = symbol_winding(a, tol);
    if (!wind) return not_fredholm(op, Space::hardy, "det a vanishes on the unit circle");
    FredholmReport r;
    r.op = op;
    r.route = route;
    r.pseudoinverse = th_pseudoinverse(a, b, route, r, *wind, tol);
    probe_window(r, tol);
    return r;
}

FredholmReport analyze_mw(const RationalMatrixFunction& a, const InvolutionMatrix& w, const Tolerances& tol) {
    OperatorExpr op = build_mw(a, w, tol);
    auto wind = symbol_winding(a, tol);
    if (!wind) return not_fredholm(op, Space::hardy, "det A vanishes on the unit circle");
    RationalMatrixFunction f = (a * w.symbol() * inverse(a.tilde())).simplified();
    AntisymFactorization af = antisym_factor(f, tol);
    FredholmReport r;
    r.op = op;
    fill_dims(r, *wind, af.pairs, false);
    const OperatorExpr id = identity_op(a.rows());
    r.pseudoinverse = compose({build_nw(inverse(a) * af.minus_factor, w, tol),
                               id - scale(0.5, hankel(af.middle(), tol)), toeplitz(inverse(af.minus_factor), tol)});
    probe_window(r, tol);
    return r;
}

FredholmReport analyze_nw(const RationalMatrixFunction& a, const InvolutionMatrix& w, const Tolerances& tol) {
    OperatorExpr op = build_nw(a, w, tol);
    auto wind = symbol_winding(a, tol);
    if (!wind) return not_fredholm(op, Space::hardy, "det A vanishes on the unit circle");
    RationalMatrixFunction g = (inverse(a.tilde()) * w.symbol() * a).simplified();
    AntisymFactorization ag = antisym_factor(g, tol);
    FredholmReport r;
    r.op = op;
    r.route = Route::right;
    fill_dims(r, *wind, ag.pairs, true);
    RationalMatrixFunction ap_inv = ag.minus_factor.tilde();
    const OperatorExpr id = identity_op(a.rows());
    r.pseudoinverse = compose({toeplitz(ap_inv, tol), id - scale(0.5, hankel(d_inverse(ag.pairs), tol)),
                               build_mw(inverse(ap_inv) * inverse(a), w, tol)});
    probe_window(r, tol);
    return r;
}

FredholmReport analyze_phi(const RationalMatrixFunction& a, const Tolerances& tol) {
    OperatorExpr op = build_phi(a, tol);
    auto wind = symbol_winding(a, tol);
    if (!wind) return not_fredholm(op, Space::lebesgue, "det A vanishes on the unit circle");
    const int n = a.rows() / 2;
    const InvolutionMatrix w = InvolutionMatrix::flip_blocks(n);
    RationalMatrixFunction f = (a * w.symbol() * inverse(a.tilde())).simplified();
    AntisymFactorization af = antisym_factor(f, tol);
    FredholmReport r;
    r.op = op;
    r.space = Space::lebesgue;
    fill_dims(r, *wind, af.pairs, false);
    const OperatorExpr id = identity_op(n);
    r.pseudoinverse = compose({build_psi(inverse(a) * af.minus_factor, tol),
                               id - scale(0.5, cal_h(af.middle() * w.symbol(), tol)),
                               cal_t(inverse(af.minus_factor), tol)});
    probe_window(r, tol);
    return r;
}

FredholmReport analyze_psi(const RationalMatrixFunction& a, const Tolerances& tol) {
    OperatorExpr op = build_psi(a, tol);
    auto wind = symbol_winding(a, tol);
    if (!wind) return not_fredholm(op, Space::lebesgue, "det A vanishes on the unit circle");
    const int n = a.rows() / 2;
    const InvolutionMatrix w = InvolutionMatrix::flip_blocks(n);
    RationalMatrixFunction g = (inverse(a.tilde()) * w.symbol() * a).simplified();
    AntisymFactorization ag = antisym_factor(g, tol);
    FredholmReport r;
    r.op = op;
    r.space = Space::lebesgue;
    r.route = Route::right;
    fill_dims(r, *wind, ag.pairs, true);
    RationalMatrixFunction ap_inv = ag.minus_factor.tilde();
    const OperatorExpr id = identity_op(n);
    r.pseudoinverse = compose({cal_t(ap_inv, tol), id - scale(0.5, cal_h(d_inverse(ag.pairs) * w.symbol(), tol)),
                               build_phi(inverse(ap_inv) * inverse(a), tol)});
    probe_window(r, tol);
    return r;
}

FredholmReport analyze_general_sio(const RationalMatrixFunction& a, const RationalMatrixFunction& b,
                                   const Tolerances& tol) {
    OperatorExpr op = build_general_sio(a, b, tol);
    if (!b.valid(tol)) fail(ErrorKind::InputError, "B has a pole on the unit circle");
    auto wind = symbol_winding(a, tol);
    if (!wind) return not_fredholm(op, Space::lebesgue, "det A vanishes on the unit circle");
    // Xi carries the operator to T(A) + H(B) on (H2)^{2N}
    FredholmReport r;
    r.op = op;
    r.space = Space::lebesgue;
    r.pseudoinverse = xi_inverse(th_pseudoinverse(a, b, Route::left, r, *wind, tol));
    probe_window(r, tol);
    return r;
}

FredholmReport bw_shortcut(const RationalMatrixFunction& a, const InvolutionMatrix& w, const Tolerances& tol) {
    if (!check_bw_membership(a, w)) fail(ErrorKind::NotInBW, "W tilde(A) W differs from A");
    OperatorExpr op = build_mw(a, w, tol);
    auto wind = symbol_winding(a, tol);
    if (!wind) return not_fredholm(op, Space::hardy, "det A vanishes on the unit circle");
    FredholmReport r;
    r.op = op;
    r.fredholm = true;
    r.index = 0;
    r.dim_ker = 0;
    r.dim_coker = 0;
    r.invertible = true;
    r.pseudoinverse = build_mw(inverse(a), w, tol);
    probe_window(r, tol);
    return r;
}

}  // namespace whflip
