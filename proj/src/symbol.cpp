#include "whflip/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "whflip/errors.hpp"

namespace whflip {

namespace {

int dft_size(int span) {
    int m = 8;
    while (m < span) m *= 2;
    return m;
}

cplx unit_root(int m, int M) { return std::polar(1.0, 2.0 * std::numbers::pi * m / M); }

// Coefficients of a Laurent polynomial supported in [lo, lo + M) from samples at the M-th roots of unity.
// floor: magnitude the samples are accurate to, relative to rounding.
LaurentPoly interpolate(const std::vector<cplx>& samples, int lo, double floor = 0.0) {
    const int M = int(samples.size());
    double scale = 0.0;
    std::vector<cplx> shifted(M);
    for (int m = 0; m < M; ++m) {
        shifted[m] = samples[m] * std::pow(unit_root(m, M), -lo);
        scale = std::max(scale, std::abs(samples[m]));
    }
    std::map<int, cplx> c;
    for (int k = 0; k < M; ++k) {
        cplx s = 0.0;
        for (int m = 0; m < M; ++m) s += shifted[m] * unit_root(-((long long)m * k % M), M);
        c[lo + k] = s / double(M);
    }
    return LaurentPoly(std::move(c)).normalized(std::max(scale, floor));
}

// Hadamard bound on the minors of v that drop row `skip`.
double hadamard(const CMatrix& v, int skip = -1) {
    double h = 1.0;
    for (int i = 0; i < v.rows(); ++i)
        if (i != skip) h *= v.row(i).norm();
    return h;
}

cplx small_det(const CMatrix& m) {
    if (m.rows() == 0) return 1.0;
    if (m.rows() == 1) return m(0, 0);
    if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m.partialPivLu().determinant();
}

CMatrix minor_of(const CMatrix& m, int r, int c) {
    const int n = int(m.rows());
    CMatrix out(n - 1, n - 1);
    for (int i = 0, ii = 0; i < n; ++i) {
        if (i == r) continue;
        for (int j = 0, jj = 0; j < n; ++j) {
            if (j == c) continue;
            out(ii, jj++) = m(i, j);
        }
        ++ii;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- LaurentMatrix

LaurentMatrix::LaurentMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(std::size_t(rows) * cols) {}

LaurentMatrix LaurentMatrix::identity(int n) {
    LaurentMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = LaurentPoly(1.0);
    return m;
}

LaurentMatrix LaurentMatrix::constant(const CMatrix& c) {
    LaurentMatrix m(int(c.rows()), int(c.cols()));
    for (int i = 0; i < m.rows_; ++i)
        for (int j = 0; j < m.cols_; ++j) m(i, j) = LaurentPoly(c(i, j));
    return m;
}

LaurentMatrix LaurentMatrix::diagonal(const std::vector<LaurentPoly>& d) {
    LaurentMatrix m(int(d.size()), int(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
    return m;
}

bool LaurentMatrix::is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](const LaurentPoly& p) { return p.is_zero(); });
}

int LaurentMatrix::low() const {
    int lo = std::numeric_limits<int>::max();
    for (const auto& p : e_)
        if (!p.is_zero()) lo = std::min(lo, p.low());
    return lo == std::numeric_limits<int>::max() ? 0 : lo;
}

int LaurentMatrix::high() const {
    int hi = std::numeric_limits<int>::min();
    for (const auto& p : e_)
        if (!p.is_zero()) hi = std::max(hi, p.high());
    return hi == std::numeric_limits<int>::min() ? 0 : hi;
}

double LaurentMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& p : e_) m = std::max(m, p.max_abs());
    return m;
}

CMatrix LaurentMatrix::coeff(int k) const {
    CMatrix c(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j).coeff(k);
    return c;
}

CMatrix LaurentMatrix::evaluate(cplx z) const {
    CMatrix c(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j)(z);
    return c;
}

LaurentMatrix LaurentMatrix::tilde() const {
    LaurentMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = e_[k].tilde();
    return m;
}

LaurentMatrix LaurentMatrix::transpose() const {
    LaurentMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

LaurentMatrix LaurentMatrix::adjoint() const {
    LaurentMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j).adjoint();
    return m;
}

LaurentMatrix LaurentMatrix::shifted(int k) const {
    LaurentMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i].shifted(k);
    return m;
}

LaurentMatrix LaurentMatrix::normalized(double scale) const {
    double s = std::max(scale, max_abs());
    LaurentMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i].normalized(s);
    return m;
}

LaurentMatrix LaurentMatrix::block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_) fail(ErrorKind::ShapeMismatch, "block out of range");
    LaurentMatrix m(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
}

void LaurentMatrix::set_block(int r0, int c0, const LaurentMatrix& b) {
    if (r0 < 0 || c0 < 0 || r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
        fail(ErrorKind::ShapeMismatch, "set_block out of range");
    for (int i = 0; i < b.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

LaurentPoly LaurentMatrix::det() const {
    if (rows_ != cols_) fail(ErrorKind::ShapeMismatch, "det of non-square matrix");
    const int n = rows_;
    if (n == 0) return LaurentPoly(1.0);
    if (n == 1) return e_[0];
    if (n == 2) return ((*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0)).normalized();
    int lo = n * low(), hi = n * high();
    const int M = dft_size(hi - lo + 1);
    std::vector<cplx> s(M);
    double floor = 0.0;
    for (int m = 0; m < M; ++m) {
        CMatrix v = evaluate(unit_root(m, M));
        s[m] = small_det(v);
        floor = std::max(floor, hadamard(v));
    }
    return interpolate(s, lo, floor);
}

LaurentMatrix LaurentMatrix::adjugate() const {
    if (rows_ != cols_) fail(ErrorKind::ShapeMismatch, "adjugate of non-square matrix");
    const int n = rows_;
    LaurentMatrix out(n, n);
    if (n == 1) {
        out(0, 0) = LaurentPoly(1.0);
        return out;
    }
    if (n == 2) {
        out(0, 0) = (*this)(1, 1);
        out(1, 1) = (*this)(0, 0);
        out(0, 1) = -(*this)(0, 1);
        out(1, 0) = -(*this)(1, 0);
        return out;
    }
    int lo = (n - 1) * low(), hi = (n - 1) * high();
    const int M = dft_size(hi - lo + 1);
    std::vector<std::vector<cplx>> samples(std::size_t(n) * n, std::vector<cplx>(M));
    std::vector<double> floor(n, 0.0);
    for (int m = 0; m < M; ++m) {
        CMatrix v = evaluate(unit_root(m, M));
        for (int j = 0; j < n; ++j) floor[j] = std::max(floor[j], hadamard(v, j));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                samples[std::size_t(i) * n + j][m] = sign * small_det(minor_of(v, j, i));
            }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = interpolate(samples[std::size_t(i) * n + j], lo, floor[j]);
    return out;
}

LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::ShapeMismatch, "matrix sum");
    LaurentMatrix m(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.e_.size(); ++k) m.e_[k] = a.e_[k] + b.e_[k];
    return m;
}

LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::ShapeMismatch, "matrix difference");
    LaurentMatrix m(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.e_.size(); ++k) m.e_[k] = a.e_[k] - b.e_[k];
    return m;
}

LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::ShapeMismatch, "matrix product");
    LaurentMatrix m(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) {
            std::map<int, cplx> acc;
            double scale = 0.0;
            for (int k = 0; k < a.cols_; ++k) {
                const auto& x = a(i, k);
                const auto& y = b(k, j);
                if (x.is_zero() || y.is_zero()) continue;
                scale = std::max(scale, x.max_abs() * y.max_abs());
                for (const auto& [p, u] : x.coeffs())
                    for (const auto& [q, v] : y.coeffs()) acc[p + q] += u * v;
            }
            m(i, j) = LaurentPoly(std::move(acc)).normalized(scale);
        }
    return m;
}

LaurentMatrix operator*(const LaurentPoly& s, const LaurentMatrix& a) {
    LaurentMatrix m(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.e_.size(); ++k) m.e_[k] = s * a.e_[k];
    return m;
}

LaurentMatrix operator*(const CMatrix& c, const LaurentMatrix& a) { return LaurentMatrix::constant(c) * a; }
LaurentMatrix operator*(const LaurentMatrix& a, const CMatrix& c) { return a * LaurentMatrix::constant(c); }

double rel_distance(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::ShapeMismatch, "distance");
    double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
    double d = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            LaurentPoly diff = a(i, j);
            std::map<int, cplx> m = diff.coeffs();
            for (const auto& [k, c] : b(i, j).coeffs()) m[k] -= c;
            for (const auto& [k, c] : m) d = std::max(d, std::abs(c));
        }
    return d / scale;
}

// ---------------------------------------------------------------- RationalMatrixFunction

RationalMatrixFunction::RationalMatrixFunction(LaurentMatrix num, LaurentPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

RationalMatrixFunction::RationalMatrixFunction(const LaurentPoly& scalar) : num_(1, 1) {
    num_(0, 0) = scalar;
    normalize();
}

RationalMatrixFunction::RationalMatrixFunction(const CMatrix& constant) : num_(LaurentMatrix::constant(constant)) {
    normalize();
}

RationalMatrixFunction RationalMatrixFunction::identity(int n) { return RationalMatrixFunction(LaurentMatrix::identity(n)); }

RationalMatrixFunction RationalMatrixFunction::zero(int rows, int cols) {
    return RationalMatrixFunction(LaurentMatrix(rows, cols));
}

void RationalMatrixFunction::normalize() {
    den_ = den_.normalized();
    if (den_.is_zero()) fail(ErrorKind::SingularSymbol, "denominator is identically zero");
    num_ = num_.normalized();
    if (num_.is_zero()) {
        den_ = LaurentPoly(1.0);
        return;
    }
    int s = den_.low();
    cplx c = den_.coeff(s);
    den_ = (1.0 / c) * den_.shifted(-s);
    num_ = LaurentPoly::monomial(-s, 1.0 / c) * num_;
}

CMatrix RationalMatrixFunction::evaluate(cplx z, const Tolerances& tol) const {
    cplx d = den_(z);
    if (std::abs(d) < tol.eval * std::max(1.0, den_.l1_norm())) fail(ErrorKind::EvalAtPole, "evaluation at a pole");
    return num_.evaluate(z) / d;
}

RationalMatrixFunction RationalMatrixFunction::tilde() const { return {num_.tilde(), den_.tilde()}; }
RationalMatrixFunction RationalMatrixFunction::transpose() const { return {num_.transpose(), den_}; }
RationalMatrixFunction RationalMatrixFunction::adjoint() const { return {num_.adjoint(), den_.adjoint()}; }

RationalMatrixFunction RationalMatrixFunction::block(int r0, int c0, int nr, int nc) const {
    return RationalMatrixFunction(num_.block(r0, c0, nr, nc), den_).simplified();
}

RationalMatrixFunction RationalMatrixFunction::scaled(cplx s) const { return {LaurentPoly(s) * num_, den_}; }

RationalMatrixFunction RationalMatrixFunction::simplified(double rel) const {
    if (is_laurent() || num_.is_zero()) return *this;
    PolyRoots pr = find_roots(den_);
    std::vector<cplx> roots = cluster_roots(pr.roots);
    LaurentMatrix num = num_;
    LaurentPoly den = den_;
    bool changed = false;
    for (cplx z : roots) {
        bool common = true;
        for (int i = 0; i < num.rows() && common; ++i)
            for (int j = 0; j < num.cols() && common; ++j) {
                const LaurentPoly& p = num(i, j);
                if (p.is_zero()) continue;
                double scale = 0.0;
                for (const auto& [k, c] : p.coeffs()) scale += std::abs(c) * std::pow(std::abs(z), k);
                if (std::abs(p(z)) > rel * scale) common = false;
            }
        if (!common) continue;
        for (int i = 0; i < num.rows(); ++i)
            for (int j = 0; j < num.cols(); ++j) num(i, j) = divide_linear(num(i, j), z);
        den = divide_linear(den, z);
        changed = true;
    }
    if (!changed) return *this;
    return {num, den};
}

double RationalMatrixFunction::pole_distance_to_circle() const {
    double best = std::numeric_limits<double>::infinity();
    for (cplx z : find_roots(den_).roots) best = std::min(best, std::abs(std::abs(z) - 1.0));
    return best;
}

bool RationalMatrixFunction::valid(const Tolerances& tol) const { return pole_distance_to_circle() > tol.circle; }

namespace {

bool same_den(const LaurentPoly& a, const LaurentPoly& b) { return rel_distance(a, b) <= 1e-14; }

}  // namespace

RationalMatrixFunction arith(const RationalMatrixFunction& a, const RationalMatrixFunction& b, ArithOp op) {
    if (op == ArithOp::mul) {
        if (a.cols() != b.rows()) fail(ErrorKind::ShapeMismatch, "product shapes do not conform");
        if (a.is_laurent()) return {a.num() * b.num(), b.den()};
        if (b.is_laurent()) return {a.num() * b.num(), a.den()};
        return {a.num() * b.num(), a.den() * b.den()};
    }
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::ShapeMismatch, "sum shapes do not conform");
    const double sign = op == ArithOp::add ? 1.0 : -1.0;
    LaurentMatrix nb = LaurentPoly(sign) * b.num();
    if (same_den(a.den(), b.den())) return {a.num() + nb, a.den()};
    return {b.den() * a.num() + a.den() * nb, a.den() * b.den()};
}

RationalMatrixFunction operator+(const RationalMatrixFunction& a, const RationalMatrixFunction& b) {
    return arith(a, b, ArithOp::add);
}
RationalMatrixFunction operator-(const RationalMatrixFunction& a, const RationalMatrixFunction& b) {
    return arith(a, b, ArithOp::sub);
}
RationalMatrixFunction operator*(const RationalMatrixFunction& a, const RationalMatrixFunction& b) {
    return arith(a, b, ArithOp::mul);
}
RationalMatrixFunction operator*(cplx s, const RationalMatrixFunction& a) { return a.scaled(s); }

RationalMatrixFunction inverse(const RationalMatrixFunction& a) {
    if (!a.is_square()) fail(ErrorKind::ShapeMismatch, "inverse of non-square symbol");
    LaurentPoly d = a.num().det();
    if (d.is_zero()) fail(ErrorKind::SingularSymbol, "determinant vanishes identically");
    return RationalMatrixFunction(a.den() * a.num().adjugate(), d).simplified();
}

namespace {

// Common denominator of a list of symbols: product of the distinct denominators.
LaurentPoly common_den(const std::vector<const RationalMatrixFunction*>& parts,
                       std::vector<LaurentPoly>& multipliers) {
    std::vector<LaurentPoly> distinct;
    for (const auto* p : parts) {
        bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const LaurentPoly& d) { return same_den(d, p->den()); });
        if (!seen) distinct.push_back(p->den());
    }
    LaurentPoly all(1.0);
    for (const auto& d : distinct) all = all * d;
    multipliers.clear();
    for (const auto* p : parts) {
        LaurentPoly m(1.0);
        bool skipped = false;
        for (const auto& d : distinct) {
            if (!skipped && same_den(d, p->den())) {
                skipped = true;
                continue;
            }
            m = m * d;
        }
        multipliers.push_back(m);
    }
    return all;
}

}  // namespace

RationalMatrixFunction block_matrix(const std::vector<std::vector<RationalMatrixFunction>>& grid) {
    if (grid.empty() || grid[0].empty()) fail(ErrorKind::ShapeMismatch, "empty block grid");
    std::vector<const RationalMatrixFunction*> parts;
    std::vector<int> heights, widths;
    for (const auto& row : grid) {
        if (row.size() != grid[0].size()) fail(ErrorKind::ShapeMismatch, "ragged block grid");
        heights.push_back(row[0].rows());
        for (const auto& b : row) {
            if (b.rows() != row[0].rows()) fail(ErrorKind::ShapeMismatch, "block heights differ");
            parts.push_back(&b);
        }
    }
    for (const auto& b : grid[0]) widths.push_back(b.cols());
    for (const auto& row : grid)
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j].cols() != widths[j]) fail(ErrorKind::ShapeMismatch, "block widths differ");
    std::vector<LaurentPoly> mult;
    LaurentPoly den = common_den(parts, mult);
    int R = 0, C = 0;
    for (int h : heights) R += h;
    for (int w : widths) C += w;
    LaurentMatrix num(R, C);
    std::size_t idx = 0;
    int r0 = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        int c0 = 0;
        for (std::size_t j = 0; j < grid[i].size(); ++j) {
            num.set_block(r0, c0, mult[idx] * grid[i][j].num());
            c0 += widths[j];
            ++idx;
        }
        r0 += heights[i];
    }
    return {num, den};
}

RationalMatrixFunction hstack(const std::vector<RationalMatrixFunction>& parts) { return block_matrix({parts}); }

RationalMatrixFunction vstack(const std::vector<RationalMatrixFunction>& parts) {
    std::vector<std::vector<RationalMatrixFunction>> g;
    for (const auto& p : parts) g.push_back({p});
    return block_matrix(g);
}

double rel_distance(const RationalMatrixFunction& a, const RationalMatrixFunction& b) {
    return rel_distance(b.den() * a.num(), a.den() * b.num());
}

bool approx_equal(const RationalMatrixFunction& a, const RationalMatrixFunction& b, double rel) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return rel_distance(a, b) <= rel;
}

double grid_residual(const RationalMatrixFunction& a, const RationalMatrixFunction& b, int points) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::ShapeMismatch, "residual shapes differ");
    double diff = 0.0, scale = 0.0;
    for (int m = 0; m < points; ++m) {
        cplx z = unit_root(m, points);
        CMatrix va = a.evaluate(z), vb = b.evaluate(z);
        diff = std::max(diff, (va - vb).cwiseAbs().maxCoeff());
        scale = std::max({scale, vb.cwiseAbs().maxCoeff(), va.cwiseAbs().maxCoeff()});
    }
    return diff / std::max(scale, 1e-300);
}

// ---------------------------------------------------------------- InvolutionMatrix

InvolutionMatrix::InvolutionMatrix(const CMatrix& w, double tol) : w_(w) {
    if (w.rows() != w.cols() || w.rows() == 0) fail(ErrorKind::InputError, "involution must be square");
    if ((w * w - CMatrix::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff() > tol)
        fail(ErrorKind::InputError, "matrix is not an involution");
}

InvolutionMatrix InvolutionMatrix::identity(int n) { return InvolutionMatrix(CMatrix::Identity(n, n)); }

InvolutionMatrix InvolutionMatrix::flip_blocks(int n) {
    CMatrix w = CMatrix::Zero(2 * n, 2 * n);
    w.topRightCorner(n, n).setIdentity();
    w.bottomLeftCorner(n, n).setIdentity();
    return InvolutionMatrix(w);
}

// ---------------------------------------------------------------- winding

int winding(const LaurentPoly& p, const Tolerances& tol) {
    if (p.is_zero()) fail(ErrorKind::NotInvertibleOnCircle, "zero function");
    PolyRoots pr = find_roots(p);
    int w = pr.zero_order;
    for (cplx z : pr.roots) {
        double r = std::abs(z);
        if (std::abs(r - 1.0) <= tol.circle) fail(ErrorKind::NotInvertibleOnCircle, "root on the unit circle");
        if (r < 1.0) ++w;
    }
    return w;
}

DetWinding det_and_winding(const RationalMatrixFunction& a, const Tolerances& tol) {
    if (!a.is_square()) fail(ErrorKind::ShapeMismatch, "det of non-square symbol");
    LaurentPoly dn = a.num().det();
    LaurentPoly dd(1.0);
    for (int i = 0; i < a.rows(); ++i) dd = dd * a.den();
    LaurentMatrix n1(1, 1);
    n1(0, 0) = dn;
    DetWinding out{RationalMatrixFunction(n1, dd), 0};
    out.wind = winding(dn, tol) - a.rows() * winding(a.den(), tol);
    return out;
}

bool check_bw_membership(const RationalMatrixFunction& a, const InvolutionMatrix& w) {
    if (!a.is_square() || a.rows() != w.size()) fail(ErrorKind::ShapeMismatch, "symbol and involution sizes differ");
    RationalMatrixFunction ws = w.symbol();
    return approx_equal(ws * a.tilde() * ws, a, 1e-10);
}

}  // namespace whflip
