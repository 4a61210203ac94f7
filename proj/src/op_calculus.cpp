#include "whflip/op_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "whflip/errors.hpp"

namespace whflip {

// ---------------------------------------------------------------- FourierVec

FourierVec FourierVec::basis(int dim, int mode, int comp, cplx c) {
    if (comp < 0 || comp >= dim) fail(ErrorKind::ShapeMismatch, "basis component out of range");
    FourierVec v(dim);
    CVector x = CVector::Zero(dim);
    x(comp) = c;
    v.e_[mode] = x;
    return v;
}

int FourierVec::low() const { return e_.empty() ? 0 : e_.begin()->first; }
int FourierVec::high() const { return e_.empty() ? -1 : e_.rbegin()->first; }

CVector FourierVec::at(int mode) const {
    auto it = e_.find(mode);
    return it == e_.end() ? CVector::Zero(dim_) : it->second;
}

void FourierVec::add(int mode, const CVector& v) {
    if (v.size() != dim_) fail(ErrorKind::ShapeMismatch, "mode vector has the wrong length");
    auto it = e_.find(mode);
    if (it == e_.end())
        e_.emplace(mode, v);
    else
        it->second += v;
}

double FourierVec::norm() const {
    double s = 0.0;
    for (const auto& [m, x] : e_) s += x.squaredNorm();
    return std::sqrt(s);
}

FourierVec FourierVec::components(int c0, int n) const {
    if (c0 < 0 || c0 + n > dim_) fail(ErrorKind::ShapeMismatch, "component range out of bounds");
    FourierVec out(n);
    for (const auto& [m, x] : e_) out.e_.emplace(m, x.segment(c0, n));
    return out;
}

FourierVec FourierVec::stack(const std::vector<FourierVec>& parts) {
    int d = 0;
    for (const auto& p : parts) d += p.dim();
    FourierVec out(d);
    int c0 = 0;
    for (const auto& p : parts) {
        for (const auto& [m, x] : p.e_) {
            auto it = out.e_.find(m);
            if (it == out.e_.end()) it = out.e_.emplace(m, CVector::Zero(d)).first;
            it->second.segment(c0, p.dim()) = x;
        }
        c0 += p.dim();
    }
    return out;
}

FourierVec& FourierVec::operator+=(const FourierVec& o) {
    if (o.dim_ != dim_) fail(ErrorKind::ShapeMismatch, "adding vectors of different dimension");
    for (const auto& [m, x] : o.e_) add(m, x);
    return *this;
}

FourierVec operator-(const FourierVec& a, const FourierVec& b) { return a + cplx(-1.0) * b; }

FourierVec operator*(cplx s, const FourierVec& a) {
    FourierVec out = a;
    for (auto& [m, x] : out.e_) x *= s;
    return out;
}

// ---------------------------------------------------------------- construction

OpKind OperatorExpr::kind() const { return n_->kind; }
int OperatorExpr::in_dim() const { return n_->in; }
int OperatorExpr::out_dim() const { return n_->out; }
bool OperatorExpr::exact() const { return n_->exact; }
double OperatorExpr::norm_bound() const { return n_->bound; }

namespace {

OperatorExpr make(OpNode n) { return OperatorExpr(std::make_shared<const OpNode>(std::move(n))); }

OperatorExpr simple(OpKind k, int n) {
    if (n <= 0) fail(ErrorKind::ShapeMismatch, "operator dimension must be positive");
    OpNode node;
    node.kind = k;
    node.in = node.out = n;
    return make(std::move(node));
}

OperatorExpr symbol_node(OpKind k, const RationalMatrixFunction& a, const Tolerances& tol) {
    if (a.rows() <= 0 || a.cols() <= 0) fail(ErrorKind::ShapeMismatch, "empty symbol");
    OpNode node;
    node.kind = k;
    node.in = a.cols();
    node.out = a.rows();
    node.symbol = a;
    node.exact = a.is_laurent();
    node.series.rows = a.rows();
    node.series.cols = a.cols();
    if (!a.is_zero()) node.series = expand_symbol(a, tol);
    node.bound = node.series.l1_norm();
    return make(std::move(node));
}

void check_children(const std::vector<OperatorExpr>& v, const char* what) {
    if (v.empty()) fail(ErrorKind::ShapeMismatch, std::string("empty ") + what);
    for (const auto& x : v)
        if (!x.valid()) fail(ErrorKind::ShapeMismatch, std::string("null operand in ") + what);
}

}  // namespace

OperatorExpr riesz_p(int n) { return simple(OpKind::RieszP, n); }
OperatorExpr riesz_q(int n) { return simple(OpKind::RieszQ, n); }
OperatorExpr flip(int n) { return simple(OpKind::FlipJ, n); }
OperatorExpr identity_op(int n) { return simple(OpKind::Identity, n); }

OperatorExpr mult(const RationalMatrixFunction& a, const Tolerances& tol) { return symbol_node(OpKind::Mult, a, tol); }
OperatorExpr toeplitz(const RationalMatrixFunction& a, const Tolerances& tol) {
    return symbol_node(OpKind::Toep, a, tol);
}
OperatorExpr hankel(const RationalMatrixFunction& a, const Tolerances& tol) {
    return symbol_node(OpKind::Hank, a, tol);
}

OperatorExpr compose(const std::vector<OperatorExpr>& factors) {
    check_children(factors, "composition");
    for (std::size_t i = 0; i + 1 < factors.size(); ++i)
        if (factors[i].in_dim() != factors[i + 1].out_dim())
            fail(ErrorKind::ShapeMismatch, "composition shapes do not conform");
    OpNode node;
    node.kind = OpKind::Compose;
    node.out = factors.front().out_dim();
    node.in = factors.back().in_dim();
    for (const auto& f : factors) {
        node.exact = node.exact && f.exact();
        node.bound *= f.norm_bound();
    }
    node.children = factors;
    return make(std::move(node));
}

OperatorExpr sum(const std::vector<OperatorExpr>& terms) {
    check_children(terms, "sum");
    OpNode node;
    node.kind = OpKind::Sum;
    node.in = terms.front().in_dim();
    node.out = terms.front().out_dim();
    node.bound = 0.0;
    for (const auto& t : terms) {
        if (t.in_dim() != node.in || t.out_dim() != node.out) fail(ErrorKind::ShapeMismatch, "sum of different shapes");
        node.exact = node.exact && t.exact();
        node.bound += t.norm_bound();
    }
    node.children = terms;
    return make(std::move(node));
}

OperatorExpr scale(cplx c, const OperatorExpr& x) {
    check_children({x}, "scale");
    OpNode node;
    node.kind = OpKind::Scale;
    node.in = x.in_dim();
    node.out = x.out_dim();
    node.scale = c;
    node.exact = x.exact();
    node.bound = std::abs(c) * x.norm_bound();
    node.children = {x};
    return make(std::move(node));
}

OperatorExpr block_row(const std::vector<OperatorExpr>& parts) {
    check_children(parts, "block row");
    OpNode node;
    node.kind = OpKind::BlockRow;
    node.out = parts.front().out_dim();
    node.bound = 0.0;
    for (const auto& p : parts) {
        if (p.out_dim() != node.out) fail(ErrorKind::ShapeMismatch, "block row heights differ");
        node.in += p.in_dim();
        node.exact = node.exact && p.exact();
        node.bound += p.norm_bound();
    }
    node.children = parts;
    return make(std::move(node));
}

OperatorExpr block_col(const std::vector<OperatorExpr>& parts) {
    check_children(parts, "block column");
    OpNode node;
    node.kind = OpKind::BlockCol;
    node.in = parts.front().in_dim();
    node.bound = 0.0;
    for (const auto& p : parts) {
        if (p.in_dim() != node.in) fail(ErrorKind::ShapeMismatch, "block column widths differ");
        node.out += p.out_dim();
        node.exact = node.exact && p.exact();
        node.bound += p.norm_bound();
    }
    node.children = parts;
    return make(std::move(node));
}

OperatorExpr block_matrix(const std::vector<std::vector<OperatorExpr>>& grid) {
    if (grid.empty() || grid[0].empty()) fail(ErrorKind::ShapeMismatch, "empty block grid");
    OpNode node;
    node.kind = OpKind::BlockMatrix;
    node.grid_rows = int(grid.size());
    node.grid_cols = int(grid[0].size());
    node.bound = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (int(grid[i].size()) != node.grid_cols) fail(ErrorKind::ShapeMismatch, "ragged block grid");
        check_children(grid[i], "block grid row");
        for (std::size_t j = 0; j < grid[i].size(); ++j) {
            const auto& x = grid[i][j];
            if (x.out_dim() != grid[i][0].out_dim()) fail(ErrorKind::ShapeMismatch, "block heights differ");
            if (x.in_dim() != grid[0][j].in_dim()) fail(ErrorKind::ShapeMismatch, "block widths differ");
            node.exact = node.exact && x.exact();
            node.bound += x.norm_bound();
            node.children.push_back(x);
        }
        node.out += grid[i][0].out_dim();
    }
    for (const auto& x : grid[0]) node.in += x.in_dim();
    return make(std::move(node));
}

namespace {

OperatorExpr adjoint_of(const OperatorExpr& x) {
    const OpNode& n = x.node();
    std::vector<OperatorExpr> ch;
    switch (n.kind) {
        case OpKind::RieszP:
        case OpKind::RieszQ:
        case OpKind::FlipJ:
        case OpKind::Identity:
            return x;
        case OpKind::Mult:
            return mult(n.symbol.adjoint());
        case OpKind::Toep:
            return toeplitz(n.symbol.adjoint());
        case OpKind::Hank:
            return hankel(n.symbol.tilde().adjoint());
        case OpKind::Compose:
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) ch.push_back(adjoint_of(*it));
            return compose(ch);
        case OpKind::Sum:
            for (const auto& c : n.children) ch.push_back(adjoint_of(c));
            return sum(ch);
        case OpKind::Scale:
            return scale(std::conj(n.scale), adjoint_of(n.children[0]));
        case OpKind::Adjoint:
            return n.children[0];
        case OpKind::BlockRow:
            for (const auto& c : n.children) ch.push_back(adjoint_of(c));
            return block_col(ch);
        case OpKind::BlockCol:
            for (const auto& c : n.children) ch.push_back(adjoint_of(c));
            return block_row(ch);
        case OpKind::BlockMatrix: {
            std::vector<std::vector<OperatorExpr>> g(std::size_t(n.grid_cols));
            for (int j = 0; j < n.grid_cols; ++j)
                for (int i = 0; i < n.grid_rows; ++i)
                    g[std::size_t(j)].push_back(adjoint_of(n.children[std::size_t(i * n.grid_cols + j)]));
            return block_matrix(g);
        }
    }
    fail(ErrorKind::ShapeMismatch, "unknown operator node");
}

}  // namespace

OperatorExpr adjoint(const OperatorExpr& x) {
    check_children({x}, "adjoint");
    OpNode node;
    node.kind = OpKind::Adjoint;
    node.in = x.out_dim();
    node.out = x.in_dim();
    node.exact = x.exact();
    node.bound = x.norm_bound();
    node.children = {x};
    node.adjoint_tree = adjoint_of(x);
    return make(std::move(node));
}

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) { return compose({a, b}); }
OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) { return sum({a, b}); }
OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) { return sum({a, scale(-1.0, b)}); }
OperatorExpr operator*(cplx c, const OperatorExpr& a) { return scale(c, a); }

namespace {

void print(std::ostream& os, const OperatorExpr& x) {
    const OpNode& n = x.node();
    auto list = [&](const char* open, const char* sep, const char* close) {
        os << open;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i) os << sep;
            print(os, n.children[i]);
        }
        os << close;
    };
    auto sym = [&](const char* name) {
        os << name << "(" << n.out << "x" << n.in << (n.exact ? "" : ", rational") << ")";
    };
    switch (n.kind) {
        case OpKind::RieszP: os << "P"; break;
        case OpKind::RieszQ: os << "Q"; break;
        case OpKind::FlipJ: os << "J"; break;
        case OpKind::Identity: os << "I"; break;
        case OpKind::Mult: sym("M"); break;
        case OpKind::Toep: sym("T"); break;
        case OpKind::Hank: sym("H"); break;
        case OpKind::Compose: list("", " ", ""); break;
        case OpKind::Sum: list("(", " + ", ")"); break;
        case OpKind::Scale:
            os << "(" << n.scale.real();
            if (n.scale.imag() != 0.0) os << (n.scale.imag() < 0 ? "-" : "+") << std::abs(n.scale.imag()) << "i";
            os << ")*";
            print(os, n.children[0]);
            break;
        case OpKind::Adjoint:
            os << "(";
            print(os, n.children[0]);
            os << ")*";
            break;
        case OpKind::BlockRow: list("[", ", ", "]"); break;
        case OpKind::BlockCol: list("[", "; ", "]"); break;
        case OpKind::BlockMatrix:
            os << "[";
            for (int i = 0; i < n.grid_rows; ++i) {
                if (i) os << "; ";
                for (int j = 0; j < n.grid_cols; ++j) {
                    if (j) os << ", ";
                    print(os, n.children[std::size_t(i * n.grid_cols + j)]);
                }
            }
            os << "]";
            break;
    }
}

}  // namespace

std::string to_string(const OperatorExpr& x) {
    std::ostringstream os;
    print(os, x);
    return os.str();
}

// ---------------------------------------------------------------- application

namespace {

struct Approx {
    FourierVec v;
    double err = 0.0;
};

FourierVec convolve(const OpNode& n, const FourierVec& v, int window) {
    FourierVec out(n.out);
    const FourierSeries& s = n.series;
    if (s.c.empty()) return out;
    int lo = s.lo, hi = s.hi();
    if (!n.exact) {
        lo = std::max(lo, -window);
        hi = std::min(hi, window);
    }
    for (int k = lo; k <= hi; ++k) {
        const CMatrix& c = s.c[std::size_t(k - s.lo)];
        if (c.isZero(0.0)) continue;
        for (const auto& [m, x] : v.entries()) out.add(m + k, c * x);
    }
    return out;
}

FourierVec keep_nonnegative(const FourierVec& v) {
    FourierVec out(v.dim());
    for (const auto& [m, x] : v.entries())
        if (m >= 0) out.add(m, x);
    return out;
}

FourierVec keep_negative(const FourierVec& v) {
    FourierVec out(v.dim());
    for (const auto& [m, x] : v.entries())
        if (m < 0) out.add(m, x);
    return out;
}

FourierVec flipped(const FourierVec& v) {
    FourierVec out(v.dim());
    for (const auto& [m, x] : v.entries()) out.add(-1 - m, x);
    return out;
}

Approx run(const OperatorExpr& x, const Approx& in, int window);

// Truncation error of a symbol node applied to an approximate input.
double leaf_error(const OpNode& n, const Approx& in, int window) {
    double trunc = n.exact ? 0.0 : n.series.tail(window);
    return n.bound * in.err + trunc * (in.v.norm() + in.err);
}

Approx run(const OperatorExpr& x, const Approx& in, int window) {
    const OpNode& n = x.node();
    if (in.v.dim() != n.in) fail(ErrorKind::ShapeMismatch, "operand dimension does not match the operator");
    switch (n.kind) {
        case OpKind::RieszP: return {keep_nonnegative(in.v), in.err};
        case OpKind::RieszQ: return {keep_negative(in.v), in.err};
        case OpKind::FlipJ: return {flipped(in.v), in.err};
        case OpKind::Identity: return in;
        case OpKind::Mult: return {convolve(n, in.v, window), leaf_error(n, in, window)};
        case OpKind::Toep:
            if (in.v.has_negative_modes()) fail(ErrorKind::ShapeMismatch, "Toeplitz operator applied off the Hardy space");
            return {keep_nonnegative(convolve(n, in.v, window)), leaf_error(n, in, window)};
        case OpKind::Hank:
            if (in.v.has_negative_modes()) fail(ErrorKind::ShapeMismatch, "Hankel operator applied off the Hardy space");
            return {keep_nonnegative(convolve(n, flipped(in.v), window)), leaf_error(n, in, window)};
        case OpKind::Compose: {
            Approx cur = in;
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) cur = run(*it, cur, window);
            return cur;
        }
        case OpKind::Sum: {
            Approx acc{FourierVec(n.out), 0.0};
            for (const auto& c : n.children) {
                Approx r = run(c, in, window);
                acc.v += r.v;
                acc.err += r.err;
            }
            return acc;
        }
        case OpKind::Scale: {
            Approx r = run(n.children[0], in, window);
            return {n.scale * r.v, std::abs(n.scale) * r.err};
        }
        case OpKind::Adjoint: return run(n.adjoint_tree, in, window);
        case OpKind::BlockRow: {
            Approx acc{FourierVec(n.out), 0.0};
            int c0 = 0;
            for (const auto& c : n.children) {
                Approx r = run(c, {in.v.components(c0, c.in_dim()), in.err}, window);
                acc.v += r.v;
                acc.err += r.err;
                c0 += c.in_dim();
            }
            return acc;
        }
        case OpKind::BlockCol: {
            std::vector<FourierVec> parts;
            double err = 0.0;
            for (const auto& c : n.children) {
                Approx r = run(c, in, window);
                parts.push_back(std::move(r.v));
                err += r.err;
            }
            return {FourierVec::stack(parts), err};
        }
        case OpKind::BlockMatrix: {
            std::vector<FourierVec> rows;
            double err = 0.0;
            for (int i = 0; i < n.grid_rows; ++i) {
                const OperatorExpr& first = n.children[std::size_t(i * n.grid_cols)];
                FourierVec acc(first.out_dim());
                int c0 = 0;
                for (int j = 0; j < n.grid_cols; ++j) {
                    const OperatorExpr& c = n.children[std::size_t(i * n.grid_cols + j)];
                    Approx r = run(c, {in.v.components(c0, c.in_dim()), in.err}, window);
                    acc += r.v;
                    err += r.err;
                    c0 += c.in_dim();
                }
                rows.push_back(std::move(acc));
            }
            return {FourierVec::stack(rows), err};
        }
    }
    fail(ErrorKind::ShapeMismatch, "unknown operator node");
}

}  // namespace

ApplyResult apply(const OperatorExpr& x, const FourierVec& v, int window) {
    if (!x.valid()) fail(ErrorKind::ShapeMismatch, "null operator");
    Approx r = run(x, {v, 0.0}, window);
    return {std::move(r.v), r.err, window};
}

ApplyResult apply_auto(const OperatorExpr& x, const FourierVec& v, const Tolerances& tol, int start_window) {
    const double target = tol.tail * std::max(v.norm(), 1e-300);
    int window = std::max(start_window, 1);
    for (;;) {
        ApplyResult r = apply(x, v, window);
        if (x.exact() || r.tail_bound <= target) return r;
        if (window >= 1024) {
            std::ostringstream os;
            os << "tail bound " << r.tail_bound << " at window " << window;
            fail(ErrorKind::WindowTooSmall, os.str());
        }
        window = std::min(2 * window, 1024);
    }
}

CMatrix finite_section(const OperatorExpr& x, int n, const Tolerances& tol) {
    const int din = x.in_dim(), dout = x.out_dim();
    CMatrix m = CMatrix::Zero(n * dout, n * din);
    for (int j = 0; j < n; ++j)
        for (int c = 0; c < din; ++c) {
            ApplyResult r = apply_auto(x, FourierVec::basis(din, j, c), tol);
            for (const auto& [mode, y] : r.v.entries())
                if (mode >= 0 && mode < n) m.block(mode * dout, j * din + c, dout, 1) = y;
        }
    return m;
}

// ---------------------------------------------------------------- builders

namespace {

CMatrix flip_matrix(int n) { return InvolutionMatrix::flip_blocks(n).matrix(); }

void require_even_square(const RationalMatrixFunction& a, const char* what) {
    if (!a.is_square() || a.rows() % 2 != 0) fail(ErrorKind::ShapeMismatch, std::string(what) + " needs an even square symbol");
}

struct Quarters {
    RationalMatrixFunction a, b, c, d;
};

Quarters quarters(const RationalMatrixFunction& s) {
    int n = s.rows() / 2;
    return {s.block(0, 0, n, n), s.block(0, n, n, n), s.block(n, 0, n, n), s.block(n, n, n, n)};
}

}  // namespace

RationalMatrixFunction hat(const RationalMatrixFunction& a) {
    require_even_square(a, "hat");
    RationalMatrixFunction w(flip_matrix(a.rows() / 2));
    return w * a.tilde() * w;
}

OperatorExpr build_mw(const RationalMatrixFunction& a, const InvolutionMatrix& w, const Tolerances& tol) {
    if (!a.is_square() || a.rows() != w.size()) fail(ErrorKind::ShapeMismatch, "symbol and involution sizes differ");
    return toeplitz(a, tol) + hankel(a * w.symbol(), tol);
}

OperatorExpr build_nw(const RationalMatrixFunction& a, const InvolutionMatrix& w, const Tolerances& tol) {
    if (!a.is_square() || a.rows() != w.size()) fail(ErrorKind::ShapeMismatch, "symbol and involution sizes differ");
    return toeplitz(a, tol) + hankel(w.symbol() * a.tilde(), tol);
}

OperatorExpr cal_t(const RationalMatrixFunction& a, const Tolerances& tol) {
    require_even_square(a, "cal_t");
    int n = a.rows() / 2;
    auto p = riesz_p(n);
    auto j = flip(n);
    return compose({block_row({p, j * p}), mult(a, tol), block_col({p, p * j})});
}

OperatorExpr cal_h(const RationalMatrixFunction& a, const Tolerances& tol) {
    require_even_square(a, "cal_h");
    int n = a.rows() / 2;
    auto p = riesz_p(n), q = riesz_q(n);
    auto j = flip(n);
    return compose({block_row({p, j * p}), mult(a, tol), block_col({q, q * j})});
}

OperatorExpr build_phi(const RationalMatrixFunction& s, const Tolerances& tol) {
    require_even_square(s, "Phi");
    auto [a, b, c, d] = quarters(s);
    int n = a.rows();
    auto p = riesz_p(n), q = riesz_q(n), j = flip(n);
    return sum({compose({p, mult(a, tol)}), compose({p, j, mult(b.tilde(), tol)}), compose({q, j, mult(c, tol)}),
                compose({q, mult(d.tilde(), tol)})});
}

OperatorExpr build_psi(const RationalMatrixFunction& s, const Tolerances& tol) {
    require_even_square(s, "Psi");
    auto [a, b, c, d] = quarters(s);
    int n = a.rows();
    auto p = riesz_p(n), q = riesz_q(n), j = flip(n);
    return sum({compose({mult(a, tol), p}), compose({mult(b, tol), j, q}), compose({mult(c.tilde(), tol), j, p}),
                compose({mult(d.tilde(), tol), q})});
}

OperatorExpr build_general_sio(const RationalMatrixFunction& s1, const RationalMatrixFunction& s2,
                               const Tolerances& tol) {
    require_even_square(s1, "general SIO");
    if (s2.rows() != s1.rows() || s2.cols() != s1.cols()) fail(ErrorKind::ShapeMismatch, "A and B sizes differ");
    auto [a1, b1, c1, d1] = quarters(s1);
    auto [a2, b2, c2, d2] = quarters(s2);
    int n = a1.rows();
    auto p = riesz_p(n), q = riesz_q(n), j = flip(n);
    return sum({
        compose({p, mult(a1, tol), p}),
        compose({p, mult(b1, tol), j, q}),
        compose({q, mult(c1.tilde(), tol), j, p}),
        compose({q, mult(d1.tilde(), tol), q}),
        compose({p, mult(a2, tol), j, p}),
        compose({p, mult(b2, tol), q}),
        compose({q, mult(c2.tilde(), tol), p}),
        compose({q, mult(d2.tilde(), tol), j, q}),
    });
}

OperatorExpr xi_transport(const OperatorExpr& x) {
    if (x.in_dim() != x.out_dim()) fail(ErrorKind::ShapeMismatch, "Xi needs a square operator");
    int n = x.in_dim();
    auto p = riesz_p(n), j = flip(n);
    return compose({block_col({p, p * j}), x, block_row({p, j * p})});
}

OperatorExpr xi_inverse(const OperatorExpr& y) {
    if (y.in_dim() != y.out_dim() || y.in_dim() % 2 != 0) fail(ErrorKind::ShapeMismatch, "inverse Xi needs an even square operator");
    int n = y.in_dim() / 2;
    auto p = riesz_p(n), j = flip(n);
    return compose({block_row({p, j * p}), y, block_col({p, p * j})});
}

}  // namespace whflip
