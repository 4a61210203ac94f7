#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "whflip/fourier.hpp"
#include "whflip/symbol.hpp"

namespace whflip {

// Finitely supported sequence of Fourier modes, each mode a complex vector of length dim.
class FourierVec {
public:
    FourierVec() = default;
    explicit FourierVec(int dim) : dim_(dim) {}

    static FourierVec basis(int dim, int mode, int comp, cplx c = 1.0);

    int dim() const { return dim_; }
    const std::map<int, CVector>& entries() const { return e_; }
    bool empty() const { return e_.empty(); }
    int low() const;
    int high() const;
    bool has_negative_modes() const { return !e_.empty() && e_.begin()->first < 0; }

    CVector at(int mode) const;
    void add(int mode, const CVector& v);
    double norm() const;

    // Components [c0, c0 + n) of every mode.
    FourierVec components(int c0, int n) const;
    static FourierVec stack(const std::vector<FourierVec>& parts);

    FourierVec& operator+=(const FourierVec& o);
    friend FourierVec operator+(FourierVec a, const FourierVec& b) { return a += b; }
    friend FourierVec operator-(const FourierVec& a, const FourierVec& b);
    friend FourierVec operator*(cplx s, const FourierVec& a);

private:
    int dim_ = 0;
    std::map<int, CVector> e_;
};

enum class OpKind {
    RieszP,
    RieszQ,
    FlipJ,
    Mult,
    Toep,
    Hank,
    Identity,
    Compose,
    Sum,
    Scale,
    Adjoint,
    BlockRow,
    BlockCol,
    BlockMatrix,
};

struct OpNode;

// Immutable expression tree. Copies share the node.
class OperatorExpr {
public:
    OperatorExpr() = default;
    explicit OperatorExpr(std::shared_ptr<const OpNode> n) : n_(std::move(n)) {}

    const OpNode& node() const { return *n_; }
    bool valid() const { return bool(n_); }
    OpKind kind() const;
    int in_dim() const;
    int out_dim() const;
    // All symbols Laurent polynomials: application is exact.
    bool exact() const;
    // Upper bound for the operator norm, from l1 norms of symbol coefficients.
    double norm_bound() const;

private:
    std::shared_ptr<const OpNode> n_;
};

struct OpNode {
    OpKind kind = OpKind::Identity;
    int in = 0, out = 0;
    bool exact = true;
    double bound = 1.0;
    cplx scale = 1.0;
    RationalMatrixFunction symbol;
    FourierSeries series;
    std::vector<OperatorExpr> children;
    int grid_rows = 0, grid_cols = 0;  // BlockMatrix, children row-major
    OperatorExpr adjoint_tree;         // Adjoint
};

OperatorExpr riesz_p(int n);
OperatorExpr riesz_q(int n);
OperatorExpr flip(int n);
OperatorExpr identity_op(int n);
OperatorExpr mult(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
OperatorExpr toeplitz(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
OperatorExpr hankel(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
// compose({X, Y, Z}) = X Y Z, Z applied first.
OperatorExpr compose(const std::vector<OperatorExpr>& factors);
OperatorExpr sum(const std::vector<OperatorExpr>& terms);
OperatorExpr scale(cplx c, const OperatorExpr& x);
OperatorExpr adjoint(const OperatorExpr& x);
OperatorExpr block_row(const std::vector<OperatorExpr>& parts);
OperatorExpr block_col(const std::vector<OperatorExpr>& parts);
OperatorExpr block_matrix(const std::vector<std::vector<OperatorExpr>>& grid);

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr operator*(cplx c, const OperatorExpr& a);

std::string to_string(const OperatorExpr& x);

struct ApplyResult {
    FourierVec v;
    double tail_bound = 0.0;  // l2 bound on the error from truncated symbol expansions
    int window = 0;
};

// Rational symbols use their coefficients on [-window, window]; Laurent symbols are exact.
ApplyResult apply(const OperatorExpr& x, const FourierVec& v, int window);
// Doubles the window from 64 until tail_bound <= tol.tail * |v|, at most 1024.
ApplyResult apply_auto(const OperatorExpr& x, const FourierVec& v, const Tolerances& tol = default_tolerances(),
                       int start_window = 64);

// Compression to modes 0..n-1; row index mode * out_dim + component.
CMatrix finite_section(const OperatorExpr& x, int n, const Tolerances& tol = default_tolerances());

// W tilde(A) W with W = [[0, I], [I, 0]].
RationalMatrixFunction hat(const RationalMatrixFunction& a);

OperatorExpr build_mw(const RationalMatrixFunction& a, const InvolutionMatrix& w,
                      const Tolerances& tol = default_tolerances());
OperatorExpr build_nw(const RationalMatrixFunction& a, const InvolutionMatrix& w,
                      const Tolerances& tol = default_tolerances());

// (P, JP) M(A) (P; PJ) and (P, JP) M(A) (Q; QJ) on (L2)^N for A of size 2N.
OperatorExpr cal_t(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
OperatorExpr cal_h(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());

// PM(a) + PJM(tilde b) + QJM(c) + QM(tilde d)
OperatorExpr build_phi(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
// M(a)P + M(b)JQ + M(tilde c)JP + M(tilde d)Q
OperatorExpr build_psi(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
// Eight-term operator equal to cal_t(A) + cal_h(B W).
OperatorExpr build_general_sio(const RationalMatrixFunction& a, const RationalMatrixFunction& b,
                               const Tolerances& tol = default_tolerances());

// (P; PJ) X (P, JP): operators on (L2)^N to operators on (H2)^{2N}.
// L2 mode m >= 0 is component-1 mode m, m <= -1 is component-2 mode -1-m.
OperatorExpr xi_transport(const OperatorExpr& x);
// (P, JP) Y (P; PJ)
OperatorExpr xi_inverse(const OperatorExpr& y);

}  // namespace whflip
