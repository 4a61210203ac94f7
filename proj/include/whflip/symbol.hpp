#pragma once

#include <Eigen/Dense>
#include <vector>

#include "whflip/laurent_poly.hpp"
#include "whflip/tolerances.hpp"

namespace whflip {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Dense rows x cols matrix of Laurent polynomials.
class LaurentMatrix {
public:
    LaurentMatrix() = default;
    LaurentMatrix(int rows, int cols);

    static LaurentMatrix identity(int n);
    static LaurentMatrix constant(const CMatrix& m);
    static LaurentMatrix diagonal(const std::vector<LaurentPoly>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    LaurentPoly& operator()(int i, int j) { return e_[std::size_t(i) * cols_ + j]; }
    const LaurentPoly& operator()(int i, int j) const { return e_[std::size_t(i) * cols_ + j]; }

    bool is_zero() const;
    int low() const;
    int high() const;
    double max_abs() const;
    CMatrix coeff(int k) const;

    CMatrix evaluate(cplx z) const;
    LaurentMatrix tilde() const;
    LaurentMatrix transpose() const;
    LaurentMatrix adjoint() const;
    LaurentMatrix shifted(int k) const;
    LaurentMatrix normalized(double scale = 0.0) const;
    LaurentMatrix block(int r0, int c0, int nr, int nc) const;
    void set_block(int r0, int c0, const LaurentMatrix& b);

    // Determinant and adjugate by evaluation on roots of unity plus inverse DFT.
    LaurentPoly det() const;
    LaurentMatrix adjugate() const;

    friend LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b);
    friend LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b);
    friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b);
    friend LaurentMatrix operator*(const LaurentPoly& s, const LaurentMatrix& a);
    friend LaurentMatrix operator*(const CMatrix& c, const LaurentMatrix& a);
    friend LaurentMatrix operator*(const LaurentMatrix& a, const CMatrix& c);
    friend bool operator==(const LaurentMatrix& a, const LaurentMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<LaurentPoly> e_;
};

double rel_distance(const LaurentMatrix& a, const LaurentMatrix& b);

// numerator / denominator with a scalar denominator whose t^0 coefficient is 1.
class RationalMatrixFunction {
public:
    RationalMatrixFunction() = default;
    RationalMatrixFunction(LaurentMatrix num, LaurentPoly den = LaurentPoly(1.0));
    RationalMatrixFunction(const LaurentPoly& scalar);  // NOLINT: 1x1 symbol
    explicit RationalMatrixFunction(const CMatrix& constant);

    static RationalMatrixFunction identity(int n);
    static RationalMatrixFunction zero(int rows, int cols);

    int rows() const { return num_.rows(); }
    int cols() const { return num_.cols(); }
    bool is_square() const { return rows() == cols(); }
    const LaurentMatrix& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    bool is_laurent() const { return den_.is_monomial() && den_.low() == 0; }
    bool is_zero() const { return num_.is_zero(); }

    CMatrix evaluate(cplx z, const Tolerances& tol = default_tolerances()) const;
    RationalMatrixFunction tilde() const;
    RationalMatrixFunction transpose() const;
    RationalMatrixFunction adjoint() const;
    RationalMatrixFunction block(int r0, int c0, int nr, int nc) const;
    RationalMatrixFunction scaled(cplx s) const;

    // Cancel common roots of the denominator and every numerator entry.
    RationalMatrixFunction simplified(double rel = 1e-9) const;

    // Denominator root closest to |z| = 1, as a distance; +inf if none.
    double pole_distance_to_circle() const;
    bool valid(const Tolerances& tol = default_tolerances()) const;

private:
    void normalize();
    LaurentMatrix num_;
    LaurentPoly den_{1.0};
};

enum class ArithOp { add, sub, mul };
RationalMatrixFunction arith(const RationalMatrixFunction& a, const RationalMatrixFunction& b, ArithOp op);
RationalMatrixFunction operator+(const RationalMatrixFunction& a, const RationalMatrixFunction& b);
RationalMatrixFunction operator-(const RationalMatrixFunction& a, const RationalMatrixFunction& b);
RationalMatrixFunction operator*(const RationalMatrixFunction& a, const RationalMatrixFunction& b);
RationalMatrixFunction operator*(cplx s, const RationalMatrixFunction& a);

RationalMatrixFunction inverse(const RationalMatrixFunction& a);
RationalMatrixFunction hstack(const std::vector<RationalMatrixFunction>& parts);
RationalMatrixFunction vstack(const std::vector<RationalMatrixFunction>& parts);
RationalMatrixFunction block_matrix(const std::vector<std::vector<RationalMatrixFunction>>& grid);

// Largest relative mismatch of num_a * den_b - num_b * den_a.
double rel_distance(const RationalMatrixFunction& a, const RationalMatrixFunction& b);
bool approx_equal(const RationalMatrixFunction& a, const RationalMatrixFunction& b, double rel = 1e-10);

// Sup over a circle grid of |a(t) - b(t)| relative to sup |b(t)|.
double grid_residual(const RationalMatrixFunction& a, const RationalMatrixFunction& b, int points = 512);

// Constant W with W * W = I.
class InvolutionMatrix {
public:
    explicit InvolutionMatrix(const CMatrix& w, double tol = 1e-12);
    static InvolutionMatrix identity(int n);
    static InvolutionMatrix flip_blocks(int n);  // [[0, I_n], [I_n, 0]]

    int size() const { return int(w_.rows()); }
    const CMatrix& matrix() const { return w_; }
    RationalMatrixFunction symbol() const { return RationalMatrixFunction(w_); }

private:
    CMatrix w_;
};

struct DetWinding {
    RationalMatrixFunction det;
    int wind = 0;
};

// Winding number of a scalar Laurent polynomial about 0 along the circle.
int winding(const LaurentPoly& p, const Tolerances& tol = default_tolerances());
DetWinding det_and_winding(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());

bool check_bw_membership(const RationalMatrixFunction& a, const InvolutionMatrix& w);

}  // namespace whflip
