#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "whflip/antisym.hpp"
#include "whflip/op_calculus.hpp"

namespace whflip {

enum class Route {
    left,   // factor F = A W tilde(A)^{-1}
    right,  // factor G = tilde(B)^{-1} W B
};

// Where the analyzed operator lives: (H2)^N or (L2)^N.
enum class Space { hardy, lebesgue };

struct FredholmReport {
    bool fredholm = false;
    std::optional<int> index;
    std::optional<int> dim_ker;
    std::optional<int> dim_coker;
    std::vector<CharPair> pairs;
    bool invertible = false;
    std::optional<OperatorExpr> pseudoinverse;
    Route route = Route::left;

    OperatorExpr op;
    Space space = Space::hardy;
    int window = 0;    // window at which the pseudoinverse met the tail guarantee, 0 if exact, -1 if never
    std::string note;  // why the operator is not Fredholm, or why window is -1
};

// kappa / 2 for even kappa, (kappa - rho) / 2 for odd kappa.
int theta(int rho, int kappa);

// (-sum_{kappa<0} Theta, sum_{kappa>0} Theta), with rho negated when flip_rho is set.
std::pair<int, int> dims_from_pairs(const std::vector<CharPair>& pairs, bool flip_rho = false);

FredholmReport analyze_toeplitz_hankel(const RationalMatrixFunction& a, const RationalMatrixFunction& b,
                                       Route route = Route::left, const Tolerances& tol = default_tolerances());
FredholmReport analyze_mw(const RationalMatrixFunction& a, const InvolutionMatrix& w,
                          const Tolerances& tol = default_tolerances());
FredholmReport analyze_nw(const RationalMatrixFunction& a, const InvolutionMatrix& w,
                          const Tolerances& tol = default_tolerances());
FredholmReport analyze_phi(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
FredholmReport analyze_psi(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
FredholmReport analyze_general_sio(const RationalMatrixFunction& a, const RationalMatrixFunction& b,
                                   const Tolerances& tol = default_tolerances());

enum class InvertKind { mw_phi, nw_psi };

// Every pair in {(-1,-1), (-1,0), (1,0), (1,1)} resp. {(1,-1), (-1,0), (1,0), (-1,1)}.
bool classify_invertibility(const std::vector<CharPair>& pairs, InvertKind kind);

// dim ker (I + H(D)) = sum_{kappa>0} Theta(rho, kappa)
int middle_hankel_dims(const std::vector<CharPair>& pairs);

struct MiddleHankelOps {
    OperatorExpr hd;        // H(D)
    OperatorExpr b;         // I + H(D)
    OperatorExpr b_dagger;  // I - H(D)^2 + (H(D)^2 + H(D)) / 4
};
MiddleHankelOps middle_hankel_ops(const std::vector<CharPair>& pairs);

// A with W tilde(A) W = A: invertible iff det A has no zero on the circle, inverse M_W(A^{-1}).
FredholmReport bw_shortcut(const RationalMatrixFunction& a, const InvolutionMatrix& w,
                           const Tolerances& tol = default_tolerances());

}  // namespace whflip
