#pragma once

#include <vector>

#include "whflip/symbol.hpp"
#include "whflip/wh_factor.hpp"

namespace whflip {

struct CharPair {
    int rho = 1;
    int kappa = 0;

    friend bool operator==(const CharPair&, const CharPair&) = default;
    friend bool operator<(const CharPair& a, const CharPair& b) {
        return a.kappa != b.kappa ? a.kappa < b.kappa : a.rho < b.rho;
    }
};

// diag(rho_k t^kappa_k)
RationalMatrixFunction middle_factor(const std::vector<CharPair>& pairs);

// Intermediate state of the construction, kept for tests.
struct AntisymTrace {
    std::vector<int> indices;
    IndexBlocks blocks;
    LaurentMatrix u;          // F+ * tilde(F-), block upper triangular
    std::vector<CMatrix> x;   // constant diagonal blocks, each an involution
    LaurentMatrix n1;         // X X0^{-1} - I, nilpotent
    LaurentMatrix sqrt_n1;    // (I + N1)^{1/2}
    CMatrix t;                // block diagonal eigenbasis
    double u_leftover = 0.0;  // mass of U outside the admissible shape
};

// F = F- D tilde(F-)^{-1}, pairs ascending in (kappa, rho).
struct AntisymFactorization {
    RationalMatrixFunction minus_factor;
    std::vector<CharPair> pairs;
    AntisymTrace trace;

    RationalMatrixFunction middle() const { return middle_factor(pairs); }
    RationalMatrixFunction product() const;
};

// Largest coefficient of F * tilde(F) - I relative to the operands.
double antisymmetry_defect(const RationalMatrixFunction& f);

AntisymFactorization antisym_factor(const RationalMatrixFunction& f, const Tolerances& tol = default_tolerances());
// Same, starting from a given WH factorization of f (indices ascending).
AntisymFactorization antisym_factor(const RationalMatrixFunction& f, const WHFactorization& wh,
                                    const Tolerances& tol = default_tolerances());

struct SignatureCounts {
    int alpha = 0;  // rho = +1, kappa even
    int beta = 0;   // rho = +1, kappa odd
    int gamma = 0;  // rho = -1, kappa odd
    int delta = 0;  // rho = -1, kappa even

    friend bool operator==(const SignatureCounts&, const SignatureCounts&) = default;
};

SignatureCounts signature_counts(const std::vector<CharPair>& pairs);

// Number of eigenvalues near +1 and near -1 of a constant involution.
struct Signature {
    int plus = 0;
    int minus = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};
Signature involution_signature(const CMatrix& m, const Tolerances& tol = default_tolerances());

// F(1) ~ diag(I_{a+b}, -I_{g+d}) and F(-1) ~ diag(I_{a+g}, -I_{b+d}).
bool check_signatures(const RationalMatrixFunction& f, const SignatureCounts& counts,
                      const Tolerances& tol = default_tolerances());

enum class RVariant {
    standard,   // D = R W tilde(R)^{-1}
    reflected,  // D = tilde(R)^{-1} W R
};

RationalMatrixFunction build_middle_R(const std::vector<CharPair>& pairs, const InvolutionMatrix& w,
                                      RVariant variant = RVariant::standard,
                                      const Tolerances& tol = default_tolerances());

// A = A- R A0 with A- in the minus group and W tilde(A0) W = A0.
struct LeftAsymFactorization {
    RationalMatrixFunction a_minus;
    RationalMatrixFunction r;
    RationalMatrixFunction a_zero;
    std::vector<CharPair> pairs;
};

// A = A0 R A+ with A+ in the plus group and W tilde(A0) W = A0.
struct RightAsymFactorization {
    RationalMatrixFunction a_zero;
    RationalMatrixFunction r;
    RationalMatrixFunction a_plus;
    std::vector<CharPair> pairs;
};

LeftAsymFactorization asym_factor_left(const RationalMatrixFunction& a, const InvolutionMatrix& w,
                                       const Tolerances& tol = default_tolerances());
RightAsymFactorization asym_factor_right(const RationalMatrixFunction& a, const InvolutionMatrix& w,
                                         const Tolerances& tol = default_tolerances());

}  // namespace whflip
