#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "whflip/symbol.hpp"

namespace whflip {

// A = minus * diag(t^kappa_j) * plus, kappa ascending.
struct WHFactorization {
    RationalMatrixFunction minus_factor;
    RationalMatrixFunction plus_factor;
    std::vector<int> partial_indices;

    RationalMatrixFunction middle() const;
    RationalMatrixFunction product() const;
};

struct ScalarSplit {
    RationalMatrixFunction minus;
    int kappa = 0;
    RationalMatrixFunction plus;
};

// Same decomposition for a bare Laurent polynomial: p = minus * t^kappa * plus,
// minus a polynomial in 1/t carrying the leading constant, plus(0) = 1.
struct PolySplit {
    LaurentPoly minus;
    int kappa = 0;
    LaurentPoly plus;
};

PolySplit split_poly(const LaurentPoly& p, const Tolerances& tol = default_tolerances());
ScalarSplit split_scalar(const RationalMatrixFunction& r, const Tolerances& tol = default_tolerances());

// Invertible and analytic in the closed disk, or outside it including infinity.
bool in_plus_group(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());
bool in_minus_group(const RationalMatrixFunction& a, const Tolerances& tol = default_tolerances());

WHFactorization factor_matrix(const RationalMatrixFunction& f, const Tolerances& tol = default_tolerances());

struct WHReport {
    double residual = 0.0;
    bool minus_ok = false;
    bool plus_ok = false;
    int index_sum = 0;
    int winding = 0;
    bool pass = false;
    std::vector<std::string> issues;
};

WHReport verify_wh(const WHFactorization& fact, const RationalMatrixFunction& f,
                   const Tolerances& tol = default_tolerances());

// Equal partial indices grouped into runs: sizes l_j and values kbar_j.
struct IndexBlocks {
    std::vector<int> sizes;
    std::vector<int> values;
    std::vector<int> offsets;
};
IndexBlocks index_blocks(const std::vector<int>& sorted_indices);

// Apply a block upper triangular U (constant invertible diagonal blocks, U_jk of
// degree at most kbar_k - kbar_j): minus <- minus * V, plus <- U^{-1} * plus.
WHFactorization perturb_factorization(const WHFactorization& fact, const LaurentMatrix& u);
WHFactorization perturb_factorization(const WHFactorization& fact, std::uint64_t seed);
LaurentMatrix random_block_triangular(const std::vector<int>& sorted_indices, std::uint64_t seed);

}  // namespace whflip
