#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "whflip/antisym.hpp"
#include "whflip/op_calculus.hpp"
#include "whflip/solver.hpp"

namespace whflip {

// Checks that recompute everything from symbols. Nothing here looks at factorization output.

struct SplittingEstimate {
    int total_defect = 0;  // approximately dim ker + dim coker
    std::vector<int> sizes_used;
    std::vector<int> counts;                               // per size
    std::vector<std::vector<double>> smallest_singular_values;  // per size, ascending
    std::vector<double> gap_ratios;                        // per size
    bool confident = false;
};

// Counts singular values of finite sections below tol.split * sigma_max.
// Throws Inconclusive when the counts disagree between sizes.
SplittingEstimate sv_splitting(const OperatorExpr& x, const std::vector<int>& sizes,
                               const Tolerances& tol = default_tolerances());

struct PseudoinverseCheck {
    double residual = 0.0;  // max over trials of |X Xd X v - X v| and |Xd X Xd v - Xd v|, relative to |v|
    double tail = 0.0;      // largest propagated tail bound, relative to |v|
    int trials = 0;
    int window = 0;  // 0: automatic
    bool pass = false;
};

// Random finitely supported v on modes 0..5, or -5..5 for the Lebesgue space.
// window <= 0 picks the window automatically.
PseudoinverseCheck verify_pseudoinverse(const OperatorExpr& x, const OperatorExpr& xd, int trials, int window,
                                        double tol, Space space = Space::hardy, std::uint64_t seed = 1);

struct IdentityResult {
    std::string name;
    double max_residual = 0.0;
    int checks = 0;
};

struct IdentityReport {
    std::uint64_t seed = 0;
    int cases = 0;
    std::vector<IdentityResult> results;  // fixed order, see identity_names()
    double max_residual() const;
};

const std::vector<std::string>& identity_names();

// Each case draws its own symbols from (seed, case number), so cases are independent.
IdentityReport identity_suite(std::uint64_t seed, int cases);

// ---- generators

// Coefficients uniform in the complex unit square, exponents lo..hi.
RationalMatrixFunction random_symbol(std::mt19937_64& rng, int rows, int cols, int lo, int hi);
// Same, redrawn until |det| >= min_det on 256 circle points.
RationalMatrixFunction random_invertible_symbol(std::mt19937_64& rng, int n, int lo, int hi, double min_det = 0.1);
// S diag(I_plus, -I_minus) S^{-1} with S a perturbed identity.
InvolutionMatrix random_involution(std::mt19937_64& rng, int plus, int minus);
// n pairs with kappa in [-kmax, kmax] and as many odd kappa with rho = 1 as with rho = -1.
std::vector<CharPair> random_pairs(std::mt19937_64& rng, int n, int kmax);
// W matching the signature that build_middle_R needs for these pairs.
InvolutionMatrix involution_for(std::mt19937_64& rng, const std::vector<CharPair>& pairs);

}  // namespace whflip
