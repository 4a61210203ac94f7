#pragma once

namespace whflip {

// Numerical thresholds shared by all modules.
struct Tolerances {
    double circle = 1e-8;     // distance of a root to |z| = 1
    double eval = 1e-12;      // |den(z)| below this is a pole
    double rank = 1e-9;       // relative singular value cutoff
    double invol = 1e-8;      // X^2 = I check
    double antisym = 1e-10;   // F * tilde(F) = I check, relative
    double resid = 1e-8;      // grid residual of a factorization, relative
    double split = 1e-6;      // singular value splitting threshold
    double gap = 1e3;         // required spectral gap ratio
    double tail = 1e-12;      // windowed symbol tail guarantee
    int grid = 512;           // circle points for residual checks
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace whflip
