#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "whflip/errors.hpp"
#include "whflip/fourier.hpp"

using namespace whflip;
using namespace th;

namespace {

RationalMatrixFunction random_poly_matrix(std::mt19937_64& rng, int n, int lo, int hi) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LaurentMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::map<int, cplx> c;
            for (int k = lo; k <= hi; ++k) c[k] = cplx(u(rng), u(rng));
            m(i, j) = LaurentPoly(c);
        }
    return RationalMatrixFunction(m);
}

}  // namespace

TEST_CASE("arith examples") {
    auto t = scalar(mono(1));
    CHECK(arith(t, t, ArithOp::mul).num()(0, 0) == mono(2));
    auto i2 = RationalMatrixFunction::identity(2);
    CHECK(approx_equal(arith(i2, RationalMatrixFunction::zero(2, 2), ArithOp::add), i2, 0.0));
    auto a = mat({{mono(1), 1.0}, {0.0, 1.0}});
    auto b = mat({{mono(-1), -mono(-1)}, {0.0, 1.0}});
    CHECK(approx_equal(a * b, i2, 1e-15));
    CHECK_THROWS_AS(arith(a, RationalMatrixFunction::identity(3), ArithOp::mul), Error);
}

TEST_CASE("tilde examples") {
    CHECK(scalar(mono(1)).tilde().num()(0, 0) == mono(-1));
    auto a = mat({{mono(1), 1.0}, {0.0, mono(-2)}});
    auto expect = mat({{mono(-1), 1.0}, {0.0, mono(2)}});
    CHECK(a.tilde().num() == expect.num());

    auto r = scalar(lp({{1, 1.0}, {0, -2.0}}), lp({{1, 1.0}, {0, -3.0}}));
    auto rt = r.tilde();
    // (1/t - 2)/(1/t - 3) = (1 - 2t)/(1 - 3t)
    CHECK(rt.den() == lp({{0, 1.0}, {1, -3.0}}));
    CHECK(rt.num()(0, 0) == lp({{0, 1.0}, {1, -2.0}}));
    CHECK(approx_equal(rt.tilde(), r, 1e-15));
}

TEST_CASE("evaluate examples") {
    CHECK(std::abs(scalar(mono(2)).evaluate(-1.0)(0, 0) - 1.0) < 1e-15);
    CHECK(max_abs(RationalMatrixFunction::identity(3).evaluate(cplx(0.3, 0.7)) - CMatrix::Identity(3, 3)) == 0.0);
    auto f = mat({{0.0, mono(1)}, {mono(1), 0.0}});
    CMatrix w(2, 2);
    w << 0, 1, 1, 0;
    CHECK(max_abs(f.evaluate(1.0) - w) == 0.0);
    CHECK_THROWS_AS(scalar(1.0, lp({{0, 1.0}, {1, -1.0}})).evaluate(1.0), Error);
}

TEST_CASE("det_and_winding examples") {
    auto d = mat({{mono(1), 0.0}, {0.0, mono(1)}});
    CHECK(det_and_winding(d).wind == 2);
    CHECK(det_and_winding(scalar(lp({{1, 1.0}, {0, 2.0}}))).wind == 0);
    CHECK(det_and_winding(scalar(lp({{1, 1.0}, {0, -0.5}}))).wind == 1);
    CHECK(det_and_winding(scalar(1.0, lp({{1, 1.0}, {0, -0.5}}))).wind == -1);
    CHECK_THROWS_AS(det_and_winding(scalar(lp({{1, 1.0}, {-1, 1.0}}))), Error);
}

TEST_CASE("winding agrees with the argument principle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_poly_matrix(rng, 1 + trial % 3, -1, 2);
        int w = 0;
        try {
            w = det_and_winding(a).wind;
        } catch (const Error&) {
            continue;
        }
        auto f = [&](cplx z) { return a.evaluate(z).determinant(); };
        CHECK(w == argument_winding(f));
    }
}

TEST_CASE("fourier_coeffs examples") {
    auto t3 = fourier_coeffs(scalar(mono(3)), -4, 4);
    for (int k = -4; k <= 4; ++k) CHECK(std::abs(t3.c[k + 4](0, 0) - (k == 3 ? 1.0 : 0.0)) == 0.0);
    CHECK(t3.tail_bound == 0.0);

    auto g = fourier_coeffs(scalar(1.0, lp({{0, 1.0}, {1, -0.5}})), -5, 20);
    for (int k = -5; k <= 20; ++k) {
        double expect = k >= 0 ? std::pow(2.0, -k) : 0.0;
        CHECK(std::abs(g.c[k + 5](0, 0) - expect) < 1e-14);
    }
    CHECK(g.tail_bound < 1e-5);

    auto h = fourier_coeffs(scalar(1.0, lp({{1, 1.0}, {0, -2.0}})), 0, 0);
    CHECK(std::abs(h.c[0](0, 0) + 0.5) < 1e-15);
}

TEST_CASE("fourier_coeffs match quadrature for mixed poles") {
    // (t + 3 - 1/t) / ((1 - 0.4/t)(1 - t/3)) written over a polynomial denominator.
    LaurentPoly den = lp({{0, 1.0}, {-1, -0.4}}) * lp({{0, 1.0}, {1, -1.0 / 3.0}});
    auto r = scalar(lp({{1, 1.0}, {0, 3.0}, {-1, -1.0}}), den);
    auto tab = fourier_coeffs(r, -30, 30);
    auto f = [&](cplx z) { return r.evaluate(z)(0, 0); };
    for (int k = -30; k <= 30; ++k) CHECK(std::abs(tab.c[k + 30](0, 0) - quadrature_coeff(f, k)) < 1e-12);
    CHECK(tab.tail_bound < 1e-10);
}

TEST_CASE("inverse examples") {
    auto i3 = RationalMatrixFunction::identity(3);
    CHECK(approx_equal(inverse(i3), i3, 0.0));
    auto d = mat({{mono(1), 0.0}, {0.0, mono(1)}});
    CHECK(approx_equal(inverse(d), mat({{mono(-1), 0.0}, {0.0, mono(-1)}}), 1e-15));
    auto a = mat({{mono(1), 1.0}, {0.0, 1.0}});
    auto ai = inverse(a);
    CHECK(ai.is_laurent());
    CHECK(rel_distance(ai.num(), mat({{mono(-1), -mono(-1)}, {0.0, 1.0}}).num()) < 1e-15);
    CHECK_THROWS_AS(inverse(mat({{mono(1), mono(1)}, {1.0, 1.0}})), Error);
}

TEST_CASE("check_bw_membership examples") {
    CMatrix w(2, 2);
    w << 0, 1, 1, 0;
    InvolutionMatrix W(w);
    CHECK(check_bw_membership(mat({{mono(1), 1.0}, {1.0, mono(-1)}}), W));
    CHECK_FALSE(check_bw_membership(mat({{mono(1), 0.0}, {0.0, mono(1)}}), W));
    CHECK(check_bw_membership(scalar(lp({{1, 1.0}, {-1, 1.0}})), InvolutionMatrix::identity(1)));
    CHECK_THROWS_AS(InvolutionMatrix(CMatrix::Constant(2, 2, 1.0)), Error);
}

TEST_CASE("property: tilde, inverse and products") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + trial % 3;
        auto a = random_poly_matrix(rng, n, -1, 1);
        auto b = random_poly_matrix(rng, n, 0, 2);
        double low_det = 1e300;
        for (int m = 0; m < 256; ++m)
            low_det = std::min(low_det, std::abs(a.evaluate(std::polar(1.0, 2.0 * std::numbers::pi * m / 256)).determinant()));
        if (low_det < 0.1) continue;
        CHECK(approx_equal(a.tilde().tilde(), a, 0.0));
        CHECK(approx_equal((a * b).tilde(), a.tilde() * b.tilde(), 1e-13));
        auto ai = inverse(a);
        CHECK(grid_residual(a * ai, RationalMatrixFunction::identity(n), 64) < 1e-9);
        CHECK(grid_residual(inverse(ai), a, 64) < 1e-8);
        try {
            int wa = det_and_winding(a).wind, wb = det_and_winding(b).wind;
            CHECK(det_and_winding(a * b).wind == wa + wb);
        } catch (const Error&) {
        }
    }
}

TEST_CASE("property: coefficients of a product are the convolution") {
    auto a = scalar(lp({{0, 1.0}, {1, 0.5}}), lp({{0, 1.0}, {-1, -0.3}}));
    auto b = scalar(lp({{-1, 2.0}, {0, 1.0}}), lp({{0, 1.0}, {1, -0.25}}));
    const int L = 80;
    auto ta = fourier_coeffs(a, -L, L), tb = fourier_coeffs(b, -L, L), tab = fourier_coeffs(a * b, -10, 10);
    for (int k = -10; k <= 10; ++k) {
        cplx s = 0.0;
        for (int j = -L; j <= L; ++j)
            if (k - j >= -L && k - j <= L) s += ta.c[j + L](0, 0) * tb.c[k - j + L](0, 0);
        CHECK(std::abs(s - tab.c[k + 10](0, 0)) < 1e-12 + ta.tail_bound + tb.tail_bound);
    }
}
