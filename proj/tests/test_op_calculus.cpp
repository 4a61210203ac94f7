#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "whflip/errors.hpp"
#include "whflip/op_calculus.hpp"

using namespace whflip;
using namespace th;

namespace {

bool same_vec(const FourierVec& a, const FourierVec& b, double tol = 1e-14) { return (a - b).norm() <= tol; }

RationalMatrixFunction diag2(const LaurentPoly& x, const LaurentPoly& y) { return mat({{x, 0.0}, {0.0, y}}); }

}  // namespace

TEST_CASE("apply examples") {
    auto e0 = FourierVec::basis(1, 0, 0);
    auto e1 = FourierVec::basis(1, 1, 0);
    auto r = apply(toeplitz(scalar(mono(1))), e0, 64);
    CHECK(same_vec(r.v, e1));
    CHECK(r.tail_bound == 0.0);
    CHECK(same_vec(apply(hankel(scalar(mono(1))), e0, 64).v, e0));
    CHECK(apply(hankel(scalar(mono(1))), e1, 64).v.norm() == 0.0);
    CHECK(apply(hankel(scalar(1.0)), e0, 64).v.norm() == 0.0);
    // J sends mode k to -1-k
    CHECK(same_vec(apply(flip(1), e1, 64).v, FourierVec::basis(1, -2, 0)));
}

TEST_CASE("finite_section examples") {
    CMatrix s = finite_section(toeplitz(scalar(mono(1))), 3);
    CMatrix shift = CMatrix::Zero(3, 3);
    shift(1, 0) = shift(2, 1) = 1.0;
    CHECK(max_abs(s - shift) == 0.0);

    CMatrix h = finite_section(hankel(scalar(mono(2))), 3);
    CMatrix anti = CMatrix::Zero(3, 3);
    anti(0, 1) = anti(1, 0) = 1.0;
    CHECK(max_abs(h - anti) == 0.0);

    CHECK(max_abs(finite_section(identity_op(2), 4) - CMatrix::Identity(8, 8)) == 0.0);
}

TEST_CASE("build_mw and build_nw examples") {
    InvolutionMatrix w = InvolutionMatrix::flip_blocks(1);
    auto mi = build_mw(RationalMatrixFunction::identity(2), w);
    CHECK(max_abs(finite_section(mi, 6) - CMatrix::Identity(12, 12)) == 0.0);

    auto m1 = build_mw(scalar(mono(1)), InvolutionMatrix::identity(1));
    auto direct = toeplitz(scalar(mono(1))) + hankel(scalar(mono(1)));
    CHECK(max_abs(finite_section(m1, 8) - finite_section(direct, 8)) == 0.0);

    // A = C + W tilde(C) W lies in the W-symmetric algebra, where M_W and N_W coincide
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        auto c = random_laurent(rng, 2, 2, -2, 2);
        auto a = c + w.symbol() * c.tilde() * w.symbol();
        CHECK(max_abs(finite_section(build_mw(a, w), 10) - finite_section(build_nw(a, w), 10)) < 1e-14);
    }
    CHECK_THROWS_AS(build_mw(RationalMatrixFunction::identity(3), w), Error);
}

TEST_CASE("Phi and Psi examples") {
    std::mt19937_64 rng(5);
    auto v = random_vec(rng, 1, -5, 5);
    auto i2 = RationalMatrixFunction::identity(2);
    CHECK(op_gap(build_phi(i2), identity_op(1), v) == 0.0);
    CHECK(op_gap(build_psi(i2), identity_op(1), v) == 0.0);

    auto a = diag2(mono(1), mono(1));
    auto expect = riesz_p(1) * mult(scalar(mono(1))) + riesz_q(1) * mult(scalar(mono(-1)));
    CHECK(op_gap(build_phi(a), expect, v) < 1e-15);

    CHECK_THROWS_AS(build_phi(RationalMatrixFunction::identity(3)), Error);
}

TEST_CASE("Phi and Psi agree with their cal_t / cal_h forms") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + trial % 2;
        auto a = random_laurent(rng, 2 * n, 2 * n, -2, 2);
        auto v = random_vec(rng, n, -4, 4);
        CHECK(op_gap(build_phi(a), cal_t(a) + cal_h(a), v) < 1e-14);
        CHECK(op_gap(build_psi(a), cal_t(a) + cal_h(hat(a)), v) < 1e-14);
        // the mirrored forms of cal_t(hat A) and cal_h(hat A)
        auto p = riesz_p(n), q = riesz_q(n), j = flip(n);
        auto tq = compose({block_row({q, j * q}), mult(a), block_col({q, q * j})});
        auto hq = compose({block_row({q, j * q}), mult(a), block_col({p, p * j})});
        CHECK(op_gap(cal_t(hat(a)), tq, v) < 1e-14);
        CHECK(op_gap(cal_h(hat(a)), hq, v) < 1e-14);
    }
}

TEST_CASE("build_general_sio") {
    std::mt19937_64 rng(8);
    auto v = random_vec(rng, 1, -5, 5);
    auto i2 = RationalMatrixFunction::identity(2);
    auto z2 = RationalMatrixFunction::zero(2, 2);
    CHECK(op_gap(build_general_sio(i2, z2), identity_op(1), v) == 0.0);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 1 + trial % 2;
        auto a = random_laurent(rng, 2 * n, 2 * n, -2, 2);
        auto b = random_laurent(rng, 2 * n, 2 * n, -2, 2);
        auto wn = InvolutionMatrix::flip_blocks(n).symbol();
        auto u = random_vec(rng, n, -4, 4);
        CHECK(op_gap(build_general_sio(a, RationalMatrixFunction::zero(2 * n, 2 * n)), cal_t(a), u) < 1e-14);
        CHECK(op_gap(build_general_sio(a, b), cal_t(a) + cal_h(b * wn), u) < 1e-14);
        CHECK(op_gap(build_general_sio(a, a), cal_t(a) + cal_h(a * wn), u) < 1e-14);
    }
}

TEST_CASE("Xi transport") {
    std::mt19937_64 rng(9);
    auto w1 = InvolutionMatrix::flip_blocks(1);
    CHECK(max_abs(finite_section(xi_transport(identity_op(1)), 6) - CMatrix::Identity(12, 12)) == 0.0);
    auto i2 = RationalMatrixFunction::identity(2);
    CHECK(max_abs(finite_section(xi_transport(build_phi(i2)), 6) - CMatrix::Identity(12, 12)) == 0.0);

    auto a = diag2(mono(1), 1.0);
    for (int n = 1; n <= 12; ++n)
        CHECK(max_abs(finite_section(xi_transport(build_phi(a)), n) - finite_section(build_mw(a, w1), n)) < 1e-15);

    for (int trial = 0; trial < 6; ++trial) {
        int n = 1 + trial % 3;
        auto b = random_laurent(rng, 2 * n, 2 * n, -2, 2);
        auto w = InvolutionMatrix::flip_blocks(n);
        CHECK(max_abs(finite_section(xi_transport(build_phi(b)), 10) - finite_section(build_mw(b, w), 10)) < 1e-14);
        CHECK(max_abs(finite_section(xi_transport(build_psi(b)), 10) - finite_section(build_nw(b, w), 10)) < 1e-14);
        CHECK(max_abs(finite_section(xi_transport(cal_t(b)), 10) - finite_section(toeplitz(b), 10)) < 1e-14);
        CHECK(max_abs(finite_section(xi_transport(cal_h(b)), 10) - finite_section(hankel(b * w.symbol()), 10)) <
              1e-14);
        // the inverse map undoes the transport on L2 vectors
        auto u = random_vec(rng, n, -4, 4);
        CHECK(op_gap(xi_inverse(xi_transport(build_phi(b))), build_phi(b), u) < 1e-14);
    }
}

TEST_CASE("Xi mode bijection") {
    // (P, JP) sends component-2 mode k to L2 mode -1-k
    auto row = block_row({riesz_p(1), flip(1) * riesz_p(1)});
    auto r = apply(row, FourierVec::basis(2, 3, 1), 64);
    CHECK(same_vec(r.v, FourierVec::basis(1, -4, 0)));
    r = apply(row, FourierVec::basis(2, 3, 0), 64);
    CHECK(same_vec(r.v, FourierVec::basis(1, 3, 0)));
}

TEST_CASE("basic relations of P, Q, J and M") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + trial % 3;
        auto v = random_vec(rng, n, -5, 5);
        auto p = riesz_p(n), q = riesz_q(n), j = flip(n);
        auto a = random_laurent(rng, n, n, -3, 3);
        CHECK(op_gap(j * j, identity_op(n), v) == 0.0);
        CHECK(op_gap(j * p * j, q, v) == 0.0);
        CHECK(op_gap(p * p, p, v) == 0.0);
        CHECK(op_gap(p + q, identity_op(n), v) == 0.0);
        CHECK(op_gap(j * mult(a) * j, mult(a.tilde()), v) < 1e-15);
    }
}

TEST_CASE("property: Toeplitz and Hankel product formulas") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 3;
        auto a = random_laurent(rng, n, n, -3, 3);
        auto b = random_laurent(rng, n, n, -3, 3);
        auto v = random_vec(rng, n, 0, 6);
        CHECK(op_gap(toeplitz(a * b), toeplitz(a) * toeplitz(b) + hankel(a) * hankel(b.tilde()), v) < 1e-13);
        CHECK(op_gap(hankel(a * b), toeplitz(a) * hankel(b) + hankel(a) * toeplitz(b.tilde()), v) < 1e-13);
    }
}

TEST_CASE("property: adjoint relations on finite sections") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + trial % 3;
        auto a = random_laurent(rng, n, n, -3, 3);
        InvolutionMatrix w = n == 2 ? InvolutionMatrix::flip_blocks(1) : InvolutionMatrix::identity(n);
        InvolutionMatrix ws(w.matrix().adjoint());
        const int k = 8;
        CHECK(max_abs(finite_section(toeplitz(a), k).adjoint() - finite_section(toeplitz(a.adjoint()), k)) < 1e-15);
        CHECK(max_abs(finite_section(hankel(a), k).adjoint() - finite_section(hankel(a.tilde().adjoint()), k)) <
              1e-15);
        CHECK(max_abs(finite_section(build_mw(a, w), k).adjoint() - finite_section(build_nw(a.adjoint(), ws), k)) <
              1e-14);
        CHECK(max_abs(finite_section(adjoint(build_mw(a, w)), k) - finite_section(build_mw(a, w), k).adjoint()) <
              1e-14);
    }
}

TEST_CASE("rational symbols use a window and report the tail") {
    // 1 / (1 - t/2) = sum 2^-k t^k
    auto s = scalar(1.0, lp({{0, 1.0}, {1, -0.5}}));
    auto m = mult(s);
    CHECK_FALSE(m.exact());
    auto r = apply_auto(m, FourierVec::basis(1, 0, 0));
    CHECK(r.tail_bound <= 1e-12);
    for (int k = 0; k < 30; ++k) CHECK(std::abs(r.v.at(k)(0) - std::pow(0.5, k)) < 1e-15);
    CHECK(r.v.at(-1).norm() < 1e-15);

    auto slow = scalar(1.0, lp({{0, 1.0}, {1, -0.999}}));
    CHECK_THROWS_AS(apply_auto(mult(slow), FourierVec::basis(1, 0, 0)), Error);
    try {
        finite_section(toeplitz(slow), 4);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::WindowTooSmall);
    }
}

TEST_CASE("shape errors") {
    auto t = toeplitz(scalar(mono(1)));
    CHECK_THROWS_AS(compose({identity_op(2), t}), Error);
    CHECK_THROWS_AS(apply(t, FourierVec::basis(1, -1, 0), 64), Error);
    CHECK_THROWS_AS(apply(t, FourierVec::basis(2, 0, 0), 64), Error);
    CHECK_THROWS_AS(sum({identity_op(1), identity_op(2)}), Error);
}
