// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nonholo/discrete_gradient.hpp"
#include "test_util.hpp"

using namespace nonholo;
using testutil::max_abs;
using testutil::random_vec;

namespace {

ScalarField cubic_1d() {
    return {[](const Vec& x) { return x[0] * x[0] * x[0]; },
            [](const Vec& x) { return Vec::Constant(1, 3.0 * x[0] * x[0]); }};
}

// H = sum a_j x_j^2, the separable case where all three gradients coincide.
ScalarField diagonal_quadratic(const Vec& a) {
    return {[a](const Vec& x) { return (a.array() * x.array() * x.array()).sum(); },
            [a](const Vec& x) -> Vec { return 2.0 * a.array() * x.array(); }};
}

// Dense quartic with cross terms; gradient has degree 3.
ScalarField dense_quartic(int n, std::uint64_t seed) {
    CounterRng rng(seed, 3);
    const Mat A = [&] {
        Mat M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
        return Mat((M + M.transpose()) / 2.0);
    }();
    const Vec b = random_vec(rng, n);
    const auto value = [A, b](const Vec& x) {
        const double s = x.dot(A * x);
        return 0.25 * s * s + x.dot(A * x) / 2.0 + b.dot(x);
    };
    const auto gradient = [A, b](const Vec& x) -> Vec {
        const double s = x.dot(A * x);
        return s * (A * x) + A * x + b;
    };
    return {value, gradient};
}

}  // namespace

TEST_CASE("avf gradient: quadratic collapse, cubic integral, consistency") {
    Vec a(3);
    a << 0.5, 1.5, -0.25;
    const ScalarField q2 = diagonal_quadratic(a);
    CounterRng rng(5, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = random_vec(rng, 3), xp = random_vec(rng, 3);
        CHECK(max_abs(avf_gradient(q2, x, xp, 4) - q2.gradient((x + xp) / 2.0)) < 1e-13);
    }

    const ScalarField c = cubic_1d();
    const Vec x0 = Vec::Zero(1), x1 = Vec::Ones(1);
    CHECK(avf_gradient(c, x0, x1, 2)[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(avf_gradient(c, x1, x1, 4)[0] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre nodes integrate polynomials to their exactness degree") {
    for (int nodes = 1; nodes <= 6; ++nodes) {
        const auto [t, w] = gauss_legendre_01(nodes);
        CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
        for (int deg = 0; deg <= 2 * nodes - 1; ++deg) {
            double quad = 0.0;
            for (int i = 0; i < nodes; ++i) quad += w[i] * std::pow(t[i], deg);
            CHECK(quad == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("gonzalez gradient: closed forms and coincidence fallback") {
    Vec a(2);
    a << 2.0, -0.5;
    const ScalarField q2 = diagonal_quadratic(a);
    CounterRng rng(6, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = random_vec(rng, 2), xp = random_vec(rng, 2);
        const Vec dg = gonzalez_gradient(q2, x, xp);
        for (int i = 0; i < 2; ++i)
            CHECK(dg[i] == doctest::Approx(a[i] * (xp[i] + x[i])).epsilon(1e-12));
    }

    const ScalarField c = cubic_1d();
    CHECK(gonzalez_gradient(c, Vec::Zero(1), Vec::Ones(1))[0] ==
          doctest::Approx(1.0).epsilon(1e-14));
    const Vec x = Vec::Constant(1, 0.3);
    CHECK(gonzalez_gradient(c, x, x)[0] == doctest::Approx(3.0 * 0.09).epsilon(1e-14));
}

TEST_CASE("coordinate-increment gradient: separable case and hand evaluation") {
    Vec a(3);
    a << 1.0, -2.0, 0.5;
    const ScalarField q2 = diagonal_quadratic(a);
    CounterRng rng(8, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec x = random_vec(rng, 3), xp = random_vec(rng, 3);
        const Vec dg = itoh_abe_gradient(q2, x, xp);
        for (int i = 0; i < 3; ++i)
            CHECK(dg[i] == doctest::Approx(a[i] * (xp[i] + x[i])).epsilon(1e-12));
    }

    // H = x1 x2 from (0,0) to (1,1): components (0, 1) in the natural order.
    const ScalarField prod = {[](const Vec& x) { return x[0] * x[1]; },
                              [](const Vec& x) {
                                  Vec g(2);
                                  g << x[1], x[0];
                                  return g;
                              }};
    const Vec dg = itoh_abe_gradient(prod, Vec::Zero(2), Vec::Ones(2));
    CHECK(std::abs(dg[0]) < 1e-14);
    CHECK(dg[1] == doctest::Approx(1.0).epsilon(1e-14));

    const Vec x = random_vec(rng, 3);
    CHECK(max_abs(itoh_abe_gradient(q2, x, x) - q2.gradient(x)) < 1e-13);
}

TEST_CASE("secant identity on 1000 random pairs; avf exactness threshold") {
    const ScalarField H = dense_quartic(4, 99);
    CounterRng rng(99, 1);
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int i = 0; i < 1000; ++i)
        pairs.emplace_back(random_vec(rng, 4), random_vec(rng, 4));

    for (auto tag : {DiscreteGradientTag::Gonzalez, DiscreteGradientTag::CoordinateIncrement}) {
        DiscreteGradientKind kind;
        kind.tag = tag;
        const DiscreteGradientReport rep = verify_discrete_gradient(kind, H, pairs);
        CHECK(rep.max_secant_violation < 1e-12);
        CHECK(rep.max_consistency_violation < 1e-10);
    }

    // Gradient degree 3: exact for >= 2 Gauss-Legendre nodes, inexact for 1.
    DiscreteGradientKind avf2{DiscreteGradientTag::AVF, 2};
    CHECK(verify_discrete_gradient(avf2, H, pairs).max_secant_violation < 1e-12);
    DiscreteGradientKind avf1{DiscreteGradientTag::AVF, 1};
    CHECK(verify_discrete_gradient(avf1, H, pairs).max_secant_violation > 1e-6);
}

TEST_CASE("symmetry: avf and gonzalez symmetric, coordinate-increment not") {
    const ScalarField H = dense_quartic(3, 41);
    CounterRng rng(41, 2);
    double worst_avf = 0.0, worst_gonzalez = 0.0, worst_ia = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Vec x = random_vec(rng, 3), xp = random_vec(rng, 3);
        worst_avf = std::max(worst_avf,
                             max_abs(avf_gradient(H, x, xp, 4) - avf_gradient(H, xp, x, 4)));
        worst_gonzalez = std::max(
            worst_gonzalez, max_abs(gonzalez_gradient(H, x, xp) - gonzalez_gradient(H, xp, x)));
        worst_ia = std::max(worst_ia,
                            max_abs(itoh_abe_gradient(H, x, xp) - itoh_abe_gradient(H, xp, x)));
    }
    CHECK(worst_avf < 1e-12);
    CHECK(worst_gonzalez < 1e-12);
    CHECK(worst_ia > 1e-3);  // negative control: ordering-dependent by construction
}

TEST_CASE("consistency as x' -> x along random directions") {
    const ScalarField H = dense_quartic(3, 17);
    CounterRng rng(17, 4);
    const Vec x = random_vec(rng, 3);
    const Vec d = random_vec(rng, 3).normalized();
    for (auto tag : {DiscreteGradientTag::AVF, DiscreteGradientTag::Gonzalez,
                     DiscreteGradientTag::CoordinateIncrement}) {
        DiscreteGradientKind kind;
        kind.tag = tag;
        double prev = -1.0;
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            const double err =
                max_abs(discrete_gradient(kind, H, x, x + eps * d) - H.gradient(x));
            CHECK(err < 10.0 * eps);  // O(|x' - x|) at worst
            if (prev >= 0.0) CHECK(err < prev);
            prev = err;
        }
    }
}

TEST_CASE("remark collapse: quadratic H makes avf and gonzalez the midpoint gradient") {
    CounterRng rng(23, 0);
    const int n = 4;
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = rng.uniform(-1.0, 1.0);
    const Mat S = (A + A.transpose()) / 2.0;
    const Vec b = random_vec(rng, n);
    const ScalarField H = {[S, b](const Vec& x) { return 0.5 * x.dot(S * x) + b.dot(x); },
                           [S, b](const Vec& x) -> Vec { return S * x + b; }};
    for (int trial = 0; trial < 50; ++trial) {
        const Vec x = random_vec(rng, n), xp = random_vec(rng, n);
        const Vec mid = H.gradient((x + xp) / 2.0);
        CHECK(max_abs(avf_gradient(H, x, xp, 4) - mid) < 1e-12);
        CHECK(max_abs(gonzalez_gradient(H, x, xp) - mid) < 1e-12);
    }
}
