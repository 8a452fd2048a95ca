// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nonholo/canonical.hpp"
#include "nonholo/systems.hpp"
#include "test_util.hpp"

using namespace nonholo;
using testutil::max_abs;
using testutil::random_vec;

TEST_CASE("rolling disk: Pi entries and exactly integrable flow") {
    const SystemCatalogEntry disk = make_rolling_disk();
    Vec zeta(6);
    zeta << 0.0, 0.0, 0.0, 0.0, 0.3, -0.2;  // theta = 0
    const Mat Pi = disk.reduced->Pi(zeta);
    CHECK(Pi.rows() == 6);
    CHECK(Pi(0, 4) == doctest::Approx(1.0).epsilon(1e-14));  // r cos(theta) at theta = 0

    // rho is constant and theta, phi move linearly: 50 dg steps stay exact.
    StepConfig cfg;
    cfg.h = 0.2;
    Vec z = zeta;
    for (int s = 0; s < 50; ++s) z = dg_step(*disk.reduced, z, cfg).first;
    CHECK(z[4] == doctest::Approx(zeta[4]).epsilon(1e-12));
    CHECK(z[5] == doctest::Approx(zeta[5]).epsilon(1e-12));
    CHECK(z[2] == doctest::Approx(50 * 0.2 * zeta[5]).epsilon(1e-10));
    CHECK(max_abs(constraint_residual(
              *disk.canonical,
              p_from_rho(*disk.canonical, *disk.hand_basis, {z.head(4), z.tail(2)}))) < 1e-12);
}

TEST_CASE("chaotic quartic: dimensions and reduced metric inverse") {
    const SystemCatalogEntry entry = make_chaotic_quartic(3);
    CHECK(entry.reduced->N == 13);
    CHECK(entry.canonical->n == 7);
    CHECK(entry.canonical->k == 1);

    // Reduced metric through the hand basis is blockdiag(I, I + w w^T);
    // its momentum block inverse is I - w w^T / (1 + w^T w).
    CounterRng rng(1, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec q = random_vec(rng, 7);
        const Vec w = q.segment(1, 3);
        const Mat X = entry.hand_basis->X(q);
        const Mat g_red = X.transpose() * entry.canonical->metric(q) * X;
        Mat expected = Mat::Identity(6, 6);
        expected.bottomRightCorner(3, 3) += w * w.transpose();
        CHECK(max_abs(g_red - expected) < 1e-12);

        const Mat inv_block = Mat::Identity(3, 3) -
                              w * w.transpose() / (1.0 + w.squaredNorm());
        CHECK(max_abs(inv_block - expected.bottomRightCorner(3, 3).inverse()) < 1e-12);
    }

    // w = 0 decouples everything: the momentum block of Pi is zero.
    Vec zeta = Vec::Zero(13);
    zeta[0] = 0.4;
    zeta.tail(6) = random_vec(rng, 6);
    const Mat Pi = entry.reduced->Pi(zeta);
    CHECK(max_abs(Pi.bottomRightCorner(6, 6)) < 1e-14);
}

TEST_CASE("chaplygin sleigh: momentum equation and equilibria") {
    const SystemCatalogEntry sleigh = make_chaplygin_sleigh(1.0, 1.0, 8.0);
    Vec zeta(5);
    zeta << 0.0, 0.0, 0.0, 1.0, 1.0;
    const Vec v = rhs(*sleigh.reduced, zeta);
    CHECK(v[3] == doctest::Approx(-1.0 / 9.0).epsilon(1e-13));  // -C rho1 rho2

    zeta[3] = 0.0;
    const Vec eq = rhs(*sleigh.reduced, zeta);
    CHECK(std::abs(eq[3]) < 1e-14);
    CHECK(std::abs(eq[4]) < 1e-14);

    // H = (rho1^2 + rho2^2)/2 is conserved by the exact rhs.
    CounterRng rng(2, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec z = random_vec(rng, 5);
        const Vec dot = rhs(*sleigh.reduced, z);
        CHECK(std::abs(z[3] * dot[3] + z[4] * dot[4]) < 1e-13);
    }
}

TEST_CASE("suslov: vanishing couplings freeze the momenta") {
    const SystemCatalogEntry trivial = make_suslov(1.0, 2.0, 3.0, 0.0, 0.0);
    CounterRng rng(3, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec rho = random_vec(rng, 2);
        CHECK(max_abs(rhs(*trivial.reduced, rho)) < 1e-14);
    }

    const SystemCatalogEntry sys = make_suslov();
    CHECK(!sys.canonical.has_value());
    CHECK(sys.reduced->N == 2);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec rho = random_vec(rng, 2);
        const Vec g = sys.reduced->H.gradient(rho);
        CHECK(std::abs(g.dot(rhs(*sys.reduced, rho))) < 1e-13);
    }
}

TEST_CASE("gearbox: potential display value, sign switch, gradient oracle") {
    const SystemCatalogEntry def = make_gearbox_pendulum();  // V as potential energy
    CHECK(def.canonical->potential(Vec::Zero(3)) == doctest::Approx(1.0).epsilon(1e-14));

    const SystemCatalogEntry printed = make_gearbox_pendulum(-1.0);  // literal H = T - V
    CHECK(printed.canonical->potential(Vec::Zero(3)) == doctest::Approx(-1.0).epsilon(1e-14));

    CounterRng rng(4, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec q = random_vec(rng, 3);
        const Vec g = def.canonical->potential_grad(q);
        const Vec g_fd = fd_scalar_grad(def.canonical->potential)(q);
        CHECK(max_abs(g - g_fd) < 1e-7);
    }

    // Constraint at q3 = 0 is p1 = 0.
    const Mat mu = def.canonical->constraints(Vec::Zero(3));
    CHECK(mu(0, 0) == doctest::Approx(1.0));
    CHECK(std::abs(mu(1, 0)) < 1e-14);
    CHECK(std::abs(mu(2, 0)) < 1e-14);
}

TEST_CASE("cross-validation: analytic reduced rhs vs canonical assembly") {
    for (const char* name : {"rolling-disk", "chaotic-quartic", "chaplygin-sleigh"}) {
        const SystemCatalogEntry entry = make_system(name);
        const SkewGradientSystem assembled =
            assembled_reduced_system(*entry.canonical, *entry.hand_basis);
        CounterRng rng(5, 0);
        for (int trial = 0; trial < 100; ++trial) {
            const Vec zeta = random_vec(rng, entry.reduced->N);
            const Vec a = rhs(*entry.reduced, zeta);
            const Vec b = rhs(assembled, zeta);
            CHECK(max_abs(a - b) < 1e-10);
        }
    }
}

TEST_CASE("every analytic Pi is skew-symmetric at random states") {
    for (const std::string& name : system_names()) {
        const SystemCatalogEntry entry = make_system(name);
        if (!entry.reduced) continue;
        CounterRng rng(6, 0);
        for (int trial = 0; trial < 20; ++trial) {
            const Mat Pi = entry.reduced->Pi(random_vec(rng, entry.reduced->N));
            CHECK(max_abs(Pi + Pi.transpose()) < 1e-12 * (1.0 + max_abs(Pi)));
        }
    }
}

TEST_CASE("catalog lookup and parameter validation") {
    CHECK(system_names().size() == 5);
    CHECK_THROWS_AS(make_system("unknown"), ConfigError);
    CHECK_THROWS(make_rolling_disk(-1.0, 1.0, 1.0, 1.0));
    CHECK_THROWS(make_chaotic_quartic(0));
    CHECK_THROWS(make_chaplygin_sleigh(-1.0, 1.0, 8.0));
    CHECK_THROWS(make_suslov(0.0, 2.0, 3.0, 0.1, 0.2));
    CHECK_NOTHROW(make_chaplygin_sleigh(1.0, 0.0, 8.0));  // a = 0 allowed
}
