#include <doctest.h>

#include "common.hpp"

using namespace fl;
using namespace fl::test;

TEST_CASE("evolution phase")
{
    PhysParams p{1.3, 0.8, -1};
    for (double z : {-5.0, -0.1, 0.05, 2.0}) {
        CHECK(evolution_phase(z, 0.0, p) == cplx(1.0, 0.0));
        CHECK(std::abs(evolution_phase(z, 3.7, p)) == doctest::Approx(1.0).epsilon(1e-15));
    }
    // z - beta + beta^2 / (4z) vanishes at z = beta / 2
    CHECK(std::abs(evolution_phase(p.beta / 2, 10.0, p) - 1.0) < 1e-14);
    const double z = 1.7, t = 0.3;
    const double e = p.alpha * (z - p.beta + p.beta * p.beta / (4 * z));
    CHECK(std::abs(evolution_phase(z, t, p) - std::exp(cplx(0, 2 * e * t))) < 1e-14);
}

TEST_CASE("evolution preserves moduli and composes")
{
    const ScatteringData& d = small_forward().data;
    PhysParams p;
    EvolvedData e0 = evolve(d, 0.0, p);
    CHECK(max_abs(e0.r1_t.values - d.r1.values) == 0.0);
    CHECK(max_abs(e0.r2_t.values - d.r2.values) == 0.0);

    EvolvedData e1 = evolve(d, 1.0, p);
    CHECK(e1.t == 1.0);
    CHECK((e1.r1_t.values.cwiseAbs() - d.r1.values.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(weighted_l2(e1.r2_t, 1) == doctest::Approx(weighted_l2(d.r2, 1)).epsilon(1e-12));

    EvolvedData half = evolve(evolve(d, 0.4, p).as_data(), 0.6, p);
    CHECK(half.as_data().t == doctest::Approx(1.0));
    CHECK(max_abs(half.r1_t.values - e1.r1_t.values) < 1e-14);

    // a and c are time independent
    ScatteringData ad = e1.as_data();
    CHECK(max_abs(ad.a.values - d.a.values) == 0.0);
    CHECK(ad.c == d.c);
}

TEST_CASE("unresolved radius on a uniform grid")
{
    // Local frequency alpha beta^2 t / (2 z^2) against spacing h gives
    // z^2 = 8 k h / (2 pi) for eight nodes per period.
    SpectralGrid g = make_uniform_spectral_grid(8.0, 512);
    PhysParams p{1.0, 1.5, -1};
    const double t = 2.0, k = p.alpha * p.beta * p.beta * t / 2.0;
    const double h = g.nodes[1] - g.nodes[0];
    CHECK(unresolved_radius(g, t, p) == doctest::Approx(std::sqrt(8.0 * k * h / (2 * kPi))).epsilon(1e-6));
    CHECK(unresolved_radius(g, 0.0, p) == 0.0);
}

TEST_CASE("small-z filter")
{
    SpectralGrid g = make_spectral_grid(small_z());
    CHECK((small_z_filter(g, 0.0).array() - 1.0).abs().maxCoeff() == 0.0);
    VecR f = small_z_filter(g, 0.1);
    for (int i = 0; i < g.size(); ++i) {
        const double z = g.nodes[i];
        CHECK(f[i] == doctest::Approx(std::exp(-(0.01 / (z * z)))).epsilon(1e-12));
    }
}

TEST_CASE("derivative growth stays linear in t")
{
    SlopeCheck s = slope_check(small_forward().data, 1.0, PhysParams{});
    CHECK(s.pass);
    CHECK(s.grad_r2_t <= s.bound_r2);
}
