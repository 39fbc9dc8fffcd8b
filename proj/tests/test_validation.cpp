#include <doctest.h>

#include <limits>

#include "common.hpp"

using namespace fl;
using namespace fl::test;

namespace {

// u = A e^{i(xi x - omega t)} solves the equation exactly when
// omega = -alpha (xi + beta)^2 / xi + sigma alpha beta^2 A^2.
std::vector<Snapshot> plane_wave(const RealGrid& g, const PhysParams& p, double amp, double xi, double t, double dt)
{
    const double omega = -p.alpha * (xi + p.beta) * (xi + p.beta) / xi + p.sigma * p.alpha * p.beta * p.beta * amp * amp;
    VecR x = g.nodes();
    std::vector<Snapshot> out;
    for (double s : {t - dt, t, t + dt}) {
        VecC v(g.n);
        for (int i = 0; i < g.n; ++i) v[i] = amp * std::exp(cplx(0, xi * x[i] - omega * s));
        out.push_back({s, Field::from_values(g, v)});
    }
    return out;
}

} // namespace

TEST_CASE("report bookkeeping")
{
    ValidationReport r;
    r.at_most("a", 1.0, 2.0);
    r.at_least("b", 1.0, 2.0);
    r.at_most("nan", std::numeric_limits<double>::quiet_NaN(), 1.0);
    r.note("k", 3.0);
    CHECK(r.at("a").pass);
    CHECK_FALSE(r.at("b").pass);
    CHECK_FALSE(r.at("nan").pass);
    CHECK_FALSE(r.pass());
    CHECK(r.failures() == std::vector<std::string>{"b", "nan"});

    ValidationReport outer;
    outer.merge(r, "x.");
    CHECK(outer.has("x.a"));
    CHECK_FALSE(outer.has("a"));
    CHECK(outer.csv().rfind("check,value,threshold,pass\nx.a,1,2,true\n", 0) == 0);
    CHECK(outer.key_values().find("overall.pass=false") != std::string::npos);
}

TEST_CASE("identity suite on zero data passes with exact values")
{
    ForwardResult fr = forward_scatter(Field::zero(small_x()), make_spectral_grid(small_z()));
    ValidationReport r = identity_suite(fr);
    CHECK(r.pass());
    CHECK(r.at("unitarity").value < 1e-10);
    CHECK(r.at("positivity").value == 1.0);
    CHECK(r.at("r2_4z_r1").value == 0.0);
}

TEST_CASE("scaling a by 1.01 breaks unitarity")
{
    ScatteringData d = small_forward().data;
    CHECK(identity_suite(d).at("unitarity").pass);
    d.a.values *= 1.01;
    ValidationReport r = identity_suite(d);
    CHECK_FALSE(r.at("unitarity").pass);
    // |a|^2 grows by 1.0201 while rho stays fixed
    CHECK(r.at("unitarity").value == doctest::Approx(0.0201).epsilon(1e-3));
}

TEST_CASE("a corrupted scattering file is caught on reload")
{
    const ScatteringData& d = small_forward().data;
    ScatteringMeta meta;
    meta.grid_params = small_z();
    ScatteringData bad = d;
    bad.r2.values[bad.grid.size() / 3] += 0.05;
    const std::string p = tmp_path("corrupt.csv");
    write_scattering(p, bad, meta);
    ScatteringMeta m;
    ValidationReport r = identity_suite(read_scattering(p, m));
    CHECK_FALSE(r.pass());
    CHECK_FALSE(r.at("r2_4z_r1").pass);
}

TEST_CASE("exact nonlinear plane wave has a small residual only for the right sigma")
{
    RealGrid g = small_x();
    PhysParams p;
    auto snaps = plane_wave(g, p, 0.5, 2.0, 0.3, 1e-3);
    PdeResidual good = pde_residual_parts(snaps, p);
    CHECK(good.relative < 1e-4);

    PhysParams flipped = p;
    flipped.sigma = -p.sigma;
    // the misplaced cubic term is twice sigma alpha beta^2 A^2 xi u against xi omega u
    const double omega = -(2.0 + 1.0) * (2.0 + 1.0) / 2.0 - 0.25;
    CHECK(pde_residual(snaps, flipped) == doctest::Approx(2.0 * 0.25 / std::abs(omega)).epsilon(1e-3));

    // dropping the cubic term costs the same amount
    CHECK(pde_residual_parts(snaps, p, false).relative == doctest::Approx(0.25 / std::abs(omega)).epsilon(1e-3));
}

TEST_CASE("residual contract errors")
{
    RealGrid g = small_x();
    Field z = Field::zero(g);
    PhysParams p;
    CHECK_THROWS_AS(pde_residual({{0.0, z}, {1.0, z}}, p), ContractError);
    CHECK_THROWS_AS(pde_residual({{0.0, z}, {1.0, Field::zero(RealGrid{-16, 16, 256})}, {2.0, z}}, p), ContractError);
    CHECK_THROWS_AS(pde_residual({{0.0, z}, {1.0, z}, {3.0, z}}, p), ContractError);
    CHECK(pde_residual({{0.0, z}, {1.0, z}, {2.0, z}}, p) == 0.0);
}

TEST_CASE("plane wave check is second order in dt")
{
    ValidationReport r = plane_wave_check(PhysParams{}, small_x());
    CHECK(r.pass());
}

TEST_CASE("random directions are unit and reproducible")
{
    RealGrid g = small_x();
    VecC a = random_direction(g, 42, 0), b = random_direction(g, 42, 0), c = random_direction(g, 42, 1);
    CHECK(l2_norm(g, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs(a - b) == 0.0);
    CHECK(max_abs(a - c) > 1e-3);
}

TEST_CASE("zero perturbations are skipped")
{
    LipschitzOptions o;
    o.n_dirs = 2;
    o.eps = 0.0;
    o.eps_check = false;
    o.zgrid = small_z();
    ValidationReport r = lipschitz_probe(gaussian(small_x(), 0.25), PhysParams{}, o);
    CHECK_FALSE(r.has("spread_r1"));
}

TEST_CASE("evolution suite on small data")
{
    ValidationReport r = evolution_suite(small_forward().data, PhysParams{});
    CHECK(r.at("modulus").pass);
    CHECK(r.at("l21_norm").pass);
    CHECK(r.at("group").pass);
}
