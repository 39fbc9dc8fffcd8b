#include <doctest.h>

#include "common.hpp"

using namespace fl;
using namespace fl::test;

TEST_CASE("zero data reconstructs the zero field")
{
    ForwardResult fr = forward_scatter(Field::zero(small_x()), make_spectral_grid(small_z()));
    for (double t : {0.0, 1.0}) {
        ReconstructionResult r = reconstruct_solution(fr.data, t, PhysParams{}, small_x());
        CHECK(max_abs(r.u.values) <= 1e-10);
        CHECK(r.untangle.c == 0.0);
    }
}

TEST_CASE("untangling zero samples")
{
    RealGrid g = small_x();
    ReconstructionRaw raw;
    raw.x_nodes = g.nodes();
    raw.u_hat = VecC::Zero(g.n);
    raw.g = VecC::Zero(g.n);
    UntangleReport rep;
    Field u = untangle_phases(raw, g, &rep);
    CHECK(max_abs(u.values) == 0.0);
    CHECK(rep.c == 0.0);
}

TEST_CASE("untangling requires samples over the whole grid")
{
    RealGrid g = small_x();
    ReconstructionRaw raw;
    raw.x_nodes = VecR::LinSpaced(10, -1.0, 1.0);
    raw.u_hat = VecC::Zero(10);
    raw.g = VecC::Zero(10);
    CHECK_THROWS_AS(untangle_phases(raw, g), ContractError);
}

TEST_CASE("lagrange interpolation is exact for cubics")
{
    VecR xs = VecR::LinSpaced(12, -2.0, 3.0);
    auto p = [](double x) { return cplx(x * x * x - x, 2.0 * x * x); };
    VecC ys(xs.size());
    for (int i = 0; i < xs.size(); ++i) ys[i] = p(xs[i]);
    VecR at = VecR::LinSpaced(37, -2.0, 3.0);
    VecC v = lagrange_interpolate(xs, ys, at);
    for (int i = 0; i < at.size(); ++i) CHECK(std::abs(v[i] - p(at[i])) < 1e-10);
}

TEST_CASE("round trip of a small gaussian")
{
    Field u0 = gaussian(small_x(), 0.25);
    ReconstructionResult r = reconstruct_solution(small_forward().data, 0.0, PhysParams{}, u0.grid);
    const double rel = max_abs(r.u.values - u0.values) / max_abs(u0.values);
    CHECK(rel < 1e-3);
    CHECK(r.untangle.c == doctest::Approx(norming_constant(u0)).epsilon(1e-3));
    CHECK(r.max_residual < 1e-6);
}

TEST_CASE("a carrier wave survives the round trip")
{
    RealGrid g = small_x();
    Field u0 = gaussian(g, 0.2, 1.2, 0.8);
    SpectralGrid zg = make_spectral_grid(small_z());
    ForwardResult fr = forward_scatter(u0, zg);
    ReconstructionResult r = reconstruct_solution(fr.data, 0.0, PhysParams{}, g);
    CHECK(max_abs(r.u.values - u0.values) / max_abs(u0.values) < 1e-3);
}
