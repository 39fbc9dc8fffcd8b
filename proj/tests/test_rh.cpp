#include <doctest.h>

#include "common.hpp"

using namespace fl;
using namespace fl::test;

namespace {

JumpData jump_for(const ScatteringData& d, double x, double scale = 1.0)
{
    JumpData j{d.r1, d.r2, x};
    j.r1.values *= scale;
    j.r2.values *= scale;
    return j;
}

} // namespace

TEST_CASE("zero jump gives the identity")
{
    SpectralGrid g = make_spectral_grid(small_z());
    ComplexSamples zero{g, VecC::Zero(g.size())};
    JumpData j{zero, zero, 0.3};
    RHSolution s = solve_columns(j);
    CHECK(max_abs(s.m_minus_col1[0].values.array() - 1.0) == 0.0);
    CHECK(max_abs(s.m_minus_col1[1].values) == 0.0);
    CHECK(max_abs(s.m_plus_col2[0].values) == 0.0);
    CHECK(max_abs(s.m_plus_col2[1].values.array() - 1.0) == 0.0);
    CHECK(jump_residual(s, j) == 0.0);

    MatC op = assemble_system(j);
    CHECK((op - MatC::Identity(op.rows(), op.cols())).cwiseAbs().maxCoeff() == 0.0);

    DeltaData dd = delta_build(zero, zero);
    CHECK(max_abs(dd.delta_plus.values.array() - 1.0) < 1e-15);
    CHECK(max_abs(dd.delta_minus.values.array() - 1.0) < 1e-15);
}

TEST_CASE("delta factorises the jump density")
{
    const ScatteringData& d = small_forward().data;
    DeltaData dd = delta_build(d.r1, d.r2);
    const int n = d.grid.size();
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx rho = 1.0 + std::conj(d.r1.values[i]) * d.r2.values[i];
        err = std::max(err, std::abs(dd.delta_plus.values[i] / dd.delta_minus.values[i] - rho));
    }
    CHECK(err < 1e-8);
    CHECK(std::abs(dd.delta_plus.values[0] - 1.0) < 1e-3);
    CHECK(std::abs(dd.delta_minus.values[n - 1] - 1.0) < 1e-3);
}

TEST_CASE("RH solution from a known potential reproduces it")
{
    // The data come from u0, so the reconstruction formula evaluated on the
    // RH solution must return e^{i c_+(x)} u0(x).
    Field u0 = gaussian(small_x(), 0.25);
    const ScatteringData& d = small_forward().data;
    VecR cp = partial_norming(u0, JostSide::Plus);
    DeltaData dd = delta_build(d.r1, d.r2);
    for (int i : {u0.grid.nearest(-0.6), u0.grid.nearest(0.8)}) {
        const double x = u0.grid.x(i);
        JumpData j = jump_for(d, x);
        const bool left = x < 0.0;
        RHSolution s = left ? solve_columns_conditioned(j, dd) : solve_columns(j);
        CHECK(s.conditioned == left);
        CHECK(jump_residual(s, j) < 1e-6);
        const cplx uh = reconstruct_u_hat(s, d.r1, x, 0.0, left ? &dd : nullptr);
        CHECK(std::abs(uh - std::exp(cplx(0, cp[i])) * u0.values[i]) < 1e-4);
    }
}

TEST_CASE("plain and conditioned solves agree")
{
    const ScatteringData& d = small_forward().data;
    JumpData j = jump_for(d, -1.0);
    RHSolution a = solve_columns(j);
    RHSolution b = solve_columns_conditioned(j, delta_build(d.r1, d.r2));
    for (int k = 0; k < 2; ++k) {
        CHECK(max_abs(a.m_minus_col1[k].values - b.m_minus_col1[k].values) < 1e-6);
        CHECK(max_abs(a.m_plus_col2[k].values - b.m_plus_col2[k].values) < 1e-6);
    }
}

TEST_CASE("corrupting a column raises the jump residual")
{
    const ScatteringData& d = small_forward().data;
    JumpData j = jump_for(d, 1.0);
    RHSolution s = solve_columns(j);
    const double clean = jump_residual(s, j);
    s.m_minus_col1[0].values.array() += 1e-3;
    CHECK(clean < 1e-8);
    CHECK(jump_residual(s, j) > 1e-4);
}

TEST_CASE("off-diagonal entries are linear in small data")
{
    const ScatteringData& d = small_forward().data;
    const double eps = 1e-2;
    auto m21 = [&](double s) { return solve_columns(jump_for(d, 0.5, s)).m_minus_col1[1].values; };
    VecC a = m21(eps), b = m21(2 * eps);
    REQUIRE(max_abs(a) > 0.0);
    CHECK(max_abs(b - 2.0 * a) / max_abs(a) < eps);
}

TEST_CASE("batch solves match single solves")
{
    const ScatteringData& d = small_forward().data;
    RHBatch batch(d.r1, d.r2, delta_build(d.r1, d.r2));
    std::vector<double> xs = {-2.0, 0.5, 3.0};
    std::vector<RHSolution> sols = batch.solve_all(xs, 0.0);
    REQUIRE(sols.size() == xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        CHECK(sols[i].x == xs[i]);
        CHECK(sols[i].conditioned == (xs[i] < 0.0));
        RHSolution ref = solve_columns(jump_for(d, xs[i]));
        CHECK(max_abs(sols[i].m_minus_col1[1].values - ref.m_minus_col1[1].values) < 1e-6);
    }
    CHECK(batch.condition_number(-10.0, true) <= batch.condition_number(-10.0, false) * (1 + 1e-9));
}
