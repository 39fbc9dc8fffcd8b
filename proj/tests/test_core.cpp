#include <doctest.h>

#include <random>

#include "common.hpp"

using namespace fl;
using namespace fl::test;

TEST_CASE("spectral grid is symmetric, increasing and avoids zero")
{
    SpectralGrid g = make_spectral_grid(SpectralGridParams{});
    const int n = g.size();
    REQUIRE(n % 2 == 0);
    for (int i = 0; i < n; ++i) {
        CHECK(g.nodes[i] == doctest::Approx(-g.nodes[n - 1 - i]).epsilon(1e-14));
        CHECK(g.nodes[i] != 0.0);
        if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
    }
    CHECK(g.nodes[n - 1] < g.z_cut);
    // denser near the origin than outside
    CHECK(g.nodes[n / 2] < 0.5 * g.outer_spacing);
}

TEST_CASE("spectral quadrature integrates smooth functions")
{
    SpectralGrid g = make_spectral_grid(small_z());
    double gauss = 0.0, lorentz = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        gauss += g.weights[i] * std::exp(-g.nodes[i] * g.nodes[i]);
        lorentz += g.weights[i] / (1.0 + g.nodes[i] * g.nodes[i]);
    }
    CHECK(std::abs(gauss - std::sqrt(kPi)) < 1e-10);
    CHECK(std::abs(lorentz - 2.0 * std::atan(g.z_cut)) < 1e-4);
}

TEST_CASE("fourier transform of a gaussian")
{
    Field f = gaussian(small_x(), 1.0);
    Spectrum s = fourier_pair(f);
    double err = 0.0;
    for (int k = 0; k < s.xi.size(); ++k) {
        const double exact = std::sqrt(kPi) / (2.0 * kPi) * std::exp(-s.xi[k] * s.xi[k] / 4.0);
        err = std::max(err, std::abs(s.values[k] - exact));
    }
    CHECK(err < 1e-12);
    CHECK(max_abs(fourier_inverse(f.grid, s) - f.values) < 1e-12);
}

TEST_CASE("derivatives of a gaussian")
{
    RealGrid g = small_x();
    Field f = gaussian(g, 1.0);
    VecR x = g.nodes();
    VecC d1(g.n), d2(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double e = std::exp(-x[i] * x[i]);
        d1[i] = -2.0 * x[i] * e;
        d2[i] = (4.0 * x[i] * x[i] - 2.0) * e;
    }
    CHECK(max_abs(spectral_derivative(g, f.values, 1) - d1) < 1e-10);
    CHECK(max_abs(spectral_derivative(g, f.values, 2) - d2) < 1e-9);
    CHECK(max_abs(fd_derivative(g, f.values, 1) - d1) < 1e-6);
    CHECK(max_abs(fd_derivative(g, f.values, 2) - d2) < 1e-5);
    CHECK(max_abs(f.d1 - d1) < 1e-9);
}

TEST_CASE("fornberg weights reproduce polynomials")
{
    VecR xs(5);
    xs << -1.0, -0.3, 0.2, 0.9, 1.7;
    Eigen::MatrixXd w = fornberg_weights(0.4, xs, 2);
    // p(x) = x^3 - 2x: p' = 3x^2 - 2, p'' = 6x
    double p1 = 0, p2 = 0;
    for (int j = 0; j < 5; ++j) {
        const double p = xs[j] * xs[j] * xs[j] - 2.0 * xs[j];
        p1 += w(j, 1) * p;
        p2 += w(j, 2) * p;
    }
    CHECK(p1 == doctest::Approx(3 * 0.16 - 2).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(2.4).epsilon(1e-12));
}

TEST_CASE("norms of a gaussian")
{
    const double amp = 0.25;
    NormReport n = discrete_norms(gaussian(small_x(), amp));
    CHECK(n.u_l2 == doctest::Approx(amp * std::pow(kPi / 2.0, 0.25)).epsilon(1e-10));
    CHECK(n.u_l1 == doctest::Approx(amp * std::sqrt(kPi)).epsilon(1e-10));
    // |u_x|^2 = 4 amp^2 x^2 e^{-2x^2}
    CHECK(n.ux_l2 == doctest::Approx(amp * std::pow(kPi / 2.0, 0.25)).epsilon(1e-8));
}

TEST_CASE("plemelj jump and hilbert transform of a lorentzian")
{
    SpectralGrid g = make_spectral_grid(SpectralGridParams{});
    ComplexSamples f{g, VecC(g.size())};
    for (int i = 0; i < g.size(); ++i) f.values[i] = 1.0 / (1.0 + g.nodes[i] * g.nodes[i]);

    CHECK(max_abs(plemelj_plus(f).values - plemelj_minus(f).values - f.values) < 1e-12);

    // (1/pi i) PV int_{-L}^{L} f(s) / (s - z) ds in closed form
    const double L = g.z_cut;
    VecC sum = 2.0 * cauchy_pv_apply(g, f.values);
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double z = g.nodes[i];
        if (std::abs(z) > 0.5 * L) continue;
        const double T = (std::log((L + z) / (L - z)) + 2.0 * z * std::atan(L)) / (kPi * (1.0 + z * z));
        err = std::max(err, std::abs(sum[i] - kI * T));
    }
    CHECK(err < 1e-6);

    // 1/(1+s^2) = (1/2i)(1/(s-i) - 1/(s+i)); only the pole at -i contributes above the line.
    CHECK(std::abs(cauchy_offaxis(f, cplx(0.0, 0.5)) - 1.0 / 3.0) < 1e-5);
}

TEST_CASE("projected modulation agrees with the direct projection")
{
    SpectralGrid g = make_spectral_grid(SpectralGridParams{});
    ComplexSamples f{g, VecC(g.size())};
    for (int i = 0; i < g.size(); ++i) f.values[i] = std::exp(-g.nodes[i] * g.nodes[i] / 4.0) * cplx(1.0, 0.3 * g.nodes[i]);
    for (Side side : {Side::PlusAtPlusX, Side::MinusAtMinusX}) {
        const double x = side == Side::PlusAtPlusX ? 2.0 : -2.0;
        VecC a = projected_modulation(f, x, side).values, b = direct_modulation(f, x, side).values;
        double err = 0.0;
        for (int i = 0; i < g.size(); ++i)
            if (std::abs(g.nodes[i]) < 0.5 * g.z_cut) err = std::max(err, std::abs(a[i] - b[i]));
        CHECK(err < 1e-5);
    }
}

TEST_CASE("field csv round trip is exact")
{
    Field f = gaussian(small_x(), 0.3, 1.5, 0.7);
    const std::string p = tmp_path("field.csv");
    write_field_csv(p, f);
    Field g = read_field_csv(p);
    CHECK(g.grid.n == f.grid.n);
    CHECK(g.grid.x_min == f.grid.x_min);
    CHECK((g.values - f.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(read_field_csv(tmp_path("missing.csv")), IoError);
}

TEST_CASE("format_double round-trips")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (int i = 0; i < 200; ++i) {
        const double v = d(rng) * std::pow(10.0, i % 30 - 15);
        CHECK(std::stod(format_double(v)) == v);
    }
}
