#include "fl/evolution.hpp"

#include <cmath>

namespace fl {

ScatteringData EvolvedData::as_data() const
{
    ScatteringData d = base;
    d.r1 = r1_t;
    d.r2 = r2_t;
    d.t = t;
    return d;
}

cplx evolution_phase(double z, double t, const PhysParams& p)
{
    if (z == 0.0) throw DomainError("evolution_phase: z = 0 is excluded");
    double e = p.alpha * (z - p.beta + p.beta * p.beta / (4.0 * z));
    return std::exp(cplx(0.0, 2.0 * e * t));
}

EvolvedData evolve(const ScatteringData& data, double t, const PhysParams& p)
{
    p.validate();
    if (!(t >= 0)) throw ConfigError("evolve: t must be nonnegative");
    EvolvedData e;
    e.base = data;
    e.t = data.t + t;
    e.r1_t = data.r1;
    e.r2_t = data.r2;
    if (t == 0.0) return e;
    for (int k = 0; k < data.grid.size(); ++k) {
        cplx ph = evolution_phase(data.grid.nodes[k], t, p);
        e.r1_t.values[k] *= ph;
        e.r2_t.values[k] *= ph;
    }
    return e;
}

double weighted_l2(const ComplexSamples& s, int weight_power)
{
    double acc = 0.0;
    for (int k = 0; k < s.grid.size(); ++k) {
        double z = s.grid.nodes[k];
        acc += s.grid.weights[k] * std::norm(s.values[k]) * std::pow(1.0 + z * z, weight_power);
    }
    return std::sqrt(acc);
}

namespace {

double grad_l2(const SpectralGrid& g, const VecC& v)
{
    double acc = 0.0;
    for (int k = 0; k + 1 < g.size(); ++k) {
        double dz = g.nodes[k + 1] - g.nodes[k];
        acc += std::norm((v[k + 1] - v[k]) / dz) * dz;
    }
    return std::sqrt(acc);
}

double inv_z2_l2(const SpectralGrid& g, const VecC& v)
{
    double acc = 0.0;
    for (int k = 0; k < g.size(); ++k) acc += g.weights[k] * std::norm(v[k]) / std::pow(g.nodes[k], 4);
    return std::sqrt(acc);
}

} // namespace

SlopeCheck slope_check(const ScatteringData& data, double t, const PhysParams& p)
{
    EvolvedData e = evolve(data, t, p);
    const SpectralGrid& g = data.grid;
    SlopeCheck s;
    auto one = [&](const ComplexSamples& r0, const ComplexSamples& rt, double& g0, double& gt, double& bound) {
        g0 = grad_l2(g, r0.values);
        gt = grad_l2(g, rt.values);
        double l2 = std::sqrt((r0.values.array().abs2() * g.weights.array()).sum());
        bound = g0 + t * (2.0 * p.alpha * l2 + 0.5 * p.alpha * p.beta * p.beta * inv_z2_l2(g, r0.values));
    };
    one(data.r1, e.r1_t, s.grad_r1_0, s.grad_r1_t, s.bound_r1);
    one(data.r2, e.r2_t, s.grad_r2_0, s.grad_r2_t, s.bound_r2);
    s.pass = s.grad_r1_t <= s.bound_r1 * (1.0 + 1e-12) && s.grad_r2_t <= s.bound_r2 * (1.0 + 1e-12);
    return s;
}

double unresolved_radius(const SpectralGrid& g, double t, const PhysParams& p, double nodes_per_period)
{
    if (t <= 0.0) return 0.0;
    // Local frequency of alpha beta^2 t / (2z) is alpha beta^2 t / (2 z^2); count
    // nodes per period using the generating spacing. Bisection on (0, z_cut].
    const double k = p.alpha * p.beta * p.beta * t / 2.0;
    auto npp = [&](double z) { return 2.0 * kPi * z * z / (k * spectral_spacing(g, z)); };
    double hi = g.z_cut;
    if (npp(hi) < nodes_per_period) return hi;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (npp(mid) < nodes_per_period) lo = mid; else hi = mid;
    }
    return hi;
}

VecR small_z_filter(const SpectralGrid& g, double zeta)
{
    VecR f = VecR::Ones(g.size());
    if (zeta <= 0.0) return f;
    for (int k = 0; k < g.size(); ++k) f[k] = std::exp(-std::pow(zeta / g.nodes[k], 2));
    return f;
}

} // namespace fl
