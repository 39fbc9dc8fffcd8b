#pragma once

#include "fl/scattering.hpp"

namespace fl {

struct EvolvedData {
    ScatteringData base;
    double t = 0.0;
    ComplexSamples r1_t, r2_t;
    // base with r1, r2 replaced by the evolved coefficients
    ScatteringData as_data() const;
};

// exp(+2 i alpha (z - beta + beta^2/(4z)) t)
cplx evolution_phase(double z, double t, const PhysParams& p);

EvolvedData evolve(const ScatteringData& data, double t, const PhysParams& p);

// Discrete check that the z-derivative of r_j(t) grows at most linearly in t.
struct SlopeCheck {
    double grad_r1_0 = 0, grad_r1_t = 0, bound_r1 = 0;
    double grad_r2_0 = 0, grad_r2_t = 0, bound_r2 = 0;
    bool pass = true;
};
SlopeCheck slope_check(const ScatteringData& data, double t, const PhysParams& p);

// Radius below which the 1/z part of the phase is sampled with fewer than
// `nodes_per_period` nodes at time t. Zero at t = 0.
double unresolved_radius(const SpectralGrid& g, double t, const PhysParams& p, double nodes_per_period = 8.0);

// Smooth damping exp(-(zeta/z)^2) applied to evolved data inside the
// unresolved radius; identically 1 when zeta = 0.
VecR small_z_filter(const SpectralGrid& g, double zeta);

double weighted_l2(const ComplexSamples& s, int weight_power); // ||<z>^p s||_2 on the grid

} // namespace fl
