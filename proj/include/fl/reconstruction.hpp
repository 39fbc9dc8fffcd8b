#pragma once

#include <limits>
#include <string>
#include <vector>

#include "fl/evolution.hpp"
#include "fl/rh.hpp"

namespace fl {

struct ReconstructionRaw {
    VecR x_nodes;
    VecC u_hat; // e^{i c_+(x)} u(x)
    VecC g;     // e^{-i c_+(x)} d/dx (conj(u_x) e^{-i c_+(x)})
};

struct PhaseState {
    cplx w = 0.0;     // conj(u_x) e^{-i c_+}
    double phi = 0.0; // c_+(x)
};

// The integrand follows the provenance of `sol`; delta is required for
// conditioned solutions, which are only valid for x < x_switch.
cplx reconstruct_u_hat(const RHSolution& sol, const ComplexSamples& r1, double x, double x_switch = 0.0,
                       const DeltaData* delta = nullptr);
cplx reconstruct_g(const RHSolution& sol, const ComplexSamples& r2, double x, double x_switch = 0.0,
                   const DeltaData* delta = nullptr);

struct UntangleReport {
    double c = 0.0;              // norming constant, -c_+(x_min)
    double phase_end = 0.0;      // c_+(x_max); nonzero when mass leaves through x_max
    double c_direct = 0.0;       // norming constant of the returned field
    double closure = 0.0;        // relative mismatch of d/dx u against the integrated u_x
    double modulus_mismatch = 0.0;
};

struct UntangleOptions {
    double closure_tol = 1e-3;
    bool strict = true; // throw ContractError when closure exceeds 10 * closure_tol
    double c = std::numeric_limits<double>::quiet_NaN(); // finite: anchor at x_min with c_+ = -c
};

// Integrates w' = g e^{i phi}, phi' = |w|^2 / 2 from x_max leftward with
// w = phi = 0 (or from x_min rightward with w = 0, phi = -c when opt.c is set),
// then u_x = conj(w) e^{-i phi}, u = u_hat e^{-i phi}.
Field untangle_phases(const ReconstructionRaw& raw, const RealGrid& grid, UntangleReport* report = nullptr,
                      const UntangleOptions& opt = {});
// u_x from the same integration, sampled on the grid.
VecC untangled_ux(const ReconstructionRaw& raw, const RealGrid& grid,
                  double c = std::numeric_limits<double>::quiet_NaN());

struct ReconstructionOptions {
    double x_switch = 0.0;
    int rh_stride = 4;          // RH solves on every rh_stride-th x node
    double filter_t = -1.0;     // time used for the small-z filter radius; < 0 means t
    double nodes_per_period = 8.0;
    // Anchor the phase integration at x_min using the conserved c. The slow
    // dispersive tail leaves through x_max, so this is the robust end for t > 0.
    bool anchor_left = true;
    RHOptions rh;
    UntangleOptions untangle;
};

struct ReconstructionResult {
    Field u;
    ReconstructionRaw raw;
    UntangleReport untangle;
    double max_residual = 0.0;
    double worst_x = 0.0;
    double max_condition = 1.0;
    double filter_radius = 0.0;
    std::vector<std::string> warnings;
};

// Evolve, solve the RH problem on the x grid, reconstruct and untangle.
ReconstructionResult reconstruct_solution(const ScatteringData& data, double t, const PhysParams& params,
                                          const RealGrid& grid, const ReconstructionOptions& opt = {});

// Local six-point Lagrange interpolation on increasing nodes.
VecC lagrange_interpolate(const VecR& xs, const VecC& ys, const VecR& at);

} // namespace fl
