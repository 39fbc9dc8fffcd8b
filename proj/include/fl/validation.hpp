#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fl/reconstruction.hpp"

namespace fl {

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool at_most = true; // pass iff value <= threshold, otherwise value >= threshold
};

struct ValidationReport {
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> info;

    // NaN values never pass.
    void at_most(const std::string& name, double value, double threshold);
    void at_least(const std::string& name, double value, double threshold);
    void note(const std::string& key, const std::string& value);
    void note(const std::string& key, double value);
    void merge(const ValidationReport& other, const std::string& prefix = "");

    bool pass() const;
    bool has(const std::string& name) const;
    const Check& at(const std::string& name) const;
    std::vector<std::string> failures() const;

    std::string key_values() const; // name.value=..., name.threshold=..., name.pass=...
    std::string csv() const;         // check,value,threshold,pass
};

// ---------------------------------------------------------------- identities

struct IdentityOptions {
    double unitarity_tol = 1e-6;
    double positivity_floor = 0.9; // c0^2 for 1 + conj(r1) r2 on z < 0
    double ratio_tol = 1e-12;      // |r2 - 4 z r1|
    double halving_tol = 0.25;     // |ratio / 2 - 1| for the a(z) decay under doubling
    double drift_tol = 1e-6;
    double det_tol = 1e-8;
};

// Checks on scattering data alone; the decay order uses the nodes nearest
// z_cut / 2 and z_cut at both ends.
ValidationReport identity_suite(const ScatteringData& data, const IdentityOptions& opt = {});
// Adds the Wronskian drift and determinant checks of the forward solve.
ValidationReport identity_suite(const ForwardResult& fr, const IdentityOptions& opt = {});

// ---------------------------------------------------------------- Jost limits

struct JostLimitOptions {
    double z_small = 0.0;  // 0: innermost node of the default spectral grid
    double z_cut = 64.0;
    double zero_tol = 5e-3;
    double c_inf = 1.0;    // |Psi - e^{-i c_pm sigma3}| <= c_inf / z
    double c_j2 = 1.0;     // |z Psi^-_21 - target| <= c_j2 / sqrt(z)
    double halving_tol = 0.25;
};

// z -> 0 and z -> infinity limits of the Jost functions, the 1/z coefficient
// of Psi^-_21, and the decay order of |a(z) - e^{-ic}| under doubling of z.
ValidationReport jost_asymptotics_suite(const Field& u0, const JostLimitOptions& opt = {});

// ---------------------------------------------------------------- projections

struct PlemeljOptions {
    double tol = 1e-6;
    double interior = 0.5;            // |z| < interior * z_cut for oracle comparisons
    std::vector<double> xs = {-3.0, -1.0, 1.0, 3.0};
};
ValidationReport plemelj_suite(const SpectralGrid& g, const PlemeljOptions& opt = {});

// ---------------------------------------------------------------- evolution

struct EvolutionCheckOptions {
    std::vector<double> times = {0.25, 1.0};
    double modulus_tol = 1e-14;
    double norm_tol = 1e-12;
    double group_tol = 1e-14;
};
ValidationReport evolution_suite(const ScatteringData& data, const PhysParams& p,
                                 const EvolutionCheckOptions& opt = {});

// ---------------------------------------------------------------- RH solver

struct RHCheckOptions {
    std::vector<double> xs = {-10.0, -1.0, 0.0, 1.0, 10.0};
    double x_switch = 0.0;
    double residual_tol = 1e-6;
    double edge_tol = 1e-2;
    double delta_tol = 1e-8;
    double delta_edge_tol = 1e-3;
    double agreement_x = -1.0;
    double agreement_tol = 1e-6;
    double condition_x = -10.0;
    RHOptions rh;
};

// Jump residual and edge checks for one solution.
ValidationReport rh_solution_checks(const RHSolution& sol, const JumpData& jump, const RHCheckOptions& opt = {});
// Delta invariants, per-x solution checks, plain/conditioned agreement and
// the condition-number comparison.
ValidationReport rh_suite(const ScatteringData& data, const RHCheckOptions& opt = {});

// ---------------------------------------------------------------- PDE residual

struct Snapshot {
    double t = 0.0;
    Field u;
};

struct PdeResidual {
    double relative = 0.0;       // ||R|| / ||u_xt||
    double absolute = 0.0;       // ||R||
    double uxt_norm = 0.0;
    double nonlinear_norm = 0.0; // ||sigma i alpha beta^2 |u|^2 u_x||
};

// Residual of u_xt + a b^2 u - 2i a b u_x - a u_xx + s i a b^2 |u|^2 u_x at
// the middle snapshot. u_xt is a central difference across the neighbouring
// snapshots; x-derivatives are finite differences. `nonlinear` = false drops
// the cubic term.
PdeResidual pde_residual_parts(const std::vector<Snapshot>& snaps, const PhysParams& p, bool nonlinear = true);
double pde_residual(const std::vector<Snapshot>& snaps, const PhysParams& p);

struct PlaneWaveOptions {
    double eps = 1e-3;
    double xi = 2.0;
    double dt = 1e-2;
    double order_tol = 0.3; // |log2(ratio) - 2|
};
// Linear residual of eps e^{i(xi x - omega t)} with omega = -alpha (xi + beta)^2 / xi
// at dt and dt / 2.
ValidationReport plane_wave_check(const PhysParams& p, const RealGrid& grid, const PlaneWaveOptions& opt = {});

struct PdeCheckOptions {
    double t = 1.0;
    double dt = 1e-3;
    double tol = 1e-2;
    double nonlinear_tol = 0.2; // ||R|| / ||nonlinear term||
    ReconstructionOptions recon;
};
// Reconstructs snapshots at t - dt, t, t + dt and checks the residual.
ValidationReport pde_check(const ScatteringData& data, const PhysParams& p, const RealGrid& grid,
                           const PdeCheckOptions& opt = {});
ValidationReport pde_check(const std::vector<Snapshot>& snaps, const PhysParams& p, const PdeCheckOptions& opt = {});

// ---------------------------------------------------------------- round trip

struct RoundtripOptions {
    SpectralGridParams zgrid;
    ScatteringOptions scattering;
    ReconstructionOptions recon;
    double tol = 1e-3;
    double c_tol = 1e-3;
    double closure_tol = 1e-3;
};

struct RoundtripResult {
    ValidationReport report;
    Field u_rec;
    double rel_sup = 0.0;
};

RoundtripResult roundtrip_run(const Field& u0, const PhysParams& p, const RoundtripOptions& opt = {});
ValidationReport roundtrip(const Field& u0, const PhysParams& p, const RoundtripOptions& opt = {});
// Error at the base grid and at doubled (n_z_outer, z_cut); checks the shrink factor.
ValidationReport roundtrip_convergence(const Field& u0, const PhysParams& p, const RoundtripOptions& base,
                                       double min_factor = 4.0);

// ---------------------------------------------------------------- stability

struct LipschitzOptions {
    int n_dirs = 10;
    double eps = 1e-3;
    std::uint64_t seed = 20240611;
    double t = 0.5;
    double spread_tol = 10.0;
    bool eps_check = true; // repeat the first direction at eps / 2
    double eps_spread_tol = 2.0;
    SpectralGridParams zgrid;
    ScatteringOptions scattering;
    ReconstructionOptions recon;
};

// Random smooth complex perturbation with unit L2 norm on the grid.
VecC random_direction(const RealGrid& grid, std::uint64_t seed, int index);
ValidationReport lipschitz_probe(const Field& u0, const PhysParams& p, const LipschitzOptions& opt = {});

// ---------------------------------------------------------------- helpers

double l2_norm(const RealGrid& g, const VecC& v);
double l2_norm(const ComplexSamples& s);

} // namespace fl
