#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fl/validation.hpp"

namespace fl {

struct ProfileSpec {
    std::string kind = "gaussian"; // gaussian | sech | from-file
    double amplitude = 0.25;
    double width = 1.0;
    double center = 0.0;
    double wavenumber = 0.0; // optional carrier e^{i k x}
    std::string path;
};

struct RunConfig {
    PhysParams params;
    RealGrid xgrid;
    SpectralGridParams zgrid;
    double solver_tol = 1e-8;
    double edge_tol = 1e-2;
    double roundtrip_tol = 1e-3;
    double residual_tol = 1e-2;
    ProfileSpec profile;
    std::vector<double> times = {1.0};
    double x_switch = 0.0;
    std::uint64_t seed = 20240611;
    int rh_stride = 4;
    bool lipschitz = false;
    int n_dirs = 10;
    double eps = 1e-3;

    void validate() const;
};

// Unknown keys and malformed values raise ConfigError.
RunConfig parse_config(const std::vector<std::pair<std::string, std::string>>& kv);
RunConfig load_config(const std::string& path);
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c);

// Samples the profile on the configured grid; from-file profiles bring their own grid.
Field make_profile(const RunConfig& c);
ReconstructionOptions reconstruction_options(const RunConfig& c);

// Phase resolution at the refinement radius for time t: nodes per period of
// e^{i alpha beta^2 t / (2z)} at |z| = z_min_inner, and the z_ref that would
// give 8 nodes there.
struct AliasingReport {
    double nodes_per_period = 0.0;
    double unresolved_radius = 0.0;
    double suggested_z_ref = 0.0;
    bool ok = true;
};
AliasingReport aliasing_check(const SpectralGrid& g, const SpectralGridParams& gp, double t, const PhysParams& p);

} // namespace fl
