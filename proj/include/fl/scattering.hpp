#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fl/core.hpp"

namespace fl {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

struct PhysParams {
    double alpha = 1.0;
    double beta = 1.0;
    int sigma = -1;
    void validate() const;
};

enum class JostSide { Minus, Plus };

struct JostOptions {
    int substeps = 0;        // 0 picks the count from |z| h
    int max_substeps = 64;
    double max_zh = 0.15;    // target |z| * substep
    double limit_zh = 1.0;   // larger substeps raise AccuracyError
    // kb = O(z^2) near z = 0 while the step error is O(h^4): below small_z the
    // substep count grows like |z|^{-1/2}.
    double small_z = 0.01;
};

struct JostSolution {
    cplx z;
    std::vector<Mat2> psi_minus; // per x node
    std::vector<Mat2> psi_plus;
};

// Q(x) = (1/2i) [[|ux|^2, ux], [-2i conj(uxx) - conj(ux)|ux|^2, -|ux|^2]]
std::vector<Mat2> build_potential_matrix(const Field& u);

// Fourth-order Magnus integrator for Psi_x = -iz[s3, Psi] + Q Psi in the
// rotated frame Phi = Psi e^{-izx s3}. The potential is resampled once, on a
// grid fine enough for the largest |z| it will be asked for.
class JostIntegrator {
public:
    JostIntegrator(const Field& u, double z_max, const JostOptions& opt = {});

    const RealGrid& grid() const { return grid_; }
    int substeps_for(cplx z) const;

    // Full matrices on every x node; only the requested sides are filled.
    JostSolution solve(cplx z, bool minus = true, bool plus = true) const;

    // Column sweeps valid for Im z >= 0: Psi^-_1 rightward to node `stop`,
    // Psi^+_2 leftward to node `stop`.
    Vec2 minus_col1(cplx z, int stop) const;
    Vec2 plus_col2(cplx z, int stop) const;

private:
    Mat2 step_exp(int cell, int sub, int s, cplx z, bool inverse) const;

    RealGrid grid_;
    JostOptions opt_;
    int factor_ = 1;          // refinement of the stored potential, 2 * max substeps
    std::vector<Mat2> q_;     // potential on the refined grid
};

JostSolution solve_jost(const Field& u, cplx z, const JostOptions& opt = {});
JostSolution solve_jost_side(const Field& u, cplx z, JostSide side, const JostOptions& opt = {});

struct ScatteringData {
    SpectralGrid grid;
    ComplexSamples a, kb, r1, r2;
    double c = 0.0;
    bool admissible = false;
    double min_abs_a = 0.0;
    double t = 0.0; // time the reflection data refer to
};

struct ScatteringOptions {
    JostOptions jost;
    double drift_tol = 1e-6;
    double a_floor = 1e-8;
    bool lattice_scan = true;
};

struct ScatteringCoefficients {
    ComplexSamples a, kb;
    double wronskian_drift = 0.0; // max |a(x_m) - a(x)| over the check points
    double det_error = 0.0;       // max |det Psi - 1| over the (x, z) lattice
};

ScatteringCoefficients scattering_coefficients(const Field& u, const SpectralGrid& grid,
                                               const ScatteringOptions& opt = {});
double norming_constant(const Field& u);
// c_-(x) = (1/2) int_{x_min}^x |u_y|^2 for Minus, c_+(x) = c_-(x) - c for Plus.
VecR partial_norming(const Field& u, JostSide side);
void reflection_coefficients(const ComplexSamples& a, const ComplexSamples& kb, ComplexSamples& r1,
                             ComplexSamples& r2, double a_floor = 1e-8);

// a(z) for Im z >= 0 from the analytic Jost columns.
cplx a_offaxis(const JostIntegrator& jost, cplx z);

struct AdmissibilityReport {
    double small_norm_value = 0.0;
    bool small_norm_holds = false;
    double min_abs_a_grid = 0.0;
    double min_abs_a_lattice = 0.0;
    double lattice_cauchy_mismatch = 0.0; // a - e^{-ic} against the Cauchy integral of its boundary values
    double min_abs_a = 0.0;
    bool admissible = false;
};

AdmissibilityReport admissibility_check(const Field& u, const ComplexSamples& a, double a_floor = 1e-8,
                                        const JostOptions& opt = {}, bool lattice_scan = true);

struct ForwardResult {
    ScatteringData data;
    ScatteringCoefficients coeffs;
    AdmissibilityReport admissibility;
};

// Coefficients, admissibility and reflection data. Throws ResonanceError when
// min |a| falls below the floor.
ForwardResult forward_scatter(const Field& u, const SpectralGrid& grid, const ScatteringOptions& opt = {});

// Persistence: CSV plus a key=value sidecar at path + ".meta".
struct ScatteringMeta {
    PhysParams params;
    SpectralGridParams grid_params;
    std::vector<std::pair<std::string, std::string>> extra;
};
void write_scattering(const std::string& path, const ScatteringData& d, const ScatteringMeta& meta);
ScatteringData read_scattering(const std::string& path, ScatteringMeta& meta);

// key=value files shared by the sidecars and the CLI config.
std::vector<std::pair<std::string, std::string>> read_key_values(const std::string& path);
void write_key_values(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);

} // namespace fl
