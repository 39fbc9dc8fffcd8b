#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fl {

using cplx = std::complex<double>;
using VecR = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Error categories; the CLI maps them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct AccuracyError : Error { using Error::Error; };
struct ResonanceError : Error { using Error::Error; };
struct SolverError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ContractError : Error { using Error::Error; };

bool is_power_of_two(long n);

struct RealGrid {
    double x_min = -20.0;
    double x_max = 20.0;
    int n = 2048;

    double h() const { return (x_max - x_min) / (n - 1); }
    double x(int i) const { return x_min + i * h(); }
    VecR nodes() const;
    int nearest(double x) const;
    void validate() const;
    bool operator==(const RealGrid& o) const { return x_min == o.x_min && x_max == o.x_max && n == o.n; }
};

struct SpectralGridParams {
    double z_cut = 64.0;
    double z_ref = 0.25;       // crossover between the refined core and the uniform outer spacing
    double z_min_inner = 0.02; // refinement radius around z = 0
    int n_z_outer = 2048;      // outer spacing is 2 z_cut / n_z_outer; keep it below pi / (2 max|x|)
};

// Symmetric real nodes, 0 excluded. Nodes are the image of a uniform
// half-integer theta lattice under a smooth odd map whose local spacing is
// 1 / (1/h + z_ref^2 / (h (z^2 + eps^2))).
struct SpectralGrid {
    VecR nodes;
    VecR weights;
    double refinement_radius = 0.0;
    double z_cut = 0.0;
    double outer_spacing = 0.0;
    double z_ref = 0.0;
    int size() const { return static_cast<int>(nodes.size()); }
};

SpectralGrid make_spectral_grid(const SpectralGridParams& p);
SpectralGrid make_uniform_spectral_grid(double z_cut, int n);
// Local node spacing of the generating map at z.
double spectral_spacing(const SpectralGrid& g, double z);

struct Field {
    RealGrid grid;
    VecC values;
    VecC d1;
    VecC d2;

    static Field from_values(const RealGrid& grid, const VecC& values);
    static Field zero(const RealGrid& grid);
    // Largest |u| among the outer 1% of nodes on either end.
    double boundary_level() const;
};

struct ComplexSamples {
    SpectralGrid grid;
    VecC values;
    void check_finite(const char* what) const;
};

struct Spectrum {
    VecR xi;     // increasing frequencies
    VecC values; // f_hat(xi) = (1/2pi) int f(x) e^{-i x xi} dx
    double x_min = 0.0;
    double dxi = 0.0;
};

Spectrum fourier_pair(const Field& field);
Spectrum fourier_forward(const RealGrid& grid, const VecC& values);
VecC fourier_inverse(const RealGrid& grid, const Spectrum& s);

// Spectral derivative of order k on the periodic extension of the grid.
VecC spectral_derivative(const RealGrid& grid, const VecC& values, int order);
// Finite-difference derivative of order k (1 or 2) with `width`-point
// stencils, centred in the interior and shifted inward at the ends.
VecC fd_derivative(const RealGrid& grid, const VecC& values, int order, int width = 9);
// Fornberg weights for the derivatives 0..m at x0 from nodes xs.
Eigen::MatrixXd fornberg_weights(double x0, const VecR& xs, int m);
// Trigonometric interpolation onto a grid refined by `factor` (power of two),
// returning n*factor samples starting at x_min with spacing h/factor.
VecC spectral_refine(const RealGrid& grid, const VecC& values, int factor);

// Plemelj projections by principal-value quadrature on the grid.
struct PlemeljMatrices {
    MatC cauchy_pv; // (1/2pi i) PV int h(s)/(s - z_j) ds as a matrix
    MatC plus() const;
    MatC minus() const;
};
PlemeljMatrices plemelj_matrices(const SpectralGrid& g);
ComplexSamples plemelj_plus(const ComplexSamples& h);
ComplexSamples plemelj_minus(const ComplexSamples& h);
// Apply the principal-value part to a vector without forming a matrix.
VecC cauchy_pv_apply(const SpectralGrid& g, const VecC& h);

enum class Side { PlusAtPlusX, MinusAtPlusX, PlusAtMinusX, MinusAtMinusX };

// P+(f e^{-2izx}), P-(f e^{2izx}), P+(f e^{2izx}) or P-(f e^{-2izx}) via the
// half-line truncated Fourier integral.
ComplexSamples projected_modulation(const ComplexSamples& f, double x, Side side);
// The same quantity computed as the direct projection of the modulated samples.
ComplexSamples direct_modulation(const ComplexSamples& f, double x, Side side);

cplx cauchy_offaxis(const ComplexSamples& h, cplx z0);

struct NormReport {
    double u_l1 = 0, u_l2 = 0, u_l21 = 0;
    double ux_l2 = 0, ux_l3 = 0, uxx_l1 = 0, ux_l1 = 0;
    double h3_h21 = 0;
};
NormReport discrete_norms(const Field& f);

double trapezoid(const RealGrid& g, const VecR& values);
cplx trapezoid(const RealGrid& g, const VecC& values);

// CSV helpers shared by all file formats.
void write_field_csv(const std::string& path, const Field& f);
Field read_field_csv(const std::string& path);
void write_samples_csv(const std::string& path, const ComplexSamples& s);
ComplexSamples read_samples_csv(const std::string& path, const SpectralGrid& g);
std::string format_double(double v);

} // namespace fl
