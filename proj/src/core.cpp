#include "fl/core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

namespace fl {

namespace {

std::mutex& fftw_mutex()
{
    static std::mutex m;
    return m;
}

// In-place complex DFT of length n; sign -1 forward, +1 backward, unnormalized.
void dft(std::vector<cplx>& data, int sign)
{
    const int n = static_cast<int>(data.size());
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_1d(n, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
}

int signed_index(int k, int n) { return k <= n / 2 ? k : k - n; }

} // namespace

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

VecR RealGrid::nodes() const
{
    VecR x(n);
    for (int i = 0; i < n; ++i) x[i] = this->x(i);
    return x;
}

int RealGrid::nearest(double x) const
{
    int i = static_cast<int>(std::lround((x - x_min) / h()));
    return std::clamp(i, 0, n - 1);
}

void RealGrid::validate() const
{
    if (!(x_max > x_min)) throw ConfigError("x grid: x_max must exceed x_min");
    if (n < 4 || !is_power_of_two(n)) throw ConfigError("x grid: n must be a power of two >= 4, got " + std::to_string(n));
}

// ---------------------------------------------------------------- spectral grid

namespace {

struct GridMap {
    double h, a2, eps; // a2 = z_ref^2
    double spacing(double z) const { return h * (z * z + eps * eps) / (z * z + eps * eps + a2); }
    double theta(double z) const { return z / h + a2 / h * std::atan(z / eps) / eps; }
    double inverse(double th) const
    {
        // theta is increasing and convex-concave; bracketed Newton.
        double lo = 0.0, hi = std::max(1.0, th * h);
        while (theta(hi) < th) hi *= 2.0;
        double z = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            double f = theta(z) - th;
            if (f > 0) hi = z; else lo = z;
            double zn = z - f * spacing(z);
            if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
            if (std::abs(zn - z) <= 1e-16 * std::max(1.0, z)) { z = zn; break; }
            z = zn;
        }
        return z;
    }
};

} // namespace

SpectralGrid make_spectral_grid(const SpectralGridParams& p)
{
    if (!(p.z_cut > 0) || !(p.z_min_inner > 0) || !(p.z_ref >= 0) || p.n_z_outer < 2)
        throw ConfigError("spectral grid: z_cut, z_min_inner must be positive and n_z_outer >= 2");
    if (p.z_min_inner >= p.z_cut) throw ConfigError("spectral grid: z_min_inner must be below z_cut");
    GridMap m{2.0 * p.z_cut / p.n_z_outer, p.z_ref * p.z_ref, p.z_min_inner};
    double th_max = m.theta(p.z_cut);
    int half = std::max(1, static_cast<int>(std::lround(th_max)));
    double dth = th_max / half;
    SpectralGrid g;
    g.nodes.resize(2 * half);
    g.weights.resize(2 * half);
    for (int k = 0; k < half; ++k) {
        double z = m.inverse((k + 0.5) * dth);
        double w = m.spacing(z) * dth;
        g.nodes[half + k] = z;
        g.nodes[half - 1 - k] = -z;
        g.weights[half + k] = w;
        g.weights[half - 1 - k] = w;
    }
    g.refinement_radius = p.z_min_inner;
    g.z_cut = p.z_cut;
    g.outer_spacing = m.h;
    g.z_ref = p.z_ref;
    return g;
}

SpectralGrid make_uniform_spectral_grid(double z_cut, int n)
{
    if (n < 2 || n % 2) throw ConfigError("uniform spectral grid needs an even node count");
    SpectralGrid g;
    double h = 2.0 * z_cut / n;
    g.nodes.resize(n);
    g.weights = VecR::Constant(n, h);
    for (int k = 0; k < n; ++k) g.nodes[k] = -z_cut + (k + 0.5) * h;
    g.refinement_radius = 0.5 * h;
    g.z_cut = z_cut;
    g.outer_spacing = h;
    g.z_ref = 0.0;
    return g;
}

double spectral_spacing(const SpectralGrid& g, double z)
{
    if (g.z_ref == 0.0) return g.outer_spacing;
    GridMap m{g.outer_spacing, g.z_ref * g.z_ref, g.refinement_radius};
    return m.spacing(z);
}

// ---------------------------------------------------------------- fields

Field Field::from_values(const RealGrid& grid, const VecC& values)
{
    grid.validate();
    if (values.size() != grid.n) throw ContractError("field: sample count does not match grid");
    Field f;
    f.grid = grid;
    f.values = values;
    f.d1 = spectral_derivative(grid, values, 1);
    f.d2 = spectral_derivative(grid, values, 2);
    return f;
}

Field Field::zero(const RealGrid& grid)
{
    grid.validate();
    Field f;
    f.grid = grid;
    f.values = VecC::Zero(grid.n);
    f.d1 = VecC::Zero(grid.n);
    f.d2 = VecC::Zero(grid.n);
    return f;
}

double Field::boundary_level() const
{
    int m = std::max(1, grid.n / 100);
    double b = 0.0;
    for (int i = 0; i < m; ++i) b = std::max({b, std::abs(values[i]), std::abs(values[grid.n - 1 - i])});
    return b;
}

void ComplexSamples::check_finite(const char* what) const
{
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
            throw SolverError(std::string(what) + ": non-finite sample at node " + std::to_string(i));
}

// ---------------------------------------------------------------- Fourier

Spectrum fourier_forward(const RealGrid& grid, const VecC& values)
{
    grid.validate();
    const int n = grid.n;
    if (values.size() != n) throw ContractError("fourier: sample count does not match grid");
    std::vector<cplx> buf(values.data(), values.data() + n);
    dft(buf, -1);
    Spectrum s;
    s.x_min = grid.x_min;
    s.dxi = 2.0 * kPi / (n * grid.h());
    s.xi.resize(n);
    s.values.resize(n);
    const double h = grid.h();
    for (int j = 0; j < n; ++j) {
        int k = j - n / 2 + 1; // frequencies -n/2+1 .. n/2
        int idx = (k + n) % n;
        double xi = k * s.dxi;
        s.xi[j] = xi;
        s.values[j] = h / (2.0 * kPi) * buf[idx] * std::exp(-kI * xi * grid.x_min);
    }
    return s;
}

Spectrum fourier_pair(const Field& field) { return fourier_forward(field.grid, field.values); }

VecC fourier_inverse(const RealGrid& grid, const Spectrum& s)
{
    const int n = grid.n;
    if (s.values.size() != n) throw ContractError("fourier: spectrum size does not match grid");
    std::vector<cplx> buf(n);
    for (int j = 0; j < n; ++j) {
        int k = j - n / 2 + 1;
        int idx = (k + n) % n;
        buf[idx] = s.values[j] * std::exp(kI * s.xi[j] * grid.x_min);
    }
    dft(buf, +1);
    VecC out(n);
    for (int i = 0; i < n; ++i) out[i] = buf[i] * s.dxi;
    return out;
}

VecC spectral_derivative(const RealGrid& grid, const VecC& values, int order)
{
    const int n = grid.n;
    std::vector<cplx> buf(values.data(), values.data() + n);
    dft(buf, -1);
    const double L = n * grid.h();
    for (int j = 0; j < n; ++j) {
        int k = signed_index(j, n);
        if (2 * k == n && order % 2 == 1) { buf[j] = 0.0; continue; }
        cplx ik = kI * (2.0 * kPi * k / L);
        cplx f = 1.0;
        for (int o = 0; o < order; ++o) f *= ik;
        buf[j] *= f / static_cast<double>(n);
    }
    dft(buf, +1);
    return Eigen::Map<VecC>(buf.data(), n);
}

Eigen::MatrixXd fornberg_weights(double x0, const VecR& xs, int m)
{
    const int n = static_cast<int>(xs.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, m + 1);
    double c1 = 1.0, c4 = xs[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c;
}

VecC fd_derivative(const RealGrid& grid, const VecC& values, int order, int width)
{
    const int n = grid.n;
    if (width > n) throw ConfigError("fd_derivative: stencil wider than the grid");
    VecC out(n);
    // Stencil weights depend only on the offset of x0 inside the stencil.
    std::vector<Eigen::VectorXd> w(width);
    VecR off(width);
    for (int j = 0; j < width; ++j) off[j] = j;
    for (int p = 0; p < width; ++p) w[p] = fornberg_weights(p, off, order).col(order) / std::pow(grid.h(), order);
    for (int i = 0; i < n; ++i) {
        int lo = std::clamp(i - width / 2, 0, n - width);
        const Eigen::VectorXd& c = w[i - lo];
        cplx acc = 0.0;
        for (int j = 0; j < width; ++j) acc += c[j] * values[lo + j];
        out[i] = acc;
    }
    return out;
}

VecC spectral_refine(const RealGrid& grid, const VecC& values, int factor)
{
    const int n = grid.n;
    if (!is_power_of_two(factor)) throw ConfigError("refinement factor must be a power of two");
    if (factor == 1) return values;
    std::vector<cplx> buf(values.data(), values.data() + n);
    dft(buf, -1);
    const int m = n * factor;
    std::vector<cplx> big(m, 0.0);
    for (int j = 0; j < n; ++j) {
        int k = signed_index(j, n);
        cplx v = buf[j] / static_cast<double>(n);
        if (2 * k == n) {
            big[n / 2] += 0.5 * v;
            big[m - n / 2] += 0.5 * v;
        } else {
            big[(k + m) % m] = v;
        }
    }
    dft(big, +1);
    return Eigen::Map<VecC>(big.data(), m);
}

// ---------------------------------------------------------------- Plemelj

// Alternating-point rule: on the uniform theta lattice the principal value
// integral is approximated by 2*dtheta*sum over nodes of opposite parity.
PlemeljMatrices plemelj_matrices(const SpectralGrid& g)
{
    const int n = g.size();
    PlemeljMatrices P;
    P.cauchy_pv = MatC::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const cplx c = g.weights[k] / (kPi * kI);
        for (int j = (k + 1) % 2; j < n; j += 2) P.cauchy_pv(j, k) = c / (g.nodes[k] - g.nodes[j]);
    }
    return P;
}

MatC PlemeljMatrices::plus() const
{
    MatC m = cauchy_pv;
    m.diagonal().array() += 0.5;
    return m;
}

MatC PlemeljMatrices::minus() const
{
    MatC m = cauchy_pv;
    m.diagonal().array() -= 0.5;
    return m;
}

VecC cauchy_pv_apply(const SpectralGrid& g, const VecC& h)
{
    const int n = g.size();
    VecC out = VecC::Zero(n);
    for (int k = 0; k < n; ++k) {
        const cplx c = g.weights[k] * h[k] / (kPi * kI);
        if (c == cplx(0.0)) continue;
        for (int j = (k + 1) % 2; j < n; j += 2) out[j] += c / (g.nodes[k] - g.nodes[j]);
    }
    return out;
}

ComplexSamples plemelj_plus(const ComplexSamples& h)
{
    ComplexSamples r{h.grid, cauchy_pv_apply(h.grid, h.values) + 0.5 * h.values};
    return r;
}

ComplexSamples plemelj_minus(const ComplexSamples& h)
{
    ComplexSamples r{h.grid, cauchy_pv_apply(h.grid, h.values) - 0.5 * h.values};
    return r;
}

namespace {

// +1 for the e^{+2izx} modulation, -1 for e^{-2izx}; proj +1 for P+, -1 for P-.
void side_signs(Side side, double& mod, double& proj)
{
    switch (side) {
    case Side::PlusAtPlusX: mod = -1; proj = +1; break;
    case Side::MinusAtPlusX: mod = +1; proj = -1; break;
    case Side::PlusAtMinusX: mod = +1; proj = +1; break;
    case Side::MinusAtMinusX: mod = -1; proj = -1; break;
    }
}

double taper(double xi, double xi_max)
{
    double a = std::abs(xi) / xi_max;
    if (a <= 0.95) return 1.0;
    if (a >= 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * (a - 0.95) / 0.05));
}

} // namespace

ComplexSamples projected_modulation(const ComplexSamples& f, double x, Side side)
{
    const SpectralGrid& g = f.grid;
    const int n = g.size();
    double mod, proj;
    side_signs(side, mod, proj);

    // Transform window and resolution follow from the grid.
    const double xi_max = kPi / g.outer_spacing;
    const double dxi_target = kPi / (16.0 * g.z_cut);
    const int m = 2 * static_cast<int>(std::ceil(xi_max / dxi_target));
    const double dxi = 2.0 * xi_max / m;

    // The modulated function g = f e^{2 i mod z x} has g_hat(xi) = f_hat(xi - 2 mod x).
    // P+ keeps xi > 0, P- keeps -(xi < 0). Work directly on g_hat.
    const double shift = 2.0 * mod * x;
    VecR xi(m + 1);
    VecC gh(m + 1);
    constexpr int kResync = 256; // phasor recurrences are refreshed with an exact exp
    for (int l = 0; l <= m; ++l) xi[l] = -xi_max + l * dxi + shift; // window centred on the spectrum of f
    gh.setZero();
    for (int k = 0; k < n; ++k) {
        const cplx wf = g.weights[k] * f.values[k];
        const cplx step = std::exp(-kI * g.nodes[k] * dxi);
        cplx e;
        for (int l = 0; l <= m; ++l) {
            if (l % kResync == 0) e = std::exp(-kI * g.nodes[k] * (-xi_max + l * dxi));
            gh[l] += wf * e;
            e *= step;
        }
    }
    for (int l = 0; l <= m; ++l) gh[l] *= taper(xi[l] - shift, xi_max) / (2.0 * kPi);

    // Integrate g_hat(xi) e^{i z xi} over xi > 0 (P+) or xi < 0 (P-) with
    // piecewise-linear g_hat and exact exponentials.
    auto panel = [](cplx fa, cplx fb, double a, double b, double z) -> cplx {
        double d = b - a;
        double w = z * d;
        cplx ea = std::exp(kI * z * a);
        if (std::abs(w) < 1e-4) {
            cplx e = std::exp(kI * z * 0.5 * (a + b));
            return 0.5 * d * (fa + fb) * e + d * (fb - fa) * kI * w / 12.0 * e;
        }
        cplx eb = std::exp(kI * z * b);
        // int_a^b (fa + (fb-fa)(s-a)/d) e^{izs} ds
        cplx I0 = (eb - ea) / (kI * z);
        cplx I1 = (eb * d) / (kI * z) - (eb - ea) / (kI * z * kI * z); // int (s-a) e^{izs}
        return fa * I0 + (fb - fa) / d * I1;
    };

    // Panels fully inside the kept half-line share the spacing dxi, so their
    // endpoint exponentials follow a recurrence.
    int first = -1, last = -1; // full panels [first, last)
    for (int l = 0; l < m; ++l) {
        bool ka = proj > 0 ? xi[l] >= 0.0 : xi[l] <= 0.0;
        bool kb = proj > 0 ? xi[l + 1] >= 0.0 : xi[l + 1] <= 0.0;
        if (ka && kb) {
            if (first < 0) first = l;
            last = l + 1;
        }
    }
    ComplexSamples out{g, VecC::Zero(n)};
    for (int j = 0; j < n; ++j) {
        const double z = g.nodes[j];
        cplx acc = 0.0;
        if (first >= 0) {
            const double w = z * dxi;
            const cplx step = std::exp(kI * w);
            if (std::abs(w) < 1e-4) {
                for (int l = first; l < last; ++l) acc += panel(gh[l], gh[l + 1], xi[l], xi[l + 1], z);
            } else {
                const cplx iz = kI * z;
                cplx ea;
                for (int l = first; l < last; ++l) {
                    if ((l - first) % kResync == 0) ea = std::exp(kI * z * xi[l]);
                    const cplx eb = ea * step;
                    const cplx I0 = (eb - ea) / iz;
                    const cplx I1 = (eb * dxi) / iz - (eb - ea) / (iz * iz);
                    acc += gh[l] * I0 + (gh[l + 1] - gh[l]) / dxi * I1;
                    ea = eb;
                }
            }
        }
        for (int l = 0; l < m; ++l) {
            double a = xi[l], b = xi[l + 1];
            bool keep_a = proj > 0 ? a >= 0.0 : a <= 0.0;
            bool keep_b = proj > 0 ? b >= 0.0 : b <= 0.0;
            if (keep_a != keep_b) {
                cplx fa = gh[l], fb = gh[l + 1];
                double t = -a / (b - a);
                cplx f0 = fa + t * (fb - fa);
                if (proj > 0) acc += panel(f0, fb, 0.0, b, z);
                else acc += panel(fa, f0, a, 0.0, z);
            }
        }
        out.values[j] = proj > 0 ? acc : -acc;
    }
    return out;
}

ComplexSamples direct_modulation(const ComplexSamples& f, double x, Side side)
{
    double mod, proj;
    side_signs(side, mod, proj);
    ComplexSamples gsm{f.grid, f.values};
    for (int k = 0; k < f.grid.size(); ++k) gsm.values[k] *= std::exp(2.0 * kI * mod * f.grid.nodes[k] * x);
    return proj > 0 ? plemelj_plus(gsm) : plemelj_minus(gsm);
}

cplx cauchy_offaxis(const ComplexSamples& h, cplx z0)
{
    if (z0.imag() == 0.0) throw DomainError("cauchy_offaxis: z0 lies on the real axis; use plemelj_plus/plemelj_minus");
    cplx acc = 0.0;
    for (int k = 0; k < h.grid.size(); ++k) acc += h.grid.weights[k] * h.values[k] / (h.grid.nodes[k] - z0);
    return acc / (2.0 * kPi * kI);
}

// ---------------------------------------------------------------- norms

double trapezoid(const RealGrid& g, const VecR& v)
{
    double s = 0.5 * (v[0] + v[g.n - 1]);
    for (int i = 1; i < g.n - 1; ++i) s += v[i];
    return s * g.h();
}

cplx trapezoid(const RealGrid& g, const VecC& v)
{
    cplx s = 0.5 * (v[0] + v[g.n - 1]);
    for (int i = 1; i < g.n - 1; ++i) s += v[i];
    return s * g.h();
}

NormReport discrete_norms(const Field& f)
{
    const RealGrid& g = f.grid;
    VecR x = g.nodes();
    VecR w2 = (1.0 + x.array().square()).matrix();
    VecC d3 = spectral_derivative(g, f.values, 3);
    auto l2 = [&](const VecC& v) { return std::sqrt(trapezoid(g, VecR(v.array().abs2()))); };
    auto l2w = [&](const VecC& v) { return std::sqrt(trapezoid(g, VecR(v.array().abs2() * w2.array()))); };
    NormReport r;
    r.u_l1 = trapezoid(g, VecR(f.values.array().abs()));
    r.u_l2 = l2(f.values);
    r.u_l21 = l2w(f.values);
    r.ux_l2 = l2(f.d1);
    r.ux_l3 = std::cbrt(trapezoid(g, VecR(f.d1.array().abs().cube())));
    r.uxx_l1 = trapezoid(g, VecR(f.d2.array().abs()));
    r.ux_l1 = trapezoid(g, VecR(f.d1.array().abs()));
    double h3 = std::sqrt(r.u_l2 * r.u_l2 + r.ux_l2 * r.ux_l2 + std::pow(l2(f.d2), 2) + std::pow(l2(d3), 2));
    double h21 = std::sqrt(r.u_l21 * r.u_l21 + std::pow(l2w(f.d1), 2) + std::pow(l2w(f.d2), 2));
    r.h3_h21 = h3 + h21;
    return r;
}

// ---------------------------------------------------------------- CSV

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, const std::string& header, size_t cols)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw IoError(path + ": expected header '" + header + "', found '" + line + "'");
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw IoError(path + ":" + std::to_string(lineno) + ": cannot parse '" + cell + "'");
            }
        }
        if (row.size() != cols)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols) + " columns");
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void write_field_csv(const std::string& path, const Field& f)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "x,re_u,im_u\n";
    for (int i = 0; i < f.grid.n; ++i)
        out << format_double(f.grid.x(i)) << ',' << format_double(f.values[i].real()) << ','
            << format_double(f.values[i].imag()) << '\n';
}

Field read_field_csv(const std::string& path)
{
    auto rows = read_numeric_csv(path, "x,re_u,im_u", 3);
    if (rows.size() < 4) throw IoError(path + ": too few rows");
    RealGrid g{rows.front()[0], rows.back()[0], static_cast<int>(rows.size())};
    if (!is_power_of_two(g.n)) throw IoError(path + ": row count must be a power of two");
    VecC v(g.n);
    for (int i = 0; i < g.n; ++i) {
        if (std::abs(rows[i][0] - g.x(i)) > 1e-9 * std::max(1.0, std::abs(g.x(i))))
            throw IoError(path + ": x column is not uniformly spaced");
        v[i] = cplx(rows[i][1], rows[i][2]);
    }
    return Field::from_values(g, v);
}

void write_samples_csv(const std::string& path, const ComplexSamples& s)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "z,re,im\n";
    for (int i = 0; i < s.grid.size(); ++i)
        out << format_double(s.grid.nodes[i]) << ',' << format_double(s.values[i].real()) << ','
            << format_double(s.values[i].imag()) << '\n';
}

ComplexSamples read_samples_csv(const std::string& path, const SpectralGrid& g)
{
    auto rows = read_numeric_csv(path, "z,re,im", 3);
    if (static_cast<int>(rows.size()) != g.size()) throw IoError(path + ": node count does not match grid");
    ComplexSamples s{g, VecC(g.size())};
    for (int i = 0; i < g.size(); ++i) {
        if (rows[i][0] != g.nodes[i]) throw IoError(path + ": z column does not match grid");
        s.values[i] = cplx(rows[i][1], rows[i][2]);
    }
    return s;
}

} // namespace fl
