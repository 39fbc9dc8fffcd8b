#include "fl/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "fl/parallel.hpp"

namespace fl {

void PhysParams::validate() const
{
    if (!(alpha > 0) || !(beta > 0)) throw ConfigError("alpha and beta must be positive");
    if (sigma != 1 && sigma != -1) throw ConfigError("sigma must be +1 or -1");
}

namespace {

Mat2 potential(cplx ux, cplx uxx)
{
    const double m = std::norm(ux);
    const cplx f = 1.0 / (2.0 * kI);
    Mat2 q;
    q(0, 0) = f * m;
    q(0, 1) = f * ux;
    q(1, 0) = f * (-2.0 * kI * std::conj(uxx) - std::conj(ux) * m);
    q(1, 1) = -f * m;
    return q;
}

int next_pow2(double v)
{
    int p = 1;
    while (p < v) p *= 2;
    return p;
}

} // namespace

std::vector<Mat2> build_potential_matrix(const Field& u)
{
    std::vector<Mat2> q(u.grid.n);
    for (int i = 0; i < u.grid.n; ++i) q[i] = potential(u.d1[i], u.d2[i]);
    return q;
}

// ---------------------------------------------------------------- integrator

JostIntegrator::JostIntegrator(const Field& u, double z_max, const JostOptions& opt) : grid_(u.grid), opt_(opt)
{
    int s = opt.substeps > 0 ? opt.substeps : next_pow2(z_max * grid_.h() / opt.max_zh);
    if (!is_power_of_two(s)) throw ConfigError("Jost substeps must be a power of two");
    if (opt.substeps <= 0 && opt.small_z > 0.0) s = std::max(s, 16);
    s = std::min(s, std::max(opt.max_substeps, opt.substeps));
    factor_ = 2 * s;
    VecC d1 = spectral_refine(grid_, u.d1, factor_);
    VecC d2 = spectral_refine(grid_, u.d2, factor_);
    q_.resize(d1.size());
    for (Eigen::Index i = 0; i < d1.size(); ++i) q_[i] = potential(d1[i], d2[i]);
}

int JostIntegrator::substeps_for(cplx z) const
{
    const double zh = std::abs(z) * grid_.h();
    int s = opt_.substeps > 0 ? opt_.substeps : next_pow2(zh / opt_.max_zh);
    if (opt_.substeps <= 0 && std::abs(z) < opt_.small_z && std::abs(z) > 0.0)
        s = std::max(s, next_pow2(std::sqrt(opt_.small_z / std::abs(z))));
    s = std::min(s, factor_ / 2);
    if (zh / s > opt_.limit_zh)
        throw AccuracyError("Jost step too coarse: |z| h = " + std::to_string(zh / s) +
                            " at |z| = " + std::to_string(std::abs(z)) + "; refine the x grid or lower z_cut");
    return s;
}

Mat2 JostIntegrator::step_exp(int cell, int sub, int s, cplx z, bool inverse) const
{
    const int half = factor_ / (2 * s);
    const int b = cell * factor_ + sub * 2 * half;
    const double hs = grid_.h() / s;
    Mat2 s3z;
    s3z << -kI * z, 0.0, 0.0, kI * z;
    const Mat2& q0 = q_[b];
    const Mat2& q1 = q_[b + 2 * half];
    Mat2 b0 = s3z + (q0 + 4.0 * q_[b + half] + q1) / 6.0;
    Mat2 dq = q1 - q0;
    Mat2 om = hs * b0 + (hs * hs / 12.0) * (dq * b0 - b0 * dq);
    cplx mu2 = -om.determinant();
    cplx mu = std::sqrt(mu2);
    cplx ch, sh;
    if (std::abs(mu) < 1e-3) {
        ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0;
        sh = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0;
    } else {
        ch = std::cosh(mu);
        sh = std::sinh(mu) / mu;
    }
    if (inverse) sh = -sh;
    return ch * Mat2::Identity() + sh * om;
}

JostSolution JostIntegrator::solve(cplx z, bool minus, bool plus) const
{
    const int n = grid_.n;
    const int s = substeps_for(z);
    const cplx ph = std::exp(kI * z * (grid_.h() / s));
    const cplx phi = 1.0 / ph;
    JostSolution sol;
    sol.z = z;
    if (minus) {
        sol.psi_minus.resize(n);
        Mat2 psi = Mat2::Identity();
        sol.psi_minus[0] = psi;
        for (int i = 0; i + 1 < n; ++i) {
            for (int k = 0; k < s; ++k) {
                psi = step_exp(i, k, s, z, false) * psi;
                psi.col(0) *= ph;
                psi.col(1) *= phi;
            }
            sol.psi_minus[i + 1] = psi;
        }
    }
    if (plus) {
        sol.psi_plus.resize(n);
        Mat2 psi = Mat2::Identity();
        sol.psi_plus[n - 1] = psi;
        for (int i = n - 2; i >= 0; --i) {
            for (int k = s - 1; k >= 0; --k) {
                psi = step_exp(i, k, s, z, true) * psi;
                psi.col(0) *= phi;
                psi.col(1) *= ph;
            }
            sol.psi_plus[i] = psi;
        }
    }
    return sol;
}

Vec2 JostIntegrator::minus_col1(cplx z, int stop) const
{
    const int s = substeps_for(z);
    const cplx ph = std::exp(kI * z * (grid_.h() / s));
    Vec2 v(1.0, 0.0);
    for (int i = 0; i < stop; ++i)
        for (int k = 0; k < s; ++k) v = (step_exp(i, k, s, z, false) * v) * ph;
    return v;
}

Vec2 JostIntegrator::plus_col2(cplx z, int stop) const
{
    const int s = substeps_for(z);
    const cplx ph = std::exp(kI * z * (grid_.h() / s));
    Vec2 v(0.0, 1.0);
    for (int i = grid_.n - 2; i >= stop; --i)
        for (int k = s - 1; k >= 0; --k) v = (step_exp(i, k, s, z, true) * v) * ph;
    return v;
}

JostSolution solve_jost(const Field& u, cplx z, const JostOptions& opt)
{
    if (z == cplx(0.0)) throw DomainError("solve_jost: z = 0 is excluded");
    return JostIntegrator(u, std::abs(z), opt).solve(z);
}

JostSolution solve_jost_side(const Field& u, cplx z, JostSide side, const JostOptions& opt)
{
    if (z == cplx(0.0)) throw DomainError("solve_jost: z = 0 is excluded");
    return JostIntegrator(u, std::abs(z), opt).solve(z, side == JostSide::Minus, side == JostSide::Plus);
}

// ---------------------------------------------------------------- coefficients

namespace {

cplx det2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

} // namespace

ScatteringCoefficients scattering_coefficients(const Field& u, const SpectralGrid& grid, const ScatteringOptions& opt)
{
    const RealGrid& xg = u.grid;
    const int nz = grid.size();
    double zmax = grid.nodes.cwiseAbs().maxCoeff();
    JostIntegrator jost(u, zmax, opt.jost);

    const int checks[3] = {xg.nearest(0.0), xg.nearest(0.5 * xg.x_min), xg.nearest(0.5 * xg.x_max)};
    ScatteringCoefficients out;
    out.a = {grid, VecC(nz)};
    out.kb = {grid, VecC(nz)};
    std::vector<double> drift(nz, 0.0), deterr(nz, 0.0);

    parallel_for(nz, [&](int k) {
        const double z = grid.nodes[k];
        JostSolution s = jost.solve(z);
        double de = 0.0;
        for (int i = 0; i < xg.n; ++i) {
            de = std::max(de, std::abs(s.psi_minus[i].determinant() - 1.0));
            de = std::max(de, std::abs(s.psi_plus[i].determinant() - 1.0));
        }
        cplx av[3], bv[3];
        for (int c = 0; c < 3; ++c) {
            const int i = checks[c];
            const Mat2& pm = s.psi_minus[i];
            const Mat2& pp = s.psi_plus[i];
            av[c] = det2(pm.col(0), pp.col(1));
            bv[c] = det2(pp.col(0), pm.col(0)) * std::exp(-2.0 * kI * z * xg.x(i));
        }
        double dr = 0.0;
        for (int c = 1; c < 3; ++c) dr = std::max({dr, std::abs(av[c] - av[0]), std::abs(bv[c] - bv[0])});
        out.a.values[k] = av[0];
        out.kb.values[k] = bv[0];
        drift[k] = dr;
        deterr[k] = de;
    });
    out.wronskian_drift = *std::max_element(drift.begin(), drift.end());
    out.det_error = *std::max_element(deterr.begin(), deterr.end());
    out.a.check_finite("a");
    out.kb.check_finite("kb");
    if (out.wronskian_drift > opt.drift_tol)
        throw AccuracyError("Wronskian drift " + std::to_string(out.wronskian_drift) +
                            " exceeds tolerance; refine the x grid or raise the Jost substeps");
    return out;
}

double norming_constant(const Field& u) { return 0.5 * trapezoid(u.grid, VecR(u.d1.array().abs2())); }

VecR partial_norming(const Field& u, JostSide side)
{
    const RealGrid& g = u.grid;
    VecR c(g.n);
    c[0] = 0.0;
    for (int i = 1; i < g.n; ++i) c[i] = c[i - 1] + 0.25 * g.h() * (std::norm(u.d1[i - 1]) + std::norm(u.d1[i]));
    if (side == JostSide::Plus) c.array() -= c[g.n - 1];
    return c;
}

void reflection_coefficients(const ComplexSamples& a, const ComplexSamples& kb, ComplexSamples& r1,
                             ComplexSamples& r2, double a_floor)
{
    const SpectralGrid& g = a.grid;
    const int n = g.size();
    if (kb.values.size() != n) throw ContractError("reflection_coefficients: a and kb sizes differ");
    r1 = {g, VecC(n)};
    r2 = {g, VecC(n)};
    for (int k = 0; k < n; ++k) {
        if (std::abs(a.values[k]) < a_floor)
            throw ResonanceError("|a| = " + format_double(std::abs(a.values[k])) + " below the floor at z = " +
                                 format_double(g.nodes[k]) + "; initial data are not admissible");
        r2.values[k] = kb.values[k] / a.values[k];
        r1.values[k] = r2.values[k] / (4.0 * g.nodes[k]);
        if (std::abs(r2.values[k] * a.values[k] - kb.values[k]) > 1e-10 * std::max(1.0, std::abs(kb.values[k])))
            throw ContractError("reflection_coefficients: kb not recovered from r2 a");
    }
}

// ---------------------------------------------------------------- admissibility

cplx a_offaxis(const JostIntegrator& jost, cplx z)
{
    if (z.imag() < 0) throw DomainError("a_offaxis: a is analytic in the upper half plane only");
    const int m = jost.grid().nearest(0.0);
    return det2(jost.minus_col1(z, m), jost.plus_col2(z, m));
}

AdmissibilityReport admissibility_check(const Field& u, const ComplexSamples& a, double a_floor,
                                        const JostOptions& opt, bool lattice_scan)
{
    AdmissibilityReport r;
    NormReport nr = discrete_norms(u);
    r.small_norm_value = 2.0 * nr.ux_l2 * nr.ux_l2 + std::pow(nr.ux_l3, 3) + 2.0 * nr.uxx_l1 + nr.ux_l1;
    r.small_norm_holds = r.small_norm_value < 1.0;
    r.min_abs_a_grid = a.values.size() ? a.values.cwiseAbs().minCoeff() : 1.0;
    r.min_abs_a_lattice = r.min_abs_a_grid;
    if (lattice_scan) {
        constexpr int nre = 16, nim = 8;
        std::vector<cplx> pts;
        for (int j = 0; j < nim; ++j)
            for (int i = 0; i < nre; ++i) pts.emplace_back(-8.0 + 16.0 * i / (nre - 1), 0.5 * (j + 1));
        double zmax = 0.0;
        for (auto p : pts) zmax = std::max(zmax, std::abs(p));
        JostIntegrator jost(u, zmax, opt);
        const cplx ec = std::exp(-kI * norming_constant(u));
        ComplexSamples diff{a.grid, (a.values.array() - ec).matrix()};
        std::vector<double> mins(pts.size()), mism(pts.size());
        parallel_for(static_cast<int>(pts.size()), [&](int k) {
            cplx av = a_offaxis(jost, pts[k]);
            mins[k] = std::abs(av);
            mism[k] = std::abs(av - ec - cauchy_offaxis(diff, pts[k]));
        });
        r.min_abs_a_lattice = *std::min_element(mins.begin(), mins.end());
        r.lattice_cauchy_mismatch = *std::max_element(mism.begin(), mism.end());
    }
    r.min_abs_a = std::min(r.min_abs_a_grid, r.min_abs_a_lattice);
    r.admissible = r.min_abs_a > a_floor;
    return r;
}

ForwardResult forward_scatter(const Field& u, const SpectralGrid& grid, const ScatteringOptions& opt)
{
    ForwardResult fr;
    fr.coeffs = scattering_coefficients(u, grid, opt);
    fr.admissibility = admissibility_check(u, fr.coeffs.a, opt.a_floor, opt.jost, opt.lattice_scan);
    ScatteringData& d = fr.data;
    d.grid = grid;
    d.a = fr.coeffs.a;
    d.kb = fr.coeffs.kb;
    d.c = norming_constant(u);
    d.admissible = fr.admissibility.admissible;
    d.min_abs_a = fr.admissibility.min_abs_a;
    if (!d.admissible)
        throw ResonanceError("min |a| = " + format_double(d.min_abs_a) +
                             " below the floor; a has a zero near the contour or in the upper half plane");
    reflection_coefficients(d.a, d.kb, d.r1, d.r2, opt.a_floor);
    return fr;
}

// ---------------------------------------------------------------- persistence

std::vector<std::pair<std::string, std::string>> read_key_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        s.erase(0, s.find_first_not_of(ws));
        s.erase(s.find_last_not_of(ws) + 1);
        return s;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) throw IoError(path + ":" + std::to_string(lineno) + ": expected key=value");
        kv.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return kv;
}

void write_key_values(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (auto& [k, v] : kv) out << k << '=' << v << '\n';
}

void write_scattering(const std::string& path, const ScatteringData& d, const ScatteringMeta& meta)
{
    {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path);
        out << "z,re_a,im_a,re_kb,im_kb,re_r1,im_r1,re_r2,im_r2\n";
        for (int k = 0; k < d.grid.size(); ++k) {
            out << format_double(d.grid.nodes[k]);
            for (const ComplexSamples* s : {&d.a, &d.kb, &d.r1, &d.r2})
                out << ',' << format_double(s->values[k].real()) << ',' << format_double(s->values[k].imag());
            out << '\n';
        }
    }
    const SpectralGridParams& gp = meta.grid_params;
    std::vector<std::pair<std::string, std::string>> kv = {
        {"alpha", format_double(meta.params.alpha)},
        {"beta", format_double(meta.params.beta)},
        {"sigma", std::to_string(meta.params.sigma)},
        {"c", format_double(d.c)},
        {"t", format_double(d.t)},
        {"admissible", d.admissible ? "1" : "0"},
        {"min_abs_a", format_double(d.min_abs_a)},
        {"z_cut", format_double(gp.z_cut)},
        {"z_ref", format_double(gp.z_ref)},
        {"z_min_inner", format_double(gp.z_min_inner)},
        {"n_z_outer", std::to_string(gp.n_z_outer)},
        {"n_z", std::to_string(d.grid.size())},
    };
    for (auto& e : meta.extra) kv.push_back(e);
    write_key_values(path + ".meta", kv);
}

ScatteringData read_scattering(const std::string& path, ScatteringMeta& meta)
{
    auto kv = read_key_values(path + ".meta");
    std::map<std::string, std::string> m;
    for (auto& [k, v] : kv) m[k] = v;
    auto num = [&](const char* key) {
        auto it = m.find(key);
        if (it == m.end()) throw IoError(path + ".meta: missing key " + key);
        try {
            size_t used = 0;
            double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw IoError(path + ".meta: bad value for " + key);
        }
    };
    meta = ScatteringMeta{};
    meta.params.alpha = num("alpha");
    meta.params.beta = num("beta");
    meta.params.sigma = static_cast<int>(num("sigma"));
    meta.grid_params.z_cut = num("z_cut");
    meta.grid_params.z_ref = num("z_ref");
    meta.grid_params.z_min_inner = num("z_min_inner");
    meta.grid_params.n_z_outer = static_cast<int>(num("n_z_outer"));
    static const char* known[] = {"alpha", "beta", "sigma", "c", "t", "admissible", "min_abs_a",
                                  "z_cut", "z_ref", "z_min_inner", "n_z_outer", "n_z"};
    for (auto& e : kv)
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return e.first == k; }) ==
            std::end(known))
            meta.extra.push_back(e);

    ScatteringData d;
    try {
        d.grid = make_spectral_grid(meta.grid_params);
    } catch (const ConfigError& e) {
        throw IoError(path + ".meta: " + e.what());
    }
    d.c = num("c");
    d.t = num("t");
    d.admissible = num("admissible") != 0.0;
    d.min_abs_a = num("min_abs_a");

    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    const std::string header = "z,re_a,im_a,re_kb,im_kb,re_r1,im_r1,re_r2,im_r2";
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw IoError(path + ": expected header '" + header + "'");
    const int n = d.grid.size();
    for (ComplexSamples* s : {&d.a, &d.kb, &d.r1, &d.r2}) *s = {d.grid, VecC(n)};
    int k = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (k >= n) throw IoError(path + ": more rows than grid nodes");
        std::vector<double> row;
        size_t pos = 0;
        while (pos <= line.size()) {
            size_t e = line.find(',', pos);
            if (e == std::string::npos) e = line.size();
            std::string cell = line.substr(pos, e - pos);
            try {
                size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw IoError(path + ":" + std::to_string(k + 2) + ": cannot parse '" + cell + "'");
            }
            pos = e + 1;
        }
        if (row.size() != 9) throw IoError(path + ":" + std::to_string(k + 2) + ": expected 9 columns");
        if (row[0] != d.grid.nodes[k]) throw IoError(path + ":" + std::to_string(k + 2) + ": z does not match the grid in the sidecar");
        d.a.values[k] = {row[1], row[2]};
        d.kb.values[k] = {row[3], row[4]};
        d.r1.values[k] = {row[5], row[6]};
        d.r2.values[k] = {row[7], row[8]};
        ++k;
    }
    if (k != n) throw IoError(path + ": expected " + std::to_string(n) + " rows, found " + std::to_string(k));
    return d;
}

} // namespace fl
