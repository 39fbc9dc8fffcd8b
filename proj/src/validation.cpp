#include "fl/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace fl {

// ---------------------------------------------------------------- report

namespace {

void add_check(ValidationReport& r, const std::string& name, double value, double threshold, bool at_most)
{
    Check c;
    c.name = name;
    c.value = value;
    c.threshold = threshold;
    c.at_most = at_most;
    c.pass = at_most ? value <= threshold : value >= threshold; // false for NaN
    r.checks.push_back(c);
}

double safe_ratio(double num, double den)
{
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

// |ratio / 2 - 1| for errors at z and 2z; zero when both are at roundoff level.
double halving_deviation(double e_near, double e_far)
{
    if (e_near < 1e-11 && e_far < 1e-11) return 0.0;
    return std::abs(safe_ratio(e_near, e_far) / 2.0 - 1.0);
}

} // namespace

void ValidationReport::at_most(const std::string& name, double value, double threshold)
{
    add_check(*this, name, value, threshold, true);
}

void ValidationReport::at_least(const std::string& name, double value, double threshold)
{
    add_check(*this, name, value, threshold, false);
}

void ValidationReport::note(const std::string& key, const std::string& value) { info.emplace_back(key, value); }
void ValidationReport::note(const std::string& key, double value) { info.emplace_back(key, format_double(value)); }

void ValidationReport::merge(const ValidationReport& other, const std::string& prefix)
{
    for (Check c : other.checks) {
        c.name = prefix + c.name;
        checks.push_back(c);
    }
    for (auto [k, v] : other.info) info.emplace_back(prefix + k, v);
}

bool ValidationReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool ValidationReport::has(const std::string& name) const
{
    return std::any_of(checks.begin(), checks.end(), [&](const Check& c) { return c.name == name; });
}

const Check& ValidationReport::at(const std::string& name) const
{
    for (const Check& c : checks)
        if (c.name == name) return c;
    throw ContractError("no check named " + name);
}

std::vector<std::string> ValidationReport::failures() const
{
    std::vector<std::string> out;
    for (const Check& c : checks)
        if (!c.pass) out.push_back(c.name);
    return out;
}

std::string ValidationReport::key_values() const
{
    std::ostringstream os;
    for (const Check& c : checks) {
        os << c.name << ".value=" << format_double(c.value) << '\n';
        os << c.name << ".threshold=" << (c.at_most ? "<=" : ">=") << format_double(c.threshold) << '\n';
        os << c.name << ".pass=" << (c.pass ? "true" : "false") << '\n';
    }
    for (const auto& [k, v] : info) os << "info." << k << '=' << v << '\n';
    os << "overall.pass=" << (pass() ? "true" : "false") << '\n';
    return os.str();
}

std::string ValidationReport::csv() const
{
    std::ostringstream os;
    os << "check,value,threshold,pass\n";
    for (const Check& c : checks)
        os << c.name << ',' << format_double(c.value) << ',' << format_double(c.threshold) << ','
           << (c.pass ? "true" : "false") << '\n';
    return os.str();
}

// ---------------------------------------------------------------- helpers

double l2_norm(const RealGrid& g, const VecC& v) { return std::sqrt(trapezoid(g, VecR(v.array().abs2()))); }

double l2_norm(const ComplexSamples& s)
{
    return std::sqrt((s.values.array().abs2() * s.grid.weights.array()).sum());
}

// ---------------------------------------------------------------- identities

ValidationReport identity_suite(const ScatteringData& data, const IdentityOptions& opt)
{
    const SpectralGrid& g = data.grid;
    const int n = g.size();
    ValidationReport r;
    double unit = 0.0, pos = 1.0, ratio = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = g.nodes[k];
        const double rho = 1.0 + (std::conj(data.r1.values[k]) * data.r2.values[k]).real();
        unit = std::max(unit, std::abs(rho * std::norm(data.a.values[k]) - 1.0));
        if (z < 0) pos = std::min(pos, rho);
        ratio = std::max(ratio, std::abs(data.r2.values[k] - 4.0 * z * data.r1.values[k]));
    }
    r.at_most("unitarity", unit, opt.unitarity_tol);
    r.at_least("positivity", pos, opt.positivity_floor);
    r.at_most("r2_4z_r1", ratio, opt.ratio_tol);

    // Decay of a toward e^{-ic} between z_cut / 2 and z_cut.
    const cplx a_inf = std::exp(cplx(0.0, -data.c));
    auto err_at = [&](double z) {
        int k = 0;
        for (int j = 0; j < n; ++j)
            if (std::abs(g.nodes[j] - z) < std::abs(g.nodes[k] - z)) k = j;
        return std::abs(data.a.values[k] - a_inf);
    };
    const double zc = g.nodes[n - 1];
    double dev = 0.0;
    for (double s : {-1.0, 1.0}) {
        double e_half = err_at(0.5 * s * zc), e_full = err_at(s * zc);
        dev = std::max(dev, halving_deviation(e_half, e_full));
        r.note(std::string("a_decay.err_") + (s < 0 ? "minus" : "plus") + "_half", e_half);
        r.note(std::string("a_decay.err_") + (s < 0 ? "minus" : "plus") + "_cut", e_full);
    }
    r.at_most("a_decay_halving", dev, opt.halving_tol);

    // sup |k r2| against the discrete H^1 cap L^{2,1} norm, |k| = sqrt|z|.
    double sup = 0.0, l2 = 0.0, zl2 = 0.0, d2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = g.nodes[k];
        const cplx v = data.r2.values[k];
        sup = std::max(sup, std::sqrt(std::abs(z)) * std::abs(v));
        l2 += g.weights[k] * std::norm(v);
        zl2 += g.weights[k] * z * z * std::norm(v);
        if (k + 1 < n) {
            const double dz = g.nodes[k + 1] - z;
            d2 += std::norm((data.r2.values[k + 1] - v) / dz) * dz;
        }
    }
    const double norm = std::sqrt(2.0 * l2 + zl2 + d2);
    r.note("k_r2.sup", sup);
    r.note("k_r2.norm", norm);
    r.at_most("k_r2_bound", safe_ratio(sup, norm), 1.0);
    return r;
}

ValidationReport identity_suite(const ForwardResult& fr, const IdentityOptions& opt)
{
    ValidationReport r = identity_suite(fr.data, opt);
    r.at_most("wronskian_drift", fr.coeffs.wronskian_drift, opt.drift_tol);
    r.at_most("det_error", fr.coeffs.det_error, opt.det_tol);
    r.note("small_norm_value", fr.admissibility.small_norm_value);
    r.note("min_abs_a", fr.admissibility.min_abs_a);
    return r;
}

// ---------------------------------------------------------------- Jost limits

ValidationReport jost_asymptotics_suite(const Field& u, const JostLimitOptions& opt)
{
    const RealGrid& xg = u.grid;
    double z_small = opt.z_small;
    if (z_small <= 0.0) {
        SpectralGrid g = make_spectral_grid(SpectralGridParams{});
        z_small = g.nodes.cwiseAbs().minCoeff();
    }
    JostIntegrator jost(u, 2.0 * opt.z_cut);
    const VecR cm = partial_norming(u, JostSide::Minus);
    const VecR cp = partial_norming(u, JostSide::Plus);
    ValidationReport r;

    // z -> 0: both Jost matrices tend to [[1, u/2i], [-conj(u_x), 1 - conj(u_x) u / 2i]].
    auto zero_err = [&](double z) {
        JostSolution s = jost.solve(z);
        double e = 0.0;
        for (int i = 0; i < xg.n; ++i) {
            const cplx v = u.values[i], vb = std::conj(u.d1[i]);
            Mat2 L;
            L << 1.0, v / (2.0 * kI), -vb, 1.0 - vb * v / (2.0 * kI);
            e = std::max({e, (s.psi_minus[i] - L).cwiseAbs().maxCoeff(), (s.psi_plus[i] - L).cwiseAbs().maxCoeff()});
        }
        return e;
    };
    double e0 = std::max(zero_err(z_small), zero_err(-z_small));
    r.note("zero_limit.z", z_small);
    r.note("zero_limit.err_at_2z", std::max(zero_err(2.0 * z_small), zero_err(-2.0 * z_small)));
    r.at_most("zero_limit", e0, opt.zero_tol);

    // Large z: e^{-i c_pm sigma3}, z Psi^-_21 -> (1/2i) d/dx (conj(u_x) e^{-i c_-}), and a -> e^{-ic}.
    VecC target(xg.n);
    for (int i = 0; i < xg.n; ++i) {
        const cplx ub = std::conj(u.d1[i]), ubb = std::conj(u.d2[i]);
        const double dc = 0.5 * std::norm(u.d1[i]);
        target[i] = (ubb - kI * dc * ub) * std::exp(cplx(0.0, -cm[i])) / (2.0 * kI);
    }
    const double c = cm[xg.n - 1];
    const int i0 = xg.nearest(0.0);
    struct Far {
        double inf = 0.0, j2 = 0.0, a = 0.0;
    };
    auto far = [&](double z) {
        JostSolution s = jost.solve(z);
        Far f;
        for (int i = 0; i < xg.n; ++i) {
            Mat2 Em = Mat2::Zero(), Ep = Mat2::Zero();
            Em(0, 0) = std::exp(cplx(0.0, -cm[i]));
            Em(1, 1) = std::exp(cplx(0.0, cm[i]));
            Ep(0, 0) = std::exp(cplx(0.0, -cp[i]));
            Ep(1, 1) = std::exp(cplx(0.0, cp[i]));
            f.inf = std::max({f.inf, (s.psi_minus[i] - Em).cwiseAbs().maxCoeff(),
                              (s.psi_plus[i] - Ep).cwiseAbs().maxCoeff()});
            f.j2 = std::max(f.j2, std::abs(z * s.psi_minus[i](1, 0) - target[i]));
        }
        const Mat2& pm = s.psi_minus[i0];
        const Mat2& pp = s.psi_plus[i0];
        const cplx a = pm(0, 0) * pp(1, 1) - pm(1, 0) * pp(0, 1);
        f.a = std::abs(a - std::exp(cplx(0.0, -c)));
        return f;
    };
    double inf_scaled = 0.0, j2_scaled = 0.0, inf_dev = 0.0, a_dev = 0.0;
    for (double s : {-1.0, 1.0}) {
        Far f1 = far(s * opt.z_cut), f2 = far(2.0 * s * opt.z_cut);
        const std::string side = s < 0 ? "minus" : "plus";
        inf_scaled = std::max(inf_scaled, f1.inf * opt.z_cut);
        j2_scaled = std::max(j2_scaled, f1.j2 * std::sqrt(opt.z_cut));
        inf_dev = std::max(inf_dev, halving_deviation(f1.inf, f2.inf));
        a_dev = std::max(a_dev, halving_deviation(f1.a, f2.a));
        r.note("a_decay.err_" + side + "_cut", f1.a);
        r.note("a_decay.err_" + side + "_2cut", f2.a);
        r.note("j2.err_" + side + "_cut", f1.j2);
    }
    r.at_most("inf_limit", inf_scaled, opt.c_inf);
    r.at_most("inf_limit_halving", inf_dev, opt.halving_tol);
    r.at_most("j2_limit", j2_scaled, opt.c_j2);
    r.at_most("a_decay_halving", a_dev, opt.halving_tol);

    // The two candidate large-z values of a, reported side by side.
    VecC integrand(xg.n);
    for (int i = 0; i < xg.n; ++i) integrand[i] = std::norm(u.d1[i]) * std::exp(cplx(0.0, -cm[i]));
    const cplx a_hat = 1.0 + trapezoid(xg, integrand) / (2.0 * kI);
    const cplx e_ic = std::exp(cplx(0.0, -c));
    r.note("a_limit.exp_minus_ic", format_double(e_ic.real()) + "," + format_double(e_ic.imag()));
    r.note("a_limit.a_hat", format_double(a_hat.real()) + "," + format_double(a_hat.imag()));
    return r;
}

// ---------------------------------------------------------------- projections

ValidationReport plemelj_suite(const SpectralGrid& g, const PlemeljOptions& opt)
{
    const int n = g.size();
    VecC f(n);
    for (int k = 0; k < n; ++k) f[k] = 1.0 / (1.0 + g.nodes[k] * g.nodes[k]);
    ComplexSamples fs{g, f};
    ComplexSamples pp = plemelj_plus(fs), pm = plemelj_minus(fs);
    ValidationReport r;
    r.at_most("jump_identity", (pp.values - pm.values - f).cwiseAbs().maxCoeff(), opt.tol);

    // (P+ + P-) f = i H f; the oracle is the Hilbert transform of f restricted to |s| < L.
    const double L = g.z_cut;
    double herr = 0.0, hfull = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = g.nodes[k];
        if (std::abs(z) >= opt.interior * L) continue;
        const double trunc = (std::log((L + z) / (L - z)) + 2.0 * z * std::atan(L)) / (kPi * (1.0 + z * z));
        const cplx s = pp.values[k] + pm.values[k];
        herr = std::max(herr, std::abs(s - kI * trunc));
        hfull = std::max(hfull, std::abs(s - kI * z / (1.0 + z * z)));
    }
    r.at_most("hilbert", herr, opt.tol);
    r.note("hilbert.full_line_err", hfull);
    // Off-axis Cauchy transform at i/2 for the same f is 1/3; truncation adds O(L^-3).
    r.note("cauchy_offaxis_err", std::abs(cauchy_offaxis(fs, cplx(0.0, 0.5)) - 1.0 / 3.0));

    double merr = 0.0, medge = 0.0;
    for (double x : opt.xs) {
        for (Side s : {Side::PlusAtPlusX, Side::MinusAtPlusX, Side::PlusAtMinusX, Side::MinusAtMinusX}) {
            ComplexSamples a = projected_modulation(fs, x, s), b = direct_modulation(fs, x, s);
            for (int k = 0; k < n; ++k) {
                const double d = std::abs(a.values[k] - b.values[k]);
                if (std::abs(g.nodes[k]) < opt.interior * L) merr = std::max(merr, d);
                else medge = std::max(medge, d);
            }
        }
    }
    r.at_most("modulation_paths", merr, opt.tol);
    r.note("modulation_paths.edge_err", medge);
    return r;
}

// ---------------------------------------------------------------- evolution

ValidationReport evolution_suite(const ScatteringData& data, const PhysParams& p, const EvolutionCheckOptions& opt)
{
    const SpectralGrid& g = data.grid;
    ValidationReport r;
    double mod = 0.0, ratio = 0.0, l21 = 0.0, slope = 0.0;
    const double n1 = weighted_l2(data.r1, 1), n2 = weighted_l2(data.r2, 1);
    for (double t : opt.times) {
        EvolvedData e = evolve(data, t, p);
        mod = std::max({mod, (e.r1_t.values.cwiseAbs() - data.r1.values.cwiseAbs()).cwiseAbs().maxCoeff(),
                        (e.r2_t.values.cwiseAbs() - data.r2.values.cwiseAbs()).cwiseAbs().maxCoeff()});
        for (int k = 0; k < g.size(); ++k)
            ratio = std::max(ratio, std::abs(e.r2_t.values[k] - 4.0 * g.nodes[k] * e.r1_t.values[k]));
        l21 = std::max({l21, safe_ratio(std::abs(weighted_l2(e.r1_t, 1) - n1), n1),
                        safe_ratio(std::abs(weighted_l2(e.r2_t, 1) - n2), n2)});
        SlopeCheck sc = slope_check(data, t, p);
        slope = std::max({slope, safe_ratio(sc.grad_r1_t, sc.bound_r1), safe_ratio(sc.grad_r2_t, sc.bound_r2)});
    }
    r.at_most("modulus", mod, opt.modulus_tol);
    r.at_most("ratio_4z", ratio, 1e-12);
    r.at_most("l21_norm", l21, opt.norm_tol);
    r.at_most("slope_bound", slope, 1.0);

    double group = 0.0;
    for (size_t i = 0; i < opt.times.size(); ++i) {
        const double t1 = opt.times[i], t2 = opt.times[(i + 1) % opt.times.size()];
        EvolvedData two = evolve(evolve(data, t1, p).as_data(), t2, p);
        EvolvedData one = evolve(data, t1 + t2, p);
        group = std::max({group, (two.r1_t.values - one.r1_t.values).cwiseAbs().maxCoeff(),
                          (two.r2_t.values - one.r2_t.values).cwiseAbs().maxCoeff()});
    }
    r.at_most("group", group, opt.group_tol);

    EvolvedData e0 = evolve(data, 0.0, p);
    r.at_most("t_zero", std::max((e0.r1_t.values - data.r1.values).cwiseAbs().maxCoeff(),
                                 (e0.r2_t.values - data.r2.values).cwiseAbs().maxCoeff()),
              0.0);
    double stat = 0.0;
    for (double t : opt.times) stat = std::max(stat, std::abs(evolution_phase(0.5 * p.beta, t, p) - 1.0));
    r.at_most("stationary_point", stat, 1e-15);
    return r;
}

// ---------------------------------------------------------------- RH solver

namespace {

double edge_error(const RHSolution& sol)
{
    const int n = sol.m_minus_col1[0].grid.size();
    double e = 0.0;
    for (int k : {0, n - 1}) {
        e = std::max(e, std::abs(sol.m_minus_col1[0].values[k] - 1.0));
        e = std::max(e, std::abs(sol.m_minus_col1[1].values[k]));
        e = std::max(e, std::abs(sol.m_plus_col2[0].values[k]));
        e = std::max(e, std::abs(sol.m_plus_col2[1].values[k] - 1.0));
    }
    return e;
}

} // namespace

ValidationReport rh_solution_checks(const RHSolution& sol, const JumpData& jump, const RHCheckOptions& opt)
{
    ValidationReport r;
    r.at_most("jump_residual", jump_residual(sol, jump), opt.residual_tol);
    r.at_most("edge", edge_error(sol), opt.edge_tol);
    return r;
}

ValidationReport rh_suite(const ScatteringData& data, const RHCheckOptions& opt)
{
    const SpectralGrid& g = data.grid;
    const int n = g.size();
    ValidationReport r;
    DeltaData delta;
    try {
        delta = delta_build(data.r1, data.r2);
    } catch (const DomainError& e) {
        r.note("delta.error", e.what());
        r.at_most("delta_jump", std::numeric_limits<double>::infinity(), opt.delta_tol);
        return r;
    }
    double dj = 0.0, du = 0.0, de = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx rho = 1.0 + std::conj(data.r1.values[k]) * data.r2.values[k];
        dj = std::max(dj, std::abs(delta.delta_plus.values[k] / delta.delta_minus.values[k] - rho));
        du = std::max(du, std::abs(std::abs(delta.delta_plus.values[k] * delta.delta_minus.values[k]) - 1.0));
    }
    for (int k : {0, n - 1})
        de = std::max({de, std::abs(delta.delta_plus.values[k] - 1.0), std::abs(delta.delta_minus.values[k] - 1.0)});
    r.at_most("delta_jump", dj, opt.delta_tol);
    r.at_most("delta_unimodular", du, opt.delta_tol);
    r.at_most("delta_edge", de, opt.delta_edge_tol);

    RHBatch plain(data.r1, data.r2, opt.rh);
    RHBatch cond(data.r1, data.r2, delta, opt.rh);
    double res = 0.0, edge = 0.0;
    for (double x : opt.xs) {
        const bool c = x < opt.x_switch;
        RHSolution s = c ? cond.solve(x, true) : plain.solve(x, false);
        ValidationReport one = rh_solution_checks(s, JumpData{data.r1, data.r2, x}, opt);
        res = std::max(res, one.at("jump_residual").value);
        edge = std::max(edge, one.at("edge").value);
    }
    r.at_most("jump_residual", res, opt.residual_tol);
    r.at_most("edge", edge, opt.edge_tol);

    RHSolution sp = plain.solve(opt.agreement_x, false), sc = cond.solve(opt.agreement_x, true);
    double agree = 0.0, agree1 = 0.0;
    for (int c = 0; c < 2; ++c) {
        agree = std::max(agree, (sp.m_plus_col2[c].values - sc.m_plus_col2[c].values).cwiseAbs().maxCoeff());
        agree1 = std::max(agree1, (sp.m_minus_col1[c].values - sc.m_minus_col1[c].values).cwiseAbs().maxCoeff());
    }
    r.at_most("conditioned_agreement", agree, opt.agreement_tol);
    r.note("conditioned_agreement.m_minus_col1", agree1);

    const double kp = plain.condition_number(opt.condition_x, false);
    const double kc = cond.condition_number(opt.condition_x, true);
    r.note("condition.plain", kp);
    r.note("condition.conditioned", kc);
    r.at_most("condition_ratio", kc / kp, 1.0);
    r.note("active_nodes", static_cast<double>(plain.active().size()));
    return r;
}

// ---------------------------------------------------------------- PDE residual

PdeResidual pde_residual_parts(const std::vector<Snapshot>& snaps, const PhysParams& p, bool nonlinear)
{
    if (snaps.size() < 3) throw ContractError("pde_residual: need at least three snapshots");
    const RealGrid& grid = snaps[0].u.grid;
    const double dt = snaps[1].t - snaps[0].t;
    if (!(dt > 0)) throw ContractError("pde_residual: snapshot times must increase");
    for (size_t i = 0; i < snaps.size(); ++i) {
        if (!(snaps[i].u.grid == grid)) throw ContractError("pde_residual: snapshots live on different grids");
        if (snaps[i].u.values.size() != grid.n) throw ContractError("pde_residual: snapshot size mismatch");
        if (i > 0 && std::abs((snaps[i].t - snaps[i - 1].t) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw ContractError("pde_residual: snapshots are not equally spaced");
    }
    const size_t m = (snaps.size() - 1) / 2;
    const VecC& u = snaps[m].u.values;
    VecC uxt = (fd_derivative(grid, snaps[m + 1].u.values, 1) - fd_derivative(grid, snaps[m - 1].u.values, 1)) / (2.0 * dt);
    VecC ux = fd_derivative(grid, u, 1), uxx = fd_derivative(grid, u, 2);
    const double a = p.alpha, b = p.beta;
    VecC lin = uxt + a * b * b * u - 2.0 * kI * a * b * ux - a * uxx;
    VecC nl = (double(p.sigma) * kI * a * b * b) * (u.array().abs2() * ux.array()).matrix();
    VecC R = nonlinear ? VecC(lin + nl) : lin;
    PdeResidual out;
    out.absolute = l2_norm(grid, R);
    out.uxt_norm = l2_norm(grid, uxt);
    out.nonlinear_norm = l2_norm(grid, nl);
    out.relative = out.uxt_norm > 0 ? out.absolute / out.uxt_norm : out.absolute;
    return out;
}

double pde_residual(const std::vector<Snapshot>& snaps, const PhysParams& p)
{
    return pde_residual_parts(snaps, p).relative;
}

ValidationReport plane_wave_check(const PhysParams& p, const RealGrid& grid, const PlaneWaveOptions& opt)
{
    const double omega = -p.alpha * std::pow(opt.xi + p.beta, 2) / opt.xi;
    const VecR x = grid.nodes();
    auto residual = [&](double dt) {
        std::vector<Snapshot> s;
        for (int j = -1; j <= 1; ++j) {
            const double t = j * dt;
            VecC v(grid.n);
            for (int i = 0; i < grid.n; ++i) v[i] = opt.eps * std::exp(cplx(0.0, opt.xi * x[i] - omega * t));
            s.push_back({t, Field::from_values(grid, v)});
        }
        return pde_residual_parts(s, p, false).relative;
    };
    const double r1 = residual(opt.dt), r2 = residual(0.5 * opt.dt);
    ValidationReport r;
    r.note("plane_wave.omega", omega);
    r.note("plane_wave.residual_dt", r1);
    r.note("plane_wave.residual_half_dt", r2);
    r.at_most("plane_wave_scaled", r1 / (opt.dt * opt.dt), omega * omega);
    r.at_most("plane_wave_order", std::abs(std::log2(r1 / r2) - 2.0), opt.order_tol);
    return r;
}

ValidationReport pde_check(const std::vector<Snapshot>& snaps, const PhysParams& p, const PdeCheckOptions& opt)
{
    ValidationReport r;
    PdeResidual res = pde_residual_parts(snaps, p);
    PhysParams q = p;
    q.sigma = -p.sigma;
    PdeResidual flipped = pde_residual_parts(snaps, q);
    r.at_most("residual", res.relative, opt.tol);
    // The cubic term must be resolved: a wrong sigma leaves about twice its size behind.
    r.at_most("nonlinear_resolution", safe_ratio(res.absolute, res.nonlinear_norm), opt.nonlinear_tol);
    r.note("residual.absolute", res.absolute);
    r.note("residual.uxt_norm", res.uxt_norm);
    r.note("residual.nonlinear_norm", res.nonlinear_norm);
    r.note("residual.opposite_sigma", flipped.relative);
    return r;
}

ValidationReport pde_check(const ScatteringData& data, const PhysParams& p, const RealGrid& grid,
                           const PdeCheckOptions& opt)
{
    ReconstructionOptions ro = opt.recon;
    ro.filter_t = opt.t + opt.dt;
    ro.untangle.strict = false;
    std::vector<Snapshot> snaps;
    for (double t : {opt.t - opt.dt, opt.t, opt.t + opt.dt})
        snaps.push_back({t, reconstruct_solution(data, t, p, grid, ro).u});
    ValidationReport r = pde_check(snaps, p, opt);
    r.note("snapshot_t", opt.t);
    r.note("snapshot_dt", opt.dt);
    return r;
}

// ---------------------------------------------------------------- round trip

RoundtripResult roundtrip_run(const Field& u0, const PhysParams& p, const RoundtripOptions& opt)
{
    SpectralGrid g = make_spectral_grid(opt.zgrid);
    ForwardResult fr = forward_scatter(u0, g, opt.scattering);
    ReconstructionOptions ro = opt.recon;
    ro.untangle.strict = false;
    ReconstructionResult rr = reconstruct_solution(fr.data, 0.0, p, u0.grid, ro);

    RoundtripResult out;
    out.u_rec = rr.u;
    const VecC diff = rr.u.values - u0.values;
    const double sup = diff.cwiseAbs().maxCoeff();
    const double ref = u0.values.size() ? u0.values.cwiseAbs().maxCoeff() : 0.0;
    out.rel_sup = ref > 0 ? sup / ref : sup;
    const double c0 = norming_constant(u0);
    ValidationReport& r = out.report;
    r.at_most("rel_sup_error", out.rel_sup, opt.tol);
    r.at_most("c_mismatch", std::abs(rr.untangle.c_direct - c0), opt.c_tol);
    r.at_most("closure", rr.untangle.closure, opt.closure_tol);
    r.note("sup_error", sup);
    r.note("l2_error", l2_norm(u0.grid, diff));
    r.note("c_direct", c0);
    r.note("c_recovered", rr.untangle.c_direct);
    r.note("modulus_mismatch", rr.untangle.modulus_mismatch);
    r.note("max_rh_residual", rr.max_residual);
    r.note("max_condition", rr.max_condition);
    r.note("n_z", static_cast<double>(g.size()));
    return out;
}

ValidationReport roundtrip(const Field& u0, const PhysParams& p, const RoundtripOptions& opt)
{
    return roundtrip_run(u0, p, opt).report;
}

ValidationReport roundtrip_convergence(const Field& u0, const PhysParams& p, const RoundtripOptions& base,
                                       double min_factor)
{
    RoundtripOptions fine = base;
    fine.zgrid.n_z_outer *= 2;
    fine.zgrid.z_cut *= 2.0;
    const double e1 = roundtrip_run(u0, p, base).rel_sup;
    const double e2 = roundtrip_run(u0, p, fine).rel_sup;
    ValidationReport r;
    r.note("error_base", e1);
    r.note("error_doubled", e2);
    r.note("z_cut_base", base.zgrid.z_cut);
    r.at_least("shrink_factor", e1 == 0.0 ? std::numeric_limits<double>::infinity() : safe_ratio(e1, e2),
               min_factor);
    return r;
}

// ---------------------------------------------------------------- stability

VecC random_direction(const RealGrid& grid, std::uint64_t seed, int index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> centre(-2.0, 2.0), width(0.6, 1.5);
    std::normal_distribution<double> amp;
    const VecR x = grid.nodes();
    VecC d = VecC::Zero(grid.n);
    for (int b = 0; b < 3; ++b) {
        const double x0 = centre(rng), w = width(rng);
        const cplx c(amp(rng), amp(rng));
        for (int i = 0; i < grid.n; ++i) d[i] += c * std::exp(-std::pow((x[i] - x0) / w, 2));
    }
    return d / l2_norm(grid, d);
}

ValidationReport lipschitz_probe(const Field& u0, const PhysParams& p, const LipschitzOptions& opt)
{
    const RealGrid& xg = u0.grid;
    SpectralGrid g = make_spectral_grid(opt.zgrid);
    ReconstructionOptions ro = opt.recon;
    ro.untangle.strict = false;
    ro.filter_t = opt.t;

    ForwardResult base = forward_scatter(u0, g, opt.scattering);
    const Field ut = reconstruct_solution(base.data, opt.t, p, xg, ro).u;
    const double scale = std::max(l2_norm(xg, u0.values), 1e-300) * opt.eps;

    ValidationReport r;
    r.note("seed", std::to_string(opt.seed));
    r.note("eps", opt.eps);
    struct Ratios {
        double r1 = 0, r2 = 0, u = 0;
    };
    auto ratios = [&](const VecC& du) {
        Field up = Field::from_values(xg, u0.values + du);
        ForwardResult fr = forward_scatter(up, g, opt.scattering);
        const double dn = l2_norm(xg, du);
        Ratios q;
        q.r1 = l2_norm(ComplexSamples{g, fr.data.r1.values - base.data.r1.values}) / dn;
        q.r2 = l2_norm(ComplexSamples{g, fr.data.r2.values - base.data.r2.values}) / dn;
        const Field vt = reconstruct_solution(fr.data, opt.t, p, xg, ro).u;
        q.u = l2_norm(xg, vt.values - ut.values) / dn;
        return q;
    };

    std::vector<Ratios> got;
    int skipped = 0, first = -1;
    for (int j = 0; j < opt.n_dirs; ++j) {
        const VecC du = scale * random_direction(xg, opt.seed, j);
        const std::string key = "dir" + std::to_string(j);
        if (opt.eps == 0.0 || l2_norm(xg, du) == 0.0) {
            r.note(key, "skipped: zero perturbation");
            ++skipped;
            continue;
        }
        try {
            Ratios q = ratios(du);
            got.push_back(q);
            if (first < 0) first = j;
            r.note(key, format_double(q.r1) + "," + format_double(q.r2) + "," + format_double(q.u));
        } catch (const ResonanceError& e) {
            r.note(key, std::string("skipped: ") + e.what());
            ++skipped;
        }
    }
    r.note("skipped", static_cast<double>(skipped));
    if (got.size() >= 2) {
        auto spread = [&](double Ratios::*f) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const Ratios& q : got) {
                lo = std::min(lo, q.*f);
                hi = std::max(hi, q.*f);
            }
            return safe_ratio(hi, lo);
        };
        r.at_most("spread_r1", spread(&Ratios::r1), opt.spread_tol);
        r.at_most("spread_r2", spread(&Ratios::r2), opt.spread_tol);
        r.at_most("spread_u", spread(&Ratios::u), opt.spread_tol);
    }
    if (opt.eps_check && !got.empty()) {
        Ratios half = ratios(0.5 * scale * random_direction(xg, opt.seed, first));
        const Ratios& full = got.front();
        double s = 0.0;
        for (auto [a, b] : {std::pair{full.r1, half.r1}, std::pair{full.r2, half.r2}, std::pair{full.u, half.u}})
            s = std::max(s, std::max(safe_ratio(a, b), safe_ratio(b, a)));
        r.at_most("eps_stability", s, opt.eps_spread_tol);
    }
    return r;
}

} // namespace fl
