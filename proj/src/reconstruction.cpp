#include "fl/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace fl {

namespace {

void check_provenance(const RHSolution& sol, double x, double x_switch, const DeltaData* delta)
{
    if (sol.x != x) throw ContractError("reconstruction: solution was computed at a different x");
    bool want = x < x_switch;
    if (sol.conditioned != want)
        throw ContractError(std::string("reconstruction: ") + (sol.conditioned ? "conditioned" : "plain") +
                            " solution used at x = " + format_double(x) + " with x_switch = " + format_double(x_switch));
    if (sol.conditioned && !delta) throw ContractError("reconstruction: conditioned solution needs delta data");
}

} // namespace

cplx reconstruct_u_hat(const RHSolution& sol, const ComplexSamples& r1, double x, double x_switch,
                       const DeltaData* delta)
{
    check_provenance(sol, x, x_switch, delta);
    const SpectralGrid& g = r1.grid;
    const VecC& m = sol.unknown_x[0].values;
    cplx acc = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        const double s = g.nodes[k];
        cplx c1 = std::conj(r1.values[k]);
        if (c1 == 0.0) continue;
        if (sol.conditioned) c1 *= delta->delta_plus.values[k] * delta->delta_minus.values[k];
        acc += g.weights[k] / s * c1 * std::exp(cplx(0.0, -2.0 * s * x)) * m[k];
    }
    acc /= kPi;
    if (sol.conditioned) acc /= delta->delta_zero;
    return acc;
}

cplx reconstruct_g(const RHSolution& sol, const ComplexSamples& r2, double x, double x_switch, const DeltaData* delta)
{
    check_provenance(sol, x, x_switch, delta);
    const SpectralGrid& g = r2.grid;
    const VecC& m = sol.unknown_y[1].values;
    cplx acc = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        cplx r = r2.values[k];
        if (r == 0.0) continue;
        if (sol.conditioned) r *= std::conj(delta->delta_plus.values[k] * delta->delta_minus.values[k]);
        acc += g.weights[k] * r * std::exp(cplx(0.0, 2.0 * g.nodes[k] * x)) * m[k];
    }
    return -acc / kPi;
}

VecC lagrange_interpolate(const VecR& xs, const VecC& ys, const VecR& at)
{
    const int n = static_cast<int>(xs.size());
    VecC out(at.size());
    const int w = std::min(6, n);
    for (Eigen::Index q = 0; q < at.size(); ++q) {
        const double x = at[q];
        int i = static_cast<int>(std::upper_bound(xs.data(), xs.data() + n, x) - xs.data()) - 1;
        int lo = std::clamp(i - (w / 2 - 1), 0, n - w);
        cplx acc = 0.0;
        for (int a = lo; a < lo + w; ++a) {
            if (x == xs[a]) {
                acc = ys[a];
                break;
            }
            double l = 1.0;
            for (int b = lo; b < lo + w; ++b)
                if (b != a) l *= (x - xs[b]) / (xs[a] - xs[b]);
            acc += l * ys[a];
        }
        out[q] = acc;
    }
    return out;
}

namespace {

struct Integrated {
    VecC w;
    VecR phi;
};

Integrated integrate_phases(const ReconstructionRaw& raw, const RealGrid& grid, double c)
{
    const int n = grid.n;
    const double h = grid.h();
    VecR at(2 * n - 1);
    for (int i = 0; i < 2 * n - 1; ++i) at[i] = grid.x_min + 0.5 * h * i;
    VecC gq = lagrange_interpolate(raw.x_nodes, raw.g, at);

    // Anchored at x_max with phi = 0, or at x_min with phi = -c when c is known.
    const bool left = std::isfinite(c);
    Integrated r;
    r.w.resize(n);
    r.phi.resize(n);
    cplx w = 0.0;
    double phi = left ? -c : 0.0;
    const int start = left ? 0 : n - 1;
    r.w[start] = w;
    r.phi[start] = phi;
    auto f = [](cplx gv, cplx wv, double ph, cplx& dw, double& dph) {
        dw = gv * std::exp(cplx(0.0, ph));
        dph = 0.5 * std::norm(wv);
    };
    const int dir = left ? 1 : -1;
    const double s = dir * h;
    for (int step = 0; step < n - 1; ++step) {
        const int i = start + dir * step;
        cplx g0 = gq[2 * i], gm = gq[2 * i + dir], g1 = gq[2 * i + 2 * dir];
        cplx k1w, k2w, k3w, k4w;
        double k1p, k2p, k3p, k4p;
        f(g0, w, phi, k1w, k1p);
        f(gm, w + 0.5 * s * k1w, phi + 0.5 * s * k1p, k2w, k2p);
        f(gm, w + 0.5 * s * k2w, phi + 0.5 * s * k2p, k3w, k3p);
        f(g1, w + s * k3w, phi + s * k3p, k4w, k4p);
        w += s / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        phi += s / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        r.w[i + dir] = w;
        r.phi[i + dir] = phi;
    }
    return r;
}

} // namespace

VecC untangled_ux(const ReconstructionRaw& raw, const RealGrid& grid, double c)
{
    Integrated in = integrate_phases(raw, grid, c);
    VecC ux(grid.n);
    for (int i = 0; i < grid.n; ++i) ux[i] = std::conj(in.w[i]) * std::exp(cplx(0.0, -in.phi[i]));
    return ux;
}

Field untangle_phases(const ReconstructionRaw& raw, const RealGrid& grid, UntangleReport* report,
                      const UntangleOptions& opt)
{
    grid.validate();
    const double slack = 1e-9 * grid.h();
    if (raw.x_nodes.size() < 2 || raw.x_nodes[0] > grid.x_min + slack ||
        raw.x_nodes[raw.x_nodes.size() - 1] < grid.x_max - slack)
        throw ContractError("untangle_phases: raw samples must cover the whole grid");
    const int n = grid.n;
    Integrated in = integrate_phases(raw, grid, opt.c);
    VecC uh = lagrange_interpolate(raw.x_nodes, raw.u_hat, grid.nodes());
    VecC u(n), ux(n);
    for (int i = 0; i < n; ++i) {
        cplx e = std::exp(cplx(0.0, -in.phi[i]));
        u[i] = uh[i] * e;
        ux[i] = std::conj(in.w[i]) * e;
    }
    Field f = Field::from_values(grid, u);

    UntangleReport rep;
    rep.c = -in.phi[0];
    rep.phase_end = in.phi[n - 1];
    rep.c_direct = norming_constant(f);
    double nux = ux.norm();
    // Non-periodic differences: the field need not vanish at the ends for t > 0.
    VecC du = fd_derivative(grid, u, 1);
    rep.closure = nux > 1e-14 ? (du - ux).norm() / nux : (du - ux).norm();
    // |u| from integrating u_x leftward against |u_hat|.
    VecC ui(n);
    ui[n - 1] = 0.0;
    for (int i = n - 1; i > 0; --i) ui[i - 1] = ui[i] - 0.5 * grid.h() * (ux[i] + ux[i - 1]);
    double nu = uh.cwiseAbs().maxCoeff();
    double mm = (ui.cwiseAbs() - uh.cwiseAbs()).cwiseAbs().maxCoeff();
    rep.modulus_mismatch = nu > 1e-14 ? mm / nu : mm;
    if (report) *report = rep;
    if (opt.strict && rep.closure > 10.0 * opt.closure_tol)
        throw ContractError("phase closure mismatch " + format_double(rep.closure) +
                            ": the u_hat and g routes disagree; check the sign conventions (sigma, phase factors)");
    return f;
}

ReconstructionResult reconstruct_solution(const ScatteringData& data, double t, const PhysParams& params,
                                          const RealGrid& grid, const ReconstructionOptions& opt)
{
    params.validate();
    grid.validate();
    if (opt.rh_stride < 1) throw ConfigError("rh_stride must be positive");
    EvolvedData ev = evolve(data, t, params);
    ReconstructionResult res;

    const double tf = opt.filter_t >= 0.0 ? opt.filter_t : ev.t;
    res.filter_radius = unresolved_radius(data.grid, tf, params, opt.nodes_per_period);
    ComplexSamples r1 = ev.r1_t, r2 = ev.r2_t;
    if (res.filter_radius > 0.0) {
        VecR chi = small_z_filter(data.grid, res.filter_radius);
        r1.values = r1.values.cwiseProduct(chi.cast<cplx>());
        r2.values = r2.values.cwiseProduct(chi.cast<cplx>());
    }

    std::vector<int> idx;
    for (int i = 0; i < grid.n; i += opt.rh_stride) idx.push_back(i);
    if (idx.back() != grid.n - 1) idx.push_back(grid.n - 1);
    std::vector<double> xs(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) xs[i] = grid.x(idx[i]);

    const bool need_delta = grid.x_min < opt.x_switch;
    DeltaData delta;
    std::unique_ptr<RHBatch> batch;
    if (need_delta) {
        delta = delta_build(r1, r2);
        batch = std::make_unique<RHBatch>(r1, r2, delta, opt.rh);
    } else {
        batch = std::make_unique<RHBatch>(r1, r2, opt.rh);
    }
    std::vector<RHSolution> sols = batch->solve_all(xs, opt.x_switch);

    res.raw.x_nodes.resize(xs.size());
    res.raw.u_hat.resize(xs.size());
    res.raw.g.resize(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const RHSolution& s = sols[i];
        const DeltaData* dp = s.conditioned ? &delta : nullptr;
        res.raw.x_nodes[i] = xs[i];
        res.raw.u_hat[i] = reconstruct_u_hat(s, r1, xs[i], opt.x_switch, dp);
        res.raw.g[i] = reconstruct_g(s, r2, xs[i], opt.x_switch, dp);
        if (s.residual >= res.max_residual) {
            res.max_residual = s.residual;
            res.worst_x = xs[i];
        }
        res.max_condition = std::max(res.max_condition, s.condition_estimate);
        for (auto& w : s.warnings) res.warnings.push_back(w);
    }
    UntangleOptions uo = opt.untangle;
    if (opt.anchor_left) uo.c = data.c;
    res.u = untangle_phases(res.raw, grid, &res.untangle, uo);
    return res;
}

} // namespace fl
