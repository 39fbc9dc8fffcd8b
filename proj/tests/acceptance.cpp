// Acceptance run at the reference configuration: one line per criterion.
// Exits 0 whenever the run completes; failing criteria are reported, not
// turned into a failing process.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>

#include <CLI11.hpp>

#include "fl/config.hpp"

using namespace fl;

namespace {

using clk = std::chrono::steady_clock;

struct Reference {
    PhysParams p;
    RealGrid xg;
    SpectralGridParams zp;
    Field u0;
    SpectralGrid g;
    ForwardResult fr;
};

std::string brief(const Check& c)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g(%s%.3g)%s", c.name.c_str(), c.value, c.at_most ? "<=" : ">=",
                  c.threshold, c.pass ? "" : "!");
    return buf;
}

ValidationReport pick(const ValidationReport& r, const std::vector<std::string>& names, const std::string& prefix = "")
{
    ValidationReport out;
    for (const auto& n : names) {
        const Check& c = r.at(n);
        out.checks.push_back({prefix + c.name, c.value, c.threshold, c.pass, c.at_most});
    }
    return out;
}

ValidationReport crit_zero(const Reference& ref)
{
    ValidationReport r;
    ForwardResult fr = forward_scatter(Field::zero(ref.xg), ref.g);
    r.at_most("a_minus_1", (fr.data.a.values.array() - 1.0).abs().maxCoeff(), 1e-10);
    r.at_most("kb", fr.data.kb.values.cwiseAbs().maxCoeff(), 1e-10);
    JumpData j{fr.data.r1, fr.data.r2, 0.0};
    RHSolution s = solve_columns(j);
    double m = 0.0;
    m = std::max(m, (s.m_minus_col1[0].values.array() - 1.0).abs().maxCoeff());
    m = std::max(m, s.m_minus_col1[1].values.cwiseAbs().maxCoeff());
    m = std::max(m, s.m_plus_col2[0].values.cwiseAbs().maxCoeff());
    m = std::max(m, (s.m_plus_col2[1].values.array() - 1.0).abs().maxCoeff());
    r.at_most("M_minus_I", m, 1e-10);
    for (double t : {0.0, 1.0}) {
        ReconstructionResult rr = reconstruct_solution(fr.data, t, ref.p, ref.xg);
        r.at_most(t == 0.0 ? "u_t0" : "u_t1", rr.u.values.cwiseAbs().maxCoeff(), 1e-10);
    }
    return r;
}

ValidationReport crit_invariants(const Reference& ref)
{
    return pick(identity_suite(ref.fr), {"det_error", "wronskian_drift"});
}

ValidationReport crit_identities(const Reference& ref)
{
    return pick(identity_suite(ref.fr), {"unitarity", "r2_4z_r1", "positivity"});
}

ValidationReport crit_asymptotics(const Reference& ref)
{
    JostLimitOptions o;
    o.z_small = ref.g.nodes.cwiseAbs().minCoeff();
    return jost_asymptotics_suite(ref.u0, o);
}

ValidationReport crit_plemelj(const Reference& ref) { return plemelj_suite(ref.g); }

ValidationReport crit_roundtrip(const Reference& ref)
{
    RoundtripOptions o;
    o.zgrid = ref.zp;
    ValidationReport r = pick(roundtrip(ref.u0, ref.p, o), {"rel_sup_error"});
    // At the reference grid the error sits on the x-interpolation floor; the
    // order is measured from a coarser base where the spectral error dominates.
    RoundtripOptions base = o;
    base.zgrid.z_cut = 4.0;
    base.zgrid.n_z_outer = 128;
    r.merge(roundtrip_convergence(ref.u0, ref.p, base));
    return r;
}

ValidationReport crit_evolution(const Reference& ref)
{
    return pick(evolution_suite(ref.fr.data, ref.p), {"modulus", "l21_norm", "group"});
}

std::vector<Snapshot> reference_snapshots(const Reference& ref, const PhysParams& p)
{
    ReconstructionOptions ro;
    ro.filter_t = 1.001;
    ro.untangle.strict = false;
    std::vector<Snapshot> snaps;
    for (double t : {0.999, 1.0, 1.001}) snaps.push_back({t, reconstruct_solution(ref.fr.data, t, p, ref.xg, ro).u});
    return snaps;
}

const std::vector<Snapshot>& snapshots(const Reference& ref)
{
    static const std::vector<Snapshot> s = reference_snapshots(ref, ref.p);
    return s;
}

ValidationReport crit_residual(const Reference& ref)
{
    ValidationReport r = pick(pde_check(snapshots(ref), ref.p), {"residual"});
    r.merge(plane_wave_check(ref.p, ref.xg));
    return r;
}

ValidationReport crit_delta(const Reference& ref)
{
    return pick(rh_suite(ref.fr.data), {"delta_jump", "conditioned_agreement", "condition_ratio"});
}

ValidationReport crit_stability(const Reference& ref)
{
    LipschitzOptions o;
    o.zgrid = ref.zp;
    o.recon.rh_stride = 8;
    return lipschitz_probe(ref.u0, ref.p, o);
}

// Each corruption must be flagged by its named check while the clean input passes it.
ValidationReport crit_faults(const Reference& ref)
{
    ValidationReport r;
    auto caught = [&](const std::string& name, bool clean_pass, bool corrupt_pass) {
        r.at_least(name, clean_pass && !corrupt_pass ? 1.0 : 0.0, 1.0);
    };

    ScatteringData bad = ref.fr.data;
    bad.a.values *= 1.01;
    caught("scaled_a.unitarity", identity_suite(ref.fr.data).at("unitarity").pass,
           identity_suite(bad).at("unitarity").pass);

    JumpData j{ref.fr.data.r1, ref.fr.data.r2, 1.0};
    RHSolution s = solve_columns(j);
    const bool clean = rh_solution_checks(s, j).at("jump_residual").pass;
    s.m_minus_col1[0].values.array() += 1e-3;
    caught("perturbed_M.jump_residual", clean, rh_solution_checks(s, j).at("jump_residual").pass);

    PhysParams wrong = ref.p;
    wrong.sigma = -ref.p.sigma;
    caught("wrong_sigma.nonlinear_resolution", pde_check(snapshots(ref), ref.p).at("nonlinear_resolution").pass,
           pde_check(snapshots(ref), wrong).at("nonlinear_resolution").pass);
    return r;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria at the reference configuration"};
    std::vector<int> only;
    std::string csv;
    app.add_option("--only", only, "criterion numbers to run");
    app.add_option("--csv", csv, "write every check as check,value,threshold,pass");
    CLI11_PARSE(app, argc, argv);
    std::set<int> run(only.begin(), only.end());

    Reference ref;
    ref.xg = RealGrid{};
    ref.zp = SpectralGridParams{};
    {
        VecR x = ref.xg.nodes();
        VecC v(ref.xg.n);
        for (int i = 0; i < ref.xg.n; ++i) v[i] = 0.25 * std::exp(-x[i] * x[i]);
        ref.u0 = Field::from_values(ref.xg, v);
    }
    ref.g = make_spectral_grid(ref.zp);
    ref.fr = forward_scatter(ref.u0, ref.g);

    const std::vector<std::pair<std::string, std::function<ValidationReport(const Reference&)>>> criteria = {
        {"zero data", crit_zero},
        {"wronskian and determinant invariants", crit_invariants},
        {"scattering identities", crit_identities},
        {"asymptotic orders and jost limits", crit_asymptotics},
        {"plemelj operators", crit_plemelj},
        {"round trip at t=0", crit_roundtrip},
        {"time evolution", crit_evolution},
        {"pde residual", crit_residual},
        {"delta conditioning", crit_delta},
        {"stability probes", crit_stability},
        {"fault sensitivity", crit_faults},
    };

    ValidationReport all;
    int passed = 0, ran = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!run.empty() && !run.count(id)) continue;
        ++ran;
        auto t0 = clk::now();
        std::string detail;
        bool ok = false;
        try {
            ValidationReport r = criteria[k].second(ref);
            ok = r.pass() && !r.checks.empty();
            for (const auto& c : r.checks) detail += " " + brief(c);
            all.merge(r, "c" + std::to_string(id) + ".");
        } catch (const std::exception& e) {
            detail = std::string(" error: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(clk::now() - t0).count();
        passed += ok;
        std::printf("criterion %2d %s  %s |%s (%.0fs)\n", id, ok ? "PASS" : "FAIL", criteria[k].first.c_str(),
                    detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria pass\n", passed, ran);
    if (!csv.empty()) std::ofstream(csv) << all.csv();
    return 0;
}
