// Command-line front end: scatter, evolve, reconstruct, roundtrip, validate,
// residual, demo. Exit codes: 0 ok, 2 inadmissible data, 3 I/O, schema or
// config problems, 4 solver failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fl/config.hpp"
#include "fl/parallel.hpp"

using namespace fl;

namespace {

struct Common {
    std::string config;
    int threads = 0;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config, "key=value run configuration");
    sub->add_option("--threads", c.threads, "cap on worker threads (default: FL_THREADS or hardware)");
}

RunConfig setup(const Common& c)
{
    if (c.threads > 0) set_thread_count(c.threads);
    return c.config.empty() ? parse_config({}) : load_config(c.config);
}

ScatteringMeta meta_for(const RunConfig& cfg)
{
    ScatteringMeta m;
    m.params = cfg.params;
    m.grid_params = cfg.zgrid;
    m.extra = {{"profile", cfg.profile.kind},
               {"amplitude", format_double(cfg.profile.amplitude)},
               {"width", format_double(cfg.profile.width)},
               {"center", format_double(cfg.profile.center)}};
    return m;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

int finish(const ValidationReport& r, const std::string& csv)
{
    std::cout << r.key_values();
    if (!csv.empty()) write_text(csv, r.csv());
    for (const auto& f : r.failures()) std::cerr << "failed check: " << f << '\n';
    return r.pass() ? 0 : 1;
}

void print_admissibility(const AdmissibilityReport& a)
{
    std::cout << "small_norm_value=" << format_double(a.small_norm_value) << '\n'
              << "small_norm_holds=" << (a.small_norm_holds ? "true" : "false") << '\n'
              << "min_abs_a_grid=" << format_double(a.min_abs_a_grid) << '\n'
              << "min_abs_a_lattice=" << format_double(a.min_abs_a_lattice) << '\n'
              << "lattice_cauchy_mismatch=" << format_double(a.lattice_cauchy_mismatch) << '\n'
              << "admissible=" << (a.admissible ? "true" : "false") << '\n';
}

void warn_aliasing(const SpectralGrid& g, const SpectralGridParams& gp, double t, const PhysParams& p)
{
    AliasingReport a = aliasing_check(g, gp, t, p);
    if (a.ok) return;
    std::cerr << "warning: e^{i alpha beta^2 t/(2z)} has " << format_double(a.nodes_per_period)
              << " nodes per period at |z| = z_min_inner (t = " << format_double(t) << "); data inside |z| < "
              << format_double(a.unresolved_radius) << " are damped before reconstruction. Raise z_ref to about "
              << format_double(a.suggested_z_ref) << " or n_z_outer to resolve it.\n";
}

int cmd_scatter(const Common& c, const std::string& out)
{
    RunConfig cfg = setup(c);
    Field u = make_profile(cfg);
    SpectralGrid g = make_spectral_grid(cfg.zgrid);
    ForwardResult fr = forward_scatter(u, g);
    print_admissibility(fr.admissibility);
    if (fr.admissibility.lattice_cauchy_mismatch > 1e-2)
        std::cerr << "warning: off-axis a disagrees with the Cauchy integral of its boundary values; "
                     "a likely has zeros in the upper half plane\n";
    std::cout << "c=" << format_double(fr.data.c) << '\n'
              << "wronskian_drift=" << format_double(fr.coeffs.wronskian_drift) << '\n'
              << "n_z=" << g.size() << '\n';
    write_scattering(out, fr.data, meta_for(cfg));
    std::cout << "wrote " << out << '\n';
    return fr.admissibility.admissible ? 0 : 2;
}

int cmd_evolve(const Common& c, const std::string& in, double t, const std::string& out)
{
    RunConfig cfg = setup(c);
    ScatteringMeta meta;
    ScatteringData d = read_scattering(in, meta);
    if (t < 0) t = cfg.times.back();
    EvolvedData e = evolve(d, t, meta.params);
    warn_aliasing(d.grid, meta.grid_params, e.t, meta.params);
    write_scattering(out, e.as_data(), meta);
    std::cout << "t=" << format_double(e.t) << '\n' << "wrote " << out << '\n';
    return 0;
}

int cmd_reconstruct(const Common& c, const std::string& in, const std::string& out)
{
    RunConfig cfg = setup(c);
    ScatteringMeta meta;
    ScatteringData d = read_scattering(in, meta);
    warn_aliasing(d.grid, meta.grid_params, d.t, meta.params);
    ReconstructionOptions ro = reconstruction_options(cfg);
    ro.untangle.strict = false;
    ReconstructionResult rr = reconstruct_solution(d, 0.0, meta.params, cfg.xgrid, ro);
    std::cout << "t=" << format_double(d.t) << '\n'
              << "max_rh_residual=" << format_double(rr.max_residual) << '\n'
              << "worst_x=" << format_double(rr.worst_x) << '\n'
              << "max_condition=" << format_double(rr.max_condition) << '\n'
              << "filter_radius=" << format_double(rr.filter_radius) << '\n'
              << "closure=" << format_double(rr.untangle.closure) << '\n'
              << "c=" << format_double(rr.untangle.c) << '\n';
    for (const auto& w : rr.warnings) std::cerr << "warning: " << w << '\n';
    if (rr.untangle.closure > 10.0 * ro.untangle.closure_tol)
        std::cerr << "warning: phase closure " << format_double(rr.untangle.closure) << " exceeds tolerance\n";
    if (d.t == 0.0 && cfg.profile.kind != "from-file") {
        Field u0 = make_profile(cfg);
        double ref = u0.values.cwiseAbs().maxCoeff();
        double err = (rr.u.values - u0.values).cwiseAbs().maxCoeff();
        std::cout << "roundtrip_rel_sup_error=" << format_double(ref > 0 ? err / ref : err) << '\n';
    }
    write_field_csv(out, rr.u);
    write_key_values(out + ".meta", {{"t", format_double(d.t)},
                                     {"alpha", format_double(meta.params.alpha)},
                                     {"beta", format_double(meta.params.beta)},
                                     {"sigma", std::to_string(meta.params.sigma)},
                                     {"solver_tol", format_double(cfg.solver_tol)},
                                     {"edge_tol", format_double(cfg.edge_tol)},
                                     {"x_switch", format_double(cfg.x_switch)},
                                     {"rh_stride", std::to_string(cfg.rh_stride)}});
    std::cout << "wrote " << out << '\n';
    return 0;
}

RoundtripOptions roundtrip_options(const RunConfig& cfg)
{
    RoundtripOptions o;
    o.zgrid = cfg.zgrid;
    o.recon = reconstruction_options(cfg);
    o.tol = cfg.roundtrip_tol;
    return o;
}

int cmd_roundtrip(const Common& c, const std::string& csv)
{
    RunConfig cfg = setup(c);
    return finish(roundtrip(make_profile(cfg), cfg.params, roundtrip_options(cfg)), csv);
}

int cmd_validate(const Common& c, const std::string& data_path, const std::string& csv)
{
    RunConfig cfg = setup(c);
    ValidationReport r;
    RHCheckOptions rh;
    rh.x_switch = cfg.x_switch;
    rh.edge_tol = cfg.edge_tol;
    rh.rh.solver_tol = cfg.solver_tol;
    if (!data_path.empty()) {
        ScatteringMeta meta;
        ScatteringData d = read_scattering(data_path, meta);
        r.merge(identity_suite(d), "identity.");
        r.merge(evolution_suite(d, meta.params), "evolution.");
        r.merge(rh_suite(d, rh), "rh.");
        return finish(r, csv);
    }
    Field u0 = make_profile(cfg);
    SpectralGrid g = make_spectral_grid(cfg.zgrid);
    ForwardResult fr = forward_scatter(u0, g);
    r.merge(identity_suite(fr), "identity.");
    JostLimitOptions jo;
    jo.z_cut = cfg.zgrid.z_cut;
    jo.z_small = g.nodes.cwiseAbs().minCoeff();
    r.merge(jost_asymptotics_suite(u0, jo), "jost.");
    r.merge(plemelj_suite(g), "plemelj.");
    r.merge(evolution_suite(fr.data, cfg.params), "evolution.");
    r.merge(rh_suite(fr.data, rh), "rh.");
    r.merge(roundtrip(u0, cfg.params, roundtrip_options(cfg)), "roundtrip.");
    PdeCheckOptions po;
    po.t = cfg.times.back();
    po.tol = cfg.residual_tol;
    po.recon = reconstruction_options(cfg);
    if (po.t > po.dt) r.merge(pde_check(fr.data, cfg.params, u0.grid, po), "pde.");
    r.merge(plane_wave_check(cfg.params, u0.grid), "pde.");
    if (cfg.lipschitz) {
        LipschitzOptions lo;
        lo.n_dirs = cfg.n_dirs;
        lo.eps = cfg.eps;
        lo.seed = cfg.seed;
        lo.zgrid = cfg.zgrid;
        lo.recon = reconstruction_options(cfg);
        r.merge(lipschitz_probe(u0, cfg.params, lo), "lipschitz.");
    }
    return finish(r, csv);
}

int cmd_residual(const Common& c, const std::vector<std::string>& fields, const std::string& csv)
{
    RunConfig cfg = setup(c);
    PdeCheckOptions po;
    po.tol = cfg.residual_tol;
    std::vector<Snapshot> snaps;
    if (!fields.empty()) {
        for (const auto& f : fields) {
            double t = std::numeric_limits<double>::quiet_NaN();
            for (const auto& [k, v] : read_key_values(f + ".meta"))
                if (k == "t") t = std::stod(v);
            if (!std::isfinite(t)) throw IoError(f + ".meta: missing t");
            snaps.push_back({t, read_field_csv(f)});
        }
    } else {
        if (cfg.times.size() < 3) throw ConfigError("residual needs at least three times (config key times)");
        Field u0 = make_profile(cfg);
        SpectralGrid g = make_spectral_grid(cfg.zgrid);
        ForwardResult fr = forward_scatter(u0, g);
        ReconstructionOptions ro = reconstruction_options(cfg);
        ro.filter_t = cfg.times.back();
        ro.untangle.strict = false;
        for (double t : cfg.times) snaps.push_back({t, reconstruct_solution(fr.data, t, cfg.params, u0.grid, ro).u});
    }
    return finish(pde_check(snaps, cfg.params, po), csv);
}

int cmd_demo(const Common& c, const std::string& dir)
{
    RunConfig cfg = setup(c);
    std::filesystem::create_directories(dir);
    const std::string scat = dir + "/scattering.csv", evo = dir + "/evolved.csv", field = dir + "/field.csv";
    Field u0 = make_profile(cfg);
    write_field_csv(dir + "/initial.csv", u0);
    int rc = cmd_scatter(c, scat);
    if (rc != 0) return rc;
    cmd_evolve(c, scat, cfg.times.back(), evo);
    return cmd_reconstruct(c, evo, field);
}

int run(int argc, char** argv)
{
    CLI::App app{"Inverse scattering solver and validation lab for the Fokas-Lenells equation"};
    app.require_subcommand(1);
    Common common;
    std::string out, in, csv, data_path, dir = "demo_out";
    double t = -1.0;
    std::vector<std::string> fields;

    auto* scatter = app.add_subcommand("scatter", "forward map u0 -> scattering data");
    add_common(scatter, common);
    scatter->add_option("-o,--out", out, "output CSV")->default_val("scattering.csv");

    auto* evolve_cmd = app.add_subcommand("evolve", "evolve reflection data to time t");
    add_common(evolve_cmd, common);
    evolve_cmd->add_option("-i,--in", in, "scattering CSV")->required();
    evolve_cmd->add_option("-t,--time", t, "time increment (default: last configured time)");
    evolve_cmd->add_option("-o,--out", out, "output CSV")->default_val("evolved.csv");

    auto* recon = app.add_subcommand("reconstruct", "RH inverse map to u(x, t)");
    add_common(recon, common);
    recon->add_option("-i,--in", in, "scattering or evolved CSV")->required();
    recon->add_option("-o,--out", out, "output field CSV")->default_val("field.csv");

    auto* rt = app.add_subcommand("roundtrip", "forward then inverse map at t = 0");
    add_common(rt, common);
    rt->add_option("--csv", csv, "also write check,value,threshold,pass rows");

    auto* val = app.add_subcommand("validate", "identity, limit, solver, evolution and residual checks");
    add_common(val, common);
    val->add_option("--data", data_path, "check a stored scattering file instead of a fresh forward solve");
    val->add_option("--csv", csv, "also write check,value,threshold,pass rows");

    auto* res = app.add_subcommand("residual", "PDE residual of reconstructed snapshots");
    add_common(res, common);
    res->add_option("--fields", fields, "field CSVs with t in their .meta sidecars");
    res->add_option("--csv", csv, "also write check,value,threshold,pass rows");

    auto* demo = app.add_subcommand("demo", "scatter, evolve and reconstruct into a directory");
    add_common(demo, common);
    demo->add_option("-d,--dir", dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    if (scatter->parsed()) return cmd_scatter(common, out);
    if (evolve_cmd->parsed()) return cmd_evolve(common, in, t, out);
    if (recon->parsed()) return cmd_reconstruct(common, in, out);
    if (rt->parsed()) return cmd_roundtrip(common, csv);
    if (val->parsed()) return cmd_validate(common, data_path, csv);
    if (res->parsed()) return cmd_residual(common, fields, csv);
    return cmd_demo(common, dir);
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const ResonanceError& e) {
        std::cerr << "inadmissible data: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "inadmissible data: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const ContractError& e) {
        std::cerr << "schema/contract error: " << e.what() << '\n';
        return 3;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 4;
    } catch (const AccuracyError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
