#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fl/config.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace fl;

namespace {

py::dict report_dict(const ValidationReport& r)
{
    py::dict checks;
    for (const auto& c : r.checks)
        checks[py::str(c.name)] = py::dict("value"_a = c.value, "threshold"_a = c.threshold, "pass"_a = c.pass);
    py::dict info;
    for (const auto& [k, v] : r.info) info[py::str(k)] = v;
    return py::dict("checks"_a = checks, "info"_a = info, "pass"_a = r.pass());
}

Field field_from(const RealGrid& g, const VecC& u)
{
    if (u.size() != g.n) throw ContractError("u has " + std::to_string(u.size()) + " samples, grid has " + std::to_string(g.n));
    return Field::from_values(g, u);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Inverse scattering for the Fokas-Lenells equation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());
    py::register_exception<ResonanceError>(m, "ResonanceError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());

    py::class_<PhysParams>(m, "PhysParams")
        .def(py::init([](double a, double b, int s) {
                 PhysParams p{a, b, s};
                 p.validate();
                 return p;
             }),
             "alpha"_a = 1.0, "beta"_a = 1.0, "sigma"_a = -1)
        .def_readwrite("alpha", &PhysParams::alpha)
        .def_readwrite("beta", &PhysParams::beta)
        .def_readwrite("sigma", &PhysParams::sigma);

    py::class_<RealGrid>(m, "RealGrid")
        .def(py::init([](double lo, double hi, int n) {
                 RealGrid g{lo, hi, n};
                 g.validate();
                 return g;
             }),
             "x_min"_a = -20.0, "x_max"_a = 20.0, "n"_a = 2048)
        .def_readonly("x_min", &RealGrid::x_min)
        .def_readonly("x_max", &RealGrid::x_max)
        .def_readonly("n", &RealGrid::n)
        .def_property_readonly("h", &RealGrid::h)
        .def_property_readonly("x", &RealGrid::nodes);

    py::class_<SpectralGridParams>(m, "SpectralGridParams")
        .def(py::init([](double z_cut, double z_ref, double z_min_inner, int n_z_outer) {
                 return SpectralGridParams{z_cut, z_ref, z_min_inner, n_z_outer};
             }),
             "z_cut"_a = 64.0, "z_ref"_a = 0.25, "z_min_inner"_a = 0.02, "n_z_outer"_a = 2048)
        .def_readwrite("z_cut", &SpectralGridParams::z_cut)
        .def_readwrite("z_ref", &SpectralGridParams::z_ref)
        .def_readwrite("z_min_inner", &SpectralGridParams::z_min_inner)
        .def_readwrite("n_z_outer", &SpectralGridParams::n_z_outer);

    py::class_<ScatteringData>(m, "ScatteringData")
        .def_property_readonly("z", [](const ScatteringData& d) { return d.grid.nodes; })
        .def_property_readonly("weights", [](const ScatteringData& d) { return d.grid.weights; })
        .def_property_readonly("a", [](const ScatteringData& d) { return d.a.values; })
        .def_property_readonly("kb", [](const ScatteringData& d) { return d.kb.values; })
        .def_property_readonly("r1", [](const ScatteringData& d) { return d.r1.values; })
        .def_property_readonly("r2", [](const ScatteringData& d) { return d.r2.values; })
        .def_readonly("c", &ScatteringData::c)
        .def_readonly("t", &ScatteringData::t)
        .def_readonly("admissible", &ScatteringData::admissible)
        .def_readonly("min_abs_a", &ScatteringData::min_abs_a);

    py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
        .def_readonly("small_norm_value", &AdmissibilityReport::small_norm_value)
        .def_readonly("small_norm_holds", &AdmissibilityReport::small_norm_holds)
        .def_readonly("min_abs_a", &AdmissibilityReport::min_abs_a)
        .def_readonly("lattice_cauchy_mismatch", &AdmissibilityReport::lattice_cauchy_mismatch)
        .def_readonly("admissible", &AdmissibilityReport::admissible);

    m.def("spectral_grid", [](const SpectralGridParams& p) {
        SpectralGrid g = make_spectral_grid(p);
        return py::make_tuple(g.nodes, g.weights);
    }, "params"_a = SpectralGridParams{}, "Nodes and quadrature weights of the spectral grid.");

    m.def("norming_constant", [](const VecC& u, const RealGrid& g) { return norming_constant(field_from(g, u)); },
          "u"_a, "grid"_a);

    m.def("forward_scatter", [](const VecC& u, const RealGrid& g, const SpectralGridParams& zp) {
        py::gil_scoped_release nogil;
        ForwardResult fr = forward_scatter(field_from(g, u), make_spectral_grid(zp));
        return std::make_pair(fr.data, fr.admissibility);
    }, "u"_a, "grid"_a, "zgrid"_a = SpectralGridParams{},
          "Scattering data of u; raises ResonanceError when |a| is below the floor.");

    m.def("evolve", [](const ScatteringData& d, double t, const PhysParams& p) { return evolve(d, t, p).as_data(); },
          "data"_a, "t"_a, "params"_a = PhysParams{});

    m.def("reconstruct", [](const ScatteringData& d, double t, const PhysParams& p, const RealGrid& g,
                            double x_switch, int rh_stride) {
        ReconstructionOptions o;
        o.x_switch = x_switch;
        o.rh_stride = rh_stride;
        o.untangle.strict = false;
        ReconstructionResult r;
        {
            py::gil_scoped_release nogil;
            r = reconstruct_solution(d, t, p, g, o);
        }
        py::dict info("max_residual"_a = r.max_residual, "worst_x"_a = r.worst_x, "max_condition"_a = r.max_condition,
                      "filter_radius"_a = r.filter_radius, "closure"_a = r.untangle.closure, "c"_a = r.untangle.c,
                      "warnings"_a = r.warnings);
        return py::make_tuple(r.u.values, info);
    }, "data"_a, "t"_a, "params"_a = PhysParams{}, "grid"_a = RealGrid{}, "x_switch"_a = 0.0, "rh_stride"_a = 4,
          "u(x, t) on the grid and a solver summary; data are evolved from their own t by t.");

    m.def("roundtrip", [](const VecC& u, const RealGrid& g, const PhysParams& p, const SpectralGridParams& zp) {
        RoundtripOptions o;
        o.zgrid = zp;
        ValidationReport r;
        {
            py::gil_scoped_release nogil;
            r = roundtrip(field_from(g, u), p, o);
        }
        return report_dict(r);
    }, "u"_a, "grid"_a, "params"_a = PhysParams{}, "zgrid"_a = SpectralGridParams{});

    m.def("identity_suite", [](const ScatteringData& d) { return report_dict(identity_suite(d)); }, "data"_a);
    m.def("evolution_suite", [](const ScatteringData& d, const PhysParams& p) {
        return report_dict(evolution_suite(d, p));
    }, "data"_a, "params"_a = PhysParams{});

    m.def("pde_residual", [](const std::vector<double>& ts, const std::vector<VecC>& us, const RealGrid& g,
                             const PhysParams& p) {
        if (ts.size() != us.size()) throw ContractError("times and fields differ in length");
        std::vector<Snapshot> snaps;
        for (size_t i = 0; i < ts.size(); ++i) snaps.push_back({ts[i], field_from(g, us[i])});
        return pde_residual(snaps, p);
    }, "times"_a, "fields"_a, "grid"_a, "params"_a = PhysParams{},
          "Relative residual of the equation at the middle of three equally spaced snapshots.");

    m.def("write_scattering", [](const std::string& path, const ScatteringData& d, const PhysParams& p,
                                 const SpectralGridParams& zp) { write_scattering(path, d, ScatteringMeta{p, zp, {}}); },
          "path"_a, "data"_a, "params"_a = PhysParams{}, "zgrid"_a = SpectralGridParams{});
    m.def("read_scattering", [](const std::string& path) {
        ScatteringMeta meta;
        ScatteringData d = read_scattering(path, meta);
        return py::make_tuple(d, meta.params, meta.grid_params);
    }, "path"_a);
}
