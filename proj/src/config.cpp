#include "fl/config.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace fl {

namespace {

double to_double(const std::string& key, const std::string& v)
{
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a number: '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v)
{
    double d = to_double(key, v);
    if (d != std::floor(d)) throw ConfigError("config key " + key + ": not an integer: '" + v + "'");
    return static_cast<long>(d);
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key " + key + ": not a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError("config key " + key + ": empty list entry");
        out.push_back(to_double(key, item.substr(b, e - b + 1)));
    }
    if (out.empty()) throw ConfigError("config key " + key + ": empty list");
    return out;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

} // namespace

void RunConfig::validate() const
{
    params.validate();
    xgrid.validate();
    if (!is_power_of_two(xgrid.n)) throw ConfigError("n_x must be a power of two");
    if (!is_power_of_two(zgrid.n_z_outer)) throw ConfigError("n_z_outer must be a power of two");
    if (!(zgrid.z_cut > 0) || !(zgrid.z_ref >= 0) || !(zgrid.z_min_inner > 0))
        throw ConfigError("z_cut and z_min_inner must be positive, z_ref nonnegative");
    for (size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0)) throw ConfigError("times must be nonnegative");
        if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("times must be strictly ascending");
    }
    if (profile.kind != "gaussian" && profile.kind != "sech" && profile.kind != "from-file")
        throw ConfigError("profile must be gaussian, sech or from-file");
    if (profile.kind == "from-file" && profile.path.empty()) throw ConfigError("profile from-file needs path");
    if (profile.kind != "from-file" && !(profile.width > 0)) throw ConfigError("width must be positive");
    if (rh_stride < 1) throw ConfigError("rh_stride must be positive");
    if (n_dirs < 0) throw ConfigError("n_dirs must be nonnegative");
}

RunConfig parse_config(const std::vector<std::pair<std::string, std::string>>& kv)
{
    RunConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"alpha", [&](auto& k, auto& v) { c.params.alpha = to_double(k, v); }},
        {"beta", [&](auto& k, auto& v) { c.params.beta = to_double(k, v); }},
        {"sigma", [&](auto& k, auto& v) { c.params.sigma = static_cast<int>(to_long(k, v)); }},
        {"x_min", [&](auto& k, auto& v) { c.xgrid.x_min = to_double(k, v); }},
        {"x_max", [&](auto& k, auto& v) { c.xgrid.x_max = to_double(k, v); }},
        {"n_x", [&](auto& k, auto& v) { c.xgrid.n = static_cast<int>(to_long(k, v)); }},
        {"z_cut", [&](auto& k, auto& v) { c.zgrid.z_cut = to_double(k, v); }},
        {"z_ref", [&](auto& k, auto& v) { c.zgrid.z_ref = to_double(k, v); }},
        {"z_min_inner", [&](auto& k, auto& v) { c.zgrid.z_min_inner = to_double(k, v); }},
        {"n_z_outer", [&](auto& k, auto& v) { c.zgrid.n_z_outer = static_cast<int>(to_long(k, v)); }},
        {"solver_tol", [&](auto& k, auto& v) { c.solver_tol = to_double(k, v); }},
        {"edge_tol", [&](auto& k, auto& v) { c.edge_tol = to_double(k, v); }},
        {"roundtrip_tol", [&](auto& k, auto& v) { c.roundtrip_tol = to_double(k, v); }},
        {"residual_tol", [&](auto& k, auto& v) { c.residual_tol = to_double(k, v); }},
        {"profile", [&](auto&, auto& v) { c.profile.kind = v; }},
        {"amplitude", [&](auto& k, auto& v) { c.profile.amplitude = to_double(k, v); }},
        {"width", [&](auto& k, auto& v) { c.profile.width = to_double(k, v); }},
        {"center", [&](auto& k, auto& v) { c.profile.center = to_double(k, v); }},
        {"wavenumber", [&](auto& k, auto& v) { c.profile.wavenumber = to_double(k, v); }},
        {"path", [&](auto&, auto& v) { c.profile.path = v; }},
        {"times", [&](auto& k, auto& v) { c.times = to_list(k, v); }},
        {"x_switch", [&](auto& k, auto& v) { c.x_switch = to_double(k, v); }},
        {"seed", [&](auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(to_long(k, v)); }},
        {"rh_stride", [&](auto& k, auto& v) { c.rh_stride = static_cast<int>(to_long(k, v)); }},
        {"lipschitz", [&](auto& k, auto& v) { c.lipschitz = to_bool(k, v); }},
        {"n_dirs", [&](auto& k, auto& v) { c.n_dirs = static_cast<int>(to_long(k, v)); }},
        {"eps", [&](auto& k, auto& v) { c.eps = to_double(k, v); }},
    };
    for (const auto& [k, v] : kv) {
        auto it = setters.find(k);
        if (it == setters.end()) throw ConfigError("unknown config key '" + k + "'");
        it->second(k, v);
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_key_values(path)); }

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c)
{
    return {
        {"alpha", format_double(c.params.alpha)},
        {"beta", format_double(c.params.beta)},
        {"sigma", std::to_string(c.params.sigma)},
        {"x_min", format_double(c.xgrid.x_min)},
        {"x_max", format_double(c.xgrid.x_max)},
        {"n_x", std::to_string(c.xgrid.n)},
        {"z_cut", format_double(c.zgrid.z_cut)},
        {"z_ref", format_double(c.zgrid.z_ref)},
        {"z_min_inner", format_double(c.zgrid.z_min_inner)},
        {"n_z_outer", std::to_string(c.zgrid.n_z_outer)},
        {"solver_tol", format_double(c.solver_tol)},
        {"edge_tol", format_double(c.edge_tol)},
        {"roundtrip_tol", format_double(c.roundtrip_tol)},
        {"residual_tol", format_double(c.residual_tol)},
        {"profile", c.profile.kind},
        {"amplitude", format_double(c.profile.amplitude)},
        {"width", format_double(c.profile.width)},
        {"center", format_double(c.profile.center)},
        {"wavenumber", format_double(c.profile.wavenumber)},
        {"path", c.profile.path},
        {"times", join(c.times)},
        {"x_switch", format_double(c.x_switch)},
        {"seed", std::to_string(c.seed)},
        {"rh_stride", std::to_string(c.rh_stride)},
        {"lipschitz", c.lipschitz ? "true" : "false"},
        {"n_dirs", std::to_string(c.n_dirs)},
        {"eps", format_double(c.eps)},
    };
}

Field make_profile(const RunConfig& c)
{
    const ProfileSpec& p = c.profile;
    if (p.kind == "from-file") return read_field_csv(p.path);
    const VecR x = c.xgrid.nodes();
    VecC v(c.xgrid.n);
    for (int i = 0; i < c.xgrid.n; ++i) {
        const double s = (x[i] - p.center) / p.width;
        const double env = p.kind == "gaussian" ? std::exp(-s * s) : 1.0 / std::cosh(s);
        v[i] = p.amplitude * env * std::exp(cplx(0.0, p.wavenumber * x[i]));
    }
    return Field::from_values(c.xgrid, v);
}

ReconstructionOptions reconstruction_options(const RunConfig& c)
{
    ReconstructionOptions o;
    o.x_switch = c.x_switch;
    o.rh_stride = c.rh_stride;
    o.rh.solver_tol = c.solver_tol;
    return o;
}

AliasingReport aliasing_check(const SpectralGrid& g, const SpectralGridParams& gp, double t, const PhysParams& p)
{
    AliasingReport r;
    r.unresolved_radius = unresolved_radius(g, t, p);
    if (t <= 0.0) {
        r.nodes_per_period = std::numeric_limits<double>::infinity();
        return r;
    }
    const double k = p.alpha * p.beta * p.beta * t / 2.0;
    const double z = gp.z_min_inner;
    r.nodes_per_period = 2.0 * kPi * z * z / (k * spectral_spacing(g, z));
    r.ok = r.nodes_per_period >= 8.0;
    // 1/spacing = (1/h)(1 + z_ref^2 / (z^2 + z_min_inner^2)) near the origin.
    const double need = 8.0 * k * g.outer_spacing / (2.0 * kPi * z * z) - 1.0;
    r.suggested_z_ref = std::sqrt(std::max(0.0, need) * 2.0 * z * z);
    return r;
}

} // namespace fl
