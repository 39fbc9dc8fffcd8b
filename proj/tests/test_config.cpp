#include <doctest.h>

#include <fstream>

#include "common.hpp"

using namespace fl;
using namespace fl::test;

TEST_CASE("defaults")
{
    RunConfig c = parse_config({});
    CHECK(c.params.sigma == -1);
    CHECK(c.xgrid.n == 2048);
    CHECK(c.profile.kind == "gaussian");
    CHECK(c.times == std::vector<double>{1.0});
}

TEST_CASE("unknown keys and bad values are rejected")
{
    CHECK_THROWS_AS(parse_config({{"solver_tl", "1e-8"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"alpha", "one"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"n_x", "1000"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"n_x", "1024.5"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"times", "1,0.5"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"times", "-1"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"profile", "box"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"profile", "from-file"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"lipschitz", "maybe"}}), ConfigError);
}

TEST_CASE("config entries parse back to the same config")
{
    RunConfig c = parse_config({{"beta", "1.25"}, {"times", "0.5, 1, 2"}, {"profile", "sech"}, {"seed", "9"},
                                {"lipschitz", "yes"}, {"x_switch", "-1e300"}});
    RunConfig d = parse_config(config_entries(c));
    CHECK(config_entries(d) == config_entries(c));
    CHECK(d.times == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(d.lipschitz);

    const std::string p = tmp_path("run.cfg");
    write_key_values(p, config_entries(c));
    CHECK(config_entries(load_config(p)) == config_entries(c));
}

TEST_CASE("profiles")
{
    RunConfig c = parse_config({{"n_x", "512"}, {"profile", "sech"}, {"amplitude", "0.3"}, {"center", "1"}});
    Field f = make_profile(c);
    const int i = c.xgrid.nearest(2.5);
    CHECK(std::abs(f.values[i] - 0.3 / std::cosh(c.xgrid.x(i) - 1.0)) < 1e-15);

    const std::string p = tmp_path("profile.csv");
    write_field_csv(p, f);
    RunConfig e = parse_config({{"profile", "from-file"}, {"path", p}});
    CHECK(max_abs(make_profile(e).values - f.values) == 0.0);

    std::ofstream(tmp_path("bad_profile.csv")) << "x,re_u\n0,1\n";
    RunConfig bad = parse_config({{"profile", "from-file"}, {"path", tmp_path("bad_profile.csv")}});
    CHECK_THROWS_AS(make_profile(bad), IoError);
}

TEST_CASE("aliasing suggestion resolves the phase")
{
    SpectralGridParams gp;
    PhysParams p;
    const double t = 4.0;
    AliasingReport a = aliasing_check(make_spectral_grid(gp), gp, t, p);
    REQUIRE_FALSE(a.ok);
    CHECK(a.unresolved_radius > gp.z_min_inner);

    gp.z_ref = a.suggested_z_ref;
    AliasingReport b = aliasing_check(make_spectral_grid(gp), gp, t, p);
    CHECK(b.nodes_per_period > 0.9 * 8.0);
    CHECK(aliasing_check(make_spectral_grid(gp), gp, 0.0, p).ok);
}
