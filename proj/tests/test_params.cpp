#include <cmath>

#include "doctest.h"
#include "hetnet/params.hpp"

using namespace hetnet;

TEST_CASE("defaults")
{
    const SystemParams p;
    CHECK(p.lambda_m == doctest::Approx(5e-6));
    CHECK(p.lambda_s == doctest::Approx(5e-5));
    CHECK(p.w_s == 1e9);
    CHECK(p.p_s == doctest::Approx(1.0));
    CHECK(linear_to_db(p.g_s_max) == doctest::Approx(18.0));
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("load_config: units and defaults")
{
    const nlohmann::json doc = {{"lambda_m", 5.0},
                                {"W_s", "1 GHz"},
                                {"P_s", "30 dBm"},
                                {"p_m", {{"value", 39.810717055349734}, {"unit", "W"}}},
                                {"lambda_u", "2e-4 /m2"},
                                {"theta_s", "10 deg"},
                                {"mu", "0.2 km"},
                                {"t_s", 10.0},
                                {"noise_figure", "10 lin"}};
    const LoadedConfig c = load_config(doc);
    CHECK(c.warnings.empty());
    CHECK(c.params.lambda_m == doctest::Approx(5e-6));
    CHECK(c.params.w_s == doctest::Approx(1e9));
    CHECK(c.params.p_s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(watt_to_dbm(c.params.p_m) == doctest::Approx(46.0));
    CHECK(c.params.lambda_u == doctest::Approx(2e-4));
    CHECK(c.params.theta_s == doctest::Approx(10.0 * M_PI / 180.0));
    CHECK(c.params.mu == doctest::Approx(200.0));
    CHECK(c.params.t_s == doctest::Approx(10.0));
    CHECK(c.params.noise_figure == doctest::Approx(10.0));
}

TEST_CASE("load_config: errors and warnings")
{
    try
    {
        load_config({{"omega", 1.5}});
        FAIL("expected ConfigError");
    }
    catch (const ConfigError& e)
    {
        CHECK(e.field() == "omega");
    }
    CHECK_THROWS_AS(load_config({{"alpha_m", 2.0}}), ConfigError);
    CHECK_THROWS_AS(load_config({{"lambda_m", 0.0}}), ConfigError);
    CHECK_THROWS_AS(load_config({{"p_s", "30 furlongs"}}), ConfigError);
    CHECK_THROWS_AS(load_config(nlohmann::json::array()), ConfigError);
    CHECK_NOTHROW(load_config({{"lambda_s", 0.0}}));

    const LoadedConfig c = load_config({{"colour", "blue"}});
    REQUIRE(c.warnings.size() == 1);
    CHECK(c.warnings[0].find("colour") != std::string::npos);
}

TEST_CASE("emit_config round trip is lossless")
{
    SystemParams p;
    p.lambda_s = 123e-6;
    p.t_s = db_to_linear(37.0);
    p.ul_bias_from_dl = true;
    const SystemParams q = load_config(emit_config(p)).params;
    CHECK(q.lambda_s == p.lambda_s);
    CHECK(q.t_s == p.t_s);
    CHECK(q.p_m == p.p_m);
    CHECK(q.theta_s == p.theta_s);
    CHECK(q.ul_bias_from_dl);
    CHECK(emit_config(q) == emit_config(p));
}

TEST_CASE("derived constants")
{
    const SystemParams p;
    const DerivedConstants d = derive(p);
    // (c / (4 pi 2e9))^2 with c = 299792458 m/s.
    CHECK(d.beta_m == doctest::Approx(1.4228584142858625e-4).epsilon(1e-12));
    // Noise: -174 dBm/Hz + 10 log10(W) + 10 dB.
    CHECK(d.sigma2_m == doctest::Approx(7.962143411069939e-13).epsilon(1e-12));
    CHECK(d.sigma2_s == doctest::Approx(3.981071705534969e-11).epsilon(1e-12));

    // a_dl recomputed in dB: 30 - 46 + 18 + 20 log10(2/70) dB.
    const double a_dl_db = 30.0 - 46.0 + 18.0 + 20.0 * std::log10(2e9 / 70e9);
    CHECK(linear_to_db(d.a_dl) == doctest::Approx(a_dl_db).epsilon(1e-12));
    CHECK(d.a_dl == doctest::Approx(0.0012937903611927471).epsilon(1e-12));
    CHECK(d.a_ul == doctest::Approx(0.05150672199838314).epsilon(1e-12));
}

TEST_CASE("association weights coincide for matched power ratios")
{
    SystemParams p;
    p.p_um = p.p_m;
    p.p_us = p.p_s;
    const DerivedConstants d = derive(p);
    CHECK(d.a_dl / d.a_ul == doctest::Approx(1.0).epsilon(1e-15));

    SystemParams q;
    q.f_s = q.f_m;
    q.g_s_max = q.g_m;
    q.p_s = q.p_m;
    const DerivedConstants e = derive(q);
    CHECK(e.psi_s == doctest::Approx(e.psi_m));
    CHECK(e.a_dl == doctest::Approx(1.0));
}

TEST_CASE("UL biases can follow the DL biased received power")
{
    SystemParams p;
    p.t_s = db_to_linear(30.0);
    p.ul_bias_from_dl = true;
    const DerivedConstants d = derive(p);
    CHECK(d.t_s_ul == doctest::Approx(p.p_s * p.t_s / p.p_us));
    CHECK(d.t_m_ul == doctest::Approx(p.p_m * p.t_m / p.p_um));
    // Both directions then compare the same DL biased powers.
    CHECK(d.a_ul == doctest::Approx(d.a_dl).epsilon(1e-12));
}

TEST_CASE("apply_setting")
{
    SystemParams p;
    apply_setting(p, "G_S_MAX", 23.0);
    CHECK(linear_to_db(p.g_s_max) == doctest::Approx(23.0));
    CHECK_THROWS_AS(apply_setting(p, "nope", 1.0), ConfigError);
    CHECK_THROWS_AS(apply_setting(p, "ul_bias_from_dl", 1.0), ConfigError);
    CHECK(config_fields().size() >= 26);
}
