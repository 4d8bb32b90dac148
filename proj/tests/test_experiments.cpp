#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hetnet/association.hpp"
#include "hetnet/experiments.hpp"
#include "hetnet/montecarlo.hpp"

using namespace hetnet;
namespace fs = std::filesystem;

namespace
{

const Curve& find_curve(const ExperimentOutcome& out, const std::string& metric, Engine engine,
                        const std::string& series = "")
{
    for (const Curve& c : out.curves)
    {
        if (c.metric == metric && c.engine == engine && c.series == series)
        {
            return c;
        }
    }
    throw std::runtime_error("missing curve " + metric);
}

std::vector<double> values(const Curve& c)
{
    std::vector<double> v;
    for (const CurvePoint& p : c.points)
    {
        v.push_back(p.estimate.value);
    }
    return v;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("crossing point")
{
    const Crossing c = crossing_point({10.0, 20.0}, {0.8, 0.4}, {0.2, 0.6});
    // d goes -0.6 -> 0.2, so the zero is three quarters of the way.
    CHECK(c.x == doctest::Approx(17.5));
    CHECK_FALSE(c.multiple);

    CHECK_THROWS_AS(crossing_point({1.0, 2.0}, {0.5, 0.5}, {0.5, 0.5}), ExperimentError);
    CHECK_THROWS_AS(crossing_point({1.0, 2.0}, {0.9, 0.8}, {0.1, 0.2}), ExperimentError);
    CHECK_THROWS_AS(crossing_point({1.0}, {0.9, 0.8}, {0.1, 0.2}), ExperimentError);

    const Crossing m = crossing_point({1.0, 2.0, 3.0, 4.0}, {0.6, 0.4, 0.6, 0.4},
                                      {0.4, 0.6, 0.4, 0.6});
    CHECK(m.multiple);
    CHECK(m.x == doctest::Approx(1.5));

    // A touch at a grid point between opposite signs.
    CHECK(crossing_point({1.0, 2.0, 3.0}, {0.7, 0.5, 0.3}, {0.3, 0.5, 0.7}).x == 2.0);
}

TEST_CASE("spec parsing and validation")
{
    const nlohmann::json doc = {{"name", "t"},
                                {"swept", "t_s"},
                                {"grid", {{"start", 0}, {"stop", 10}, {"step", 2.5}}},
                                {"metrics", {"sinr_ccdf_dl"}},
                                {"engines", {"analytic", "mc"}},
                                {"series", {{{"name", "dense"}, {"overrides", {{"lambda_s", 100}}}}}}};
    const ExperimentSpec s = spec_from_json(doc);
    CHECK(s.grid == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});
    CHECK(s.engines.size() == 2);
    CHECK(s.series.at(0).name == "dense");

    const ExperimentSpec back = spec_from_json(spec_to_json(s));
    CHECK(back.grid == s.grid);
    CHECK(back.metrics == s.metrics);
    CHECK(back.series.at(0).overrides == s.series.at(0).overrides);

    nlohmann::json logd = doc;
    logd["grid"] = {{"start", 1e5}, {"stop", 1e9}, {"points", 5}, {"scale", "log"}};
    const ExperimentSpec l = spec_from_json(logd);
    REQUIRE(l.grid.size() == 5);
    CHECK(l.grid[2] == doctest::Approx(1e7));

    nlohmann::json bad = doc;
    bad["grid"] = nlohmann::json::array();
    CHECK_THROWS_AS(spec_from_json(bad), ExperimentError);
    bad = doc;
    bad["metrics"] = {"not_a_metric"};
    CHECK_THROWS_AS(spec_from_json(bad), ExperimentError);
    bad = doc;
    bad["swept"] = "warp_factor";
    CHECK_THROWS_AS(spec_from_json(bad), ExperimentError);
    bad = doc;
    bad["metrics"] = {"crossing_ratio_dl"};
    CHECK_THROWS_AS(spec_from_json(bad), ExperimentError);
    CHECK_THROWS_AS(parse_engine("abacus"), ExperimentError);

    for (const std::string& name : builtin_experiment_names())
    {
        for (const ExperimentSpec& e : builtin_experiment(name))
        {
            CHECK_NOTHROW(e.validate());
        }
    }
    CHECK(builtin_experiment("fig5").size() == 2);
    CHECK_THROWS_AS(builtin_experiment("fig99"), ExperimentError);
}

TEST_CASE("association sweep with a 23 dBi Scell gain")
{
    ExperimentSpec s = builtin_experiment("fig2a").at(0);
    s.engines = {Engine::Analytic};
    const ExperimentOutcome out = run_experiment(s, SystemParams{});
    CHECK(out.passed);
    const Curve& ul_s = find_curve(out, "assoc_brp_scell_ul", Engine::Analytic);
    const Curve& ul_m = find_curve(out, "assoc_brp_mcell_ul", Engine::Analytic);
    CHECK_NOTHROW(crossing_point(s.grid, values(ul_m), values(ul_s)));
    const Curve& gain = find_curve(out, "decoupling_gain_brp", Engine::Analytic);
    for (const CurvePoint& p : gain.points)
    {
        if (p.x == 40.0)
        {
            CHECK(p.estimate.value > 0.2);
        }
    }
}

TEST_CASE("UL crosses over before DL")
{
    ExperimentSpec s = builtin_experiment("fig3").at(0);
    s.grid = {18.0};
    const ExperimentOutcome out = run_experiment(s, SystemParams{});
    REQUIRE(out.passed);
    const double dl = find_curve(out, "crossing_ratio_dl", Engine::Analytic).points[0].estimate.value;
    const double ul = find_curve(out, "crossing_ratio_ul", Engine::Analytic).points[0].estimate.value;
    CHECK(ul < dl);
}

TEST_CASE("crossing ratio falls with the Scell gain and the DL/UL gap closes")
{
    ExperimentSpec s = builtin_experiment("fig3").at(0);
    s.grid = {0.0, 10.0, 20.0, 30.0};
    const ExperimentOutcome out = run_experiment(s, SystemParams{});
    REQUIRE(out.passed);
    const auto dl = values(find_curve(out, "crossing_ratio_dl", Engine::Analytic));
    const auto ul = values(find_curve(out, "crossing_ratio_ul", Engine::Analytic));
    for (std::size_t i = 1; i < dl.size(); ++i)
    {
        CHECK(dl[i] < dl[i - 1]);
        CHECK(ul[i] < ul[i - 1]);
        CHECK(dl[i] - ul[i] < dl[i - 1] - ul[i - 1]);
    }
}

TEST_CASE("experiment output files")
{
    ExperimentSpec s;
    s.name = "tiny";
    s.swept = "ratio_s_m";
    s.grid = {5.0, 10.0};
    s.metrics = {"assoc_brp_scell_dl", "sinr_ccdf_ul"};
    s.engines = {Engine::Analytic, Engine::MonteCarlo};
    s.n_drops = 150;
    s.seed = 3;
    s.tolerance = 1.0;
    const fs::path dir = fs::temp_directory_path() / "hetnet_experiment_test";
    fs::remove_all(dir);
    const ExperimentOutcome a = run_experiment(s, SystemParams{}, dir / "a");
    const ExperimentOutcome b = run_experiment(s, SystemParams{}, dir / "b");
    CHECK(a.passed);
    for (const char* f : {"assoc_brp_scell_dl_analytic.csv", "assoc_brp_scell_dl_mc.csv",
                          "sinr_ccdf_ul_analytic.csv", "sinr_ccdf_ul_mc.csv"})
    {
        const std::string text = slurp(dir / "a" / f);
        CHECK(text.rfind("ratio_s_m,estimate,ci_low,ci_high\n", 0) == 0);
        CHECK(text == slurp(dir / "b" / f));
        std::istringstream rows(text);
        std::string line;
        std::getline(rows, line);
        double prev = -1e300;
        while (std::getline(rows, line))
        {
            const double x = std::stod(line.substr(0, line.find(',')));
            CHECK(x > prev);
            prev = x;
        }
    }
    const nlohmann::json report = nlohmann::json::parse(slurp(dir / "a" / "report.json"));
    REQUIRE(report["comparisons"].size() == 2);
    CHECK(report["comparisons"][0].contains("max_discrepancy"));
    CHECK(report["passed"] == true);
    fs::remove_all(dir);

    // A tight tolerance flags the points and fails the run without throwing.
    s.tolerance = 0.0;
    CHECK_FALSE(run_experiment(s, SystemParams{}).passed);
}

TEST_CASE("decoupling gain over exponents and LOS radius")
{
    const SystemParams p;
    const auto ratios = default_ratio_grid();
    const auto cells = decoupling_gain_sweep(p, {4.0}, {3.0}, {100.0, 200.0}, ratios);
    REQUIRE(cells.size() == 2);
    CHECK(cells[1].gain >= cells[0].gain);

    // With one exponent everywhere both processes scale as sqrt(t).
    SystemParams flat = p;
    flat.alpha_l = 4.0;
    const DerivedConstants k = derive(flat);
    const auto one = decoupling_gain_sweep(flat, {4.0}, {4.0}, {200.0}, {10.0});
    const double r = 10.0;
    const double expect = std::abs(r * std::sqrt(k.a_ul) / (r * std::sqrt(k.a_ul) + 1.0)
                                   - r * std::sqrt(k.a_dl) / (r * std::sqrt(k.a_dl) + 1.0));
    CHECK(one.at(0).gain == doctest::Approx(expect).epsilon(1e-6));

    // The analytic maximum for alpha_n = 4, mu = 200 sits inside the MC interval.
    SystemParams at = p;
    at.lambda_s = cells[1].ratio_at_max * at.lambda_m;
    const EmpiricalAssoc e = empirical_assoc(at, Criterion::MaxBRP, 4000, 12);
    CHECK(e.decoupling_gain.contains(cells[1].gain));
}
