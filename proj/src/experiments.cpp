#include "hetnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "hetnet/association.hpp"
#include "hetnet/coverage.hpp"
#include "hetnet/montecarlo.hpp"

namespace hetnet
{
namespace
{

enum class Family
{
    AssocBrp,
    AssocRate,
    DecouplingBrp,
    SinrCcdf,
    RateCcdf,
    MmSnrCcdf,
    MmSinrCcdf,
    SinrPercentile,  // dB
    RatePercentile,  // b/s
    CrossingRatio,
};

struct Metric
{
    std::string name;
    Family family;
    Direction direction = Direction::DL;
    Tier tier = Tier::Scell;
    double coverage = 0.0;  // percentiles: P(X > x) = coverage
};

std::vector<Metric> build_metrics()
{
    std::vector<Metric> out;
    for (Direction d : {Direction::DL, Direction::UL})
    {
        const std::string sfx = d == Direction::DL ? "_dl" : "_ul";
        for (Tier t : {Tier::Scell, Tier::Mcell})
        {
            const std::string tier = t == Tier::Scell ? "scell" : "mcell";
            out.push_back({"assoc_brp_" + tier + sfx, Family::AssocBrp, d, t});
            out.push_back({"assoc_rate_" + tier + sfx, Family::AssocRate, d, t});
        }
        out.push_back({"sinr_ccdf" + sfx, Family::SinrCcdf, d});
        out.push_back({"rate_ccdf" + sfx, Family::RateCcdf, d});
        out.push_back({"mm_snr_ccdf" + sfx, Family::MmSnrCcdf, d});
        out.push_back({"mm_sinr_ccdf" + sfx, Family::MmSinrCcdf, d});
        out.push_back({"sinr_p05" + sfx, Family::SinrPercentile, d, Tier::Scell, 0.95});
        out.push_back({"sinr_p50" + sfx, Family::SinrPercentile, d, Tier::Scell, 0.5});
        out.push_back({"rate_p05" + sfx, Family::RatePercentile, d, Tier::Scell, 0.95});
        out.push_back({"rate_p50" + sfx, Family::RatePercentile, d, Tier::Scell, 0.5});
        out.push_back({"crossing_ratio" + sfx, Family::CrossingRatio, d});
    }
    out.push_back({"decoupling_gain_brp", Family::DecouplingBrp});
    return out;
}

const std::vector<Metric>& metric_table()
{
    static const std::vector<Metric> table = build_metrics();
    return table;
}

const Metric& find_metric(const std::string& name)
{
    for (const Metric& m : metric_table())
    {
        if (m.name == name)
        {
            return m;
        }
    }
    throw ExperimentError("unknown metric '" + name + "'");
}

bool is_threshold_key(const std::string& key)
{
    return key == "tau_db" || key == "rate";
}

bool is_swept_key(const std::string& key)
{
    if (key == "ratio_s_m" || is_threshold_key(key))
    {
        return true;
    }
    for (const auto& [name, unit] : config_fields())
    {
        if (name == key)
        {
            return true;
        }
    }
    return false;
}

//! Discrepancy between engines in the metric's natural scale.
double discrepancy(const Metric& m, double a, double b)
{
    switch (m.family)
    {
    case Family::RatePercentile:
    case Family::CrossingRatio:
        return std::abs(std::log10(a / b));  // decades
    default:
        return std::abs(a - b);
    }
}

Estimate exact(double v)
{
    return {v, v, v};
}

Estimate complement(const Estimate& e)
{
    return {1.0 - e.value, 1.0 - e.ci_high, 1.0 - e.ci_low};
}

//! Quantile with a distribution-free 95% interval from order statistics.
Estimate quantile_ci(std::vector<double> samples, double q)
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    const double half = 1.959963984540054 * std::sqrt(n * q * (1.0 - q));
    const auto clamp_index = [&](double k) {
        return static_cast<std::size_t>(std::clamp(k, 0.0, n - 1.0));
    };
    return {quantile(samples, q), samples[clamp_index(std::floor(n * q - half))],
            samples[clamp_index(std::ceil(n * q + half))]};
}

//! Per-point Monte Carlo results, cached by the parameter set they came from.
struct McCache
{
    std::map<std::string, EmpiricalAssoc> brp;
    std::map<std::string, EmpiricalAssoc> rate;
    std::map<std::string, std::vector<DropSample>> sim;
};

struct GridPoint
{
    SystemParams params;
    double tau = 1.0;
    double rate = 1e6;
};

class Evaluator
{
  public:
    explicit Evaluator(const ExperimentSpec& spec) : spec_(spec) {}

    Estimate analytic(const Metric& m, const GridPoint& p) const
    {
        switch (m.family)
        {
        case Family::AssocBrp:
        case Family::AssocRate: {
            const AssocResult r = assoc_analytic(
                m.direction, m.family == Family::AssocBrp ? Criterion::MaxBRP : Criterion::MaxRate,
                p.params);
            return exact(m.tier == Tier::Scell ? r.p_scell : r.p_mcell);
        }
        case Family::DecouplingBrp:
            return exact(std::abs(assoc_brp(Direction::UL, p.params).p_scell
                                  - assoc_brp(Direction::DL, p.params).p_scell));
        case Family::SinrCcdf:
            return exact(sinr_coverage(m.direction, p.tau, p.params).total());
        case Family::RateCcdf:
            return exact(rate_coverage(m.direction, p.rate, p.params).total());
        case Family::MmSnrCcdf:
        case Family::MmSinrCcdf: {
            // Scell-served coverage conditioned on Scell association.
            const double a_s = assoc_brp(m.direction, p.params).p_scell;
            if (!(a_s > 0.0))
            {
                throw std::domain_error("no Scell association at this point");
            }
            return exact(sinr_coverage(m.direction, p.tau, p.params).scell / a_s);
        }
        case Family::SinrPercentile:
            return exact(linear_to_db(percentile_sinr(m.direction, m.coverage, p.params)));
        case Family::RatePercentile:
            return exact(percentile_rate(m.direction, m.coverage, p.params));
        case Family::CrossingRatio: {
            std::vector<double> pm, ps;
            for (double r : spec_.ratio_grid)
            {
                SystemParams q = p.params;
                q.lambda_s = r * q.lambda_m;
                const AssocResult a = assoc_brp(m.direction, q);
                pm.push_back(a.p_mcell);
                ps.push_back(a.p_scell);
            }
            return exact(crossing_point(spec_.ratio_grid, pm, ps).x);
        }
        }
        throw ExperimentError("unhandled metric " + m.name);
    }

    Estimate monte_carlo(const Metric& m, const GridPoint& p)
    {
        switch (m.family)
        {
        case Family::AssocBrp:
        case Family::AssocRate: {
            const EmpiricalAssoc& e
                = assoc(p.params, m.family == Family::AssocBrp ? Criterion::MaxBRP
                                                               : Criterion::MaxRate);
            const Estimate s = m.direction == Direction::DL ? e.dl_scell : e.ul_scell;
            return m.tier == Tier::Scell ? s : complement(s);
        }
        case Family::DecouplingBrp:
            return assoc(p.params, Criterion::MaxBRP).decoupling_gain;
        case Family::SinrCcdf:
        case Family::RateCcdf: {
            const auto& s = sim(p.params);
            std::size_t hits = 0;
            for (const DropSample& d : s)
            {
                const LinkSample& l = link(d, m.direction);
                hits += m.family == Family::SinrCcdf ? l.sinr > p.tau : l.rate > p.rate;
            }
            return proportion_ci(hits, s.size());
        }
        case Family::MmSnrCcdf:
        case Family::MmSinrCcdf: {
            std::size_t served = 0, hits = 0;
            for (const DropSample& d : sim(p.params))
            {
                const LinkSample& l = link(d, m.direction);
                if (l.tier != Tier::Scell)
                {
                    continue;
                }
                ++served;
                hits += (m.family == Family::MmSnrCcdf ? l.snr : l.sinr) > p.tau;
            }
            if (served == 0)
            {
                throw std::domain_error("no Scell-served drops");
            }
            return proportion_ci(hits, served);
        }
        case Family::SinrPercentile:
        case Family::RatePercentile: {
            std::vector<double> xs;
            for (const DropSample& d : sim(p.params))
            {
                const LinkSample& l = link(d, m.direction);
                xs.push_back(m.family == Family::SinrPercentile ? linear_to_db(l.sinr) : l.rate);
            }
            // Exceeded with probability `coverage`, i.e. the (1 - coverage) quantile.
            return quantile_ci(std::move(xs), 1.0 - m.coverage);
        }
        case Family::CrossingRatio: {
            std::vector<double> pm, ps;
            for (double r : spec_.ratio_grid)
            {
                SystemParams q = p.params;
                q.lambda_s = r * q.lambda_m;
                const EmpiricalAssoc& e = assoc(q, Criterion::MaxBRP);
                const double s = (m.direction == Direction::DL ? e.dl_scell : e.ul_scell).value;
                pm.push_back(1.0 - s);
                ps.push_back(s);
            }
            return exact(crossing_point(spec_.ratio_grid, pm, ps).x);
        }
        }
        throw ExperimentError("unhandled metric " + m.name);
    }

  private:
    static std::string key(const SystemParams& p) { return emit_config(p).dump(); }

    const EmpiricalAssoc& assoc(const SystemParams& p, Criterion c)
    {
        auto& cache = c == Criterion::MaxBRP ? cache_.brp : cache_.rate;
        const std::string k = key(p);
        auto it = cache.find(k);
        if (it == cache.end())
        {
            it = cache.emplace(k, empirical_assoc(p, c, spec_.n_drops, spec_.seed)).first;
        }
        return it->second;
    }

    const std::vector<DropSample>& sim(const SystemParams& p)
    {
        const std::string k = key(p);
        auto it = cache_.sim.find(k);
        if (it == cache_.sim.end())
        {
            SimOptions options;
            options.mmwave_interference = spec_.mmwave_interference;
            it = cache_.sim.emplace(k, simulate(p, spec_.n_drops, spec_.seed, options)).first;
        }
        return it->second;
    }

    const ExperimentSpec& spec_;
    McCache cache_;
};

std::vector<double> parse_grid(const nlohmann::json& g)
{
    if (g.is_array())
    {
        return g.get<std::vector<double>>();
    }
    if (!g.is_object() || !g.contains("start") || !g.contains("stop"))
    {
        throw ExperimentError("grid must be a list or an object with start and stop");
    }
    const double start = g.at("start").get<double>();
    const double stop = g.at("stop").get<double>();
    std::vector<double> out;
    if (g.value("scale", std::string("linear")) == "log")
    {
        const int n = g.value("points", 0);
        if (n < 2 || !(start > 0.0) || !(stop > start))
        {
            throw ExperimentError("log grid needs 0 < start < stop and points >= 2");
        }
        for (int i = 0; i < n; ++i)
        {
            out.push_back(start * std::pow(stop / start, static_cast<double>(i) / (n - 1)));
        }
        return out;
    }
    if (g.contains("points"))
    {
        const int n = g.at("points").get<int>();
        if (n < 2)
        {
            throw ExperimentError("grid needs points >= 2");
        }
        for (int i = 0; i < n; ++i)
        {
            out.push_back(start + (stop - start) * i / (n - 1));
        }
        return out;
    }
    const double step = g.value("step", 0.0);
    if (!(step > 0.0))
    {
        throw ExperimentError("grid needs step > 0");
    }
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
    {
        out.push_back(start + step * static_cast<double>(i));
    }
    return out;
}

std::vector<double> range(double start, double stop, double step)
{
    return parse_grid({{"start", start}, {"stop", stop}, {"step", step}});
}

std::vector<double> log_range(double start, double stop, int points)
{
    return parse_grid({{"start", start}, {"stop", stop}, {"points", points}, {"scale", "log"}});
}

std::string csv_name(const Curve& c)
{
    std::string out = c.series.empty() ? "" : c.series + "__";
    return out + c.metric + "_" + (c.engine == Engine::Analytic ? "analytic" : "mc") + ".csv";
}

void write_curve(const std::filesystem::path& path, const std::string& swept, const Curve& c)
{
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << swept << ",estimate,ci_low,ci_high\n";
    char buf[128];
    for (const CurvePoint& p : c.points)
    {
        if (!p.error.empty())
        {
            continue;
        }
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", p.x, p.estimate.value,
                      p.estimate.ci_low, p.estimate.ci_high);
        out << buf;
    }
}

}  // namespace

const char* to_string(Engine engine)
{
    return engine == Engine::Analytic ? "analytic" : "monte_carlo";
}

Engine parse_engine(const std::string& name)
{
    if (name == "analytic")
    {
        return Engine::Analytic;
    }
    if (name == "mc" || name == "monte_carlo")
    {
        return Engine::MonteCarlo;
    }
    throw ExperimentError("unknown engine '" + name + "' (analytic, mc)");
}

const std::vector<std::string>& known_metrics()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const Metric& m : metric_table())
        {
            out.push_back(m.name);
        }
        std::sort(out.begin(), out.end());
        return out;
    }();
    return names;
}

void ExperimentSpec::validate() const
{
    if (name.empty())
    {
        throw ExperimentError("experiment needs a name");
    }
    if (!is_swept_key(swept))
    {
        throw ExperimentError(name + ": cannot sweep '" + swept + "'");
    }
    if (grid.empty())
    {
        throw ExperimentError(name + ": empty grid");
    }
    if (!std::is_sorted(grid.begin(), grid.end())
        || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    {
        throw ExperimentError(name + ": grid must be strictly increasing");
    }
    if (metrics.empty())
    {
        throw ExperimentError(name + ": no metrics");
    }
    for (const std::string& m : metrics)
    {
        if (find_metric(m).family == Family::CrossingRatio && ratio_grid.size() < 2)
        {
            throw ExperimentError(name + ": " + m + " needs a ratio_grid");
        }
    }
    if (engines.empty())
    {
        throw ExperimentError(name + ": no engines");
    }
    const bool mc = std::find(engines.begin(), engines.end(), Engine::MonteCarlo) != engines.end();
    if (mc && n_drops == 0)
    {
        throw ExperimentError(name + ": n_drops must be >= 1");
    }
    if (!(tolerance >= 0.0))
    {
        throw ExperimentError(name + ": tolerance must be >= 0");
    }
}

ExperimentSpec spec_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
    {
        throw ExperimentError("experiment spec must be a JSON object");
    }
    try
    {
        ExperimentSpec s;
        s.name = doc.at("name").get<std::string>();
        s.swept = doc.at("swept").get<std::string>();
        s.grid = parse_grid(doc.at("grid"));
        s.metrics = doc.at("metrics").get<std::vector<std::string>>();
        s.n_drops = doc.value("n_drops", s.n_drops);
        s.seed = doc.value("seed", s.seed);
        if (doc.contains("engines"))
        {
            s.engines.clear();
            for (const auto& e : doc.at("engines"))
            {
                s.engines.push_back(parse_engine(e.get<std::string>()));
            }
        }
        s.tolerance = doc.value("tolerance", s.tolerance);
        s.tau_db = doc.value("tau_db", s.tau_db);
        s.rate = doc.value("rate", s.rate);
        if (doc.contains("ratio_grid"))
        {
            s.ratio_grid = parse_grid(doc.at("ratio_grid"));
        }
        s.mmwave_interference = doc.value("mmwave_interference", false);
        s.base = doc.value("base", nlohmann::json::object());
        for (const auto& e : doc.value("series", nlohmann::json::array()))
        {
            s.series.push_back({e.at("name").get<std::string>(),
                                e.value("overrides", nlohmann::json::object())});
        }
        s.validate();
        return s;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ExperimentError(std::string("experiment spec: ") + e.what());
    }
}

nlohmann::json spec_to_json(const ExperimentSpec& spec)
{
    nlohmann::json doc{{"name", spec.name},         {"swept", spec.swept},
                       {"grid", spec.grid},         {"metrics", spec.metrics},
                       {"n_drops", spec.n_drops},   {"seed", spec.seed},
                       {"tolerance", spec.tolerance}, {"tau_db", spec.tau_db},
                       {"rate", spec.rate},         {"mmwave_interference", spec.mmwave_interference},
                       {"base", spec.base}};
    doc["engines"] = nlohmann::json::array();
    for (Engine e : spec.engines)
    {
        doc["engines"].push_back(e == Engine::Analytic ? "analytic" : "mc");
    }
    if (!spec.ratio_grid.empty())
    {
        doc["ratio_grid"] = spec.ratio_grid;
    }
    doc["series"] = nlohmann::json::array();
    for (const ExperimentSeries& s : spec.series)
    {
        doc["series"].push_back({{"name", s.name}, {"overrides", s.overrides}});
    }
    return doc;
}

std::vector<double> default_ratio_grid()
{
    return {1, 2, 5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
}

std::vector<std::string> builtin_experiment_names()
{
    return {"fig2a", "fig2b", "fig3", "fig4", "fig5", "fig7", "fig8", "fig9", "fig10"};
}

std::vector<ExperimentSpec> builtin_experiment(const std::string& name)
{
    const std::vector<std::string> assoc_brp{"assoc_brp_scell_dl", "assoc_brp_mcell_dl",
                                             "assoc_brp_scell_ul", "assoc_brp_mcell_ul"};
    const std::vector<Engine> both{Engine::Analytic, Engine::MonteCarlo};

    ExperimentSpec s;
    s.name = name;
    if (name == "fig2a" || name == "fig2b")
    {
        s.swept = "ratio_s_m";
        s.grid = default_ratio_grid();
        s.metrics = assoc_brp;
        s.metrics.push_back("decoupling_gain_brp");
        s.engines = both;
        s.base = {{"g_s_max", name == "fig2a" ? 23.0 : 0.0}};
        return {s};
    }
    if (name == "fig3" || name == "fig6")
    {
        s.swept = "g_s_max";
        s.grid = range(0.0, 30.0, 2.5);
        s.metrics = {"crossing_ratio_dl", "crossing_ratio_ul"};
        s.ratio_grid = log_range(0.01, 1e4, 121);
        return {s};
    }
    if (name == "fig4")
    {
        // Max-Rate association, with Max-BRP alongside for the difference.
        s.swept = "ratio_s_m";
        s.grid = default_ratio_grid();
        s.metrics = {"assoc_rate_scell_dl", "assoc_rate_mcell_dl", "assoc_rate_scell_ul",
                     "assoc_rate_mcell_ul"};
        s.metrics.insert(s.metrics.end(), assoc_brp.begin(), assoc_brp.end());
        s.engines = both;
        return {s};
    }
    if (name == "fig5")
    {
        ExperimentSpec sinr = s;
        sinr.name = "fig5a";
        sinr.swept = "tau_db";
        sinr.grid = range(-10.0, 30.0, 2.5);
        sinr.metrics = {"sinr_ccdf_dl", "sinr_ccdf_ul"};
        sinr.engines = both;
        ExperimentSpec rate = sinr;
        rate.name = "fig5b";
        rate.swept = "rate";
        rate.grid = log_range(1e5, 1e10, 21);
        rate.metrics = {"rate_ccdf_dl", "rate_ccdf_ul"};
        return {sinr, rate};
    }
    if (name == "fig7")
    {
        s.swept = "tau_db";
        s.grid = range(-20.0, 40.0, 2.5);
        s.metrics = {"mm_snr_ccdf_dl", "mm_sinr_ccdf_dl", "mm_snr_ccdf_ul", "mm_sinr_ccdf_ul"};
        s.engines = {Engine::MonteCarlo};
        s.mmwave_interference = true;
        s.series = {{"lambda_s_30", {{"lambda_s", 30.0}}}, {"lambda_s_200", {{"lambda_s", 200.0}}}};
        return {s};
    }
    if (name == "fig8" || name == "fig9")
    {
        const std::string p = name == "fig8" ? "p05" : "p50";
        s.swept = "t_s";
        s.grid = range(0.0, 60.0, 5.0);
        s.metrics = {"sinr_" + p + "_dl", "sinr_" + p + "_ul", "rate_" + p + "_dl",
                     "rate_" + p + "_ul"};
        s.engines = {Engine::MonteCarlo};
        s.base = {{"ul_bias_from_dl", true}};
        return {s};
    }
    if (name == "fig10")
    {
        s.swept = "t_s";
        s.grid = range(0.0, 60.0, 5.0);
        s.metrics = {"rate_p05_dl", "rate_p05_ul"};
        s.base = {{"ul_bias_from_dl", true}};
        s.series = {{"lambda_s_30", {{"lambda_s", 30.0}}},
                    {"lambda_s_50", {{"lambda_s", 50.0}}},
                    {"lambda_s_100", {{"lambda_s", 100.0}}}};
        return {s};
    }
    throw ExperimentError("unknown experiment '" + name + "'");
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec, const SystemParams& params,
                                 const std::filesystem::path& out_dir)
{
    spec.validate();
    std::vector<ExperimentSeries> series = spec.series;
    if (series.empty())
    {
        series.push_back({"", nlohmann::json::object()});
    }

    Evaluator eval(spec);
    ExperimentOutcome out;
    nlohmann::json comparisons = nlohmann::json::array();
    nlohmann::json failures = nlohmann::json::array();

    for (const ExperimentSeries& ser : series)
    {
        SystemParams base = params;
        for (const auto& [k, v] : spec.base.items())
        {
            apply_setting(base, k, v);
        }
        for (const auto& [k, v] : ser.overrides.items())
        {
            apply_setting(base, k, v);
        }

        std::vector<GridPoint> points;
        for (double x : spec.grid)
        {
            GridPoint p{base, db_to_linear(spec.tau_db), spec.rate};
            if (spec.swept == "ratio_s_m")
            {
                p.params.lambda_s = x * p.params.lambda_m;
            }
            else if (spec.swept == "tau_db")
            {
                p.tau = db_to_linear(x);
            }
            else if (spec.swept == "rate")
            {
                p.rate = x;
            }
            else
            {
                apply_setting(p.params, spec.swept, x);
            }
            p.params.validate();
            points.push_back(p);
        }

        for (const std::string& name : spec.metrics)
        {
            const Metric& m = find_metric(name);
            std::map<Engine, const Curve*> by_engine;
            for (Engine engine : spec.engines)
            {
                Curve c{ser.name, name, engine, {}};
                for (std::size_t i = 0; i < points.size(); ++i)
                {
                    CurvePoint cp;
                    cp.x = spec.grid[i];
                    try
                    {
                        cp.estimate = engine == Engine::Analytic ? eval.analytic(m, points[i])
                                                                 : eval.monte_carlo(m, points[i]);
                    }
                    catch (const std::exception& e)
                    {
                        cp.error = e.what();
                        failures.push_back({{"series", ser.name},
                                            {"metric", name},
                                            {"engine", to_string(engine)},
                                            {"x", cp.x},
                                            {"error", cp.error}});
                    }
                    c.points.push_back(cp);
                }
                out.curves.push_back(std::move(c));
            }
            for (const Curve& c : out.curves)
            {
                if (c.series == ser.name && c.metric == name)
                {
                    by_engine[c.engine] = &c;
                }
            }
            if (by_engine.size() != 2)
            {
                continue;
            }
            const Curve& a = *by_engine[Engine::Analytic];
            const Curve& b = *by_engine[Engine::MonteCarlo];
            double worst = 0.0;
            nlohmann::json flagged = nlohmann::json::array();
            for (std::size_t i = 0; i < a.points.size(); ++i)
            {
                if (!a.points[i].error.empty() || !b.points[i].error.empty())
                {
                    continue;
                }
                const double d
                    = discrepancy(m, a.points[i].estimate.value, b.points[i].estimate.value);
                worst = std::max(worst, d);
                if (d > spec.tolerance)
                {
                    flagged.push_back({{"x", a.points[i].x}, {"discrepancy", d}});
                }
            }
            out.passed = out.passed && flagged.empty();
            comparisons.push_back({{"series", ser.name},
                                   {"metric", name},
                                   {"max_discrepancy", worst},
                                   {"tolerance", spec.tolerance},
                                   {"flagged", flagged}});
        }
    }
    out.passed = out.passed && failures.empty();

    out.report = {{"experiment", spec.name},
                  {"spec", spec_to_json(spec)},
                  {"params", emit_config(params)},
                  {"comparisons", comparisons},
                  {"failures", failures},
                  {"passed", out.passed}};

    if (!out_dir.empty())
    {
        std::filesystem::create_directories(out_dir);
        for (const Curve& c : out.curves)
        {
            write_curve(out_dir / csv_name(c), spec.swept, c);
        }
        std::ofstream rep(out_dir / "report.json");
        rep << out.report.dump(2) << "\n";
    }
    return out;
}

Crossing crossing_point(const std::vector<double>& grid, const std::vector<double>& p_m,
                        const std::vector<double>& p_s)
{
    if (grid.size() != p_m.size() || grid.size() != p_s.size() || grid.empty())
    {
        throw ExperimentError("crossing_point: curves must share a nonempty grid");
    }
    std::optional<double> first;
    int changes = 0;
    // Sign changes between nonzero differences; zeros in between are touches
    // and the crossing is put at the first zero.
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const double d = p_s[i] - p_m[i];
        if (d == 0.0)
        {
            continue;
        }
        if (last)
        {
            const double d0 = p_s[*last] - p_m[*last];
            if ((d0 < 0.0) != (d < 0.0))
            {
                if (!first)
                {
                    first = *last + 1 == i
                                ? grid[*last] + (grid[i] - grid[*last]) * d0 / (d0 - d)
                                : grid[*last + 1];
                }
                ++changes;
            }
        }
        last = i;
    }
    if (!first)
    {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "no crossing: p_s - p_m runs from %.4g at %g to %.4g at %g",
                      p_s.front() - p_m.front(), grid.front(), p_s.back() - p_m.back(),
                      grid.back());
        throw ExperimentError(buf);
    }
    return {*first, changes > 1};
}

std::vector<DecouplingCell> decoupling_gain_sweep(const SystemParams& params,
                                                  const std::vector<double>& alpha_n,
                                                  const std::vector<double>& alpha_m,
                                                  const std::vector<double>& mu,
                                                  const std::vector<double>& ratios)
{
    if (ratios.empty())
    {
        throw ExperimentError("decoupling_gain_sweep: empty ratio grid");
    }
    std::vector<DecouplingCell> out;
    for (double an : alpha_n)
    {
        for (double am : alpha_m)
        {
            for (double m : mu)
            {
                DecouplingCell cell{an, am, m, -1.0, 0.0};
                for (double r : ratios)
                {
                    SystemParams p = params;
                    p.alpha_n = an;
                    p.alpha_m = am;
                    p.mu = m;
                    p.lambda_s = r * p.lambda_m;
                    p.validate();
                    const double g = std::abs(assoc_brp(Direction::UL, p).p_scell
                                              - assoc_brp(Direction::DL, p).p_scell);
                    if (g > cell.gain)
                    {
                        cell.gain = g;
                        cell.ratio_at_max = r;
                    }
                }
                out.push_back(cell);
            }
        }
    }
    return out;
}

void write_decoupling_csv(const std::filesystem::path& path,
                          const std::vector<DecouplingCell>& cells)
{
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "alpha_n,alpha_m,mu,gain,ratio_at_max\n";
    char buf[160];
    for (const DecouplingCell& c : cells)
    {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g\n", c.alpha_n, c.alpha_m,
                      c.mu, c.gain, c.ratio_at_max);
        out << buf;
    }
}

}  // namespace hetnet
