#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "params.hpp"
#include "statistics.hpp"

namespace hetnet
{

enum class Engine
{
    Analytic,
    MonteCarlo,
};

const char* to_string(Engine engine);

//! Accepts "analytic", "mc" and "monte_carlo".
Engine parse_engine(const std::string& name);

class ExperimentError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! One curve family inside an experiment, e.g. a Scell density.
struct ExperimentSeries
{
    std::string name;
    nlohmann::json overrides = nlohmann::json::object();
};

/*!
 * A named parameter sweep.
 *
 * `swept` is any config key (grid values in that key's default unit, so dB
 * for biases and gains, /km^2 for densities) or one of the pseudo keys
 * ratio_s_m (lambda_s / lambda_m), tau_db (SINR threshold) and rate
 * (rate threshold, b/s).
 */
struct ExperimentSpec
{
    std::string name;
    std::string swept;
    std::vector<double> grid;
    std::vector<std::string> metrics;
    std::size_t n_drops = 2000;
    std::uint64_t seed = 1;
    std::vector<Engine> engines{Engine::Analytic};
    double tolerance = 0.03;  //!< max engine discrepancy, in the metric's units

    double tau_db = 0.0;  //!< threshold for CCDF metrics when tau_db is not swept
    double rate = 1e6;    //!< threshold for rate CCDF metrics when rate is not swept
    std::vector<double> ratio_grid;  //!< density ratios for crossing_ratio metrics
    bool mmwave_interference = false;

    nlohmann::json base = nlohmann::json::object();  //!< applied before series and sweep
    std::vector<ExperimentSeries> series;           //!< empty means one unnamed series

    //! Throws ExperimentError.
    void validate() const;
};

/*!
 * Parse a spec. "grid" is either a list or {"start", "stop", "step"} or
 * {"start", "stop", "points", "scale": "log"}.
 */
ExperimentSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const ExperimentSpec& spec);

std::vector<std::string> builtin_experiment_names();

//! A built-in name may expand to several sweeps (fig5 is SINR and rate).
std::vector<ExperimentSpec> builtin_experiment(const std::string& name);

const std::vector<std::string>& known_metrics();

struct CurvePoint
{
    double x = 0.0;
    Estimate estimate;
    std::string error;  //!< nonempty when the engine failed at this point
};

struct Curve
{
    std::string series;
    std::string metric;
    Engine engine = Engine::Analytic;
    std::vector<CurvePoint> points;
};

struct ExperimentOutcome
{
    std::vector<Curve> curves;
    nlohmann::json report;
    bool passed = true;
};

/*!
 * Evaluate every (series, grid point, metric, engine).
 *
 * Monte Carlo points all use the experiment seed, so curves are drawn on
 * common random numbers. Failures are recorded per point and the run goes
 * on. With a nonempty out_dir, writes one CSV per (series, metric, engine)
 * and report.json.
 */
ExperimentOutcome run_experiment(const ExperimentSpec& spec, const SystemParams& params,
                                 const std::filesystem::path& out_dir = {});

struct Crossing
{
    double x = 0.0;
    bool multiple = false;  //!< more than one sign change; x is the first
};

/*!
 * Where p_s - p_m changes sign, by linear interpolation of both curves.
 *
 * Throws ExperimentError when there is no sign change.
 */
Crossing crossing_point(const std::vector<double>& grid, const std::vector<double>& p_m,
                        const std::vector<double>& p_s);

struct DecouplingCell
{
    double alpha_n = 0.0;
    double alpha_m = 0.0;
    double mu = 0.0;
    double gain = 0.0;          //!< max over the ratio grid of |A_ul,s - A_dl,s|
    double ratio_at_max = 0.0;  //!< lambda_s / lambda_m where it occurs
};

//! Analytic Max-BRP decoupling gain over a (alpha_n, alpha_m, mu) grid.
std::vector<DecouplingCell> decoupling_gain_sweep(const SystemParams& params,
                                                  const std::vector<double>& alpha_n,
                                                  const std::vector<double>& alpha_m,
                                                  const std::vector<double>& mu,
                                                  const std::vector<double>& ratios);

void write_decoupling_csv(const std::filesystem::path& path,
                          const std::vector<DecouplingCell>& cells);

//! 1, 2, 5, 10, ..., 100: the density ratios used for association curves.
std::vector<double> default_ratio_grid();

}  // namespace hetnet
