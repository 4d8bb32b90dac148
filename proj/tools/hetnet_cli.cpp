// Command-line front end: analyze, simulate, experiment, accept.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hetnet/acceptance.hpp"
#include "hetnet/association.hpp"
#include "hetnet/coverage.hpp"
#include "hetnet/experiments.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/params.hpp"

using namespace hetnet;
namespace fs = std::filesystem;

namespace
{

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> drops;
    std::string out;
    std::string engines;
};

SystemParams load_params(const Common& c)
{
    if (c.config.empty())
    {
        return {};
    }
    LoadedConfig loaded = load_config_file(c.config);
    for (const std::string& w : loaded.warnings)
    {
        std::cerr << "warning: " << w << "\n";
    }
    return loaded.params;
}

std::vector<Engine> parse_engines(const std::string& list)
{
    std::vector<Engine> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (!item.empty())
        {
            out.push_back(parse_engine(item));
        }
    }
    return out;
}

nlohmann::json analyze(const SystemParams& p, double tau_db, double rate)
{
    nlohmann::json doc;
    doc["params"] = emit_config(p);
    for (Direction d : {Direction::DL, Direction::UL})
    {
        nlohmann::json& j = doc[to_string(d)];
        const AssocResult brp = assoc_brp(d, p);
        const AssocResult mr = assoc_rate(d, p);
        j["assoc_brp"] = {{"p_mcell", brp.p_mcell}, {"p_scell", brp.p_scell}};
        j["assoc_rate"] = {{"p_mcell", mr.p_mcell}, {"p_scell", mr.p_scell}};
        const TierCoverage s = sinr_coverage(d, db_to_linear(tau_db), p);
        j["sinr_coverage"]
            = {{"tau_db", tau_db}, {"mcell", s.mcell}, {"scell", s.scell}, {"total", s.total()}};
        const TierCoverage r = rate_coverage(d, rate, p);
        j["rate_coverage"]
            = {{"rate", rate}, {"mcell", r.mcell}, {"scell", r.scell}, {"total", r.total()}};
        const LoadModel loads = load_model(d, p);
        j["mean_load"] = {{"mcell", loads.n_bar_m}, {"scell", loads.n_bar_s}};
        for (auto [name, cov] : {std::pair{"p05", 0.95}, std::pair{"p50", 0.5}})
        {
            try
            {
                j[std::string("sinr_") + name + "_db"] = linear_to_db(percentile_sinr(d, cov, p));
                j[std::string("rate_") + name] = percentile_rate(d, cov, p);
            }
            catch (const std::domain_error& e)
            {
                j[std::string("percentile_") + name + "_error"] = e.what();
            }
        }
    }
    doc["decoupling_gain_brp"]
        = std::abs(doc[to_string(Direction::UL)]["assoc_brp"]["p_scell"].get<double>()
                   - doc[to_string(Direction::DL)]["assoc_brp"]["p_scell"].get<double>());
    return doc;
}

int run_decoupling(const SystemParams& p, const fs::path& out)
{
    const auto cells = decoupling_gain_sweep(p, {3.0, 3.5, 4.0}, {3.0, 3.5, 4.0},
                                             {100.0, 150.0, 200.0}, default_ratio_grid());
    fs::create_directories(out);
    write_decoupling_csv(out / "decoupling_gain.csv", cells);
    std::cout << "wrote " << (out / "decoupling_gain.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-tier sub-6GHz / mmWave HetNet association and coverage"};
    app.require_subcommand(1);

    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", c.config, "JSON parameter file")->check(CLI::ExistingFile);
        sub->add_option("--seed", c.seed, "RNG seed");
        sub->add_option("--drops", c.drops, "Monte Carlo drops");
        sub->add_option("--out", c.out, "output directory");
    };

    double tau_db = 0.0;
    double rate = 1e6;
    auto* analyze_cmd = app.add_subcommand("analyze", "single-point analytic results (JSON)");
    add_common(analyze_cmd);
    analyze_cmd->add_option("--tau-db", tau_db, "SINR threshold [dB]");
    analyze_cmd->add_option("--rate", rate, "rate threshold [b/s]");

    bool mm_interference = false;
    auto* simulate_cmd = app.add_subcommand("simulate", "single-point Monte Carlo run");
    add_common(simulate_cmd);
    simulate_cmd->add_flag("--mmwave-interference", mm_interference,
                           "include mmWave interference in Scell SINR");

    std::string target;
    bool list = false;
    auto* experiment_cmd
        = app.add_subcommand("experiment", "named sweep (fig2a ... fig10, decoupling) or spec file");
    add_common(experiment_cmd);
    experiment_cmd->add_option("name", target, "built-in name or JSON spec file");
    experiment_cmd->add_option("--engines", c.engines, "comma list: analytic,mc");
    experiment_cmd->add_flag("--list", list, "list built-in experiments and metrics");

    std::vector<int> only;
    auto* accept_cmd = app.add_subcommand("accept", "run the acceptance suite");
    add_common(accept_cmd);
    accept_cmd->add_option("--only", only, "criterion ids");

    CLI11_PARSE(app, argc, argv);

    try
    {
        const SystemParams params = load_params(c);

        if (*analyze_cmd)
        {
            const nlohmann::json doc = analyze(params, tau_db, rate);
            if (c.out.empty())
            {
                std::cout << doc.dump(2) << "\n";
            }
            else
            {
                fs::create_directories(c.out);
                std::ofstream(fs::path(c.out) / "analysis.json") << doc.dump(2) << "\n";
            }
            return 0;
        }

        if (*simulate_cmd)
        {
            SimOptions opts;
            opts.mmwave_interference = mm_interference;
            const auto samples = simulate(params, c.drops.value_or(2000), c.seed.value_or(1), opts);
            nlohmann::json summary = summarize(samples);
            summary["params"] = emit_config(params);
            if (c.out.empty())
            {
                std::cout << summary.dump(2) << "\n";
            }
            else
            {
                fs::create_directories(c.out);
                write_samples_csv(fs::path(c.out) / "samples.csv", samples);
                std::ofstream(fs::path(c.out) / "summary.json") << summary.dump(2) << "\n";
            }
            return 0;
        }

        if (*experiment_cmd)
        {
            if (list || target.empty())
            {
                std::cout << "experiments:";
                for (const std::string& n : builtin_experiment_names())
                {
                    std::cout << " " << n;
                }
                std::cout << " decoupling\nmetrics:";
                for (const std::string& m : known_metrics())
                {
                    std::cout << " " << m;
                }
                std::cout << "\n";
                return target.empty() && !list ? 2 : 0;
            }
            const fs::path out = c.out.empty() ? fs::path("results") / fs::path(target).stem()
                                               : fs::path(c.out);
            if (target == "decoupling")
            {
                return run_decoupling(params, out);
            }
            std::vector<ExperimentSpec> specs;
            if (fs::exists(target))
            {
                std::ifstream in(target);
                specs.push_back(spec_from_json(nlohmann::json::parse(in)));
            }
            else
            {
                specs = builtin_experiment(target);
            }
            bool passed = true;
            for (ExperimentSpec& spec : specs)
            {
                if (c.seed)
                {
                    spec.seed = *c.seed;
                }
                if (c.drops)
                {
                    spec.n_drops = *c.drops;
                }
                if (!c.engines.empty())
                {
                    spec.engines = parse_engines(c.engines);
                }
                const fs::path dir = specs.size() > 1 ? out / spec.name : out;
                const ExperimentOutcome result = run_experiment(spec, params, dir);
                std::cout << spec.name << ": " << (result.passed ? "pass" : "FAIL") << " ("
                          << result.curves.size() << " curves in " << dir.string() << ")\n";
                passed = passed && result.passed;
            }
            return passed ? 0 : 1;
        }

        if (*accept_cmd)
        {
            AcceptanceOptions opts;
            opts.seed = c.seed.value_or(opts.seed);
            opts.drops = c.drops.value_or(opts.drops);
            opts.only = only;
            const auto results = run_acceptance(opts, std::cout);
            const bool ok = std::all_of(results.begin(), results.end(),
                                        [](const CriterionResult& r) { return r.passed; });
            return ok ? 0 : 1;
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
