#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hetnet/association.hpp"
#include "hetnet/coverage.hpp"
#include "hetnet/montecarlo.hpp"

using namespace hetnet;

TEST_CASE("realizations are reproducible")
{
    const SystemParams p;
    const NetworkRealization a = sample_realization(p, 5, 17);
    const NetworkRealization b = sample_realization(p, 5, 17);
    REQUIRE(a.mcells.size() == b.mcells.size());
    REQUIRE(a.scells.size() == b.scells.size());
    REQUIRE(a.ues.size() == b.ues.size());
    for (std::size_t i = 0; i < a.mcells.size(); ++i)
    {
        CHECK(a.mcells[i].x == b.mcells[i].x);
        CHECK(a.mcells[i].y == b.mcells[i].y);
    }
    for (std::size_t i = 0; i < a.scells.size(); ++i)
    {
        CHECK(a.scells[i].pos.x == b.scells[i].pos.x);
        CHECK(a.scells[i].los_to_origin == b.scells[i].los_to_origin);
    }
    const NetworkRealization c = sample_realization(p, 6, 17);
    CHECK((c.mcells.size() != a.mcells.size() || c.mcells[0].x != a.mcells[0].x));
}

TEST_CASE("point counts are Poisson with mean lambda pi R^2")
{
    SystemParams p;
    SamplingOptions opts;
    opts.with_ues = false;
    const int seeds = 2000;
    double sum = 0.0, sum2 = 0.0, sum_s = 0.0;
    bool los_ok = true;
    for (int i = 0; i < seeds; ++i)
    {
        const NetworkRealization n = sample_realization(p, 1, static_cast<std::uint32_t>(i), opts);
        const double k = static_cast<double>(n.mcells.size());
        sum += k;
        sum2 += k * k;
        sum_s += static_cast<double>(n.scells.size());
        for (const ScellSite& s : n.scells)
        {
            los_ok = los_ok && (!s.los_to_origin || std::hypot(s.pos.x, s.pos.y) <= p.mu);
        }
    }
    const double mean = sum / seeds;
    const double expected = p.lambda_m * M_PI * 3000.0 * 3000.0;  // 141.37
    CHECK(expected == doctest::Approx(141.37).epsilon(1e-4));
    CHECK(std::abs(mean - expected) < 4.0 * std::sqrt(expected / seeds));
    // Poisson: variance equals the mean.
    CHECK((sum2 / seeds - mean * mean) / expected == doctest::Approx(1.0).epsilon(0.1));
    CHECK(sum_s / seeds / (sum / seeds) == doctest::Approx(10.0).epsilon(0.01));
    CHECK(los_ok);

    p.lambda_m *= 2.0;
    double doubled = 0.0;
    for (int i = 0; i < seeds; ++i)
    {
        doubled += static_cast<double>(
            sample_realization(p, 1, static_cast<std::uint32_t>(i), opts).mcells.size());
    }
    CHECK(doubled / sum == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("typical-UE association on hand-built networks")
{
    const SystemParams p;
    NetworkRealization net;
    net.mcells = {{5000.0, 0.0}};
    net.scells = {{{10.0, 0.0}, true}};
    CHECK(associate(net, Direction::DL, Criterion::MaxBRP, p).tier == Tier::Scell);

    // A far NLOS Scell loses to a near Mcell, unless it is heavily biased.
    NetworkRealization far;
    far.mcells = {{100.0, 0.0}};
    far.scells = {{{500.0, 0.0}, false}};
    CHECK(associate(far, Direction::DL, Criterion::MaxBRP, p).tier == Tier::Mcell);
    SystemParams biased = p;
    biased.t_s = db_to_linear(80.0);
    CHECK(associate(far, Direction::DL, Criterion::MaxBRP, biased).tier == Tier::Scell);

    NetworkRealization empty;
    CHECK_THROWS(associate(empty, Direction::DL, Criterion::MaxBRP, p));
}

TEST_CASE("empirical association")
{
    SystemParams p;
    const EmpiricalAssoc e = empirical_assoc(p, Criterion::MaxBRP, 4000, 3);
    CHECK(e.drops == 4000);
    CHECK(e.dl_scell.contains(assoc_brp(Direction::DL, p).p_scell));
    CHECK(e.ul_scell.contains(assoc_brp(Direction::UL, p).p_scell));
    CHECK(e.dl().p_mcell + e.dl().p_scell == 1.0);
    CHECK(e.ul_scell.value >= e.dl_scell.value);
    // Nested association regions: decoupled exactly when UL and DL differ.
    CHECK(e.decoupling_gain.value == doctest::Approx(e.ul_scell.value - e.dl_scell.value).epsilon(1e-12));

    SystemParams none = p;
    none.lambda_s = 0.0;
    CHECK(empirical_assoc(none, Criterion::MaxBRP, 200, 3).dl().p_mcell == 1.0);

    SystemParams same = p;
    same.p_um = same.p_m;
    same.p_us = same.p_s;
    CHECK(empirical_assoc(same, Criterion::MaxBRP, 500, 3).decoupling_gain.value == 0.0);

    SystemParams dense = p;
    dense.g_s_max = db_to_linear(23.0);
    dense.lambda_s = 40.0 * dense.lambda_m;
    CHECK(empirical_assoc(dense, Criterion::MaxBRP, 3000, 3).decoupling_gain.value > 0.20);
}

TEST_CASE("bias response is monotone on common random numbers")
{
    double prev = -1.0;
    for (double t : {0.0, 10.0, 20.0, 30.0, 40.0})
    {
        SystemParams p;
        p.t_s = db_to_linear(t);
        const double s = empirical_assoc(p, Criterion::MaxBRP, 1000, 8).dl_scell.value;
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("Max-Rate association reverses the decoupling direction")
{
    const SystemParams p;
    const EmpiricalAssoc e = empirical_assoc(p, Criterion::MaxRate, 1500, 4);
    CHECK(e.dl_scell.value > e.ul_scell.value);
    CHECK(e.dl_scell.contains(assoc_rate(Direction::DL, p).p_scell));
    CHECK(e.ul_scell.contains(assoc_rate(Direction::UL, p).p_scell));
}

TEST_CASE("minimum pathloss follows the analytic law")
{
    const SystemParams p;
    for (Tier tier : {Tier::Mcell, Tier::Scell})
    {
        const PathlossProcess proc(tier, p);
        const double ks = ks_distance(min_pathloss_samples(p, tier, 10000, 21),
                                      [&](double t) { return 1.0 - proc.ccdf(t); });
        // 99% critical value at n = 1e4 is about 0.0163.
        CHECK(ks < 0.0163);
    }
}

TEST_CASE("full simulation: link invariants")
{
    const SystemParams p;
    const auto samples = simulate(p, 300, 9);
    REQUIRE(samples.size() == 300);
    for (const DropSample& s : samples)
    {
        for (Direction d : {Direction::DL, Direction::UL})
        {
            const LinkSample& l = link(s, d);
            CHECK(l.load >= 1);
            CHECK(l.sinr <= l.snr * (1.0 + 1e-12));
            const double w = l.tier == Tier::Mcell ? p.w_m : p.w_s;
            CHECK(l.rate == doctest::Approx(w / l.load * std::log2(1.0 + l.sinr)).epsilon(1e-12));
            if (l.tier == Tier::Scell)
            {
                CHECK(l.gain == p.g_s_max);
                CHECK(l.sinr == l.snr);  // mmWave interference off
            }
        }
        CHECK(s.decoupled == (s.dl.tier != s.ul.tier));
    }

    const auto again = simulate(p, 300, 9);
    bool identical = true;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        identical = identical && std::memcmp(&samples[i].dl.sinr, &again[i].dl.sinr, sizeof(double)) == 0
                    && std::memcmp(&samples[i].ul.rate, &again[i].ul.rate, sizeof(double)) == 0;
    }
    CHECK(identical);
}

TEST_CASE("a lone Mcell has SINR equal to SNR")
{
    // Mean 0.085 Mcells in the disk; given at least one, one alone in ~96% of drops.
    SystemParams p;
    p.lambda_m = 3e-9;
    p.lambda_s = 0.0;
    SimOptions opts;
    opts.mcell_radius = opts.window_radius;
    std::size_t alone = 0;
    const auto samples = simulate(p, 200, 2, opts);
    for (const DropSample& s : samples)
    {
        CHECK(s.dl.tier == Tier::Mcell);
        CHECK(s.dl.sinr <= s.dl.snr);
        alone += s.dl.sinr == s.dl.snr;
    }
    CHECK(alone >= 180);
}

TEST_CASE("DL SINR coverage at 0 dB agrees with the analysis")
{
    const SystemParams p;
    const auto samples = simulate(p, 4000, 13);
    std::size_t hits = 0;
    for (const DropSample& s : samples)
    {
        hits += s.dl.sinr > 1.0;
    }
    // 99.9% two-sided band.
    const double n = static_cast<double>(samples.size());
    const double expect = sinr_coverage(Direction::DL, 1.0, p).total();
    CHECK(std::abs(hits / n - expect) < 3.29 * std::sqrt(expect * (1.0 - expect) / n));
}

TEST_CASE("mmWave interference barely moves the SINR at 30 per km^2")
{
    SystemParams p;
    p.lambda_s = 30e-6;
    SimOptions opts;
    opts.mmwave_interference = true;
    std::vector<double> gap;
    for (const DropSample& s : simulate(p, 1500, 6, opts))
    {
        if (s.dl.tier == Tier::Scell)
        {
            gap.push_back(std::abs(linear_to_db(s.dl.sinr) - linear_to_db(s.dl.snr)));
        }
    }
    REQUIRE(!gap.empty());
    CHECK(quantile(gap, 0.5) < 0.5);
}

TEST_CASE("bias sweep shares realizations across variants")
{
    const SystemParams p;
    const auto runs = simulate_bias_sweep(p, {0.0, 20.0}, 200, 4);
    REQUIRE(runs.size() == 2);
    std::size_t dl0 = 0, dl20 = 0;
    for (std::size_t i = 0; i < 200; ++i)
    {
        dl0 += runs[0][i].dl.tier == Tier::Scell;
        dl20 += runs[1][i].dl.tier == Tier::Scell;
        // A drop on a Scell without bias stays there with bias.
        if (runs[0][i].dl.tier == Tier::Scell)
        {
            CHECK(runs[1][i].dl.tier == Tier::Scell);
        }
    }
    CHECK(dl20 > dl0);

    SystemParams other = p;
    other.lambda_s *= 2.0;
    CHECK_THROWS(simulate_variants({p, other}, 10, 1));
}

TEST_CASE("CSV and summary")
{
    const SystemParams p;
    const auto samples = simulate(p, 50, 1);
    const auto path = std::filesystem::temp_directory_path() / "hetnet_samples_test.csv";
    write_samples_csv(path, samples);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "drop,direction,serving_tier,sinr_db,snr_db,rate_bps,load");
    int rows = 0;
    for (std::string line; std::getline(in, line);)
    {
        ++rows;
    }
    CHECK(rows == 100);
    std::filesystem::remove(path);

    const nlohmann::json s = summarize(samples);
    CHECK(s["drops"] == 50);
    CHECK(s.contains("dl"));
    CHECK(s["dl"]["p_scell"]["estimate"].get<double>() >= 0.0);
}
