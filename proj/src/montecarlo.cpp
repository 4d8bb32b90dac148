#include "hetnet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "hetnet/rng.hpp"

namespace hetnet
{

namespace
{
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
constexpr int kMaxAttempts = 1000;

// Fading stream slots: (slot, BS index) identifies one link of a drop.
enum FadingSlot : std::uint32_t
{
    kDlMcell = 0,
    kDlScell = 1,
    kUlMcellInterferer = 2,
    kUlMcellServing = 3,
    kUlScellServing = 4,
    kUlScellInterferer = 5,
};

enum GainSlot : std::uint32_t
{
    kDlGain = 0,
    kUlGain = 1,
};

inline double pathloss_of(double d2, double alpha)
{
    // Integer exponents dominate in practice; pow() is the hot spot otherwise.
    if (alpha == 2.0)
    {
        return d2;
    }
    if (alpha == 3.0)
    {
        return d2 * std::sqrt(d2);
    }
    if (alpha == 4.0)
    {
        return d2 * d2;
    }
    return std::pow(d2, 0.5 * alpha);
}

double fading(std::uint64_t seed, std::uint32_t drop, std::uint32_t slot, std::uint32_t bs)
{
    return -std::log(hashed_uniform(seed, drop, Stream::Fading, slot, bs));
}

double interferer_gain(const SystemParams& p, std::uint64_t seed, std::uint32_t drop,
                       std::uint32_t slot, std::uint32_t bs)
{
    // A uniformly oriented beam hits the main lobe with probability theta/(2 pi).
    const bool main_lobe
        = hashed_uniform(seed, drop, Stream::Gain, slot, bs) < p.theta_s / (2.0 * kPi);
    return main_lobe ? p.g_s_max : p.g_s_min;
}

std::vector<Point> draw_disk(double density, double radius, std::uint64_t seed,
                             std::uint32_t drop, std::uint32_t stream)
{
    std::vector<Point> pts;
    if (density <= 0.0)
    {
        return pts;
    }
    Philox gen(seed, drop, stream);
    std::poisson_distribution<long> count(density * kPi * radius * radius);
    const long n = count(gen);
    pts.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
    {
        const double r = radius * std::sqrt(gen.uniform());
        const double theta = 2.0 * kPi * gen.uniform();
        pts.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return pts;
}

double log2_1p(double x)
{
    return std::log1p(x) / std::log(2.0);
}

struct Nearest
{
    std::uint32_t index = kNone;
    double pathloss = INFINITY;
};

Nearest origin_mcell(const NetworkRealization& net, const SystemParams& p)
{
    Nearest out;
    double best = INFINITY;
    for (std::size_t j = 0; j < net.mcells.size(); ++j)
    {
        const double d2 = distance2(net.mcells[j], {});
        if (d2 < best)
        {
            best = d2;
            out.index = static_cast<std::uint32_t>(j);
        }
    }
    if (out.index != kNone)
    {
        out.pathloss = pathloss_of(best, p.alpha_m);
    }
    return out;
}

Nearest origin_scell(const NetworkRealization& net, const SystemParams& p)
{
    // Pathloss is monotone in distance within each of the LOS and NLOS classes.
    double best_los = INFINITY;
    double best_nlos = INFINITY;
    std::uint32_t k_los = kNone;
    std::uint32_t k_nlos = kNone;
    for (std::size_t k = 0; k < net.scells.size(); ++k)
    {
        const double d2 = distance2(net.scells[k].pos, {});
        if (net.scells[k].los_to_origin)
        {
            if (d2 < best_los)
            {
                best_los = d2;
                k_los = static_cast<std::uint32_t>(k);
            }
        }
        else if (d2 < best_nlos)
        {
            best_nlos = d2;
            k_nlos = static_cast<std::uint32_t>(k);
        }
    }
    Nearest out;
    if (k_los != kNone)
    {
        out = {k_los, pathloss_of(best_los, p.alpha_l)};
    }
    if (k_nlos != kNone)
    {
        const double pl = pathloss_of(best_nlos, p.alpha_n);
        if (pl < out.pathloss)
        {
            out = {k_nlos, pl};
        }
    }
    return out;
}

// Best Scell for an arbitrary receiver, with LOS marks drawn per link.
Nearest best_scell(const SystemParams& p, std::uint64_t seed, std::uint32_t drop,
                   const SpatialGrid& grid, Point q, std::uint32_t receiver)
{
    Nearest out;
    if (grid.empty())
    {
        return out;
    }
    const SpatialGrid::Hit hit = grid.nearest(q);
    out.index = static_cast<std::uint32_t>(hit.index);
    out.pathloss = scell_pathloss(p, seed, drop, receiver, out.index, hit.d2);
    if (p.omega <= 0.0)
    {
        return out;
    }
    // Only a closer-in-pathloss LOS Scell can beat the nearest one.
    const double reach = std::min(p.mu, std::pow(out.pathloss, 1.0 / p.alpha_l));
    const std::uint32_t nearest = out.index;
    grid.for_each_within(q, reach, [&](std::size_t k, double d2) {
        if (k == nearest)
        {
            return;
        }
        const double pl = pathloss_of(d2, p.alpha_l);
        if (pl < out.pathloss
            && hashed_uniform(seed, drop, Stream::Los, receiver, static_cast<std::uint32_t>(k))
                   < p.omega)
        {
            out = {static_cast<std::uint32_t>(k), pl};
        }
    });
    return out;
}

std::vector<Point> scell_positions(const NetworkRealization& net)
{
    std::vector<Point> out;
    out.reserve(net.scells.size());
    for (const ScellSite& s : net.scells)
    {
        out.push_back(s.pos);
    }
    return out;
}

/*
 * UL interferer of a Mcell beyond the UE window, which has no sampled UEs.
 * The UE sits at its BS (an offset of one cell radius is a second-order effect
 * at that range) and its own pathloss is drawn from f_m for power control.
 */
struct FarInterferer
{
    Point pos;
    double own_pathloss;
};

bool beyond_ue_window(const NetworkRealization& net, Point bs)
{
    return distance2(bs, {}) > net.window_radius * net.window_radius;
}

FarInterferer far_interferer(const NetworkRealization& net, const SystemParams& p,
                             std::uint32_t j)
{
    const double u = hashed_uniform(net.seed, net.drop, Stream::Interferer, j, 0);
    return {net.mcells[j], std::pow(-std::log(u) / (kPi * p.lambda_m), 0.5 * p.alpha_m)};
}

// UL Mcell SIR of the typical UE with one interferer per other Voronoi cell.
double ul_mcell_sir_voronoi(const NetworkRealization& net, const SystemParams& p,
                            const Nearest& m0)
{
    if (net.ues.empty())
    {
        throw std::invalid_argument("associate: UL Max-Rate needs a realization with UEs");
    }
    const SpatialGrid grid(net.mcells, net.mcell_radius);
    std::vector<std::uint32_t> pick(net.mcells.size(), kNone);
    std::vector<double> pick_key(net.mcells.size(), INFINITY);
    std::vector<double> pick_pl(net.mcells.size(), 0.0);
    for (std::size_t i = 0; i < net.ues.size(); ++i)
    {
        const SpatialGrid::Hit hit = grid.nearest(net.ues[i]);
        const double key = hashed_uniform(net.seed, net.drop, Stream::Priority,
                                          static_cast<std::uint32_t>(i), 0);
        if (key < pick_key[hit.index])
        {
            pick_key[hit.index] = key;
            pick[hit.index] = static_cast<std::uint32_t>(i);
            pick_pl[hit.index] = pathloss_of(hit.d2, p.alpha_m);
        }
    }
    const Point serving = net.mcells[m0.index];
    double interference = 0.0;
    for (std::size_t j = 0; j < net.mcells.size(); ++j)
    {
        if (j == m0.index)
        {
            continue;
        }
        Point where;
        double own = 0.0;
        if (pick[j] != kNone)
        {
            where = net.ues[pick[j]];
            own = pick_pl[j];
        }
        else if (beyond_ue_window(net, net.mcells[j]))
        {
            const FarInterferer far = far_interferer(net, p, static_cast<std::uint32_t>(j));
            where = far.pos;
            own = far.own_pathloss;
        }
        else
        {
            continue;
        }
        const double t = pathloss_of(distance2(where, serving), p.alpha_m);
        interference += std::pow(own, p.epsilon)
                        * fading(net.seed, net.drop, kUlMcellInterferer,
                                 static_cast<std::uint32_t>(j))
                        / t;
    }
    const double signal = std::pow(m0.pathloss, p.epsilon)
                          * fading(net.seed, net.drop, kUlMcellServing, m0.index) / m0.pathloss;
    return interference > 0.0 ? signal / interference : INFINITY;
}

double dl_mcell_sir(const NetworkRealization& net, const SystemParams& p, const Nearest& m0)
{
    double interference = 0.0;
    for (std::size_t j = 0; j < net.mcells.size(); ++j)
    {
        if (j == m0.index)
        {
            continue;
        }
        interference += fading(net.seed, net.drop, kDlMcell, static_cast<std::uint32_t>(j))
                        / pathloss_of(distance2(net.mcells[j], {}), p.alpha_m);
    }
    const double signal = fading(net.seed, net.drop, kDlMcell, m0.index) / m0.pathloss;
    return interference > 0.0 ? signal / interference : INFINITY;
}

void check_shared_geometry(const std::vector<SystemParams>& variants)
{
    if (variants.empty())
    {
        throw std::invalid_argument("simulate_variants: no variants");
    }
    const SystemParams& b = variants.front();
    for (const SystemParams& v : variants)
    {
        v.validate();
        if (v.lambda_m != b.lambda_m || v.lambda_s != b.lambda_s || v.lambda_u != b.lambda_u
            || v.alpha_m != b.alpha_m || v.alpha_l != b.alpha_l || v.alpha_n != b.alpha_n
            || v.omega != b.omega || v.mu != b.mu || v.epsilon != b.epsilon)
        {
            throw std::invalid_argument(
                "simulate_variants: variants must share densities, exponents, blockage and "
                "epsilon");
        }
    }
}

struct UeState
{
    std::uint32_t mcell = kNone;
    double l_m = INFINITY;
    std::uint32_t scell = kNone;
    double l_s = INFINITY;
    double key = 1.0;
};

std::vector<DropSample> simulate_drop(const std::vector<SystemParams>& variants,
                                      std::uint64_t seed, std::uint32_t drop,
                                      const SimOptions& options)
{
    const SystemParams& base = variants.front();
    const NetworkRealization net
        = sample_realization(base, seed, drop, {options.window_radius, options.mcell_radius, true});
    const double R = options.window_radius;
    const SpatialGrid grid_m(net.mcells, net.mcell_radius);
    const SpatialGrid grid_s(scell_positions(net), R);

    std::vector<UeState> ues(net.ues.size());
    for (std::size_t i = 0; i < net.ues.size(); ++i)
    {
        UeState& u = ues[i];
        const SpatialGrid::Hit hm = grid_m.nearest(net.ues[i]);
        u.mcell = static_cast<std::uint32_t>(hm.index);
        u.l_m = pathloss_of(hm.d2, base.alpha_m);
        const Nearest s = best_scell(base, seed, drop, grid_s, net.ues[i],
                                     static_cast<std::uint32_t>(i));
        u.scell = s.index;
        u.l_s = s.pathloss;
        u.key = hashed_uniform(seed, drop, Stream::Priority, static_cast<std::uint32_t>(i), 0);
    }
    const Nearest m0 = origin_mcell(net, base);
    const Nearest s0 = origin_scell(net, base);

    // Variant-independent DL sums of fading / pathloss.
    double dl_m_total = 0.0;
    for (std::size_t j = 0; j < net.mcells.size(); ++j)
    {
        if (j != m0.index)
        {
            dl_m_total += fading(seed, drop, kDlMcell, static_cast<std::uint32_t>(j))
                          / pathloss_of(distance2(net.mcells[j], {}), base.alpha_m);
        }
    }
    const double h_dl_m = fading(seed, drop, kDlMcell, m0.index);
    const double h_dl_s = s0.index != kNone ? fading(seed, drop, kDlScell, s0.index) : 0.0;
    const double h_ul_m = fading(seed, drop, kUlMcellServing, m0.index);
    const double h_ul_s = s0.index != kNone ? fading(seed, drop, kUlScellServing, s0.index) : 0.0;

    std::vector<double> scell_pl_origin;
    if (options.mmwave_interference)
    {
        scell_pl_origin.resize(net.scells.size());
        for (std::size_t k = 0; k < net.scells.size(); ++k)
        {
            const double d2 = distance2(net.scells[k].pos, {});
            scell_pl_origin[k]
                = pathloss_of(d2, net.scells[k].los_to_origin ? base.alpha_l : base.alpha_n);
        }
    }

    std::vector<DropSample> out(variants.size());
    std::vector<std::uint32_t> dl_load_m, dl_load_s, ul_load_m, ul_load_s, pick_m, pick_s;
    std::vector<double> key_m, key_s;
    for (std::size_t v = 0; v < variants.size(); ++v)
    {
        const SystemParams& p = variants[v];
        const DerivedConstants d = derive(p);

        dl_load_m.assign(net.mcells.size(), 0);
        ul_load_m.assign(net.mcells.size(), 0);
        dl_load_s.assign(net.scells.size(), 0);
        ul_load_s.assign(net.scells.size(), 0);
        pick_m.assign(net.mcells.size(), kNone);
        pick_s.assign(net.scells.size(), kNone);
        key_m.assign(net.mcells.size(), INFINITY);
        key_s.assign(net.scells.size(), INFINITY);
        for (std::size_t i = 0; i < ues.size(); ++i)
        {
            const UeState& u = ues[i];
            const bool dl_s = u.scell != kNone && u.l_s < d.a_dl * u.l_m;
            const bool ul_s = u.scell != kNone && u.l_s < d.a_ul * u.l_m;
            ++(dl_s ? dl_load_s[u.scell] : dl_load_m[u.mcell]);
            ++(ul_s ? ul_load_s[u.scell] : ul_load_m[u.mcell]);
            const std::uint32_t cell = ul_s ? u.scell : u.mcell;
            auto& keys = ul_s ? key_s : key_m;
            auto& pick = ul_s ? pick_s : pick_m;
            if (u.key < keys[cell])
            {
                keys[cell] = u.key;
                pick[cell] = static_cast<std::uint32_t>(i);
            }
        }

        DropSample& sample = out[v];
        const bool has_s = s0.index != kNone;

        // Downlink.
        LinkSample& dl = sample.dl;
        if (has_s && s0.pathloss < d.a_dl * m0.pathloss)
        {
            const double signal = p.p_s * d.psi_s * h_dl_s / s0.pathloss;
            dl = {Tier::Scell, s0.pathloss, h_dl_s, p.g_s_max, 0.0, signal / d.sigma2_s, 0.0,
                  dl_load_s[s0.index] + 1};
            double interference = 0.0;
            if (options.mmwave_interference)
            {
                for (std::size_t k = 0; k < net.scells.size(); ++k)
                {
                    if (k == s0.index)
                    {
                        continue;
                    }
                    const auto kk = static_cast<std::uint32_t>(k);
                    interference += p.p_s * interferer_gain(p, seed, drop, kDlGain, kk) * d.beta_s
                                    * fading(seed, drop, kDlScell, kk) / scell_pl_origin[k];
                }
            }
            dl.sinr = signal / (interference + d.sigma2_s);
            dl.rate = p.w_s / dl.load * log2_1p(dl.sinr);
        }
        else
        {
            const double scale = p.p_m * d.psi_m;
            const double signal = scale * h_dl_m / m0.pathloss;
            dl = {Tier::Mcell, m0.pathloss, h_dl_m, p.g_m, signal / (scale * dl_m_total + d.sigma2_m),
                  signal / d.sigma2_m, 0.0, dl_load_m[m0.index] + 1};
            dl.rate = p.w_m / dl.load * log2_1p(dl.sinr);
        }

        // Uplink, with transmit power P L^epsilon.
        LinkSample& ul = sample.ul;
        if (has_s && s0.pathloss < d.a_ul * m0.pathloss)
        {
            const double signal
                = p.p_us * std::pow(s0.pathloss, p.epsilon) * d.psi_s * h_ul_s / s0.pathloss;
            ul = {Tier::Scell, s0.pathloss, h_ul_s, p.g_s_max, 0.0, signal / d.sigma2_s, 0.0,
                  ul_load_s[s0.index] + 1};
            double interference = 0.0;
            if (options.mmwave_interference)
            {
                const Point serving = net.scells[s0.index].pos;
                for (std::size_t k = 0; k < net.scells.size(); ++k)
                {
                    if (k == s0.index || pick_s[k] == kNone)
                    {
                        continue;
                    }
                    const auto kk = static_cast<std::uint32_t>(k);
                    const std::uint32_t i = pick_s[k];
                    const double t = scell_pathloss(p, seed, drop, i, s0.index,
                                                    distance2(net.ues[i], serving));
                    interference += p.p_us * std::pow(ues[i].l_s, p.epsilon)
                                    * interferer_gain(p, seed, drop, kUlGain, kk) * d.beta_s
                                    * fading(seed, drop, kUlScellInterferer, kk) / t;
                }
            }
            ul.sinr = signal / (interference + d.sigma2_s);
            ul.rate = p.w_s / ul.load * log2_1p(ul.sinr);
        }
        else
        {
            const Point serving = net.mcells[m0.index];
            const double signal
                = p.p_um * std::pow(m0.pathloss, p.epsilon) * d.psi_m * h_ul_m / m0.pathloss;
            double interference = 0.0;
            for (std::size_t j = 0; j < net.mcells.size(); ++j)
            {
                if (j == m0.index)
                {
                    continue;
                }
                Point where;
                double own = 0.0;
                if (pick_m[j] != kNone)
                {
                    where = net.ues[pick_m[j]];
                    own = ues[pick_m[j]].l_m;
                }
                else if (beyond_ue_window(net, net.mcells[j]))
                {
                    const FarInterferer far = far_interferer(net, p, static_cast<std::uint32_t>(j));
                    where = far.pos;
                    own = far.own_pathloss;
                }
                else
                {
                    continue;  // empty cell: silent
                }
                const double t = pathloss_of(distance2(where, serving), p.alpha_m);
                interference += p.p_um * std::pow(own, p.epsilon) * d.psi_m
                                * fading(seed, drop, kUlMcellInterferer,
                                         static_cast<std::uint32_t>(j))
                                / t;
            }
            ul = {Tier::Mcell, m0.pathloss, h_ul_m, p.g_m, signal / (interference + d.sigma2_m),
                  signal / d.sigma2_m, 0.0, ul_load_m[m0.index] + 1};
            ul.rate = p.w_m / ul.load * log2_1p(ul.sinr);
        }
        sample.decoupled = dl.tier != ul.tier;
    }
    return out;
}
}  // namespace

double scell_pathloss(const SystemParams& params, std::uint64_t seed, std::uint32_t drop,
                      std::uint32_t receiver, std::uint32_t scell, double d2)
{
    const bool los = d2 <= params.mu * params.mu
                     && hashed_uniform(seed, drop, Stream::Los, receiver, scell) < params.omega;
    return pathloss_of(d2, los ? params.alpha_l : params.alpha_n);
}

NetworkRealization sample_realization(const SystemParams& params, std::uint64_t seed,
                                      std::uint32_t drop, const SamplingOptions& options)
{
    params.validate();
    const double R = options.window_radius;
    const double R_m = options.mcell_radius > 0.0 ? options.mcell_radius : R;
    if (!(R > 0.0) || R_m < R)
    {
        throw std::invalid_argument(
            "sample_realization: need window_radius > 0 and mcell_radius >= window_radius");
    }
    NetworkRealization net;
    net.seed = seed;
    net.drop = drop;
    net.window_radius = R;
    net.mcell_radius = R_m;

    for (int attempt = 0;; ++attempt)
    {
        if (attempt == kMaxAttempts)
        {
            throw std::runtime_error("sample_realization: no Mcell in the window after "
                                     + std::to_string(kMaxAttempts) + " draws");
        }
        // Each attempt gets fresh streams; attempt 0 keeps the plain stream ids.
        const std::uint32_t shift = 16u * static_cast<std::uint32_t>(attempt);
        net.mcells = draw_disk(params.lambda_m, R_m, seed, drop,
                               static_cast<std::uint32_t>(Stream::Mcells) + shift);
        if (net.mcells.empty())
        {
            ++net.resamples;
            continue;
        }
        const std::vector<Point> sc = draw_disk(params.lambda_s, R, seed, drop,
                                                static_cast<std::uint32_t>(Stream::Scells) + shift);
        net.scells.clear();
        net.scells.reserve(sc.size());
        const double mu2 = params.mu * params.mu;
        for (std::size_t k = 0; k < sc.size(); ++k)
        {
            const bool los = distance2(sc[k], {}) <= mu2
                             && hashed_uniform(seed, drop, Stream::Los, kTypicalUe,
                                               static_cast<std::uint32_t>(k))
                                    < params.omega;
            net.scells.push_back({sc[k], los});
        }
        if (options.with_ues)
        {
            net.ues = draw_disk(params.lambda_u, R, seed, drop,
                                static_cast<std::uint32_t>(Stream::Ues) + shift);
        }
        return net;
    }
}

TypicalChoice associate(const NetworkRealization& net, Direction direction, Criterion criterion,
                        const SystemParams& params)
{
    if (net.mcells.empty())
    {
        throw std::invalid_argument("associate: realization has no Mcell");
    }
    const Nearest m0 = origin_mcell(net, params);
    const Nearest s0 = origin_scell(net, params);
    const TypicalChoice mcell{Tier::Mcell, m0.index, m0.pathloss};
    if (s0.index == kNone)
    {
        return mcell;
    }
    const TypicalChoice scell{Tier::Scell, s0.index, s0.pathloss};
    const DerivedConstants d = derive(params);

    if (criterion == Criterion::MaxBRP)
    {
        return s0.pathloss < association_weight(direction, d) * m0.pathloss ? scell : mcell;
    }

    const bool dl = direction == Direction::DL;
    const double sir_m = dl ? dl_mcell_sir(net, params, m0) : ul_mcell_sir_voronoi(net, params, m0);
    const double h_s = fading(net.seed, net.drop, dl ? kDlScell : kUlScellServing, s0.index);
    const double power = dl ? params.p_s : params.p_us * std::pow(s0.pathloss, params.epsilon);
    const double snr_s = power * d.psi_s * h_s / s0.pathloss / d.sigma2_s;
    const double rate_m = params.w_m * log2_1p(sir_m);
    const double rate_s = params.w_s * log2_1p(snr_s);
    return rate_s > rate_m ? scell : mcell;
}

AssocResult EmpiricalAssoc::dl() const
{
    return {1.0 - dl_scell.value, dl_scell.value, ResultSource::MonteCarlo};
}

AssocResult EmpiricalAssoc::ul() const
{
    return {1.0 - ul_scell.value, ul_scell.value, ResultSource::MonteCarlo};
}

EmpiricalAssoc empirical_assoc(const SystemParams& params, Criterion criterion,
                               std::size_t n_drops, std::uint64_t seed,
                               const SamplingOptions& options)
{
    if (n_drops == 0)
    {
        throw std::invalid_argument("empirical_assoc: n_drops must be >= 1");
    }
    SamplingOptions opts = options;
    // Max-BRP only looks at the typical UE; skip the UE field.
    opts.with_ues = criterion == Criterion::MaxRate;
    if (criterion == Criterion::MaxRate && opts.mcell_radius == 0.0)
    {
        opts.mcell_radius = std::max(kInterferenceRadius, opts.window_radius);
    }
    struct Outcome
    {
        bool dl_s = false;
        bool ul_s = false;
        int resamples = 0;
    };
    std::vector<Outcome> outcomes(n_drops);
    parallel_for(n_drops, [&](std::size_t i) {
        const NetworkRealization net
            = sample_realization(params, seed, static_cast<std::uint32_t>(i), opts);
        outcomes[i] = {associate(net, Direction::DL, criterion, params).tier == Tier::Scell,
                       associate(net, Direction::UL, criterion, params).tier == Tier::Scell,
                       net.resamples};
    });
    std::size_t dl = 0, ul = 0, decoupled = 0;
    EmpiricalAssoc out;
    for (const Outcome& o : outcomes)
    {
        dl += o.dl_s;
        ul += o.ul_s;
        decoupled += o.dl_s != o.ul_s;
        out.resamples += o.resamples;
    }
    out.drops = n_drops;
    out.dl_scell = proportion_ci(dl, n_drops);
    out.ul_scell = proportion_ci(ul, n_drops);
    out.decoupling_gain = proportion_ci(decoupled, n_drops);
    return out;
}

std::vector<std::vector<DropSample>> simulate_variants(const std::vector<SystemParams>& variants,
                                                       std::size_t n_drops, std::uint64_t seed,
                                                       const SimOptions& options)
{
    check_shared_geometry(variants);
    std::vector<std::vector<DropSample>> out(variants.size(), std::vector<DropSample>(n_drops));
    parallel_for(n_drops, [&](std::size_t i) {
        std::vector<DropSample> per_variant
            = simulate_drop(variants, seed, static_cast<std::uint32_t>(i), options);
        for (std::size_t v = 0; v < variants.size(); ++v)
        {
            out[v][i] = per_variant[v];
        }
    });
    return out;
}

std::vector<DropSample> simulate(const SystemParams& params, std::size_t n_drops,
                                 std::uint64_t seed, const SimOptions& options)
{
    return simulate_variants({params}, n_drops, seed, options).front();
}

const LinkSample& link(const DropSample& drop, Direction direction)
{
    return direction == Direction::DL ? drop.dl : drop.ul;
}

std::vector<LinkSample> empirical_sinr(const SystemParams& params, Direction direction,
                                       std::size_t n_drops, std::uint64_t seed,
                                       bool include_mmwave_interference)
{
    SimOptions options;
    options.mmwave_interference = include_mmwave_interference;
    std::vector<LinkSample> out;
    for (const DropSample& s : simulate(params, n_drops, seed, options))
    {
        out.push_back(link(s, direction));
    }
    return out;
}

std::vector<LinkSample> empirical_rate(const SystemParams& params, Direction direction,
                                       std::size_t n_drops, std::uint64_t seed)
{
    return empirical_sinr(params, direction, n_drops, seed, false);
}

std::vector<std::vector<DropSample>> simulate_bias_sweep(const SystemParams& params,
                                                         const std::vector<double>& t_s_db,
                                                         std::size_t n_drops, std::uint64_t seed,
                                                         const SimOptions& options)
{
    std::vector<SystemParams> variants;
    for (double db : t_s_db)
    {
        SystemParams v = params;
        v.t_s = db_to_linear(db);
        v.ul_bias_from_dl = true;
        variants.push_back(v);
    }
    return simulate_variants(variants, n_drops, seed, options);
}

std::vector<double> min_pathloss_samples(const SystemParams& params, Tier tier,
                                         std::size_t n_drops, std::uint64_t seed,
                                         const SamplingOptions& options)
{
    SamplingOptions opts = options;
    opts.with_ues = false;
    std::vector<double> out(n_drops);
    parallel_for(n_drops, [&](std::size_t i) {
        const NetworkRealization net
            = sample_realization(params, seed, static_cast<std::uint32_t>(i), opts);
        out[i] = tier == Tier::Mcell ? origin_mcell(net, params).pathloss
                                     : origin_scell(net, params).pathloss;
    });
    return out;
}

void write_samples_csv(const std::filesystem::path& path, const std::vector<DropSample>& samples)
{
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "drop,direction,serving_tier,sinr_db,snr_db,rate_bps,load\n";
    char buf[160];
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        for (Direction dir : {Direction::DL, Direction::UL})
        {
            const LinkSample& s = link(samples[i], dir);
            std::snprintf(buf, sizeof(buf), "%zu,%s,%s,%.10g,%.10g,%.10g,%u\n", i, to_string(dir),
                          to_string(s.tier), linear_to_db(s.sinr), linear_to_db(s.snr), s.rate,
                          s.load);
            out << buf;
        }
    }
}

nlohmann::json summarize(const std::vector<DropSample>& samples)
{
    nlohmann::json doc;
    const std::size_t n = samples.size();
    doc["drops"] = n;
    if (n == 0)
    {
        return doc;
    }
    std::size_t decoupled = 0;
    for (const DropSample& s : samples)
    {
        decoupled += s.decoupled;
    }
    auto est = [](const Estimate& e) {
        return nlohmann::json{{"estimate", e.value}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high}};
    };
    doc["decoupling_gain"] = est(proportion_ci(decoupled, n));
    for (Direction dir : {Direction::DL, Direction::UL})
    {
        std::size_t scell = 0;
        std::vector<double> sinr_db, rate;
        for (const DropSample& s : samples)
        {
            const LinkSample& l = link(s, dir);
            scell += l.tier == Tier::Scell;
            sinr_db.push_back(linear_to_db(l.sinr));
            rate.push_back(l.rate);
        }
        nlohmann::json& d = doc[to_string(dir)];
        d["p_scell"] = est(proportion_ci(scell, n));
        d["sinr_db_p05"] = quantile(sinr_db, 0.05);
        d["sinr_db_p50"] = quantile(sinr_db, 0.5);
        d["rate_bps_p05"] = quantile(rate, 0.05);
        d["rate_bps_p50"] = quantile(rate, 0.5);
    }
    return doc;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads == 1 || n < 2)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++)
        {
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t)
    {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool)
    {
        t.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

}  // namespace hetnet
