#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "association.hpp"
#include "json.hpp"
#include "params.hpp"
#include "pathloss.hpp"
#include "spatial_grid.hpp"
#include "statistics.hpp"

namespace hetnet
{

struct ScellSite
{
    Point pos;
    bool los_to_origin = false;
};

//! One drop: PPPs in a disk centred on the typical UE at the origin.
struct NetworkRealization
{
    std::vector<Point> mcells;
    std::vector<ScellSite> scells;
    std::vector<Point> ues;
    std::uint64_t seed = 0;
    std::uint32_t drop = 0;
    double window_radius = 3000.0;  //!< Scells and UEs
    double mcell_radius = 3000.0;   //!< Mcells, >= window_radius
    int resamples = 0;  //!< draws rejected for having no Mcell
};

/*!
 * Radius of the Mcell layer used for interference sums.
 *
 * With alpha_m = 3 the interference beyond radius R decays only like 1/R, so
 * a 3 km disk understates Mcell interference by several percent of the
 * Laplace exponent. At 30 km the neglected part is below 1%.
 */
inline constexpr double kInterferenceRadius = 30000.0;

struct SamplingOptions
{
    double window_radius = 3000.0;
    double mcell_radius = 0.0;  //!< 0 means window_radius
    bool with_ues = true;
};

/*!
 * Sample the BS and UE processes of one drop.
 *
 * Identical (params, seed, drop) give identical realizations. A draw with no
 * Mcell is rejected and redrawn; the count is kept in `resamples`.
 */
NetworkRealization sample_realization(const SystemParams& params, std::uint64_t seed,
                                      std::uint32_t drop, const SamplingOptions& options = {});

//! Pathloss from a receiver to a Scell. LOS marks are drawn per (receiver, Scell) pair.
double scell_pathloss(const SystemParams& params, std::uint64_t seed, std::uint32_t drop,
                      std::uint32_t receiver, std::uint32_t scell, double d2);

//! Receiver index used for the typical UE in per-link random marks.
inline constexpr std::uint32_t kTypicalUe = 0xFFFFFFFFu;

struct TypicalChoice
{
    Tier tier = Tier::Mcell;
    std::size_t index = 0;  //!< into mcells or scells
    double pathloss = 0.0;
};

/*!
 * Serving BS of the typical UE.
 *
 * Max-BRP compares minimum pathlosses (Scell iff L_s < a L_m) and ignores
 * fading. Max-Rate compares unit-load rates W log2(1 + x) with the Mcell SIR
 * and the mmWave SNR, both including the drop's fading; UL Mcell
 * interference then needs the UE field.
 */
TypicalChoice associate(const NetworkRealization& net, Direction direction, Criterion criterion,
                        const SystemParams& params);

struct EmpiricalAssoc
{
    Estimate dl_scell;
    Estimate ul_scell;
    Estimate decoupling_gain;  //!< fraction of drops where UL and DL tiers differ
    std::size_t drops = 0;
    int resamples = 0;

    [[nodiscard]] AssocResult dl() const;
    [[nodiscard]] AssocResult ul() const;
};

//! Max-Rate runs draw Mcells out to kInterferenceRadius unless options set a radius.
EmpiricalAssoc empirical_assoc(const SystemParams& params, Criterion criterion,
                               std::size_t n_drops, std::uint64_t seed,
                               const SamplingOptions& options = {});

struct LinkSample
{
    Tier tier = Tier::Mcell;
    double pathloss = 0.0;
    double fading = 0.0;
    double gain = 0.0;
    double sinr = 0.0;  //!< Mcell: SINR; Scell: SNR, or SINR when mmWave interference is on
    double snr = 0.0;
    double rate = 0.0;  //!< b/s, using the realized load
    std::uint32_t load = 1;  //!< UEs in the serving cell, typical UE included
};

struct DropSample
{
    LinkSample dl;
    LinkSample ul;
    bool decoupled = false;
};

struct SimOptions
{
    double window_radius = 3000.0;
    double mcell_radius = kInterferenceRadius;
    bool mmwave_interference = false;
};

/*!
 * Full Max-BRP simulation with every UE associated.
 *
 * Each variant is evaluated on the same realizations and fading (common
 * random numbers); variants may differ in powers, gains and biases but must
 * share densities, exponents, blockage and epsilon.
 *
 * Returns samples indexed [variant][drop].
 */
std::vector<std::vector<DropSample>> simulate_variants(const std::vector<SystemParams>& variants,
                                                       std::size_t n_drops, std::uint64_t seed,
                                                       const SimOptions& options = {});

std::vector<DropSample> simulate(const SystemParams& params, std::size_t n_drops,
                                 std::uint64_t seed, const SimOptions& options = {});

std::vector<LinkSample> empirical_sinr(const SystemParams& params, Direction direction,
                                       std::size_t n_drops, std::uint64_t seed,
                                       bool include_mmwave_interference);

std::vector<LinkSample> empirical_rate(const SystemParams& params, Direction direction,
                                       std::size_t n_drops, std::uint64_t seed);

//! DL Scell bias sweep with the UL bias following the DL biased received power.
std::vector<std::vector<DropSample>> simulate_bias_sweep(const SystemParams& params,
                                                         const std::vector<double>& t_s_db,
                                                         std::size_t n_drops, std::uint64_t seed,
                                                         const SimOptions& options = {});

//! Minimum pathloss from the origin to each tier, one value per drop.
std::vector<double> min_pathloss_samples(const SystemParams& params, Tier tier,
                                         std::size_t n_drops, std::uint64_t seed,
                                         const SamplingOptions& options = {});

const LinkSample& link(const DropSample& drop, Direction direction);

//! CSV with one row per drop and direction.
void write_samples_csv(const std::filesystem::path& path, const std::vector<DropSample>& samples);

//! Association fractions, decoupling gain and SINR/rate quantiles.
nlohmann::json summarize(const std::vector<DropSample>& samples);

//! Run body(i) for i in [0, n) on all hardware threads; body must only write slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hetnet
