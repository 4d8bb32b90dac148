#include "hetnet/association.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hetnet/numerics.hpp"

namespace hetnet
{

const char* to_string(Direction direction)
{
    return direction == Direction::DL ? "dl" : "ul";
}

const char* to_string(Criterion criterion)
{
    return criterion == Criterion::MaxBRP ? "max_brp" : "max_rate";
}

const char* to_string(ResultSource source)
{
    switch (source)
    {
        case ResultSource::Quadrature: return "quadrature";
        case ResultSource::ClosedForm: return "closed_form";
        case ResultSource::MonteCarlo: return "monte_carlo";
    }
    return "?";
}

double association_weight(Direction direction, const DerivedConstants& derived)
{
    return direction == Direction::DL ? derived.a_dl : derived.a_ul;
}

double mmwave_tx_power(Direction direction, const SystemParams& params)
{
    return direction == Direction::DL ? params.p_s : params.p_us;
}

double sub6_tx_power(Direction direction, const SystemParams& params)
{
    return direction == Direction::DL ? params.p_m : params.p_um;
}

namespace
{
// Inner integrals feed differences and closed-form comparisons at 1e-6, so
// they run well below that.
constexpr QuadratureSpec kInner{1e-10, 1e-16, 400};
constexpr QuadratureSpec kOuter{1e-8, 1e-14, 400};

AssocResult from_mcell(double p_mcell, ResultSource source)
{
    p_mcell = std::clamp(p_mcell, 0.0, 1.0);
    return {p_mcell, 1.0 - p_mcell, source};
}
}  // namespace

AssocResult assoc_brp(Direction direction, const SystemParams& params)
{
    params.validate();
    if (params.lambda_s == 0.0)
    {
        return from_mcell(1.0, ResultSource::Quadrature);
    }
    const DerivedConstants d = derive(params);
    const double a = association_weight(direction, d);
    const PathlossProcess mcell(Tier::Mcell, params);
    const PathlossProcess scell(Tier::Scell, params);

    std::vector<double> kinks;
    for (double b : scell.breakpoints())
    {
        kinks.push_back(b / a);
    }
    const double p_m = mcell.expect([&](double l) { return scell.ccdf(a * l); }, kinks, kInner);
    return from_mcell(p_m, ResultSource::Quadrature);
}

AssocResult assoc_brp_closed(Direction direction, const SystemParams& params)
{
    params.validate();
    if (params.alpha_l != 2.0 || params.alpha_n != 4.0 || params.alpha_m != 4.0)
    {
        throw std::invalid_argument(
            "assoc_brp_closed: requires alpha_l = 2 and alpha_n = alpha_m = 4");
    }
    const DerivedConstants d = derive(params);
    const double a = association_weight(direction, d);
    const double mu = params.mu;
    const double pm_scaled = kPi * params.lambda_m / std::sqrt(a);
    const double c1 = kPi * params.lambda_s * params.omega;
    const double c2 = kPi * params.lambda_s * (1.0 - params.omega) + pm_scaled;

    // Inside the LOS ball: int_0^mu exp(-c1 y^2 - c2 y) dy.
    double inside = 0.0;
    const double y0 = c1 > 0.0 ? c2 / std::sqrt(2.0 * c1) : HUGE_VAL;
    if (y0 > 1e6)
    {
        inside = -std::expm1(-c2 * mu) / c2;
    }
    else
    {
        const double y1 = (2.0 * mu * c1 + c2) / std::sqrt(2.0 * c1);
        inside = std::sqrt(kPi / c1)
                 * (q_function_scaled(y0)
                    - std::exp(-c1 * mu * mu - c2 * mu) * q_function_scaled(y1));
    }
    // LOS saturated (mu <= y <= mu^2), then all NLOS (y > mu^2).
    const double outside
        = std::exp(-c1 * mu * mu)
          * (std::exp(-c2 * mu) / c2 - c1 * std::exp(-c2 * mu * mu) / (c2 * (c1 + c2)));

    return from_mcell(pm_scaled * (inside + outside), ResultSource::ClosedForm);
}

namespace
{
double snr_scale(Direction direction, const SystemParams& params, const DerivedConstants& d)
{
    return d.sigma2_s / (mmwave_tx_power(direction, params) * d.psi_s);
}
}  // namespace

double snr_ccdf_mmwave(Direction direction, double z, const SystemParams& params)
{
    if (std::isnan(z) || z < 0.0)
    {
        throw std::domain_error("snr_ccdf_mmwave: z must be >= 0");
    }
    const DerivedConstants d = derive(params);
    const double c = snr_scale(direction, params, d);
    const PathlossProcess scell(Tier::Scell, params);
    return scell.expect([&](double l) { return std::exp(-z * c * l); }, {}, kInner);
}

double snr_pdf_mmwave(Direction direction, double z, const SystemParams& params)
{
    if (std::isnan(z) || z < 0.0)
    {
        throw std::domain_error("snr_pdf_mmwave: z must be >= 0");
    }
    const DerivedConstants d = derive(params);
    const double c = snr_scale(direction, params, d);
    const PathlossProcess scell(Tier::Scell, params);
    return c * scell.expect([&](double l) { return l * std::exp(-z * c * l); }, {}, kInner);
}

AssocResult assoc_rate(Direction direction, const SystemParams& params)
{
    params.validate();
    if (params.lambda_s == 0.0)
    {
        return from_mcell(1.0, ResultSource::Quadrature);
    }
    const DerivedConstants d = derive(params);
    const double c = snr_scale(direction, params, d);
    const double r = params.w_s / params.w_m;
    const double alpha = params.alpha_m;
    const PathlossProcess scell(Tier::Scell, params);

    // Mcell SIR needed to match an mmWave SNR of z, in log space: (1+z)^r overflows.
    auto sir_match = [r](double z) { return std::expm1(r * std::log1p(z)); };
    auto z_for = [r](double t) { return std::expm1(std::log1p(t) / r); };
    auto mcell_wins = [&](double z) {
        const double t = sir_match(z);
        return std::isinf(t) ? 0.0 : 1.0 / (1.0 + rho(t, alpha));
    };
    auto pdf = [&](double z) {
        return c * scell.expect([&](double l) { return l * std::exp(-z * c * l); }, {}, kInner);
    };

    // Beyond t = 1e24 the Mcell coverage is below 1e-11 for any alpha_m used here.
    const double z_max = z_for(1e24);
    std::vector<double> points{0.0, z_max};
    for (int e = -6; e < 24; e += 3)
    {
        points.push_back(z_for(std::pow(10.0, e)));
    }
    // SNR scale points: where the typical serving pathloss puts the median SNR.
    for (double mass : {1e-9, 1e-6, 1e-3, 0.1, 1.0, 10.0, 60.0})
    {
        points.push_back(1.0 / (c * scell.inverse_intensity(mass)));
    }
    points.erase(std::remove_if(points.begin(), points.end(),
                                [z_max](double z) { return !(z >= 0.0 && z <= z_max); }),
                 points.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    const double p_m = integrate_pieces([&](double z) { return pdf(z) * mcell_wins(z); }, points,
                                        kOuter);
    return from_mcell(p_m, ResultSource::Quadrature);
}

AssocResult assoc_analytic(Direction direction, Criterion criterion, const SystemParams& params)
{
    return criterion == Criterion::MaxBRP ? assoc_brp(direction, params)
                                          : assoc_rate(direction, params);
}

}  // namespace hetnet
