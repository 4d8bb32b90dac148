#include <cmath>

#include "doctest.h"
#include "hetnet/numerics.hpp"
#include "hetnet/pathloss.hpp"

using namespace hetnet;

namespace
{

double normalization(const PathlossProcess& proc)
{
    std::vector<double> pts{std::log(proc.inverse_intensity(1e-14))};
    for (double b : proc.breakpoints())
    {
        pts.push_back(std::log(b));
    }
    pts.push_back(std::log(proc.inverse_intensity(60.0)));
    return integrate_pieces(
        [&](double u) {
            const double l = std::exp(u);
            return proc.pdf(l) * l;
        },
        pts);
}

}  // namespace

TEST_CASE("Mcell intensity against the radial oracle")
{
    const auto m = PathlossProcess::mcell(5e-6, 3.0);
    // 2 pi lambda int r 1(r^3 < 1e9) dr = pi lambda (1e3)^2
    CHECK(m.intensity(1e9) == doctest::Approx(5.0 * M_PI).epsilon(1e-14));
    CHECK(m.ccdf(1e9) == doctest::Approx(std::exp(-5.0 * M_PI)).epsilon(1e-12));
    CHECK(m.ccdf(0.0) == 1.0);
    CHECK(m.intensity(0.0) == 0.0);
}

TEST_CASE("Scell intensity branches")
{
    const SystemParams p;
    const PathlossProcess s(Tier::Scell, p);
    CHECK(s.intensity(0.0) == 0.0);
    CHECK(s.ccdf(0.0) == 1.0);

    const double t = 1e3;
    CHECK(s.intensity(t)
          == doctest::Approx(M_PI * p.lambda_s
                             * (p.omega * std::pow(t, 2.0 / p.alpha_l)
                                + (1 - p.omega) * std::pow(t, 2.0 / p.alpha_n)))
                 .epsilon(1e-14));
    const double mid = 1e7;
    CHECK(s.intensity(mid)
          == doctest::Approx(M_PI * p.lambda_s
                             * (p.omega * p.mu * p.mu + (1 - p.omega) * std::sqrt(mid)))
                 .epsilon(1e-14));
    const double far = 1e12;
    CHECK(s.intensity(far) == doctest::Approx(M_PI * p.lambda_s * std::pow(far, 0.5)).epsilon(1e-14));

    const auto b = s.breakpoints();
    REQUIRE(b.size() == 2);
    CHECK(b[0] == doctest::Approx(std::pow(p.mu, p.alpha_l)));
    CHECK(b[1] == doctest::Approx(std::pow(p.mu, p.alpha_n)));
    for (double k : b)
    {
        const double left = s.intensity(std::nextafter(k, 0.0));
        const double right = s.intensity(std::nextafter(k, INFINITY));
        CHECK(std::abs(right - left) / s.intensity(k) <= 1e-12);
    }
}

TEST_CASE("degenerate blockage")
{
    const auto all_los = PathlossProcess::scell(5e-5, 2.0, 4.0, 1.0, 200.0);
    for (double t : {1.0, 1e2, 3e4})
    {
        CHECK(all_los.intensity(t) == doctest::Approx(M_PI * 5e-5 * t).epsilon(1e-14));
    }
    const auto no_los = PathlossProcess::scell(5e-5, 2.0, 4.0, 0.0, 200.0);
    const auto plain = PathlossProcess::mcell(5e-5, 4.0);
    for (double t : {1e2, 1e6, 1e9, 1e12})
    {
        CHECK(no_los.intensity(t) == doctest::Approx(plain.intensity(t)).epsilon(1e-14));
        CHECK(no_los.pdf(t) == doctest::Approx(plain.pdf(t)).epsilon(1e-12));
    }
}

TEST_CASE("density integrates to one")
{
    const SystemParams p;
    CHECK(normalization(PathlossProcess(Tier::Mcell, p)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(normalization(PathlossProcess(Tier::Scell, p)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(normalization(PathlossProcess::scell(2e-4, 2.1, 3.5, 0.6, 80.0))
          == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("density is minus the derivative of the ccdf")
{
    const SystemParams p;
    for (Tier tier : {Tier::Mcell, Tier::Scell})
    {
        const PathlossProcess proc(tier, p);
        for (double t : {1e5, 3e7, 1e9, 1e11})
        {
            if (tier == Tier::Scell && (t == 1e9))
            {
                continue;  // too close to the mu^alpha_n kink for a central difference
            }
            const double h = t * 1e-5;
            const double fd = (proc.ccdf(t - h) - proc.ccdf(t + h)) / (2.0 * h);
            CHECK(proc.pdf(t) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("inverse intensity and expectations")
{
    const SystemParams p;
    for (Tier tier : {Tier::Mcell, Tier::Scell})
    {
        const PathlossProcess proc(tier, p);
        for (double target : {1e-9, 0.01, 1.0, proc.intensity(std::pow(p.mu, 3.0)), 25.0})
        {
            CHECK(proc.intensity(proc.inverse_intensity(target))
                  == doctest::Approx(target).epsilon(1e-9));
        }
        CHECK(proc.expect([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // E[L^eps] for a single-slope process: (pi lambda)^{-eps alpha/2} Gamma(1 + eps alpha/2).
    const auto m = PathlossProcess::mcell(5e-6, 3.0);
    const double oracle = std::pow(M_PI * 5e-6, -0.75) * std::tgamma(1.75);
    CHECK(m.expect([](double l) { return std::sqrt(l); }) == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(PathlossProcess::mcell(0.0, 3.0).expect([](double) { return 1.0; }) == 0.0);
}
