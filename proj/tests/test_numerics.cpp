#include <cmath>
#include <limits>

#include "doctest.h"
#include "hetnet/numerics.hpp"

using namespace hetnet;

TEST_CASE("integrate: polynomial and exponential")
{
    CHECK(integrate([](double x) { return 3.0 * x * x; }, 0.0, 1.0)
          == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, INFINITY)
          == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrate: gaussian half line matches erf oracle")
{
    // sqrt(pi)/2
    const double oracle = 0.8862269254527579;
    CHECK(integrate([](double x) { return std::exp(-x * x); }, 0.0, INFINITY)
          == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("integrate_pieces sums consecutive ranges")
{
    auto f = [](double x) { return std::abs(x - 0.3); };
    CHECK(integrate_pieces(f, {0.0, 0.3, 1.0}) == doctest::Approx(0.045 + 0.245).epsilon(1e-12));
}

TEST_CASE("integrate: bad input and failures")
{
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, -INFINITY, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0.0,
                              1.0),
                    EvaluationError);

    QuadratureSpec tight{1e-14, 0.0, 3};
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, tight),
                    QuadratureError);
    const QuadratureResult r
        = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, tight);
    CHECK_FALSE(r.converged);
    CHECK(r.value > 0.0);

    CHECK_THROWS(QuadratureSpec{-1.0, 0.0, 10}.validate());
}

TEST_CASE("q_function")
{
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // Tail integral of the normal density from 1.
    CHECK(q_function(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-13));
    CHECK(q_function(-1.0) == doctest::Approx(1.0 - 0.15865525393145707).epsilon(1e-13));
    const double far = q_function(40.0);
    CHECK(far >= 0.0);
    CHECK(far < 1e-300);
    // exp(x^2/2) Q(x) ~ 1/(x sqrt(2 pi)) for large x.
    CHECK(q_function_scaled(1e4) == doctest::Approx(1.0 / (1e4 * std::sqrt(2.0 * M_PI))).epsilon(1e-7));
    CHECK(q_function_scaled(1.0) == doctest::Approx(std::exp(0.5) * 0.15865525393145707).epsilon(1e-13));
}

TEST_CASE("rho")
{
    CHECK(rho(0.0, 4.0) == 0.0);
    CHECK(rho(1.0, 4.0) == doctest::Approx(M_PI / 4.0).epsilon(1e-12));
    // sqrt(t) (pi/2 - arctan(t^-1/2)) at t = 10.
    CHECK(rho(10.0, 4.0) == doctest::Approx(3.9987600505576615).epsilon(1e-12));
    for (double t : {1e-8, 1e-3, 0.3, 3.0, 1e3, 1e8})
    {
        const double oracle = std::sqrt(t) * (M_PI / 2.0 - std::atan(1.0 / std::sqrt(t)));
        CHECK(rho(t, 4.0) == doctest::Approx(oracle).epsilon(1e-10));
    }
    // General alpha: full-range integral (pi/k)/sin(pi/k) minus the head
    // x 2F1(1, 1/k; 1 + 1/k; -x^k), k = a/2, evaluated at 40 digits.
    const struct
    {
        double a, t, value;
    } frozen[] = {
        {2.5, 0.1, 0.39367373249441954}, {2.5, 1.0, 3.5532542906071546},
        {2.5, 10.0, 26.02049209428095},  {3.0, 0.1, 0.19526713743792607},
        {3.0, 1.0, 1.6712976965294421},  {3.0, 10.0, 10.262883117519118},
        {3.7, 0.1, 0.11414863115313728}, {3.7, 1.0, 0.93687528738867497},
        {3.7, 10.0, 4.9767158220319711},
    };
    for (const auto& f : frozen)
    {
        CHECK(rho(f.t, f.a) == doctest::Approx(f.value).epsilon(1e-10));
    }
    CHECK_THROWS(rho(1.0, 2.0));
    CHECK_THROWS(rho(-1.0, 4.0));
}
