#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet
{

//! Tolerances for adaptive quadrature.
struct QuadratureSpec
{
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 400;

    void validate() const;

    //! Looser spec for the outer layer of composed integrals.
    [[nodiscard]] static QuadratureSpec outer() { return {1e-6, 1e-12, 400}; }
};

struct QuadratureResult
{
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

//! Raised when the subdivision budget is exhausted before the tolerance is met.
class QuadratureError : public std::runtime_error
{
  public:
    QuadratureError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound)
    {
    }

    [[nodiscard]] double estimate() const noexcept { return estimate_; }
    [[nodiscard]] double error_bound() const noexcept { return error_bound_; }

  private:
    double estimate_;
    double error_bound_;
};

//! Raised when the integrand returns a non-finite value.
class EvaluationError : public std::domain_error
{
  public:
    EvaluationError(const std::string& what, double where)
        : std::domain_error(what), where_(where)
    {
    }

    [[nodiscard]] double where() const noexcept { return where_; }

  private:
    double where_;
};

namespace detail
{

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
    double lo;
    double hi;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

[[noreturn]] void throw_nonfinite(double x, double fx);

template<class F>
double checked_eval(F& f, double x)
{
    const double fx = f(x);
    if (!std::isfinite(fx))
    {
        throw_nonfinite(x, fx);
    }
    return fx;
}

template<class F>
Segment gauss_kronrod(F& f, double lo, double hi)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double f_center = checked_eval(f, center);

    double kronrod = f_center * kKronrodWeights[7];
    double gauss = f_center * kGaussWeights[3];
    double abs_sum = std::fabs(kronrod);
    std::array<double, 7> f_left{};
    std::array<double, 7> f_right{};
    for (int j = 0; j < 7; ++j)
    {
        const double dx = half * kKronrodNodes[j];
        f_left[j] = checked_eval(f, center - dx);
        f_right[j] = checked_eval(f, center + dx);
        const double pair = f_left[j] + f_right[j];
        kronrod += kKronrodWeights[j] * pair;
        abs_sum += kKronrodWeights[j] * (std::fabs(f_left[j]) + std::fabs(f_right[j]));
        if (j % 2 == 1)
        {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }

    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::fabs(f_center - mean);
    for (int j = 0; j < 7; ++j)
    {
        asc += kKronrodWeights[j]
               * (std::fabs(f_left[j] - mean) + std::fabs(f_right[j] - mean));
    }

    const double abs_half = std::fabs(half);
    const double result = kronrod * half;
    abs_sum *= abs_half;
    asc *= abs_half;
    double err = std::fabs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0)
    {
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    if (abs_sum > tiny / (50.0 * eps))
    {
        err = std::max(50.0 * eps * abs_sum, err);
    }
    return {lo, hi, result, err};
}

template<class F>
QuadratureResult adaptive_finite(F& f, double lo, double hi, const QuadratureSpec& spec)
{
    std::priority_queue<Segment> queue;
    Segment first = gauss_kronrod(f, lo, hi);
    double total = first.value;
    double total_err = first.error;
    queue.push(first);

    int subdivisions = 1;
    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)); };
    while (total_err > tolerance())
    {
        if (subdivisions >= spec.max_subdivisions)
        {
            return {total, total_err, subdivisions, false};
        }
        Segment worst = queue.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi))
        {
            // Interval collapsed to machine resolution: no further progress possible.
            return {total, total_err, subdivisions, false};
        }
        queue.pop();
        Segment left = gauss_kronrod(f, worst.lo, mid);
        Segment right = gauss_kronrod(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++subdivisions;
    }

    // Re-sum to shed accumulated cancellation in the running totals.
    total = 0.0;
    total_err = 0.0;
    while (!queue.empty())
    {
        total += queue.top().value;
        total_err += queue.top().error;
        queue.pop();
    }
    return {total, total_err, subdivisions, true};
}

}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Adaptive Gauss-Kronrod quadrature on [lo, hi].
 *
 * An infinite upper limit is mapped onto [0, 1) with t = lo + u/(1-u).
 * Non-convergence is reported in the result rather than thrown.
 */
template<class F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi, const QuadratureSpec& spec = {})
{
    spec.validate();
    if (!std::isfinite(lo) || std::isnan(hi) || !(lo < hi))
    {
        throw std::invalid_argument("integrate: require finite lo < hi");
    }
    if (std::isinf(hi))
    {
        auto mapped = [&f, lo](double u) {
            const double one_minus = 1.0 - u;
            if (!(one_minus > 0.0))
            {
                return 0.0;  // node rounded onto u = 1; a convergent integrand vanishes there
            }
            return f(lo + u / one_minus) / (one_minus * one_minus);
        };
        return detail::adaptive_finite(mapped, 0.0, 1.0, spec);
    }
    return detail::adaptive_finite(f, lo, hi, spec);
}

//! As integrate_adaptive, but throws QuadratureError on non-convergence.
template<class F>
double integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {})
{
    const QuadratureResult r = integrate_adaptive(std::forward<F>(f), lo, hi, spec);
    if (!r.converged)
    {
        throw QuadratureError("integrate: tolerance not reached after "
                                  + std::to_string(r.subdivisions) + " subdivisions",
                              r.value,
                              r.error);
    }
    return r.value;
}

//! Integrate over consecutive pieces [points[i], points[i+1]].
template<class F>
double integrate_pieces(F&& f, const std::vector<double>& points, const QuadratureSpec& spec = {})
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
    {
        if (points[i + 1] > points[i])
        {
            total += integrate(f, points[i], points[i + 1], spec);
        }
    }
    return total;
}

//! Standard normal upper-tail probability.
double q_function(double x);

//! exp(x^2/2) Q(x), accurate for large positive x where Q underflows.
double q_function_scaled(double x);

//! t^{2/a} * integral_{t^{-2/a}}^inf du / (1 + u^{a/2}); requires a > 2, t >= 0.
double rho(double t, double alpha);

}  // namespace hetnet
