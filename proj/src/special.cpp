#include "fracflow/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracflow
{

namespace
{

std::string describe(const char* what, double x)
{
    std::ostringstream os;
    os.precision(17);
    os << what << " (got " << x << ")";
    return os.str();
}

// sin(pi x) with exact zeros at the integers.
double sin_pi(double x)
{
    const double n = std::round(x);
    const double r = x - n;
    if (r == 0.0)
    {
        return 0.0;
    }
    const double s = std::sin(std::numbers::pi * r);
    return std::fmod(std::abs(n), 2.0) == 0.0 ? s : -s;
}

// 1 / Gamma(x) for any real x; vanishes at the nonpositive integers.
double reciprocal_gamma(double x)
{
    if (x > 0.0)
    {
        return 1.0 / gamma_fn(x);
    }
    return gamma_fn(1.0 - x) * sin_pi(x) / std::numbers::pi;
}

constexpr double kMittagLefflerTol = 1e-13;

struct Estimate
{
    double value;
    double error;
};

// Power series sum_k z^k / Gamma(alpha k + 1). The error estimate accounts for
// the rounding of every term, which dominates once the terms grow large and
// cancel.
Estimate mittag_leffler_series(double alpha, double z)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double log_abs_z = std::log(std::abs(z));

    double sum = 1.0;
    double comp = 0.0;
    double abs_sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 4000; ++k)
    {
        const double magnitude =
            std::exp(k * log_abs_z - std::lgamma(alpha * k + 1.0));
        const double term = (k % 2 == 0 || z > 0.0) ? magnitude : -magnitude;

        // Neumaier summation
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
        {
            comp += (sum - t) + term;
        }
        else
        {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += magnitude;

        const double total = sum + comp;
        if (magnitude < prev && magnitude <= eps * 1e-2 * std::abs(total))
        {
            return {total, 8.0 * eps * abs_sum + magnitude};
        }
        prev = magnitude;
    }
    return {sum + comp, std::numeric_limits<double>::infinity()};
}

// -sum_{k=1..K} z^{-k} / Gamma(1 - alpha k); error estimated by the first
// omitted term.
Estimate mittag_leffler_asymptotic(double alpha, double z, int terms)
{
    double sum = 0.0;
    double zpow = 1.0;
    for (int k = 1; k <= terms; ++k)
    {
        zpow /= z;
        sum -= zpow * reciprocal_gamma(1.0 - alpha * k);
    }
    zpow /= z;
    double next = std::abs(zpow * reciprocal_gamma(1.0 - alpha * (terms + 1)));
    // an exact zero of 1/Gamma says nothing about the truncation error
    if (next == 0.0)
    {
        zpow /= z;
        next = std::abs(zpow * reciprocal_gamma(1.0 - alpha * (terms + 2)));
    }
    return {sum, next};
}

//
// E_alpha(-x) = int_0^inf exp(-r t) K_alpha(r) dr with t = x^(1/alpha) and
//   K_alpha(r) = sin(alpha pi) r^(alpha-1) / (pi (r^(2 alpha) + 2 r^alpha cos(alpha pi) + 1)).
// After r = exp(y) the integrand decays exponentially as y -> -inf and double
// exponentially as y -> inf, so the trapezoidal rule converges geometrically;
// the step is chosen from the distance of the nearest pole of K to the real
// axis, pi (1 - alpha) / alpha.
//
double mittag_leffler_integral(double alpha, double x)
{
    const double t = std::pow(x, 1.0 / alpha);
    const double sin_a = std::sin(std::numbers::pi * alpha);
    const double cos_a = std::cos(std::numbers::pi * alpha);
    const double strip = std::numbers::pi * (1.0 - alpha) / alpha;
    const double h = std::min(0.05, 2.0 * std::numbers::pi * strip / 36.0);

    const double y_lo = std::log(1e-17) / alpha - 1.0;
    const double y_hi = std::log(45.0 / t);
    const auto n = static_cast<long>(std::ceil((y_hi - y_lo) / h));

    double sum = 0.0;
    double comp = 0.0;
    for (long i = 0; i <= n; ++i)
    {
        const double y = y_lo + i * h;
        const double s = std::exp(alpha * y);
        const double f =
            std::exp(-std::exp(y) * t) / (s + 2.0 * cos_a + 1.0 / s);
        const double tsum = sum + f;
        comp += (sum - tsum) + f;
        sum = tsum;
    }
    return h * (sum + comp) * sin_a / std::numbers::pi;
}

} // namespace

FractionalOrder::FractionalOrder(double alpha) : m_alpha(alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0))
    {
        throw DomainError(describe("fractional order must lie in (0,1]", alpha));
    }
}

double gamma_fn(double x)
{
    if (!(x > 0.0))
    {
        throw DomainError(describe("gamma_fn requires x > 0", x));
    }
    // Lanczos approximation, g = 7, n = 9
    static constexpr std::array<double, 9> coef = {
        0.99999999999980993,     676.5203681218851,
        -1259.1392167224028,     771.32342877765313,
        -176.61502916214059,     12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6,
        1.5056327351493116e-7};

    if (x < 0.5)
    {
        return gamma_fn(x + 1.0) / x;
    }
    const double xm = x - 1.0;
    double a = coef[0];
    for (std::size_t i = 1; i < coef.size(); ++i)
    {
        a += coef[i] / (xm + static_cast<double>(i));
    }
    const double t = xm + 7.5;
    // split the power so that t^(x-1/2) survives until Gamma itself overflows
    const double half_pow = std::pow(t, 0.5 * (xm + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_pow * std::exp(-t) *
           half_pow * a;
}

double beta_fn(double x, double y)
{
    if (!(x > 0.0 && y > 0.0))
    {
        throw DomainError("beta_fn requires positive arguments");
    }
    if (x + y > 170.0)
    {
        return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
    }
    return gamma_fn(x) * gamma_fn(y) / gamma_fn(x + y);
}

double g_alpha(FractionalOrder alpha, double t)
{
    if (!(t > 0.0))
    {
        throw DomainError(describe("g_alpha is singular for t <= 0", t));
    }
    if (alpha.is_integer())
    {
        return 1.0;
    }
    return std::pow(t, alpha.value() - 1.0) / gamma_fn(alpha.value());
}

double weight_w(FractionalOrder alpha, double theta, WeightVariant variant)
{
    if (!(theta > 0.0 && theta < 1.0))
    {
        throw DomainError(describe("weight_w requires theta in (0,1)", theta));
    }
    if (alpha.is_integer())
    {
        throw DomainError("weight kernels are defined for alpha < 1 only");
    }
    const double a = alpha.value();
    const double w = g_alpha(FractionalOrder(1.0 - a), theta) *
                     g_alpha(alpha, 1.0 - theta);
    switch (variant)
    {
    case WeightVariant::plain:
        return w;
    case WeightVariant::zero:
        return w * (1.0 - theta);
    case WeightVariant::one:
        return w * theta;
    }
    return w;
}

double mittag_leffler(FractionalOrder alpha, double z)
{
    if (!(z >= -50.0 && z <= 0.0))
    {
        throw DomainError(describe("mittag_leffler supports -50 <= z <= 0", z));
    }
    if (z == 0.0)
    {
        return 1.0;
    }
    if (alpha.is_integer())
    {
        return std::exp(z);
    }

    const double a = alpha.value();
    const Estimate est = std::abs(z) <= 10.0
                             ? mittag_leffler_series(a, z)
                             : mittag_leffler_asymptotic(a, z, 10);
    if (est.error <= kMittagLefflerTol)
    {
        return est.value;
    }
    const double value = mittag_leffler_integral(a, -z);
    if (!std::isfinite(value))
    {
        throw ConvergenceError(
            describe("mittag_leffler failed to converge at z", z));
    }
    return value;
}

} // namespace fracflow
