#ifndef FRACFLOW_SPECIAL_HPP
#define FRACFLOW_SPECIAL_HPP

#include <stdexcept>
#include <string>

namespace fracflow
{

struct DomainError : std::domain_error
{
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

//
// Order of the fractional time derivative, 0 < alpha <= 1. alpha = 1 is the
// classical first derivative.
//
class FractionalOrder
{
public:
    explicit FractionalOrder(double alpha);

    double value() const noexcept
    {
        return m_alpha;
    }

    bool is_integer() const noexcept
    {
        return m_alpha == 1.0;
    }

    operator double() const noexcept
    {
        return m_alpha;
    }

private:
    double m_alpha;
};

/// Gamma function for x > 0 (Lanczos, g = 7).
double gamma_fn(double x);

/// Euler beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y).
double beta_fn(double x, double y);

/// Riemann-Liouville kernel g_alpha(t) = t^(alpha-1) / Gamma(alpha), t > 0.
double g_alpha(FractionalOrder alpha, double t);

enum class WeightVariant
{
    plain, ///< w_alpha(theta) = g_{1-alpha}(theta) g_alpha(1-theta)
    zero,  ///< w_alpha(theta) (1 - theta)
    one,   ///< w_alpha(theta) theta
};

//
// Weight kernels over the auxiliary variable theta in (0,1). For alpha = 1
// the g_{1-alpha} factor degenerates; theta is rejected in that case.
//
double weight_w(FractionalOrder alpha, double theta,
                WeightVariant variant = WeightVariant::plain);

//
// One-parameter Mittag-Leffler function E_alpha(z) for real -50 <= z <= 0.
//
// Regimes: power series (Neumaier-compensated) for |z| <= 10, the algebraic
// asymptotic expansion for |z| > 10, and the real-axis integral
// representation whenever the selected regime cannot certify an absolute
// error below 1e-10 (small alpha with moderate |z|, for instance).
//
double mittag_leffler(FractionalOrder alpha, double z);

} // namespace fracflow

#endif // FRACFLOW_SPECIAL_HPP
