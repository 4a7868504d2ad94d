#ifndef FRACFLOW_RATIONAL_HPP
#define FRACFLOW_RATIONAL_HPP

#include <iosfwd>
#include <stdexcept>

#include <Eigen/Core>

#include "fracflow/special.hpp"

namespace fracflow
{

struct NoConvergenceError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct ConditioningError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

//
// Sum-of-exponentials representation of the fractional kernel obtained from a
// rational approximation of its Laplace symbol,
//
//   z^(-alpha) ~ sum_k w_k / (z + lambda_k) + w_inf,     z in [z_min, z_max],
//
// equivalently g_alpha(t) ~ sum_k w_k exp(-lambda_k t). Poles are stored in
// ascending order.
//
struct SoeApprox
{
    FractionalOrder alpha{1.0};
    Eigen::VectorXd lambda;
    Eigen::VectorXd w;
    double w_inf = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;
    double tol = 0.0;

    Eigen::Index size() const noexcept
    {
        return lambda.size();
    }
};

struct AaaOptions
{
    int samples = 1000;
    int check_points = 2000;
    int max_poles = 80;
};

/// AAA fit of z^(-alpha) on [z_min, z_max] to relative accuracy tol.
SoeApprox aaa_fit(FractionalOrder alpha, double z_min, double z_max,
                  double tol = 1e-8, const AaaOptions& options = {});

/// r(z) = sum_k w_k / (z + lambda_k) + w_inf.
double evaluate_symbol(const SoeApprox& a, double z);

/// max |r(z) - z^(-alpha)| / z^(-alpha) over a geometric grid of n points.
double symbol_relative_error(const SoeApprox& a, int n = 2000);

/// sum_k w_k exp(-lambda_k t).
double soe_kernel_eval(const SoeApprox& a, double t);

//
// Quadrature data in the auxiliary variable: nodes theta_k in [0,1),
// reconstruction weights w_k / (1 + lambda_k) and history weights
// w_k lambda_k / (1 + lambda_k)^2. The infinity mode carries w_inf for both.
//
struct NodeWeights
{
    Eigen::VectorXd theta;
    Eigen::VectorXd recon;
    Eigen::VectorXd hist;
    double recon_inf = 0.0;
    double hist_inf = 0.0;
};

NodeWeights node_weights(const SoeApprox& a);

//
// Plain-text table:
//   # soe alpha=<a> tol=<tol> z_min=<lo> z_max=<hi> w_inf=<w> m=<m>
//   <lambda_1> <w_1>
//   ...
//
void write_table(std::ostream& os, const SoeApprox& a);
SoeApprox read_table(std::istream& is);

} // namespace fracflow

#endif // FRACFLOW_RATIONAL_HPP
