#ifndef FRACFLOW_QUADRATURE_HPP
#define FRACFLOW_QUADRATURE_HPP

#include <Eigen/Core>

namespace fracflow
{

struct QuadratureRule
{
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    template <typename Function>
    double integrate(Function&& f) const
    {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < nodes.size(); ++i)
        {
            sum += weights[i] * f(nodes[i]);
        }
        return sum;
    }
};

//
// n-point Gauss-Jacobi rule on (0,1) for the weight
//   theta^left (1 - theta)^right,   left, right > -1,
// computed by the Golub-Welsch eigenvalue method.
//
QuadratureRule gauss_jacobi(int n, double left, double right);

/// Gauss-Legendre rule on (lo, hi).
QuadratureRule gauss_legendre(int n, double lo = 0.0, double hi = 1.0);

//
// Affine map of a Jacobi rule from (0,1) to (lo,hi). The weights absorb the
// Jacobian of the weight function, so the rule integrates
// (theta - lo)^left (hi - theta)^right f(theta) over (lo,hi).
//
QuadratureRule map_rule(const QuadratureRule& rule, double lo, double hi,
                        double left, double right);

} // namespace fracflow

#endif // FRACFLOW_QUADRATURE_HPP
