#include "fracflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "fracflow/special.hpp"

namespace fracflow
{

QuadratureRule gauss_jacobi(int n, double left, double right)
{
    if (n < 1)
    {
        throw std::invalid_argument("gauss_jacobi: need at least one node");
    }
    if (!(left > -1.0 && right > -1.0))
    {
        throw DomainError("gauss_jacobi: exponents must exceed -1");
    }

    // Jacobi recurrence on [-1,1] for (1-x)^a (1+x)^b; theta = (1+x)/2 maps
    // (1+x)^b onto theta^left.
    const double a = right;
    const double b = left;
    const double ab = a + b;

    Eigen::VectorXd diag(n);
    Eigen::VectorXd offdiag(n > 1 ? n - 1 : 0);
    diag[0] = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k)
    {
        const double s = 2.0 * k + ab;
        diag[k] = (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k)
    {
        const double s = 2.0 * k + ab;
        // (k + a + b) / (s - 1) is identically 1 at k = 1 (0/0 when a + b = -1)
        const double r = (k == 1) ? 1.0 : (k + ab) / (s - 1.0);
        const double beta = 4.0 * k * (k + a) * (k + b) * r / (s * s * (s + 1.0));
        offdiag[k - 1] = std::sqrt(beta);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
    {
        throw std::runtime_error("gauss_jacobi: eigenvalue solve failed");
    }

    const double mass = beta_fn(left + 1.0, right + 1.0);
    QuadratureRule rule;
    rule.nodes = (solver.eigenvalues().array() + 1.0) * 0.5;
    rule.weights =
        mass * solver.eigenvectors().row(0).transpose().array().square();
    return rule;
}

QuadratureRule gauss_legendre(int n, double lo, double hi)
{
    return map_rule(gauss_jacobi(n, 0.0, 0.0), lo, hi, 0.0, 0.0);
}

QuadratureRule map_rule(const QuadratureRule& rule, double lo, double hi,
                        double left, double right)
{
    const double len = hi - lo;
    QuadratureRule out;
    out.nodes = lo + len * rule.nodes.array();
    out.weights = rule.weights * std::pow(len, 1.0 + left + right);
    return out;
}

} // namespace fracflow
