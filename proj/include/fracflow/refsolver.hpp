#ifndef FRACFLOW_REFSOLVER_HPP
#define FRACFLOW_REFSOLVER_HPP

#include <vector>

#include <Eigen/Core>

#include "fracflow/special.hpp"

namespace fracflow
{

//
// L1 weights b_j = ((j+1)^(1-alpha) - j^(1-alpha)) dt^(-alpha) / Gamma(2-alpha),
// j = 0..n-1, so that the Caputo derivative at t_n is approximated by
// sum_j b_j (u^{n-j} - u^{n-j-1}).
//
Eigen::VectorXd l1_coefficients(FractionalOrder alpha, int n, double dt);

//
// Full-history L1 discretization of the scalar relaxation
// d^alpha u / dt^alpha = -lam u. Memory and work grow with the step count;
// this is a reference solver, not a production path.
//
class L1History
{
public:
    L1History(FractionalOrder alpha, double dt, double u0, int capacity = 0);

    /// Advance one step; returns the new state.
    double step(double lam);

    const std::vector<double>& states() const noexcept
    {
        return m_states;
    }

    FractionalOrder alpha() const noexcept
    {
        return m_alpha;
    }

    double dt() const noexcept
    {
        return m_dt;
    }

private:
    FractionalOrder m_alpha;
    double m_dt;
    Eigen::VectorXd m_b;
    std::vector<double> m_states;
};

/// Trajectory u^0..u^N of the L1 scheme for d^alpha u = -lam u.
std::vector<double> l1_solve_scalar(FractionalOrder alpha, double lam, double u0,
                                    double dt, int n_steps);

} // namespace fracflow

#endif // FRACFLOW_REFSOLVER_HPP
