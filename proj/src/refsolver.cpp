#include "fracflow/refsolver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracflow
{

Eigen::VectorXd l1_coefficients(FractionalOrder alpha, int n, double dt)
{
    if (n < 1)
    {
        throw std::invalid_argument("l1_coefficients: n must be >= 1");
    }
    if (!(dt > 0.0))
    {
        throw std::invalid_argument("l1_coefficients: dt must be positive");
    }
    const double a = alpha.value();
    const double scale = std::pow(dt, -a) / gamma_fn(2.0 - a);
    Eigen::VectorXd b(n);
    for (int j = 0; j < n; ++j)
    {
        // 0^{1-a} is 0 for every a in (0, 1], which pow gets wrong at a = 1
        const double lower = j == 0 ? 0.0 : std::pow(double(j), 1.0 - a);
        b[j] = (std::pow(j + 1.0, 1.0 - a) - lower) * scale;
    }
    return b;
}

L1History::L1History(FractionalOrder alpha, double dt, double u0, int capacity)
    : m_alpha(alpha), m_dt(dt)
{
    if (!(dt > 0.0))
    {
        throw std::invalid_argument("L1History: dt must be positive");
    }
    m_states.reserve(static_cast<std::size_t>(capacity) + 1);
    m_states.push_back(u0);
    m_b = l1_coefficients(alpha, std::max(capacity, 1), dt);
}

double L1History::step(double lam)
{
    const auto n = static_cast<Eigen::Index>(m_states.size());
    if (m_b.size() < n)
    {
        m_b = l1_coefficients(m_alpha, static_cast<int>(2 * n), m_dt);
    }
    // b_0 (u^n - u^{n-1}) + sum_{j>=1} b_j (u^{n-j} - u^{n-j-1}) + lam u^n = 0
    double memory = 0.0;
    for (Eigen::Index j = 1; j < n; ++j)
    {
        const auto i = static_cast<std::size_t>(n - j);
        memory += m_b[j] * (m_states[i] - m_states[i - 1]);
    }
    const double prev = m_states.back();
    const double next = (m_b[0] * prev - memory) / (m_b[0] + lam);
    m_states.push_back(next);
    return next;
}

std::vector<double> l1_solve_scalar(FractionalOrder alpha, double lam, double u0,
                                    double dt, int n_steps)
{
    if (!(lam >= 0.0))
    {
        throw std::invalid_argument("l1_solve_scalar: lam must be nonnegative");
    }
    L1History history(alpha, dt, u0, n_steps);
    for (int n = 0; n < n_steps; ++n)
    {
        history.step(lam);
    }
    return history.states();
}

} // namespace fracflow
