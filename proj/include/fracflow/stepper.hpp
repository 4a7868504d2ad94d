#ifndef FRACFLOW_STEPPER_HPP
#define FRACFLOW_STEPPER_HPP

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fracflow/rational.hpp"

namespace fracflow
{

//
// Augmented state of the kernel-compressed flow: one mode per pole of the
// rational fit, the algebraic infinity mode and the initial datum. State is
// any vector-space type supporting +, - and scalar multiplication (Eigen
// vectors and arrays, GridField).
//
template <typename State>
struct ModeBank
{
    std::shared_ptr<const SoeApprox> approx;
    State u0;
    std::vector<State> modes;
    State mode_inf;
    double t = 0.0;
};

/// Bank at t = 0: every mode is zero, so reconstruct() returns u0 exactly.
template <typename State>
ModeBank<State> make_bank(std::shared_ptr<const SoeApprox> approx, State u0)
{
    ModeBank<State> bank;
    const State zero = u0 * 0.0;
    bank.modes.assign(static_cast<std::size_t>(approx->size()), zero);
    bank.mode_inf = zero;
    bank.u0 = std::move(u0);
    bank.approx = std::move(approx);
    return bank;
}

//
// Implicit-Euler coefficients of the mode update
//   u_k <- decay_k u_k - inject_k g,   u_inf <- -g,
// with decay_k = 1/(1 + lambda_k dt) and inject_k = (1 + lambda_k) dt decay_k.
// kappa collapses the update of the reconstruction: u^{n+1} = h^n - kappa g.
//
struct StepperCoefficients
{
    double kappa = 0.0;
    Eigen::VectorXd decay;
    Eigen::VectorXd inject;
};

inline StepperCoefficients stepper_coefficients(const SoeApprox& a, double dt)
{
    const Eigen::ArrayXd lam = a.lambda.array();
    StepperCoefficients c;
    c.decay = (1.0 / (1.0 + lam * dt)).matrix();
    c.inject = ((1.0 + lam) * dt * c.decay.array()).matrix();
    c.kappa = (a.w.array() * dt * c.decay.array()).sum() + a.w_inf;
    return c;
}

/// u_0 + sum_k recon_k u_k + w_inf u_inf, summed in ascending-lambda order.
template <typename State>
State reconstruct(const ModeBank<State>& bank)
{
    const NodeWeights nw = node_weights(*bank.approx);
    State u = bank.u0;
    for (std::size_t k = 0; k < bank.modes.size(); ++k)
    {
        u = u + nw.recon[static_cast<Eigen::Index>(k)] * bank.modes[k];
    }
    return u + nw.recon_inf * bank.mode_inf;
}

//
// History term h^n = u_0 + sum_k recon_k decay_k u_k^n: the part of u^{n+1}
// that is already known before the gradient at the new level is computed.
//
template <typename State>
State history_term(const ModeBank<State>& bank, const StepperCoefficients& c)
{
    const NodeWeights nw = node_weights(*bank.approx);
    State h = bank.u0;
    for (std::size_t k = 0; k < bank.modes.size(); ++k)
    {
        const auto i = static_cast<Eigen::Index>(k);
        h = h + (nw.recon[i] * c.decay[i]) * bank.modes[k];
    }
    return h;
}

template <typename State>
ModeBank<State> mode_step(ModeBank<State> bank, const State& g, double dt)
{
    const StepperCoefficients c = stepper_coefficients(*bank.approx, dt);
    for (std::size_t k = 0; k < bank.modes.size(); ++k)
    {
        const auto i = static_cast<Eigen::Index>(k);
        bank.modes[k] = c.decay[i] * bank.modes[k] - c.inject[i] * g;
    }
    bank.mode_inf = -1.0 * g;
    bank.t += dt;
    return bank;
}

//
// H = 1/2 sum_k hist_k |u_k|^2 + 1/2 w_inf |u_inf|^2, where norm_sq evaluates
// the squared norm of the flow's Hilbert space.
//
template <typename State, typename NormSq>
double history_energy(const ModeBank<State>& bank, NormSq&& norm_sq)
{
    const NodeWeights nw = node_weights(*bank.approx);
    double h = 0.0;
    for (std::size_t k = 0; k < bank.modes.size(); ++k)
    {
        const double hw = nw.hist[static_cast<Eigen::Index>(k)];
        if (hw != 0.0)
        {
            h += hw * norm_sq(bank.modes[k]);
        }
    }
    if (nw.hist_inf != 0.0)
    {
        h += nw.hist_inf * norm_sq(bank.mode_inf);
    }
    return 0.5 * h;
}

} // namespace fracflow

#endif // FRACFLOW_STEPPER_HPP
