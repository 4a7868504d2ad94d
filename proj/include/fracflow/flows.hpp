#ifndef FRACFLOW_FLOWS_HPP
#define FRACFLOW_FLOWS_HPP

#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "fracflow/fields.hpp"
#include "fracflow/stepper.hpp"

namespace fracflow
{

//
// Ginzburg-Landau parameters. The interface coefficient is
// eps_sq = eps_tilde * beta and the double well is scaled by
// c_psi = beta / eps_tilde, giving the density
//   c_psi (1 - u^2)^2 / 4 + eps_sq |grad u|^2 / 2.
// Defaults give eps_sq = 0.005 and c_psi = 2.
//
struct GLParams
{
    double eps_tilde = 0.05;
    double beta = 0.1;
    double mobility = 1.0;

    double eps_sq() const noexcept
    {
        return eps_tilde * beta;
    }

    double c_psi() const noexcept
    {
        return beta / eps_tilde;
    }

    void validate() const;
};

struct ScalarQuadratic
{
    double lam = 1.0;
};

struct AllenCahn
{
    GLParams params;
};

struct CahnHilliard
{
    GLParams params;
};

using FlowKind = std::variant<ScalarQuadratic, AllenCahn, CahnHilliard>;

std::string flow_name(const FlowKind& kind);

double gl_energy(const Field& u, const GLParams& p);

/// mu = c_psi (u_implicit^3 - u_explicit) - eps_sq Laplacian(u_implicit).
Field chemical_potential(const Field& u_implicit, const Field& u_explicit,
                         const GLParams& p);

//
// H-gradient of the energy with the convex part at u_implicit and the concave
// part at u_explicit:
//   ScalarQuadratic  lam u_implicit
//   AllenCahn        M mu            (H = L2)
//   CahnHilliard     -M Laplacian mu (H = dual of H1 on mean-zero fields)
//
Field gradient(const FlowKind& kind, const Field& u_implicit, const Field& u_explicit);

Eigen::VectorXd gradient(const ScalarQuadratic& kind, const Eigen::VectorXd& u);

/// Energy of the flow: gl_energy, or lam |u|^2 / 2 for the quadratic flow.
double flow_energy(const FlowKind& kind, const Field& u);

/// Squared norm of the flow's Hilbert space, (1/M) |v|_H^2.
double flow_norm_sq(const FlowKind& kind, const Field& v);

struct NewtonOptions
{
    double tol = 1e-10;
    int max_iter = 30;
    double cg_tol = 1e-12;
    int cg_max_iter = 500;
};

struct StepStats
{
    int newton_iterations = 0;
    int cg_iterations = 0;
    double residual = 0.0;
};

struct StepFailure : std::runtime_error
{
    StepFailure(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations)
    {
    }

    double residual;
    int iterations;
};

//
// One step of the kernel-compressed flow. With h the history term and kappa
// from stepper_coefficients, solves
//   u + kappa gradient(kind, u, u^n) = h
// by Newton's method (cosine-preconditioned CG for the linearised systems) and
// advances the modes with the converged gradient.
//
ModeBank<Field> semi_implicit_step(ModeBank<Field> bank, const FlowKind& kind,
                                   double dt, const NewtonOptions& options = {},
                                   StepStats* stats = nullptr);

ModeBank<Eigen::VectorXd> semi_implicit_step(ModeBank<Eigen::VectorXd> bank,
                                             const ScalarQuadratic& kind, double dt,
                                             StepStats* stats = nullptr);

} // namespace fracflow

#endif // FRACFLOW_FLOWS_HPP
