#include "fracflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracflow
{

namespace
{

using Array = Field::Array;

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Relative CG tolerance for a Newton correction: loose while the nonlinear
// residual is large, never tighter than needed to land below the target.
double forcing(double res, double target, double floor_tol)
{
    const double eta = std::min(1e-2, res);
    return std::max({floor_tol, eta, 0.1 * target / res});
}

double dot(const Array& a, const Array& b)
{
    return (a * b).sum();
}

Array laplacian(const Array& v, double dx)
{
    return laplacian_neumann(Field(v, dx)).values();
}

// Applies a diagonal multiplier in the cosine basis; the constant mode is
// dropped.
struct SpectralPair
{
    Array z;
    Array y;
};

class CahnHilliardSolver
{
public:
    CahnHilliardSolver(const Field& h, const Field& u_explicit, const GLParams& p,
                       double kappa, const NewtonOptions& opt)
        : m_h(h), m_ue(u_explicit), m_p(p), m_kappa(kappa), m_opt(opt),
          m_spec(neumann_spectrum(h)), m_dx(h.dx()), m_eig(m_spec.eigenvalues())
    {
        m_eig_safe = m_eig;
        m_eig_safe(0, 0) = 1.0;
    }

    Field solve(StepStats& stats)
    {
        Array u = m_ue.values() + (m_h.mean() - m_ue.mean());
        Array R = residual(u);
        double res = hm1_norm(R);
        const double scale = std::max(1.0, hm1_norm(m_h.values() - m_h.mean()));

        int it = 0;
        while (res > m_opt.tol * scale)
        {
            if (it == m_opt.max_iter)
            {
                std::ostringstream os;
                os << "Cahn-Hilliard Newton did not converge: residual " << res
                   << " after " << it << " iterations";
                throw StepFailure(os.str(), res, it);
            }
            const Array delta = solve_linear(u, -R, forcing(res, m_opt.tol * scale, m_opt.cg_tol), stats.cg_iterations);

            double step = 1.0;
            Array trial = u + delta;
            Array R_trial = residual(trial);
            double res_trial = hm1_norm(R_trial);
            for (int halving = 0; halving < 5 && res_trial > res; ++halving)
            {
                step *= 0.5;
                trial = u + step * delta;
                R_trial = residual(trial);
                res_trial = hm1_norm(R_trial);
            }
            u = std::move(trial);
            R = std::move(R_trial);
            res = res_trial;
            ++it;
        }
        stats.newton_iterations = it;
        stats.residual = res;
        return Field(std::move(u), m_dx);
    }

    Array gradient_at(const Array& u) const
    {
        const Array mu = m_p.c_psi() * (u.cube() - m_ue.values()) -
                         m_p.eps_sq() * laplacian(u, m_dx);
        return -m_p.mobility * laplacian(mu, m_dx);
    }

private:
    Array residual(const Array& u) const
    {
        Array R = u - m_h.values() + m_kappa * gradient_at(u);
        return R - R.mean();
    }

    double hm1_norm(const Array& r) const
    {
        Array c = m_spec.forward(r);
        c(0, 0) = 0.0;
        return std::sqrt((c.square() / m_eig_safe).sum()) * m_dx;
    }

    Array jacobian(const Array& D, const Array& p) const
    {
        const Array inner = D * p - m_p.eps_sq() * laplacian(p, m_dx);
        return p - m_kappa * m_p.mobility * laplacian(inner, m_dx);
    }

    // y = (-Laplacian)^{-1} P^{-1} r spectrally, then z = P^{-1} r = -Laplacian y
    // with the stencil, which the cosine basis diagonalises exactly.
    SpectralPair precondition(const Array& r, const Array& multiplier) const
    {
        Array c = m_spec.forward(r);
        c /= multiplier * m_eig_safe;
        c(0, 0) = 0.0;
        Array y = m_spec.inverse(c);
        Array z = -laplacian(y, m_dx);
        return {std::move(z), std::move(y)};
    }

    //
    // PCG for J delta = b on mean-zero fields, where
    //   J = I + kappa M (-Laplacian)(3 c_psi u^2 + eps_sq (-Laplacian)).
    // J is self-adjoint and positive in the dual inner product
    // <a, b> = (a, (-Laplacian)^{-1} b), which is the one used here; q tracks
    // (-Laplacian)^{-1} p so that no extra transforms are needed.
    //
    Array solve_linear(const Array& u, const Array& b, double rtol, int& cg_total) const
    {
        const Array D = 3.0 * m_p.c_psi() * u.square();
        const double km = m_kappa * m_p.mobility;
        const Array multiplier =
            1.0 + km * m_eig * (D.mean() + m_p.eps_sq() * m_eig);

        Array x = Array::Zero(u.rows(), u.cols());
        Array r = b - b.mean();
        SpectralPair zy = precondition(r, multiplier);
        double rz = dot(r, zy.y);
        const double rz0 = rz;
        Array p = zy.z;
        Array q = zy.y;
        if (rz0 <= 0.0)
        {
            return x;
        }
        for (int it = 0; it < m_opt.cg_max_iter; ++it)
        {
            Array Ap = jacobian(D, p);
            Ap -= Ap.mean();
            const double pAp = dot(Ap, q);
            const double a = rz / pAp;
            x += a * p;
            r -= a * Ap;
            zy = precondition(r, multiplier);
            const double rz_new = dot(r, zy.y);
            ++cg_total;
            if (rz_new <= rtol * rtol * rz0)
            {
                break;
            }
            const double beta = rz_new / rz;
            p = zy.z + beta * p;
            q = zy.y + beta * q;
            rz = rz_new;
        }
        return x - x.mean();
    }

    const Field& m_h;
    const Field& m_ue;
    GLParams m_p;
    double m_kappa;
    NewtonOptions m_opt;
    const NeumannSpectrum<double>& m_spec;
    double m_dx;
    Array m_eig;
    Array m_eig_safe;
};

class AllenCahnSolver
{
public:
    AllenCahnSolver(const Field& h, const Field& u_explicit, const GLParams& p,
                    double kappa, const NewtonOptions& opt)
        : m_h(h), m_ue(u_explicit), m_p(p), m_kappa(kappa), m_opt(opt),
          m_spec(neumann_spectrum(h)), m_dx(h.dx())
    {
    }

    Field solve(StepStats& stats)
    {
        Array u = m_ue.values();
        Array R = residual(u);
        double res = norm(R);
        const double scale = std::max(1.0, norm(m_h.values()));

        int it = 0;
        while (res > m_opt.tol * scale)
        {
            if (it == m_opt.max_iter)
            {
                std::ostringstream os;
                os << "Allen-Cahn Newton did not converge: residual " << res
                   << " after " << it << " iterations";
                throw StepFailure(os.str(), res, it);
            }
            const Array delta = solve_linear(u, -R, forcing(res, m_opt.tol * scale, m_opt.cg_tol), stats.cg_iterations);
            double step = 1.0;
            Array trial = u + delta;
            Array R_trial = residual(trial);
            double res_trial = norm(R_trial);
            for (int halving = 0; halving < 5 && res_trial > res; ++halving)
            {
                step *= 0.5;
                trial = u + step * delta;
                R_trial = residual(trial);
                res_trial = norm(R_trial);
            }
            u = std::move(trial);
            R = std::move(R_trial);
            res = res_trial;
            ++it;
        }
        stats.newton_iterations = it;
        stats.residual = res;
        return Field(std::move(u), m_dx);
    }

    Array gradient_at(const Array& u) const
    {
        return m_p.mobility * (m_p.c_psi() * (u.cube() - m_ue.values()) -
                               m_p.eps_sq() * laplacian(u, m_dx));
    }

private:
    Array residual(const Array& u) const
    {
        return u - m_h.values() + m_kappa * gradient_at(u);
    }

    double norm(const Array& r) const
    {
        return std::sqrt(r.square().sum()) * m_dx;
    }

    // PCG in L2 for (I + kappa M (3 c_psi u^2 - eps_sq Laplacian)) delta = b
    Array solve_linear(const Array& u, const Array& b, double rtol, int& cg_total) const
    {
        const Array D = 3.0 * m_p.c_psi() * u.square();
        const double km = m_kappa * m_p.mobility;
        const Array multiplier =
            1.0 + km * (D.mean() + m_p.eps_sq() * m_spec.eigenvalues());
        auto apply = [&](const Array& p) {
            return Array(p + km * (D * p - m_p.eps_sq() * laplacian(p, m_dx)));
        };
        auto precondition = [&](const Array& r) {
            return Array(m_spec.inverse(m_spec.forward(r) / multiplier));
        };

        Array x = Array::Zero(u.rows(), u.cols());
        Array r = b;
        Array z = precondition(r);
        double rz = dot(r, z);
        const double rz0 = rz;
        Array p = z;
        if (rz0 <= 0.0)
        {
            return x;
        }
        for (int it = 0; it < m_opt.cg_max_iter; ++it)
        {
            const Array Ap = apply(p);
            const double a = rz / dot(p, Ap);
            x += a * p;
            r -= a * Ap;
            z = precondition(r);
            const double rz_new = dot(r, z);
            ++cg_total;
            if (rz_new <= rtol * rtol * rz0)
            {
                break;
            }
            p = z + (rz_new / rz) * p;
            rz = rz_new;
        }
        return x;
    }

    const Field& m_h;
    const Field& m_ue;
    GLParams m_p;
    double m_kappa;
    NewtonOptions m_opt;
    const NeumannSpectrum<double>& m_spec;
    double m_dx;
};

} // namespace

void GLParams::validate() const
{
    if (!(eps_tilde > 0.0 && beta > 0.0 && mobility > 0.0))
    {
        throw std::invalid_argument("GLParams: eps_tilde, beta and mobility must be positive");
    }
}

std::string flow_name(const FlowKind& kind)
{
    return std::visit(overloaded{
                          [](const ScalarQuadratic&) { return std::string("scalar"); },
                          [](const AllenCahn&) { return std::string("allen-cahn"); },
                          [](const CahnHilliard&) { return std::string("cahn-hilliard"); },
                      },
                      kind);
}

double gl_energy(const Field& u, const GLParams& p)
{
    const auto& v = u.values();
    const double h2 = u.dx() * u.dx();
    const double bulk = (0.25 * p.c_psi() * (1.0 - v.square()).square()).sum() * h2;
    // forward differences over interior edges; no flux through the boundary
    const double gx =
        (v.rightCols(u.nx() - 1) - v.leftCols(u.nx() - 1)).square().sum();
    const double gy =
        (v.bottomRows(u.ny() - 1) - v.topRows(u.ny() - 1)).square().sum();
    return bulk + 0.5 * p.eps_sq() * (gx + gy);
}

Field chemical_potential(const Field& u_implicit, const Field& u_explicit,
                         const GLParams& p)
{
    u_implicit.require_same(u_explicit);
    const Array lap = laplacian_neumann(u_implicit).values();
    Array mu = p.c_psi() * (u_implicit.values().cube() - u_explicit.values()) -
               p.eps_sq() * lap;
    return Field(std::move(mu), u_implicit.dx());
}

Field gradient(const FlowKind& kind, const Field& u_implicit, const Field& u_explicit)
{
    return std::visit(
        overloaded{
            [&](const ScalarQuadratic& s) { return s.lam * u_implicit; },
            [&](const AllenCahn& ac) {
                return ac.params.mobility *
                       chemical_potential(u_implicit, u_explicit, ac.params);
            },
            [&](const CahnHilliard& ch) {
                const Field mu = chemical_potential(u_implicit, u_explicit, ch.params);
                return -ch.params.mobility * laplacian_neumann(mu);
            },
        },
        kind);
}

Eigen::VectorXd gradient(const ScalarQuadratic& kind, const Eigen::VectorXd& u)
{
    return kind.lam * u;
}

double flow_energy(const FlowKind& kind, const Field& u)
{
    return std::visit(
        overloaded{
            [&](const ScalarQuadratic& s) { return 0.5 * s.lam * inner_l2(u, u); },
            [&](const AllenCahn& ac) { return gl_energy(u, ac.params); },
            [&](const CahnHilliard& ch) { return gl_energy(u, ch.params); },
        },
        kind);
}

double flow_norm_sq(const FlowKind& kind, const Field& v)
{
    return std::visit(
        overloaded{
            [&](const ScalarQuadratic&) { return inner_l2(v, v); },
            [&](const AllenCahn& ac) { return inner_l2(v, v) / ac.params.mobility; },
            [&](const CahnHilliard& ch) { return norm_hm1_sq(v) / ch.params.mobility; },
        },
        kind);
}

ModeBank<Field> semi_implicit_step(ModeBank<Field> bank, const FlowKind& kind,
                                   double dt, const NewtonOptions& options,
                                   StepStats* stats)
{
    if (!(dt > 0.0))
    {
        throw std::invalid_argument("semi_implicit_step: dt must be positive");
    }
    const StepperCoefficients c = stepper_coefficients(*bank.approx, dt);
    const Field u_n = reconstruct(bank);
    const Field h = history_term(bank, c);

    StepStats local;
    StepStats& st = stats ? *stats : local;
    st = StepStats{};

    Field g = std::visit(
        overloaded{
            [&](const ScalarQuadratic& s) {
                st.newton_iterations = 1;
                const Field u = (1.0 / (1.0 + c.kappa * s.lam)) * h;
                return s.lam * u;
            },
            [&](const AllenCahn& ac) {
                ac.params.validate();
                AllenCahnSolver solver(h, u_n, ac.params, c.kappa, options);
                const Field u = solver.solve(st);
                return Field(solver.gradient_at(u.values()), u.dx());
            },
            [&](const CahnHilliard& ch) {
                ch.params.validate();
                CahnHilliardSolver solver(h, u_n, ch.params, c.kappa, options);
                const Field u = solver.solve(st);
                Array g = solver.gradient_at(u.values());
                return Field(g - g.mean(), u.dx());
            },
        },
        kind);
    return mode_step(std::move(bank), g, dt);
}

ModeBank<Eigen::VectorXd> semi_implicit_step(ModeBank<Eigen::VectorXd> bank,
                                             const ScalarQuadratic& kind, double dt,
                                             StepStats* stats)
{
    if (!(dt > 0.0))
    {
        throw std::invalid_argument("semi_implicit_step: dt must be positive");
    }
    const StepperCoefficients c = stepper_coefficients(*bank.approx, dt);
    const Eigen::VectorXd h = history_term(bank, c);
    const Eigen::VectorXd u = h / (1.0 + c.kappa * kind.lam);
    if (stats)
    {
        *stats = StepStats{1, 0, 0.0};
    }
    return mode_step(std::move(bank), gradient(kind, u), dt);
}

} // namespace fracflow
