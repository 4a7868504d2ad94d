#ifndef FRACFLOW_TESTS_REFERENCE_GL_HPP
#define FRACFLOW_TESTS_REFERENCE_GL_HPP

// Classical backward-Euler convex-splitting steps assembled with sparse
// matrices and solved by Newton with a sparse LU factorisation. Shares no code
// with the library solvers beyond the field type.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "fracflow/fields.hpp"
#include "fracflow/flows.hpp"

namespace reference
{

using SpMat = Eigen::SparseMatrix<double>;

inline SpMat laplacian_matrix(int nx, int ny, double dx)
{
    std::vector<Eigen::Triplet<double>> t;
    const double s = 1.0 / (dx * dx);
    for (int j = 0; j < ny; ++j)
    {
        for (int i = 0; i < nx; ++i)
        {
            const int row = j * nx + i;
            double diag = 0.0;
            const auto link = [&](int jj, int ii) {
                t.emplace_back(row, jj * nx + ii, s);
                diag -= s;
            };
            if (i > 0) link(j, i - 1);
            if (i + 1 < nx) link(j, i + 1);
            if (j > 0) link(j - 1, i);
            if (j + 1 < ny) link(j + 1, i);
            t.emplace_back(row, row, diag);
        }
    }
    SpMat L(nx * ny, nx * ny);
    L.setFromTriplets(t.begin(), t.end());
    return L;
}

// u - u_n + dt G(u) = 0 with
//   Allen-Cahn       G = M mu
//   Cahn-Hilliard    G = -M L mu,   mu = c (u^3 - u_n) - eps^2 L u
inline fracflow::Field backward_euler_step(const fracflow::Field& un, const fracflow::GLParams& p,
                                           bool cahn_hilliard, double dt)
{
    const int nx = un.nx();
    const int ny = un.ny();
    const int N = nx * ny;
    const SpMat L = laplacian_matrix(nx, ny, un.dx());
    SpMat I(N, N);
    I.setIdentity();
    const Eigen::Map<const Eigen::VectorXd> uold(un.values().data(), N);
    Eigen::VectorXd u = uold;
    const double c = p.c_psi();
    const double e2 = p.eps_sq();
    const double M = p.mobility;

    const auto residual = [&](const Eigen::VectorXd& v) {
        const Eigen::VectorXd mu = c * (v.array().cube() - uold.array()).matrix() - e2 * (L * v);
        const Eigen::VectorXd G = cahn_hilliard ? Eigen::VectorXd(-M * (L * mu)) : Eigen::VectorXd(M * mu);
        return Eigen::VectorXd(v - uold + dt * G);
    };

    Eigen::VectorXd R = residual(u);
    for (int it = 0; it < 50 && R.norm() > 1e-14 * std::sqrt(double(N)); ++it)
    {
        Eigen::VectorXd d = 3.0 * c * u.array().square();
        SpMat D(N, N);
        D.reserve(Eigen::VectorXi::Constant(N, 1));
        for (int k = 0; k < N; ++k)
        {
            D.insert(k, k) = d[k];
        }
        const SpMat inner = D - e2 * L;
        const SpMat J = cahn_hilliard ? SpMat(I - dt * M * (L * inner)) : SpMat(I + dt * M * inner);
        Eigen::SparseLU<SpMat> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success)
        {
            throw std::runtime_error("reference: factorisation failed");
        }
        u -= lu.solve(R);
        R = residual(u);
    }
    fracflow::Field::Array out(ny, nx);
    Eigen::Map<Eigen::VectorXd>(out.data(), N) = u;
    return fracflow::Field(std::move(out), un.dx());
}

} // namespace reference

#endif // FRACFLOW_TESTS_REFERENCE_GL_HPP
