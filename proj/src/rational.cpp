#include "fracflow/rational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace fracflow
{

namespace
{

using Complex = std::complex<double>;

Eigen::VectorXd geometric_grid(double lo, double hi, int n)
{
    Eigen::VectorXd z(n);
    const double log_lo = std::log(lo);
    const double step = (std::log(hi) - log_lo) / (n - 1);
    for (int i = 0; i < n; ++i)
    {
        z[i] = std::exp(log_lo + step * i);
    }
    z[0] = lo;
    z[n - 1] = hi;
    return z;
}

struct Barycentric
{
    Eigen::VectorXd support;
    Eigen::VectorXd values;
    Eigen::VectorXd weights;
};

struct PoleResidue
{
    std::vector<double> lambda;
    std::vector<double> w;
    double w_inf = 0.0;
    bool clean = true;
};

//
// Poles are the finite eigenvalues of the arrowhead pencil
//   [0 w^T; 1 diag(z)] - lambda diag(0, 1, ..., 1);
// residues follow from N(p) / D'(p) of the barycentric quotient N / D.
//
PoleResidue to_partial_fractions(const Barycentric& b, double z_min,
                                 double value_scale)
{
    const Eigen::Index n = b.support.size();
    PoleResidue out;

    const double wsum = b.weights.sum();
    out.w_inf = b.weights.dot(b.values) / wsum;
    if (std::abs(out.w_inf) <= 1e-12 * value_scale)
    {
        out.w_inf = 0.0;
    }
    if (n == 1)
    {
        return out;
    }

    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n + 1, n + 1);
    E.block(0, 1, 1, n) = b.weights.transpose();
    E.block(1, 0, n, 1).setOnes();
    E.block(1, 1, n, n).diagonal() = b.support;
    B.block(1, 1, n, n).setIdentity();

    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(E, B, false);
    if (ges.info() != Eigen::Success)
    {
        throw ConditioningError("aaa_fit: pole eigenproblem failed");
    }
    const Eigen::VectorXcd alphas = ges.alphas();
    const Eigen::VectorXd betas = ges.betas();

    // the pencil has two infinite eigenvalues; keep the n - 1 most finite ones
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n + 1));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto finiteness = [&](Eigen::Index i) {
        return std::abs(betas[i]) / (std::abs(alphas[i]) + std::abs(betas[i]));
    };
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return finiteness(i) > finiteness(j);
    });

    for (Eigen::Index k = 0; k < n - 1; ++k)
    {
        const Eigen::Index i = order[static_cast<std::size_t>(k)];
        const Complex pole = alphas[i] / betas[i];

        Complex num = 0.0;
        Complex dden = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
        {
            const Complex inv = 1.0 / (pole - b.support[j]);
            num += b.weights[j] * b.values[j] * inv;
            dden -= b.weights[j] * inv * inv;
        }
        const Complex residue = num / dden;

        double lambda = -pole.real();
        const double scale = std::max(std::abs(pole), z_min);
        if (!std::isfinite(lambda) || std::abs(pole.imag()) > 1e-10 * scale)
        {
            out.clean = false;
            continue;
        }
        if (lambda < 0.0)
        {
            if (lambda >= -1e-10 * z_min)
            {
                lambda = 0.0;
            }
            else
            {
                out.clean = false;
                continue;
            }
        }
        if (lambda <= 1e-10 * z_min)
        {
            lambda = 0.0;
        }
        out.lambda.push_back(lambda);
        out.w.push_back(residue.real());
    }

    std::vector<std::size_t> idx(out.lambda.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return out.lambda[i] < out.lambda[j];
    });
    PoleResidue sorted;
    sorted.w_inf = out.w_inf;
    sorted.clean = out.clean;
    for (std::size_t i : idx)
    {
        if (!sorted.lambda.empty() && out.lambda[i] == sorted.lambda.back())
        {
            sorted.clean = false;
        }
        sorted.lambda.push_back(out.lambda[i]);
        sorted.w.push_back(out.w[i]);
    }
    return sorted;
}

// Residues and w_inf by relative least squares on the sample grid with the
// poles held fixed; more accurate than N(p)/D'(p) once the fit nears rounding.
void refine_residues(const Eigen::VectorXd& Z, const Eigen::VectorXd& F, SoeApprox& a)
{
    const Eigen::Index m = a.size();
    Eigen::MatrixXd A(Z.size(), m + 1);
    for (Eigen::Index i = 0; i < Z.size(); ++i)
    {
        for (Eigen::Index k = 0; k < m; ++k)
        {
            A(i, k) = 1.0 / ((Z[i] + a.lambda[k]) * F[i]);
        }
        A(i, m) = 1.0 / F[i];
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(Eigen::VectorXd::Ones(Z.size()));
    a.w = x.head(m);
    a.w_inf = x[m];
}

} // namespace

SoeApprox aaa_fit(FractionalOrder alpha, double z_min, double z_max, double tol,
                  const AaaOptions& options)
{
    if (!(z_min > 0.0 && z_max > z_min))
    {
        throw DomainError("aaa_fit: require 0 < z_min < z_max");
    }
    if (!(tol >= 1e-13 && tol <= 1e-2))
    {
        throw DomainError("aaa_fit: tolerance must lie in [1e-13, 1e-2]");
    }

    const int M = options.samples;
    const Eigen::VectorXd Z = geometric_grid(z_min, z_max, M);
    const Eigen::VectorXd F = Z.array().pow(-alpha.value());
    const double value_scale = F.maxCoeff();

    std::vector<Eigen::Index> support;
    std::vector<bool> is_support(static_cast<std::size_t>(M), false);
    Eigen::VectorXd R = Eigen::VectorXd::Constant(M, F.mean());

    for (int n = 1; n <= options.max_poles + 1; ++n)
    {
        // greedy step: next support point at the worst relative error
        Eigen::Index worst = 0;
        double worst_err = -1.0;
        for (Eigen::Index i = 0; i < M; ++i)
        {
            if (is_support[static_cast<std::size_t>(i)])
            {
                continue;
            }
            const double e = std::abs(F[i] - R[i]) / F[i];
            if (e > worst_err)
            {
                worst_err = e;
                worst = i;
            }
        }
        support.push_back(worst);
        is_support[static_cast<std::size_t>(worst)] = true;

        std::vector<Eigen::Index> rest;
        rest.reserve(static_cast<std::size_t>(M - n));
        for (Eigen::Index i = 0; i < M; ++i)
        {
            if (!is_support[static_cast<std::size_t>(i)])
            {
                rest.push_back(i);
            }
        }

        Barycentric bary;
        bary.support.resize(n);
        bary.values.resize(n);
        for (int k = 0; k < n; ++k)
        {
            bary.support[k] = Z[support[static_cast<std::size_t>(k)]];
            bary.values[k] = F[support[static_cast<std::size_t>(k)]];
        }

        // Loewner matrix, rows scaled by 1/F so the least-squares problem
        // targets the relative error
        const auto rows = static_cast<Eigen::Index>(rest.size());
        Eigen::MatrixXd A(rows, n);
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            const Eigen::Index i = rest[static_cast<std::size_t>(r)];
            for (int k = 0; k < n; ++k)
            {
                A(r, k) = (F[i] - bary.values[k]) / (Z[i] - bary.support[k]) / F[i];
            }
        }
        Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        // a second vanishing singular value leaves the weights undetermined;
        // that only matters if the current fit is not good enough
        const bool rank_deficient = n >= 3 && sv[n - 2] <= 1e-15 * sv[0];
        bary.weights = svd.matrixV().col(n - 1);

        double max_err = 0.0;
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            const Eigen::Index i = rest[static_cast<std::size_t>(r)];
            double num = 0.0;
            double den = 0.0;
            for (int k = 0; k < n; ++k)
            {
                const double c = bary.weights[k] / (Z[i] - bary.support[k]);
                num += c * bary.values[k];
                den += c;
            }
            R[i] = num / den;
            max_err = std::max(max_err, std::abs(F[i] - R[i]) / F[i]);
        }
        for (int k = 0; k < n; ++k)
        {
            R[support[static_cast<std::size_t>(k)]] = bary.values[k];
        }

        if (max_err > tol)
        {
            if (rank_deficient)
            {
                throw ConditioningError("aaa_fit: Loewner matrix is rank deficient");
            }
            continue;
        }

        const PoleResidue pr = to_partial_fractions(bary, z_min, value_scale);
        if (!pr.clean)
        {
            // spurious pole: keep refining with further support points
            continue;
        }
        SoeApprox out;
        out.alpha = alpha;
        out.lambda = Eigen::Map<const Eigen::VectorXd>(
            pr.lambda.data(), static_cast<Eigen::Index>(pr.lambda.size()));
        out.w = Eigen::Map<const Eigen::VectorXd>(
            pr.w.data(), static_cast<Eigen::Index>(pr.w.size()));
        out.w_inf = pr.w_inf;
        out.z_min = z_min;
        out.z_max = z_max;
        out.tol = tol;
        if (out.size() < 1)
        {
            continue;
        }
        if (symbol_relative_error(out, options.check_points) <= tol)
        {
            return out;
        }
        SoeApprox refined = out;
        refine_residues(Z, F, refined);
        if (std::abs(refined.w_inf) <= 1e-12 * value_scale)
        {
            refined.w_inf = 0.0;
        }
        if (symbol_relative_error(refined, options.check_points) <= tol)
        {
            return refined;
        }
    }

    std::ostringstream os;
    os << "aaa_fit: no certified fit with at most " << options.max_poles
       << " poles for alpha=" << alpha.value() << " tol=" << tol;
    throw NoConvergenceError(os.str());
}

double evaluate_symbol(const SoeApprox& a, double z)
{
    return (a.w.array() / (z + a.lambda.array())).sum() + a.w_inf;
}

double symbol_relative_error(const SoeApprox& a, int n)
{
    const Eigen::VectorXd z = geometric_grid(a.z_min, a.z_max, n);
    double err = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
    {
        const double exact = std::pow(z[i], -a.alpha.value());
        err = std::max(err, std::abs(evaluate_symbol(a, z[i]) - exact) / exact);
    }
    return err;
}

double soe_kernel_eval(const SoeApprox& a, double t)
{
    return (a.w.array() * (-a.lambda.array() * t).exp()).sum();
}

NodeWeights node_weights(const SoeApprox& a)
{
    NodeWeights nw;
    const Eigen::ArrayXd lam = a.lambda.array();
    const Eigen::ArrayXd w = a.w.array();
    nw.theta = lam / (1.0 + lam);
    nw.recon = w / (1.0 + lam);
    nw.hist = w * lam / (1.0 + lam).square();
    nw.recon_inf = a.w_inf;
    nw.hist_inf = a.w_inf;
    return nw;
}

void write_table(std::ostream& os, const SoeApprox& a)
{
    const auto old_precision = os.precision(17);
    os << "# soe alpha=" << a.alpha.value() << " tol=" << a.tol
       << " z_min=" << a.z_min << " z_max=" << a.z_max << " w_inf=" << a.w_inf
       << " m=" << a.size() << '\n';
    for (Eigen::Index k = 0; k < a.size(); ++k)
    {
        os << a.lambda[k] << ' ' << a.w[k] << '\n';
    }
    os.precision(old_precision);
}

SoeApprox read_table(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header) || header.rfind("# soe", 0) != 0)
    {
        throw std::runtime_error("read_table: missing '# soe' header");
    }
    SoeApprox a;
    long m = -1;
    std::istringstream hs(header.substr(5));
    std::string token;
    while (hs >> token)
    {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
        {
            throw std::runtime_error("read_table: malformed header token " + token);
        }
        const std::string key = token.substr(0, eq);
        const double value = std::stod(token.substr(eq + 1));
        if (key == "alpha")
            a.alpha = FractionalOrder(value);
        else if (key == "tol")
            a.tol = value;
        else if (key == "z_min")
            a.z_min = value;
        else if (key == "z_max")
            a.z_max = value;
        else if (key == "w_inf")
            a.w_inf = value;
        else if (key == "m")
            m = static_cast<long>(value);
        else
            throw std::runtime_error("read_table: unknown header key " + key);
    }
    std::vector<double> lam;
    std::vector<double> w;
    double l = 0.0;
    double c = 0.0;
    while (is >> l >> c)
    {
        lam.push_back(l);
        w.push_back(c);
    }
    if (m >= 0 && static_cast<long>(lam.size()) != m)
    {
        throw std::runtime_error("read_table: row count does not match m");
    }
    a.lambda = Eigen::Map<Eigen::VectorXd>(lam.data(), static_cast<Eigen::Index>(lam.size()));
    a.w = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    return a;
}

} // namespace fracflow
