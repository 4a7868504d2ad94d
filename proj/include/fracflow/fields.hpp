#ifndef FRACFLOW_FIELDS_HPP
#define FRACFLOW_FIELDS_HPP

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include <Eigen/Core>

namespace fracflow
{

struct ZeroMeanError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

//
// Scalar field on the cell-centred uniform grid of (0, nx dx) x (0, ny dx).
// values(j, i) is the cell centred at ((i + 1/2) dx, (j + 1/2) dx); storage is
// row-major, so x varies fastest in memory.
//
template <typename Scalar>
class GridField
{
public:
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    GridField() = default;

    GridField(int nx, int ny, Scalar dx, Scalar value = Scalar(0))
        : m_values(Array::Constant(ny, nx, value)), m_dx(dx)
    {
        validate();
    }

    GridField(Array values, Scalar dx) : m_values(std::move(values)), m_dx(dx)
    {
        validate();
    }

    int nx() const noexcept
    {
        return static_cast<int>(m_values.cols());
    }

    int ny() const noexcept
    {
        return static_cast<int>(m_values.rows());
    }

    Scalar dx() const noexcept
    {
        return m_dx;
    }

    const Array& values() const noexcept
    {
        return m_values;
    }

    Array& values() noexcept
    {
        return m_values;
    }

    Scalar mean() const
    {
        return m_values.mean();
    }

    Scalar max_abs() const
    {
        return m_values.abs().maxCoeff();
    }

    bool same_grid(const GridField& other) const noexcept
    {
        return nx() == other.nx() && ny() == other.ny() && m_dx == other.m_dx;
    }

    GridField& operator+=(const GridField& rhs)
    {
        require_same(rhs);
        m_values += rhs.m_values;
        return *this;
    }

    GridField& operator-=(const GridField& rhs)
    {
        require_same(rhs);
        m_values -= rhs.m_values;
        return *this;
    }

    GridField& operator*=(Scalar s)
    {
        m_values *= s;
        return *this;
    }

    friend GridField operator+(GridField lhs, const GridField& rhs)
    {
        return lhs += rhs;
    }

    friend GridField operator-(GridField lhs, const GridField& rhs)
    {
        return lhs -= rhs;
    }

    friend GridField operator*(Scalar s, GridField f)
    {
        return f *= s;
    }

    friend GridField operator*(GridField f, Scalar s)
    {
        return f *= s;
    }

    void require_same(const GridField& other) const
    {
        if (!same_grid(other))
        {
            throw std::invalid_argument("GridField: dimension mismatch");
        }
    }

private:
    void validate() const
    {
        if (m_values.rows() < 4 || m_values.cols() < 4)
        {
            throw std::invalid_argument("GridField: need nx, ny >= 4");
        }
        if (!(m_dx > Scalar(0)))
        {
            throw std::invalid_argument("GridField: dx must be positive");
        }
        if (!m_values.allFinite())
        {
            throw std::invalid_argument("GridField: non-finite values");
        }
    }

    Array m_values;
    Scalar m_dx = Scalar(1);
};

using Field = GridField<double>;

//
// Orthonormal type-II cosine transform of length n, C(k, i) =
// s_k cos(pi k (i + 1/2) / n). Row i and row n-1-i of the input enter with
// equal sign for even k and opposite sign for odd k, so for even n the product
// splits into two half-size products.
//
template <typename Scalar>
class CosineTransform
{
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    explicit CosineTransform(int n) : m_n(n)
    {
        const Scalar pi = std::numbers::pi_v<Scalar>;
        Matrix c(n, n);
        for (int k = 0; k < n; ++k)
        {
            const Scalar s = std::sqrt(Scalar(k == 0 ? 1 : 2) / Scalar(n));
            for (int i = 0; i < n; ++i)
            {
                c(k, i) = s * std::cos(pi * k * (i + Scalar(0.5)) / n);
            }
        }
        if (n % 2 == 0)
        {
            const int h = n / 2;
            m_even.resize(h, h);
            m_odd.resize(h, h);
            for (int r = 0; r < h; ++r)
            {
                m_even.row(r) = c.row(2 * r).leftCols(h);
                m_odd.row(r) = c.row(2 * r + 1).leftCols(h);
            }
        }
        else
        {
            m_full = std::move(c);
        }
    }

    /// C x, column by column.
    Matrix apply(const Matrix& x) const
    {
        if (m_n % 2 != 0)
        {
            return m_full * x;
        }
        const int h = m_n / 2;
        const Matrix rev = x.bottomRows(h).colwise().reverse();
        const Matrix ye = m_even * (x.topRows(h) + rev);
        const Matrix yo = m_odd * (x.topRows(h) - rev);
        Matrix y(m_n, x.cols());
        for (int r = 0; r < h; ++r)
        {
            y.row(2 * r) = ye.row(r);
            y.row(2 * r + 1) = yo.row(r);
        }
        return y;
    }

    /// C^T x, column by column.
    Matrix apply_transpose(const Matrix& x) const
    {
        if (m_n % 2 != 0)
        {
            return m_full.transpose() * x;
        }
        const int h = m_n / 2;
        Matrix xe(h, x.cols());
        Matrix xo(h, x.cols());
        for (int r = 0; r < h; ++r)
        {
            xe.row(r) = x.row(2 * r);
            xo.row(r) = x.row(2 * r + 1);
        }
        const Matrix e = m_even.transpose() * xe;
        const Matrix o = m_odd.transpose() * xo;
        Matrix y(m_n, x.cols());
        y.topRows(h) = e + o;
        y.bottomRows(h) = (e - o).colwise().reverse();
        return y;
    }

private:
    int m_n;
    Matrix m_even;
    Matrix m_odd;
    Matrix m_full;
};

//
// Orthonormal type-II cosine basis of the mirror-reflected 5-point Laplacian.
// Mode (l, k) has -Laplacian eigenvalue
//   ((2 - 2 cos(pi l / ny)) + (2 - 2 cos(pi k / nx))) / dx^2.
//
template <typename Scalar>
class NeumannSpectrum
{
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Array = typename GridField<Scalar>::Array;

    NeumannSpectrum(int nx, int ny, Scalar dx)
        : m_cx(nx), m_cy(ny), m_eig(ny, nx), m_dx(dx)
    {
        const Scalar pi = std::numbers::pi_v<Scalar>;
        for (int l = 0; l < ny; ++l)
        {
            for (int k = 0; k < nx; ++k)
            {
                m_eig(l, k) = (Scalar(2) - Scalar(2) * std::cos(pi * l / ny) +
                               Scalar(2) - Scalar(2) * std::cos(pi * k / nx)) /
                              (dx * dx);
            }
        }
    }

    // The row-major (ny, nx) storage read column-major is the (nx, ny)
    // transpose, so C_y F C_x^T = C_y (C_x F^T)^T.
    Array forward(const Array& f) const
    {
        const Eigen::Map<const Matrix> ft(f.data(), f.cols(), f.rows());
        const Matrix g = m_cx.apply(ft).transpose();
        return m_cy.apply(g).array();
    }

    Array inverse(const Array& c) const
    {
        const Eigen::Map<const Matrix> ct(c.data(), c.cols(), c.rows());
        const Matrix g = m_cx.apply_transpose(ct).transpose();
        return m_cy.apply_transpose(g).array();
    }

    /// Eigenvalues of -Laplacian; entry (0,0) is the zero constant mode.
    const Array& eigenvalues() const noexcept
    {
        return m_eig;
    }

    Scalar dx() const noexcept
    {
        return m_dx;
    }

private:
    CosineTransform<Scalar> m_cx;
    CosineTransform<Scalar> m_cy;
    Array m_eig;
    Scalar m_dx;
};

/// Per-thread cache of spectra keyed by grid shape.
template <typename Scalar>
const NeumannSpectrum<Scalar>& neumann_spectrum(int nx, int ny, Scalar dx)
{
    thread_local std::map<std::tuple<int, int, Scalar>,
                          std::unique_ptr<NeumannSpectrum<Scalar>>>
        cache;
    auto& slot = cache[std::make_tuple(nx, ny, dx)];
    if (!slot)
    {
        slot = std::make_unique<NeumannSpectrum<Scalar>>(nx, ny, dx);
    }
    return *slot;
}

template <typename Scalar>
const NeumannSpectrum<Scalar>& neumann_spectrum(const GridField<Scalar>& f)
{
    return neumann_spectrum<Scalar>(f.nx(), f.ny(), f.dx());
}

/// 5-point Laplacian with ghost cells mirrored across the boundary.
template <typename Scalar>
GridField<Scalar> laplacian_neumann(const GridField<Scalar>& f)
{
    const auto& v = f.values();
    const int nx = f.nx();
    const int ny = f.ny();
    const Scalar inv_h2 = Scalar(1) / (f.dx() * f.dx());
    typename GridField<Scalar>::Array out(ny, nx);
    for (int j = 0; j < ny; ++j)
    {
        const int jm = j > 0 ? j - 1 : 0;
        const int jp = j < ny - 1 ? j + 1 : ny - 1;
        for (int i = 0; i < nx; ++i)
        {
            const int im = i > 0 ? i - 1 : 0;
            const int ip = i < nx - 1 ? i + 1 : nx - 1;
            out(j, i) = (v(j, ip) + v(j, im) + v(jp, i) + v(jm, i) - Scalar(4) * v(j, i)) * inv_h2;
        }
    }
    return GridField<Scalar>(std::move(out), f.dx());
}

template <typename Scalar>
void require_zero_mean(const GridField<Scalar>& f, const char* where)
{
    const Scalar m = f.mean();
    if (std::abs(m) > Scalar(1e-10) * f.max_abs())
    {
        std::ostringstream os;
        os << where << ": field mean " << m << " violates the zero-mean constraint";
        throw ZeroMeanError(os.str());
    }
}

/// Sum f g dx^2.
template <typename Scalar>
Scalar inner_l2(const GridField<Scalar>& f, const GridField<Scalar>& g)
{
    f.require_same(g);
    return (f.values() * g.values()).sum() * f.dx() * f.dx();
}

//
// Solution g of -Laplacian g = f with mean(g) = 0, by diagonalisation in the
// cosine basis; f must have zero mean.
//
template <typename Scalar>
GridField<Scalar> invert_laplacian(const GridField<Scalar>& f)
{
    require_zero_mean(f, "invert_laplacian");
    const auto& spectrum = neumann_spectrum(f);
    typename GridField<Scalar>::Array c = spectrum.forward(f.values() - f.mean());
    typename GridField<Scalar>::Array eig = spectrum.eigenvalues();
    eig(0, 0) = Scalar(1);
    c /= eig;
    c(0, 0) = Scalar(0);
    return GridField<Scalar>(spectrum.inverse(c), f.dx());
}

/// (f, g) in the dual norm: inner_l2((-Laplacian)^(-1) f, g).
template <typename Scalar>
Scalar inner_hm1(const GridField<Scalar>& f, const GridField<Scalar>& g)
{
    require_zero_mean(g, "inner_hm1");
    return inner_l2(invert_laplacian(f), g);
}

/// |f|^2 in the dual norm, from a single forward cosine transform.
template <typename Scalar>
Scalar norm_hm1_sq(const GridField<Scalar>& f)
{
    require_zero_mean(f, "norm_hm1_sq");
    const auto& spectrum = neumann_spectrum(f);
    typename GridField<Scalar>::Array c = spectrum.forward(f.values() - f.mean());
    c(0, 0) = Scalar(0);
    typename GridField<Scalar>::Array eig = spectrum.eigenvalues();
    eig(0, 0) = Scalar(1);
    return (c.square() / eig).sum() * f.dx() * f.dx();
}

//
// Snapshot files: <base>.bin holds nx*ny little-endian doubles in row-major
// order; <base>.meta is one text line "nx=.. ny=.. dx=.. time=.. alpha=..".
//
struct SnapshotMeta
{
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double time = 0.0;
    double alpha = 1.0;
};

void write_snapshot(const std::string& base, const Field& f, double time, double alpha);
Field read_snapshot(const std::string& base, SnapshotMeta* meta = nullptr);

} // namespace fracflow

#endif // FRACFLOW_FIELDS_HPP
