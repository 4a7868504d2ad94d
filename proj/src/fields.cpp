#include "fracflow/fields.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace fracflow
{

namespace
{

std::uint64_t to_little_endian(std::uint64_t x)
{
    if constexpr (std::endian::native == std::endian::little)
    {
        return x;
    }
    std::uint64_t y = 0;
    for (int b = 0; b < 8; ++b)
    {
        y = (y << 8) | ((x >> (8 * b)) & 0xffu);
    }
    return y;
}

} // namespace

void write_snapshot(const std::string& base, const Field& f, double time, double alpha)
{
    std::ofstream bin(base + ".bin", std::ios::binary);
    if (!bin)
    {
        throw std::runtime_error("write_snapshot: cannot open " + base + ".bin");
    }
    const auto& v = f.values();
    std::vector<std::uint64_t> raw(static_cast<std::size_t>(v.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k)
    {
        raw[static_cast<std::size_t>(k)] =
            to_little_endian(std::bit_cast<std::uint64_t>(v.data()[k]));
    }
    bin.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));

    std::ofstream meta(base + ".meta");
    if (!meta)
    {
        throw std::runtime_error("write_snapshot: cannot open " + base + ".meta");
    }
    meta.precision(17);
    meta << "nx=" << f.nx() << " ny=" << f.ny() << " dx=" << f.dx()
         << " time=" << time << " alpha=" << alpha << '\n';
}

Field read_snapshot(const std::string& base, SnapshotMeta* meta_out)
{
    std::ifstream meta(base + ".meta");
    if (!meta)
    {
        throw std::runtime_error("read_snapshot: cannot open " + base + ".meta");
    }
    SnapshotMeta m;
    std::string token;
    while (meta >> token)
    {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
        {
            throw std::runtime_error("read_snapshot: malformed token " + token);
        }
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "nx")
            m.nx = std::stoi(value);
        else if (key == "ny")
            m.ny = std::stoi(value);
        else if (key == "dx")
            m.dx = std::stod(value);
        else if (key == "time")
            m.time = std::stod(value);
        else if (key == "alpha")
            m.alpha = std::stod(value);
    }

    std::ifstream bin(base + ".bin", std::ios::binary);
    if (!bin)
    {
        throw std::runtime_error("read_snapshot: cannot open " + base + ".bin");
    }
    std::vector<std::uint64_t> raw(static_cast<std::size_t>(m.nx) * static_cast<std::size_t>(m.ny));
    bin.read(reinterpret_cast<char*>(raw.data()),
             static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
    if (bin.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)))
    {
        throw std::runtime_error("read_snapshot: truncated " + base + ".bin");
    }
    Field::Array values(m.ny, m.nx);
    for (std::size_t k = 0; k < raw.size(); ++k)
    {
        values.data()[k] = std::bit_cast<double>(to_little_endian(raw[k]));
    }
    if (meta_out)
    {
        *meta_out = m;
    }
    return Field(std::move(values), m.dx);
}

} // namespace fracflow
