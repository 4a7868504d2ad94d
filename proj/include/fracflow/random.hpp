#ifndef FRACFLOW_RANDOM_HPP
#define FRACFLOW_RANDOM_HPP

#include <array>
#include <cstdint>

namespace fracflow
{

//
// xoshiro256** (Blackman & Vigna), seeded through splitmix64. Spelled out here
// rather than taken from <random> so that streams are identical on every
// platform and standard library.
//
class Xoshiro256ss
{
public:
    explicit Xoshiro256ss(std::uint64_t seed)
    {
        std::uint64_t x = seed;
        for (auto& s : m_state)
        {
            x += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            s = z ^ (z >> 31);
        }
    }

    std::uint64_t next() noexcept
    {
        const std::uint64_t result = rotl(m_state[1] * 5, 7) * 9;
        const std::uint64_t t = m_state[1] << 17;
        m_state[2] ^= m_state[0];
        m_state[3] ^= m_state[1];
        m_state[1] ^= m_state[2];
        m_state[0] ^= m_state[3];
        m_state[2] ^= t;
        m_state[3] = rotl(m_state[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept
    {
        return lo + (hi - lo) * uniform();
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> m_state{};
};

} // namespace fracflow

#endif // FRACFLOW_RANDOM_HPP
