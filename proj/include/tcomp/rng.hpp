#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace tcomp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of an independent stream identified by (master, ids...). The result
/// depends only on its arguments, never on the order streams are created in.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids) noexcept
{
    std::uint64_t h = mix64(master);
    for (std::uint64_t id : ids)
        h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
    return h;
}

/// Seedable deterministic generator; split() yields child streams.
class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, {stream})); }

    double normal() { return normal_(engine_); }
    std::size_t uniform_index(std::size_t bound)
    {
        return std::uniform_int_distribution<std::size_t>(0, bound - 1)(engine_);
    }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

} // namespace tcomp
