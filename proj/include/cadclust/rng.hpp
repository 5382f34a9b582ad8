#ifndef CADCLUST_RNG_HPP
#define CADCLUST_RNG_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace cadclust {

/// SplitMix64 step. Used for seeding and for deriving sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Mixes a tag into a seed, giving an independent stream per (seed, tag).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// FNV-1a over bytes followed by a SplitMix64 finalizer.
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ULL);

/**
 * xoshiro256** seeded from a single 64-bit value through SplitMix64.
 *
 * Every derived quantity (uniform doubles, bounded integers, normals) is
 * computed here from raw 64-bit outputs so that any port reproducing the
 * same recipe obtains bit-identical streams:
 *
 *  - uniform():  (next() >> 11) * 2^-53, in [0, 1)
 *  - below(m):   Lemire's multiply-shift with rejection, in [0, m)
 *  - normal():   Box-Muller on u1 = 1 - uniform(), u2 = uniform(); the
 *                sine branch is cached and returned by the following call
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    double uniform();
    std::uint64_t below(std::uint64_t bound);
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// `count` distinct indices drawn uniformly from [0, population), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count);

private:
    std::array<std::uint64_t, 4> s_{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cadclust

#endif  // CADCLUST_RNG_HPP
