#ifndef HULLCERT_RANDOM_HPP
#define HULLCERT_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace hullcert {

/**
 * Portable seeded sampling. The engine is std::mt19937_64, whose output
 * sequence is fixed by the C++ standard. Bounded integers are drawn by
 * rejection on the raw 64-bit output (not std::uniform_int_distribution,
 * which is implementation-defined), so a given seed selects the same
 * samples on every platform.
 */
class SeededSampler {
public:
    explicit SeededSampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // Largest multiple of bound representable as 2^64 - (2^64 mod bound).
        const std::uint64_t threshold = (0 - bound) % bound;
        while (true) {
            const std::uint64_t draw = engine_();
            if (draw >= threshold) {
                return draw % bound;
            }
        }
    }

    /// Permutation of [0, n) produced by a forward Fisher-Yates shuffle.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(order[i], order[j]);
        }
        return order;
    }

    /// k distinct indices from [0, n): the first k entries of permutation(n).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        auto order = permutation(n);
        order.resize(k);
        return order;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace hullcert

#endif
