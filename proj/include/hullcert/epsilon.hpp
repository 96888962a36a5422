#ifndef HULLCERT_EPSILON_HPP
#define HULLCERT_EPSILON_HPP

#include "error.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace hullcert {

struct EpsilonOptions {
    /// When nonzero and the training set has more rows than this, average the
    /// nearest-neighbour distance over a seeded uniform subsample of this many
    /// rows (neighbours are still searched over the full set). Off by default.
    std::size_t subsample_limit = 0;
    std::uint64_t subsample_seed = 0;
};

/// Distance from row i to its nearest other row (duplicates count, giving 0).
inline double nearest_other_distance(const Matrix& train, std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    const auto xi = train.row(i);
    for (std::size_t j = 0; j < train.rows(); ++j) {
        if (j == i) {
            continue;
        }
        best = std::min(best, squared_distance(xi, train.row(j)));
    }
    return std::sqrt(best);
}

/**
 * Margin of the hull approximation: mean over rows of the distance to the
 * nearest other row. Per-row minima may be computed in parallel; the sum is
 * always reduced in ascending row order so the value is bit-stable.
 */
inline double compute_epsilon(const Matrix& train, const EpsilonOptions& options = {}) {
    if (train.rows() < 2) {
        throw Error(ErrorKind::DegenerateTrainingSet, "epsilon needs at least two training rows");
    }

    std::vector<std::size_t> rows;
    if (options.subsample_limit > 0 && train.rows() > options.subsample_limit) {
        SeededSampler sampler(options.subsample_seed);
        rows = sampler.sample_without_replacement(train.rows(), options.subsample_limit);
        std::sort(rows.begin(), rows.end());
    } else {
        rows.resize(train.rows());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
    }

    std::vector<double> nearest(rows.size());
    parallel_for(rows.size(), [&](std::size_t k) { nearest[k] = nearest_other_distance(train, rows[k]); });

    double sum = 0.0;
    for (double v : nearest) {
        sum += v;
    }
    const double epsilon = sum / static_cast<double>(rows.size());
    if (!(epsilon > 0.0)) {
        throw Error(ErrorKind::DegenerateTrainingSet, "every training row is duplicated (epsilon = 0)");
    }
    return epsilon;
}

} // namespace hullcert

#endif
