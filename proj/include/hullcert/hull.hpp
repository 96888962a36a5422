#ifndef HULLCERT_HULL_HPP
#define HULLCERT_HULL_HPP

#include "epsilon.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace hullcert {

struct HullBuildStats {
    /// Points added after the seed.
    std::size_t iterations = 0;
    /// Largest distance from a remaining training row to the hull at exit.
    double max_residual = 0.0;
    /// Projections solved while selecting points.
    std::size_t projections = 0;
};

/**
 * Sparse approximation of the convex hull of a training set: a subset of the
 * training rows whose hull lies within `epsilon` of every training row.
 */
struct HullApprox {
    Matrix points;
    double epsilon = 0.0;
    std::vector<std::size_t> source_rows;
    HullBuildStats build_stats;

    std::size_t dimension() const noexcept { return points.cols(); }
    std::size_t size() const noexcept { return points.rows(); }
};

struct HullBuildOptions {
    EpsilonOptions epsilon;
    /// Projection tolerance as a fraction of epsilon.
    double relative_tolerance = 1e-4;
};

/// Projection tolerance used for closure decisions against a hull with margin epsilon.
inline double construction_tolerance(double epsilon) { return epsilon * 1e-4; }

/// Tolerance for standalone distance scoring: absolute, scaled by the query norm.
inline double scoring_tolerance(std::span<const double> query) {
    double norm2 = 0.0;
    for (double v : query) {
        norm2 += v * v;
    }
    return 1e-6 * std::max(1.0, std::sqrt(norm2));
}

/// Training row farthest from the coordinate-wise mean; ties go to the lowest index.
inline std::size_t farthest_from_mean(const Matrix& train) {
    std::vector<double> mean(train.cols(), 0.0);
    for (std::size_t r = 0; r < train.rows(); ++r) {
        const auto row = train.row(r);
        for (std::size_t c = 0; c < train.cols(); ++c) {
            mean[c] += row[c];
        }
    }
    for (double& m : mean) {
        m /= static_cast<double>(train.rows());
    }
    std::size_t best = 0;
    double best_d2 = -1.0;
    for (std::size_t r = 0; r < train.rows(); ++r) {
        const double d2 = squared_distance(train.row(r), std::span<const double>(mean));
        if (d2 > best_d2) {
            best_d2 = d2;
            best = r;
        }
    }
    return best;
}

namespace detail {

struct Candidate {
    double bound;
    std::size_t row;
    /// Hull size when `bound` was computed; equal to the current size means fresh.
    std::size_t hull_size;
};

/// Max-heap order: larger distance first, then lower row index.
struct CandidateOrder {
    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.bound != b.bound) {
            return a.bound < b.bound;
        }
        return a.row > b.row;
    }
};

} // namespace detail

/**
 * Greedy farthest-point hull approximation.
 *
 * Starting from the row farthest from the mean, repeatedly add the remaining
 * row whose distance to the convex hull of the selected rows is largest, and
 * stop once that largest distance is at most epsilon. Distances to a growing
 * hull never increase, so cached distances are upper bounds: only the heap top
 * is re-projected until a fresh value stays on top.
 */
inline HullApprox build_hull_approximation(const Matrix& train, const HullBuildOptions& options = {}) {
    const double epsilon = compute_epsilon(train, options.epsilon);
    const double tolerance = epsilon * options.relative_tolerance;

    std::vector<std::size_t> selected{farthest_from_mean(train)};
    HullBuildStats stats;

    std::priority_queue<detail::Candidate, std::vector<detail::Candidate>, detail::CandidateOrder> heap;
    const auto seed_row = train.row(selected.front());
    for (std::size_t r = 0; r < train.rows(); ++r) {
        if (r != selected.front()) {
            heap.push({euclidean_distance(train.row(r), seed_row), r, 1});
        }
    }

    while (!heap.empty()) {
        auto top = heap.top();
        heap.pop();
        if (top.hull_size != selected.size()) {
            auto projection = project_onto_rows(train.row(top.row), train, selected, tolerance);
            ++stats.projections;
            if (!projection.converged) {
                throw NonConvergenceError("hull construction: projection of training row " +
                                              std::to_string(top.row) + " did not converge",
                                          projection.distance, projection.gap);
            }
            heap.push({projection.distance, top.row, selected.size()});
            continue;
        }
        if (top.bound <= epsilon) {
            stats.max_residual = top.bound;
            break;
        }
        selected.push_back(top.row);
        ++stats.iterations;
    }

    HullApprox hull;
    hull.points = train.select_rows(selected);
    hull.epsilon = epsilon;
    hull.source_rows = std::move(selected);
    hull.build_stats = stats;
    return hull;
}

inline void check_dimension(std::span<const double> query, const HullApprox& hull) {
    if (query.size() != hull.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "query has dimension " + std::to_string(query.size()) +
                                                      ", hull has " + std::to_string(hull.dimension()));
    }
}

/// Distance from `query` to conv(hull.points). Throws NonConvergenceError
/// (with the best distance found) if the solver cannot certify the result.
inline double distance_to_hull(std::span<const double> query, const HullApprox& hull) {
    check_dimension(query, hull);
    const double tolerance = std::min(construction_tolerance(hull.epsilon), scoring_tolerance(query));
    auto projection = project_to_hull(query, hull.points, tolerance);
    if (!projection.converged) {
        throw NonConvergenceError("distance to hull did not converge", projection.distance, projection.gap);
    }
    return projection.distance;
}

/// True when the query lies within epsilon of the hull (the boundary counts).
inline bool is_closure(std::span<const double> query, const HullApprox& hull) {
    return distance_to_hull(query, hull) <= hull.epsilon;
}

} // namespace hullcert

#endif
