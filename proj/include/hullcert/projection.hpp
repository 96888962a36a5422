#ifndef HULLCERT_PROJECTION_HPP
#define HULLCERT_PROJECTION_HPP

#include "error.hpp"
#include "matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace hullcert {

/// Closest point of a convex hull to a query, with its convex weights.
struct Projection {
    std::vector<double> point;
    double distance = 0.0;
    /// One weight per hull point (dense), nonnegative, summing to one.
    std::vector<double> coefficients;
    /// Frank-Wolfe duality gap at the returned point, in squared distance units.
    double gap = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
};

/// Iteration cap used when none is given: 1000 + 20 per hull point.
inline std::size_t default_iteration_cap(std::size_t hull_size) { return 1000 + 20 * hull_size; }

/**
 * Frank-Wolfe duality gap of a convex combination over the hull, i.e.
 * max_k <query - point, c_k - point>. Zero exactly at the projection. Used to
 * certify solutions independently of the solver.
 */
inline double frank_wolfe_gap(std::span<const double> query, const Matrix& hull_points,
                              std::span<const double> point) {
    const std::size_t d = query.size();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < hull_points.rows(); ++k) {
        const auto c = hull_points.row(k);
        double g = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            g += (query[i] - point[i]) * (c[i] - point[i]);
        }
        best = std::max(best, g);
    }
    return best;
}

namespace detail {

/**
 * Upper-triangular R with R^T R = P^T P + 1 1^T for the columns P of the
 * current corral (points shifted by the query). Adding the all-ones term
 * leaves the affine minimiser direction unchanged and keeps the system
 * positive definite whenever the corral is affinely independent.
 * Stored by column; column j holds rows 0..j.
 */
class CorralFactor {
public:
    std::size_t size() const noexcept { return cols_.size(); }

    /// Appends a column given cross[s] = <p_s, p_new> + 1 and diag = |p_new|^2 + 1.
    /// Returns false when the new point is (numerically) affinely dependent.
    bool append(std::span<const double> cross, double diag) {
        const std::size_t n = cols_.size();
        std::vector<double> col(n + 1);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = cross[i];
            for (std::size_t k = 0; k < i; ++k) {
                v -= cols_[i][k] * col[k];
            }
            col[i] = v / cols_[i][i];
            norm2 += col[i] * col[i];
        }
        const double rho2 = diag - norm2;
        if (!(rho2 > diag * 1e-13)) {
            return false;
        }
        col[n] = std::sqrt(rho2);
        cols_.push_back(std::move(col));
        return true;
    }

    /// Removes column k and restores triangular form with Givens rotations.
    void remove(std::size_t k) {
        cols_.erase(cols_.begin() + static_cast<std::ptrdiff_t>(k));
        const std::size_t n = cols_.size();
        for (std::size_t j = k; j < n; ++j) {
            // Column j now has one entry below the diagonal, at row j + 1.
            const double a = cols_[j][j];
            const double b = cols_[j][j + 1];
            const double r = std::hypot(a, b);
            const double c = a / r;
            const double s = b / r;
            for (std::size_t m = j; m < n; ++m) {
                const double x = cols_[m][j];
                const double y = cols_[m][j + 1];
                cols_[m][j] = c * x + s * y;
                cols_[m][j + 1] = -s * x + c * y;
            }
            cols_[j].pop_back();
        }
    }

    /// Solves R^T R a = 1.
    std::vector<double> solve_ones() const {
        const std::size_t n = cols_.size();
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = 1.0;
            for (std::size_t k = 0; k < i; ++k) {
                v -= cols_[i][k] * z[k];
            }
            z[i] = v / cols_[i][i];
        }
        for (std::size_t i = n; i-- > 0;) {
            double v = z[i];
            for (std::size_t m = i + 1; m < n; ++m) {
                v -= cols_[m][i] * z[m];
            }
            z[i] = v / cols_[i][i];
        }
        return z;
    }

private:
    std::vector<std::vector<double>> cols_;
};

/// <a - q, b - q> without forming either difference vector.
inline double shifted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        sum += (a[i] - q[i]) * (b[i] - q[i]);
    }
    return sum;
}

} // namespace detail

/**
 * Projects `query` onto the convex hull of the listed rows of `base` with
 * Wolfe's minimum-norm-point (active set) method. Stops when the duality
 * gap drops to tolerance^2, which bounds the distance error by tolerance.
 * If the active set can make no further progress, a gap at the rounding
 * floor (scaled by the squared point norms) is also accepted.
 *
 * A result with converged == false means the iteration cap was hit or the
 * active set stalled with a gap above that floor; the returned point is
 * still the best iterate.
 */
inline Projection project_onto_rows(std::span<const double> query, const Matrix& base,
                                    std::span<const std::size_t> rows, double tolerance,
                                    std::size_t max_iterations = 0) {
    if (rows.empty()) {
        throw Error(ErrorKind::EmptyInput, "projection onto an empty point set");
    }
    if (query.size() != base.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "query has dimension " + std::to_string(query.size()) +
                                                      ", hull points have " + std::to_string(base.cols()));
    }
    if (!(tolerance > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "projection tolerance must be positive");
    }

    const std::size_t n = rows.size();
    const std::size_t d = query.size();
    const double gap_tolerance = tolerance * tolerance;
    const std::size_t cap = max_iterations > 0 ? max_iterations : default_iteration_cap(n);
    auto point_of = [&](std::size_t k) { return base.row(rows[k]); };

    std::vector<double> norms2(n);
    std::size_t start = 0;
    double max_norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        norms2[k] = squared_distance(point_of(k), query);
        max_norm2 = std::max(max_norm2, norms2[k]);
        if (norms2[k] < norms2[start]) {
            start = k;
        }
    }

    // Corral state: members (indices into rows), their weights, and x = sum w (p - q).
    std::vector<std::size_t> members{start};
    std::vector<double> weights{1.0};
    detail::CorralFactor factor;
    factor.append({}, norms2[start] + 1.0);

    std::vector<double> x(d);
    auto rebuild_x = [&] {
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t s = 0; s < members.size(); ++s) {
            const auto c = point_of(members[s]);
            for (std::size_t i = 0; i < d; ++i) {
                x[i] += weights[s] * (c[i] - query[i]);
            }
        }
    };
    rebuild_x();

    Projection result;
    result.converged = false;
    std::size_t iteration = 0;
    double gap = 0.0;
    std::vector<double> cross;

    while (true) {
        double xx = 0.0;
        for (double v : x) {
            xx += v * v;
        }
        std::size_t entering = 0;
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const auto c = point_of(k);
            double g = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                g += (c[i] - query[i]) * x[i];
            }
            if (g < lowest) {
                lowest = g;
                entering = k;
            }
        }
        gap = std::max(0.0, xx - lowest);
        if (gap <= gap_tolerance) {
            result.converged = true;
            break;
        }
        if (iteration >= cap) {
            break;
        }
        // Past this point no exact-arithmetic step can fail, so a failure means
        // the gap is rounding noise. Accept it if it is within that floor.
        const double noise_floor = 8.0 * std::numeric_limits<double>::epsilon() *
                                   static_cast<double>(d + members.size()) * max_norm2;
        if (std::find(members.begin(), members.end(), entering) != members.end()) {
            result.converged = gap <= noise_floor;
            break;
        }

        cross.resize(members.size());
        for (std::size_t s = 0; s < members.size(); ++s) {
            cross[s] = detail::shifted_dot(point_of(members[s]), point_of(entering), query) + 1.0;
        }
        if (!factor.append(cross, norms2[entering] + 1.0)) {
            result.converged = gap <= noise_floor;
            break;
        }
        members.push_back(entering);
        weights.push_back(0.0);

        // Minor cycle: move toward the affine minimiser of the corral, dropping
        // members whose weight would turn negative.
        bool stalled = false;
        while (true) {
            auto alpha = factor.solve_ones();
            const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
            for (double& a : alpha) {
                a /= total;
            }
            double theta = 1.0;
            std::size_t blocking = alpha.size();
            for (std::size_t s = 0; s < alpha.size(); ++s) {
                if (alpha[s] <= 0.0) {
                    const double denom = weights[s] - alpha[s];
                    const double t = denom > 0.0 ? weights[s] / denom : 0.0;
                    if (blocking == alpha.size() || t < theta) {
                        theta = t;
                        blocking = s;
                    }
                }
            }
            if (blocking == alpha.size()) {
                weights = std::move(alpha);
                break;
            }
            if (members[blocking] == entering && weights[blocking] == 0.0) {
                // No descent along the entering direction: rounding has taken over.
                stalled = true;
            }
            for (std::size_t s = 0; s < alpha.size(); ++s) {
                weights[s] = (1.0 - theta) * weights[s] + theta * alpha[s];
            }
            weights[blocking] = 0.0;
            for (std::size_t s = weights.size(); s-- > 0;) {
                if (weights[s] <= 0.0) {
                    factor.remove(s);
                    members.erase(members.begin() + static_cast<std::ptrdiff_t>(s));
                    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(s));
                }
            }
            const double remaining = std::accumulate(weights.begin(), weights.end(), 0.0);
            for (double& w : weights) {
                w /= remaining;
            }
            if (stalled) {
                break;
            }
        }
        rebuild_x();
        ++iteration;
        if (stalled) {
            result.converged = gap <= noise_floor;
            break;
        }
    }

    result.iterations = iteration;
    result.gap = gap;
    result.coefficients.assign(n, 0.0);
    result.point.assign(d, 0.0);
    for (std::size_t s = 0; s < members.size(); ++s) {
        result.coefficients[members[s]] = weights[s];
        const auto c = point_of(members[s]);
        for (std::size_t i = 0; i < d; ++i) {
            result.point[i] += weights[s] * c[i];
        }
    }
    result.distance = euclidean_distance(query, std::span<const double>(result.point));
    return result;
}

/// Projection of `query` onto conv(rows of hull_points).
inline Projection project_to_hull(std::span<const double> query, const Matrix& hull_points, double tolerance,
                                  std::size_t max_iterations = 0) {
    std::vector<std::size_t> all(hull_points.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return project_onto_rows(query, hull_points, all, tolerance, max_iterations);
}

} // namespace hullcert

#endif
