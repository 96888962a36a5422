#ifndef HULLCERT_METRICS_HPP
#define HULLCERT_METRICS_HPP

#include "error.hpp"
#include "hull.hpp"
#include "matrix.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hullcert {

/// To-hull uncertainty: distance to the hull in units of its margin epsilon.
inline ScoreVector to_hull_uncertainty(const Matrix& test, const HullApprox& hull) {
    if (test.cols() != hull.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "test matrix has " + std::to_string(test.cols()) +
                                                      " columns, hull has " + std::to_string(hull.dimension()));
    }
    ScoreVector tu(test.rows());
    parallel_for(test.rows(), [&](std::size_t i) { tu[i] = distance_to_hull(test.row(i), hull) / hull.epsilon; });
    return tu;
}

struct SetSummary {
    double closure_ratio = 0.0;
    /// Mean TU over exterior samples (TU > 1); empty when there are none.
    std::optional<double> mean_exterior_tu;
    std::size_t n_closure = 0;
    std::size_t n_exterior = 0;

    std::size_t total() const noexcept { return n_closure + n_exterior; }
};

/// Closure ratio of a test set plus the mean TU of its exterior samples.
/// A sample with TU exactly 1 lies on the margin and counts as closure.
inline SetSummary closure_ratio(const ScoreVector& tu) {
    if (tu.empty()) {
        throw Error(ErrorKind::EmptyInput, "closure ratio of an empty score vector");
    }
    SetSummary summary;
    double exterior_sum = 0.0;
    for (std::size_t i = 0; i < tu.size(); ++i) {
        if (!(tu[i] >= 0.0) || !std::isfinite(tu[i])) {
            throw Error(ErrorKind::InvalidArgument, "TU value " + std::to_string(i) + " is negative or not finite");
        }
        if (tu[i] <= 1.0) {
            ++summary.n_closure;
        } else {
            ++summary.n_exterior;
            exterior_sum += tu[i];
        }
    }
    summary.closure_ratio = static_cast<double>(summary.n_closure) / static_cast<double>(tu.size());
    if (summary.n_exterior > 0) {
        summary.mean_exterior_tu = exterior_sum / static_cast<double>(summary.n_exterior);
    }
    return summary;
}

/// DeepGini impurity 1 - sum p^2 of each softmax row. Rows must be
/// nonnegative and sum to one within 1e-6; they are renormalised within that.
inline ScoreVector deep_gini(const Matrix& softmax) {
    ScoreVector gini(softmax.rows());
    for (std::size_t r = 0; r < softmax.rows(); ++r) {
        const auto row = softmax.row(r);
        double total = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c] < 0.0) {
                throw Error(ErrorKind::InvalidDistribution,
                            "softmax row " + std::to_string(r) + " has a negative entry at column " + std::to_string(c));
            }
            total += row[c];
        }
        if (std::abs(total - 1.0) > 1e-6) {
            throw Error(ErrorKind::InvalidDistribution,
                        "softmax row " + std::to_string(r) + " sums to " + std::to_string(total));
        }
        double sum_sq = 0.0;
        for (double p : row) {
            const double q = p / total;
            sum_sq += q * q;
        }
        gini[r] = 1.0 - sum_sq;
    }
    return gini;
}

/**
 * Distance-based surprise adequacy. For a test activation a predicted as
 * class c: x_a is the nearest class-c training activation (lowest index on
 * ties), and the score is |a - x_a| / min_{y: label(y) != c} |x_a - y|.
 *
 * A zero denominator (x_a duplicated in another class) yields +infinity for
 * that sample rather than an exception; serialisers refuse such values.
 */
inline ScoreVector dsa(const Matrix& train_act, const LabelVector& train_labels, const Matrix& test_act,
                       const LabelVector& test_pred) {
    if (train_labels.size() != train_act.rows()) {
        throw Error(ErrorKind::LengthMismatch, "training labels (" + std::to_string(train_labels.size()) +
                                                   ") do not match training activations (" +
                                                   std::to_string(train_act.rows()) + ")");
    }
    if (test_pred.size() != test_act.rows()) {
        throw Error(ErrorKind::LengthMismatch, "test predictions (" + std::to_string(test_pred.size()) +
                                                   ") do not match test activations (" +
                                                   std::to_string(test_act.rows()) + ")");
    }
    if (train_act.cols() != test_act.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "training and test activations differ in width");
    }

    std::map<std::int32_t, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < train_labels.size(); ++i) {
        by_class[train_labels[i]].push_back(i);
    }
    for (std::size_t i = 0; i < test_pred.size(); ++i) {
        const auto it = by_class.find(test_pred[i]);
        if (it == by_class.end()) {
            throw Error(ErrorKind::MissingClass, "predicted class " + std::to_string(test_pred[i]) + " of test sample " +
                                                     std::to_string(i) + " has no training activations");
        }
        if (it->second.size() == train_labels.size()) {
            throw Error(ErrorKind::MissingClass, "no training activations outside class " +
                                                     std::to_string(test_pred[i]));
        }
    }

    ScoreVector scores(test_act.rows());
    parallel_for(test_act.rows(), [&](std::size_t i) {
        const auto a = test_act.row(i);
        const std::int32_t cls = test_pred[i];
        std::size_t nearest = 0;
        double nearest_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t j : by_class.at(cls)) {
            const double d2 = squared_distance(a, train_act.row(j));
            if (d2 < nearest_d2) {
                nearest_d2 = d2;
                nearest = j;
            }
        }
        const auto anchor = train_act.row(nearest);
        double other_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < train_act.rows(); ++j) {
            if (train_labels[j] != cls) {
                other_d2 = std::min(other_d2, squared_distance(anchor, train_act.row(j)));
            }
        }
        scores[i] = other_d2 > 0.0 ? std::sqrt(nearest_d2) / std::sqrt(other_d2)
                                   : std::numeric_limits<double>::infinity();
    });
    return scores;
}

/// Elementwise product of two metrics (e.g. TU times DeepGini).
inline ScoreVector combined_metric(const ScoreVector& a, const ScoreVector& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::LengthMismatch,
                    "cannot combine metrics of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    ScoreVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * b[i];
    }
    return out;
}

/// Product-moment correlation.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::LengthMismatch, "pearson inputs differ in length");
    }
    if (x.size() < 2) {
        throw Error(ErrorKind::EmptyInput, "pearson needs at least two samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorKind::ZeroVariance, "pearson input has zero variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/**
 * Point-biserial correlation between scores and a 0/1 grouping, using the
 * population standard deviation: r = (M1 - M0) / s_n * sqrt(p q). This is
 * exactly the Pearson correlation with the groups coded as 0 and 1.
 */
inline double point_biserial(const std::vector<double>& x, const LabelVector& groups) {
    if (x.size() != groups.size()) {
        throw Error(ErrorKind::LengthMismatch, "point-biserial inputs differ in length");
    }
    if (x.size() < 2) {
        throw Error(ErrorKind::EmptyInput, "point-biserial needs at least two samples");
    }
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    double mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (groups[i] != 0 && groups[i] != 1) {
            throw Error(ErrorKind::InvalidArgument, "group label " + std::to_string(groups[i]) + " at sample " +
                                                        std::to_string(i) + " is not 0 or 1");
        }
        sum[groups[i]] += x[i];
        ++count[groups[i]];
        mean += x[i];
    }
    if (count[0] == 0 || count[1] == 0) {
        throw Error(ErrorKind::SingleGroup, "point-biserial needs both groups present");
    }
    const double n = static_cast<double>(x.size());
    mean /= n;
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    if (ss == 0.0) {
        throw Error(ErrorKind::ZeroVariance, "point-biserial scores have zero variance");
    }
    const double sd = std::sqrt(ss / n);
    const double m1 = sum[1] / static_cast<double>(count[1]);
    const double m0 = sum[0] / static_cast<double>(count[0]);
    const double p = static_cast<double>(count[1]) / n;
    const double q = static_cast<double>(count[0]) / n;
    return std::clamp((m1 - m0) / sd * std::sqrt(p * q), -1.0, 1.0);
}

} // namespace hullcert

#endif
