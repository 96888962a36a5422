#ifndef HULLCERT_EVALUATION_HPP
#define HULLCERT_EVALUATION_HPP

#include "error.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hullcert {

/**
 * Logistic regression on a single score. Scores are z-scored with the
 * statistics of the fitting data before the linear term, so the decision
 * rule is sigmoid(weight * (s - center) / scale + bias) >= 0.5.
 */
struct LogisticModel1D {
    double weight = 0.0;
    double bias = 0.0;
    double training_loss = 0.0;
    double center = 0.0;
    double scale = 1.0;

    double probability(double score) const {
        const double z = weight * ((score - center) / scale) + bias;
        return 1.0 / (1.0 + std::exp(-z));
    }

    int predict(double score) const { return probability(score) >= 0.5 ? 1 : 0; }
};

inline constexpr std::size_t default_logistic_iterations = 5000;
inline constexpr double default_logistic_rate = 0.1;

namespace detail {

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline void check_binary(const LabelVector& labels) {
    bool seen[2] = {false, false};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw Error(ErrorKind::InvalidArgument, "label " + std::to_string(labels[i]) + " at sample " +
                                                        std::to_string(i) + " is not 0 or 1");
        }
        seen[labels[i]] = true;
    }
    if (!seen[0] || !seen[1]) {
        throw Error(ErrorKind::SingleGroup, "both classes must be present to fit a classifier");
    }
}

} // namespace detail

/// Full-batch gradient descent on the mean logistic loss.
inline LogisticModel1D fit_logistic_1d(const ScoreVector& scores, const LabelVector& labels,
                                       std::size_t max_iters = default_logistic_iterations,
                                       double lr = default_logistic_rate) {
    if (scores.size() != labels.size()) {
        throw Error(ErrorKind::LengthMismatch, "scores and labels differ in length");
    }
    if (scores.size() < 2) {
        throw Error(ErrorKind::InsufficientSamples, "logistic fit needs at least two samples");
    }
    if (!(lr > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "learning rate must be positive");
    }
    detail::check_binary(labels);

    const double n = static_cast<double>(scores.size());
    LogisticModel1D model;
    model.center = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
    double ss = 0.0;
    for (double s : scores) {
        ss += (s - model.center) * (s - model.center);
    }
    const double sd = std::sqrt(ss / n);
    model.scale = sd > 0.0 ? sd : 1.0;

    std::vector<double> z(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        z[i] = (scores[i] - model.center) / model.scale;
    }

    for (std::size_t it = 0; it < max_iters; ++it) {
        double grad_w = 0.0;
        double grad_b = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double residual = detail::sigmoid(model.weight * z[i] + model.bias) - labels[i];
            grad_w += residual * z[i];
            grad_b += residual;
        }
        model.weight -= lr * grad_w / n;
        model.bias -= lr * grad_b / n;
    }

    double loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double logit = model.weight * z[i] + model.bias;
        loss += labels[i] == 1 ? detail::softplus(-logit) : detail::softplus(logit);
    }
    model.training_loss = loss / n;
    return model;
}

/// Fraction of samples whose predicted label matches.
inline double classification_accuracy(const LogisticModel1D& model, const ScoreVector& scores,
                                      const LabelVector& labels) {
    if (scores.empty() || scores.size() != labels.size()) {
        throw Error(ErrorKind::LengthMismatch, "accuracy needs equal, nonempty scores and labels");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        correct += model.predict(scores[i]) == labels[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(scores.size());
}

struct DetectionReport {
    double accuracy = 0.0;
    std::size_t n_train_per_class = 0;
    std::size_t n_eval_clean = 0;
    std::size_t n_eval_adversarial = 0;
    std::uint64_t seed = 0;
    std::string metric_name;
    LogisticModel1D model;
};

/**
 * Clean-vs-adversarial detection from one metric. A seeded sampler draws
 * n_train_per_class scores without replacement from each set (clean labelled
 * 0, adversarial 1) to fit the classifier; accuracy is measured on every
 * remaining score. The clean permutation is drawn before the adversarial one
 * from a single SeededSampler.
 */
inline DetectionReport detect_adversarial(const ScoreVector& clean_scores, const ScoreVector& adv_scores,
                                          std::size_t n_train_per_class, std::uint64_t seed,
                                          std::string metric_name = {}) {
    if (n_train_per_class == 0) {
        throw Error(ErrorKind::InsufficientSamples, "training split must take at least one sample per class");
    }
    if (clean_scores.size() <= n_train_per_class || adv_scores.size() <= n_train_per_class) {
        throw Error(ErrorKind::InsufficientSamples,
                    "need more than " + std::to_string(n_train_per_class) + " samples per class (clean: " +
                        std::to_string(clean_scores.size()) + ", adversarial: " + std::to_string(adv_scores.size()) + ")");
    }

    SeededSampler sampler(seed);
    const auto clean_order = sampler.permutation(clean_scores.size());
    const auto adv_order = sampler.permutation(adv_scores.size());

    ScoreVector fit_scores;
    LabelVector fit_labels;
    ScoreVector eval_scores;
    LabelVector eval_labels;
    auto split = [&](const ScoreVector& source, const std::vector<std::size_t>& order, std::int32_t label) {
        for (std::size_t k = 0; k < order.size(); ++k) {
            auto& dest_scores = k < n_train_per_class ? fit_scores : eval_scores;
            auto& dest_labels = k < n_train_per_class ? fit_labels : eval_labels;
            dest_scores.push_back(source[order[k]]);
            dest_labels.push_back(label);
        }
    };
    split(clean_scores, clean_order, 0);
    split(adv_scores, adv_order, 1);

    DetectionReport report;
    report.model = fit_logistic_1d(fit_scores, fit_labels);
    report.accuracy = classification_accuracy(report.model, eval_scores, eval_labels);
    report.n_train_per_class = n_train_per_class;
    report.n_eval_clean = clean_scores.size() - n_train_per_class;
    report.n_eval_adversarial = adv_scores.size() - n_train_per_class;
    report.seed = seed;
    report.metric_name = std::move(metric_name);
    return report;
}

/// A correlation value or the reason it could not be computed.
struct CorrelationResult {
    std::optional<double> value;
    std::optional<std::string> error;
};

struct CorrelationReport {
    CorrelationResult pearson;
    CorrelationResult point_biserial;
    std::size_t samples = 0;
};

namespace detail {

template <typename Fn>
CorrelationResult capture(Fn&& fn) {
    try {
        return {fn(), std::nullopt};
    } catch (const Error& e) {
        return {std::nullopt, std::string(e.what())};
    }
}

} // namespace detail

/// Pearson(metric, other) and point-biserial(metric, correctness). A failure
/// in one coefficient is recorded in the report without aborting the other.
inline CorrelationReport correlation_report(const ScoreVector& metric, const ScoreVector& other,
                                            const LabelVector& correctness) {
    if (metric.size() != other.size() || metric.size() != correctness.size()) {
        throw Error(ErrorKind::LengthMismatch, "correlation inputs differ in length (" + std::to_string(metric.size()) +
                                                   ", " + std::to_string(other.size()) + ", " +
                                                   std::to_string(correctness.size()) + ")");
    }
    CorrelationReport report;
    report.samples = metric.size();
    report.pearson = detail::capture([&] { return pearson(metric, other); });
    report.point_biserial = detail::capture([&] { return point_biserial(metric, correctness); });
    return report;
}

/// ceil(fraction * n) for fractions that are exact in decimal, e.g. 0.7 * 10 = 7.
inline std::size_t selection_count(double fraction, std::size_t n) {
    const double raw = fraction * static_cast<double>(n);
    const double nearest = std::round(raw);
    const double count = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
    return std::clamp<std::size_t>(static_cast<std::size_t>(count), 1, n);
}

/// Indices of the ceil(fraction * n) highest scores, highest first; equal
/// scores keep ascending index order.
inline std::vector<std::size_t> prioritize_top_fraction(const ScoreVector& scores, double fraction) {
    if (scores.empty()) {
        throw Error(ErrorKind::EmptyInput, "cannot prioritise an empty score vector");
    }
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw Error(ErrorKind::InvalidFraction, "fraction must be in (0, 1], got " + std::to_string(fraction));
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (std::isnan(scores[i])) {
            throw Error(ErrorKind::NonFiniteValue, "score " + std::to_string(i) + " is NaN");
        }
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    order.resize(selection_count(fraction, scores.size()));
    return order;
}

} // namespace hullcert

#endif
