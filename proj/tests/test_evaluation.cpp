#include "hullcert/evaluation.hpp"
#include "hullcert/random.hpp"
#include "hullcert/report.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace hullcert;

namespace {

ScoreVector gaussian(oracle::Rng& rng, std::size_t n, double mean) {
    std::normal_distribution<double> dist(mean, 1.0);
    ScoreVector v(n);
    for (auto& x : v) {
        x = dist(rng);
    }
    return v;
}

} // namespace

// ---------------------------------------------------------------- sampler

TEST(SeededSampler, KnownEngineOutputAndPermutationShape) {
    // The 10000th output of a default-seeded std::mt19937_64 is fixed by the standard.
    std::mt19937_64 reference;
    reference.discard(9999);
    EXPECT_EQ(reference(), 9981545732273789042ULL);

    SeededSampler a(17), b(17);
    const auto pa = a.permutation(100);
    EXPECT_EQ(pa, b.permutation(100));
    std::set<std::size_t> unique(pa.begin(), pa.end());
    EXPECT_EQ(unique.size(), 100u);
    EXPECT_EQ(*unique.rbegin(), 99u);
}

TEST(SeededSampler, BoundedDrawsAreRoughlyUniform) {
    SeededSampler s(5);
    std::vector<int> counts(6, 0);
    for (int i = 0; i < 60000; ++i) {
        ++counts[s.below(6)];
    }
    for (int c : counts) {
        EXPECT_NEAR(c, 10000, 400);
    }
}

// --------------------------------------------------------------- logistic

TEST(Logistic, SeparableScores) {
    const auto m = fit_logistic_1d({-1, -1, 1, 1}, {0, 0, 1, 1});
    EXPECT_EQ(classification_accuracy(m, {-1, -1, 1, 1}, {0, 0, 1, 1}), 1.0);
    EXPECT_GT(m.weight, 0.0);
    EXPECT_NEAR(m.probability(0.0), 0.5, 1e-9);
}

TEST(Logistic, ConstantScoresPredictMajority) {
    const ScoreVector s(10, 2.5);
    const LabelVector y{1, 1, 1, 0, 1, 0, 1, 1, 0, 1};
    const auto m = fit_logistic_1d(s, y);
    EXPECT_DOUBLE_EQ(classification_accuracy(m, s, y), 0.7);
}

TEST(Logistic, RequiresBothClasses) {
    try {
        fit_logistic_1d({1, 2, 3}, {1, 1, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingleGroup);
    }
}

TEST(Logistic, GaussianOverlapApproachesBayesAccuracy) {
    // Unit-variance classes at 0 and 2 with equal priors: the optimal threshold
    // is 1 and its accuracy is Phi(1).
    oracle::Rng rng(2024);
    const double bayes = oracle::phi(1.0);
    auto clean = gaussian(rng, 4000, 0.0);
    auto adv = gaussian(rng, 4000, 2.0);
    ScoreVector s = clean;
    s.insert(s.end(), adv.begin(), adv.end());
    LabelVector y(4000, 0);
    y.insert(y.end(), 4000, 1);
    const auto m = fit_logistic_1d(s, y);
    EXPECT_NEAR(classification_accuracy(m, s, y), bayes, 0.03);
}

TEST(Logistic, SignFlipMirrorsWeight) {
    oracle::Rng rng(3);
    auto s = gaussian(rng, 300, 0.0);
    LabelVector y(300);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = s[i] + 0.3 * std::sin(static_cast<double>(i)) > 0.2 ? 1 : 0;
    }
    ScoreVector neg(s.size());
    std::transform(s.begin(), s.end(), neg.begin(), [](double v) { return -v; });
    const auto a = fit_logistic_1d(s, y);
    const auto b = fit_logistic_1d(neg, y);
    EXPECT_EQ(a.weight, -b.weight);
    EXPECT_NEAR(classification_accuracy(a, s, y), classification_accuracy(b, neg, y), 1e-9);
}

// -------------------------------------------------------------- detection

TEST(Detection, PerfectlySeparated) {
    const ScoreVector clean(50, 0.0);
    const ScoreVector adv(50, 10.0);
    const auto r = detect_adversarial(clean, adv, 20, 1);
    EXPECT_EQ(r.accuracy, 1.0);
    EXPECT_EQ(r.n_eval_clean, 30u);
    EXPECT_EQ(r.n_eval_adversarial, 30u);
}

TEST(Detection, IdenticalDistributionsAreNearChance) {
    oracle::Rng rng(404);
    const auto clean = gaussian(rng, 3000, 0.0);
    const auto adv = gaussian(rng, 3000, 0.0);
    const auto r = detect_adversarial(clean, adv, 1000, 9);
    EXPECT_NEAR(r.accuracy, 0.5, 0.05);
}

TEST(Detection, ReproducibleReportsAndProtocolShape) {
    oracle::Rng rng(6);
    const auto clean = gaussian(rng, 10000, 0.0);
    const auto adv = gaussian(rng, 10000, 1.5);
    const auto a = detect_adversarial(clean, adv, 1000, 77, "tu");
    const auto b = detect_adversarial(clean, adv, 1000, 77, "tu");
    EXPECT_EQ(format_report(to_json(a)), format_report(to_json(b)));
    EXPECT_EQ(a.n_train_per_class, 1000u);
    EXPECT_EQ(a.n_eval_clean, 9000u);
    EXPECT_EQ(a.n_eval_adversarial, 9000u);
}

TEST(Detection, InsufficientSamples) {
    try {
        detect_adversarial({1, 2, 3}, {4, 5, 6, 7}, 3, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientSamples);
    }
}

// ------------------------------------------------------------ correlation

TEST(Correlation, MetricAgainstItself) {
    const ScoreVector m{0.1, 0.5, 0.2, 0.9};
    const auto r = correlation_report(m, m, {0, 1, 0, 1});
    ASSERT_TRUE(r.pearson.value.has_value());
    EXPECT_NEAR(*r.pearson.value, 1.0, 1e-15);
    EXPECT_TRUE(r.point_biserial.value.has_value());
}

TEST(Correlation, SingleGroupIsSurfacedWithoutAborting) {
    const auto r = correlation_report({1, 2, 3}, {3, 1, 2}, {1, 1, 1});
    EXPECT_TRUE(r.pearson.value.has_value());
    EXPECT_FALSE(r.point_biserial.value.has_value());
    ASSERT_TRUE(r.point_biserial.error.has_value());
    EXPECT_NE(r.point_biserial.error->find("SingleGroup"), std::string::npos);
}

TEST(Correlation, MatchesDirectFormulas) {
    oracle::Rng rng(12);
    const auto m = oracle::uniform_vector(rng, 120, 0.0, 2.0);
    auto o = oracle::uniform_vector(rng, 120, 0.0, 1.0);
    LabelVector c(120);
    std::vector<double> coded(120);
    for (std::size_t i = 0; i < 120; ++i) {
        o[i] += m[i];
        c[i] = m[i] + o[i] > 2.0 ? 1 : 0;
        coded[i] = c[i];
    }
    const auto r = correlation_report(m, o, c);
    EXPECT_NEAR(*r.pearson.value, oracle::pearson(m, o), 1e-12);
    EXPECT_NEAR(*r.point_biserial.value, oracle::pearson(m, coded), 1e-12);
}

// ----------------------------------------------------------- prioritizing

TEST(Prioritize, Examples) {
    EXPECT_EQ(prioritize_top_fraction({3, 1, 2}, 1.0 / 3.0), (std::vector<std::size_t>{0}));
    EXPECT_EQ(prioritize_top_fraction({3, 1, 2}, 1.0), (std::vector<std::size_t>{0, 2, 1}));
    EXPECT_EQ(prioritize_top_fraction({5, 5, 1}, 2.0 / 3.0), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(prioritize_top_fraction(ScoreVector(10, 1.0), 0.7).size(), 7u);
    EXPECT_EQ(prioritize_top_fraction(ScoreVector(10, 1.0), 0.71).size(), 8u);
}

TEST(Prioritize, Errors) {
    for (double f : {0.0, -0.1, 1.5, std::nan("")}) {
        try {
            prioritize_top_fraction({1, 2}, f);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::InvalidFraction);
        }
    }
    EXPECT_THROW(prioritize_top_fraction({}, 0.5), Error);
}

TEST(Prioritize, MonotoneTransformInvarianceAndNesting) {
    oracle::Rng rng(31);
    std::uniform_int_distribution<int> level(0, 20);
    for (int trial = 0; trial < 40; ++trial) {
        ScoreVector s(57);
        for (auto& v : s) {
            v = level(rng) * 0.25;  // plenty of ties
        }
        ScoreVector t(s.size());
        std::transform(s.begin(), s.end(), t.begin(), [](double v) { return std::exp(3 * v) - 7; });
        std::vector<std::size_t> previous;
        for (double f : {0.05, 0.1, 0.3, 0.5, 1.0}) {
            const auto a = prioritize_top_fraction(s, f);
            EXPECT_EQ(a, prioritize_top_fraction(t, f));
            EXPECT_TRUE(std::equal(previous.begin(), previous.end(), a.begin()));
            previous = a;
        }
    }
}
