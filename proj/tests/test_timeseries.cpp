#include <numeric>

#include "forecastability/random.hpp"
#include "forecastability/synth.hpp"
#include "forecastability/timeseries.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fcast;

TEST(TimeSeries, RejectsEmptyAndNonFinite) {
    EXPECT_ERRC(TimeSeries("x", {}), Errc::degenerate_input);
    EXPECT_ERRC(TimeSeries("x", {1.0, std::nan("")}), Errc::non_finite);
    EXPECT_ERRC(TimeSeries("x", {1.0, HUGE_VAL}), Errc::non_finite);
}

TEST(Detrend, ExactLineAndConstantVanish) {
    for (const double r : detrend_linear(std::vector<double>{1, 2, 3})) EXPECT_NEAR(r, 0.0, 1e-12);
    for (const double r : detrend_linear(std::vector<double>{5, 5, 5})) EXPECT_EQ(r, 0.0);
}

TEST(Detrend, AlternatingSequence) {
    const std::vector<double> y{0, 1, 0, 1};
    const auto got = detrend_linear(y);
    const auto ref = oracle::normal_equations_detrend(y);
    const std::vector<double> expected{-0.2, 0.6, -0.6, 0.2};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(ref[i], expected[i], 1e-15);
        EXPECT_NEAR(got[i], expected[i], 1e-12);
    }
}

TEST(Detrend, NeedsTwoSamples) { EXPECT_ERRC(detrend_linear(std::vector<double>{1.0}), Errc::degenerate_input); }

TEST(Detrend, MatchesNormalEquationsAndIsIdempotent) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(500);
        const double slope = rng.uniform(-5, 5);
        std::vector<double> y(n);
        double max_abs = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            y[t] = slope * static_cast<double>(t) + 100.0 * rng.normal();
            max_abs = std::max(max_abs, std::abs(y[t]));
        }
        const auto r = detrend_linear(y);
        const auto ref = oracle::normal_equations_detrend(y);
        double sum = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            EXPECT_NEAR(r[t], ref[t], 1e-9 * max_abs);
            sum += r[t];
        }
        EXPECT_LE(std::abs(sum), 1e-9 * static_cast<double>(n) * max_abs);
        const auto twice = detrend_linear(r);
        for (std::size_t t = 0; t < n; ++t) EXPECT_NEAR(twice[t], r[t], 1e-9 * max_abs);
    }
}

TEST(Sparsity, CountsExactZeros) {
    EXPECT_DOUBLE_EQ(sparsity_of(std::vector<double>{0, 1, 0, 2}), 0.5);
    EXPECT_DOUBLE_EQ(sparsity_of(std::vector<double>{1, 2, 3}), 0.0);
    EXPECT_DOUBLE_EQ(sparsity_of(std::vector<double>{0, 0, 0, 0}), 1.0);
}

TEST(Sparsity, SparsifyNeverLowersTheRate) {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(300);
        std::vector<double> y(n);
        for (auto& v : y) v = rng.uniform01() < 0.2 ? 0.0 : rng.normal();
        const double rate = rng.uniform(0.0, 0.99);
        const auto s = synth::sparsify(TimeSeries("y", y), rate, rng.next_u64());
        EXPECT_GE(sparsity_of(s) + 1e-12, std::floor(rate * static_cast<double>(n)) / static_cast<double>(n));
        EXPECT_GE(sparsity_of(s), sparsity_of(y));
    }
}

TEST(ResampleWeekly, BlockSums) {
    const auto ones7 = resample_weekly(TimeSeries("a", std::vector<double>(7, 1.0), 0, Frequency::daily));
    ASSERT_EQ(ones7.size(), 1u);
    EXPECT_EQ(ones7[0], 7.0);
    EXPECT_EQ(ones7.frequency(), Frequency::weekly);

    std::vector<double> seq(14);
    std::iota(seq.begin(), seq.end(), 1.0);
    const auto two = resample_weekly(TimeSeries("b", seq, 0, Frequency::daily));
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0], 28.0);
    EXPECT_EQ(two[1], 77.0);

    const auto dropped = resample_weekly(TimeSeries("c", std::vector<double>(10, 1.0), 0, Frequency::daily));
    ASSERT_EQ(dropped.size(), 1u);
    EXPECT_EQ(dropped[0], 7.0);
}

TEST(ResampleWeekly, Errors) {
    EXPECT_ERRC(resample_weekly(TimeSeries("a", std::vector<double>(14, 1.0), 0, Frequency::unitless)),
                Errc::invalid_frequency);
    EXPECT_ERRC(resample_weekly(TimeSeries("a", std::vector<double>(6, 1.0), 0, Frequency::daily)),
                Errc::degenerate_input);
}

TEST(ResampleWeekly, PreservesMassOfCompleteBlocks) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 7 + rng.uniform_index(200);
        std::vector<double> y(n);
        for (auto& v : y) v = std::floor(rng.uniform(0, 50));
        const auto w = resample_weekly(TimeSeries("a", y, 0, Frequency::daily));
        const double in = std::accumulate(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(7 * (n / 7)), 0.0);
        const double out = std::accumulate(w.values().begin(), w.values().end(), 0.0);
        EXPECT_EQ(in, out);
    }
}

TEST(Windows, OffsetsAndStamps) {
    const TimeSeries s("s", {1, 2, 3, 4, 5});
    const auto w = iterate_windows(s, {3, 1});
    ASSERT_EQ(w.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(w[k].offset, k);
        EXPECT_EQ(w[k].stamp, static_cast<std::int64_t>(k + 2));
        EXPECT_EQ(w[k].values.size(), 3u);
        EXPECT_EQ(w[k].values[0], static_cast<double>(k + 1));
    }
    EXPECT_EQ(iterate_windows(s, {5, 1}).size(), 1u);

    const auto strided = iterate_windows(TimeSeries("t", std::vector<double>(6, 1.0)), {3, 2});
    ASSERT_EQ(strided.size(), 2u);
    EXPECT_EQ(strided[0].offset, 0u);
    EXPECT_EQ(strided[1].offset, 2u);
}

TEST(Windows, TooLarge) {
    EXPECT_ERRC(iterate_windows(TimeSeries("s", {1, 2}), {3, 1}), Errc::window_too_large);
}

TEST(Windows, CountFormulaHoldsEverywhere) {
    Rng rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t t = 1 + rng.uniform_index(400);
        const std::size_t w = 1 + rng.uniform_index(t);
        const std::size_t stride = 1 + rng.uniform_index(20);
        const WindowPlan plan{w, stride};
        std::size_t brute = 0;
        for (std::size_t off = 0; off + w <= t; off += stride) ++brute;
        EXPECT_EQ(plan.window_count(t), brute);
        EXPECT_EQ(plan.window_count(t), (t - w) / stride + 1);
    }
}
