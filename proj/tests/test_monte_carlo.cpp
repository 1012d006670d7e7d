#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <vector>

#include "mcfdm/analytic_oracle.hpp"
#include "mcfdm/monte_carlo.hpp"
#include "mcfdm/philox.hpp"

using namespace mcfdm;

namespace {

const MarketParams kMarket{0.05, 0.25};
const OptionContract kTable2Call{OptionKind::Call, 7.5, 1.0, 7.0};

}  // namespace

TEST(Philox, KnownAnswerVectors) {
    // Random123 kat_vectors, philox4x32 with 10 rounds.
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, OpenUnitInterval) {
    EXPECT_GT(Philox4x32::to_open_unit(0, 0), 0.0);
    EXPECT_LT(Philox4x32::to_open_unit(0xffffffff, 0xffffffff), 1.0);
}

TEST(PathNormal, MomentsLookStandard) {
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = path_normal(99, static_cast<std::uint64_t>(i), 0);
        sum += z;
        sum2 += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(double(n)));
    EXPECT_NEAR(sum2 / n, 1.0, 0.02);
}

TEST(SampleTerminalPrice, DeterministicCases) {
    const MarketParams no_vol{0.05, 0.0};
    const std::vector<double> z{0.7};
    EXPECT_EQ(sample_terminal_price(no_vol, 5.0, 1.0, z), 5.0 * std::exp(0.05));
    const std::vector<double> zeros(1, 0.0);
    EXPECT_DOUBLE_EQ(sample_terminal_price(kMarket, 5.0, 1.0, zeros), 5.0 * std::exp((0.05 - 0.03125) * 1.0));
    const std::vector<double> zeros10(10, 0.0);
    EXPECT_NEAR(sample_terminal_price(kMarket, 5.0, 1.0, zeros10), 5.0 * std::exp(0.05 - 0.03125), 1e-12);
}

TEST(SampleTerminalPrice, StepCountIrrelevantForMatchedIncrements) {
    // Z_total = sum_k Z_k sqrt(dt_k) / sqrt(T) with equal steps.
    const std::vector<double> steps{0.3, -1.2, 0.8, 0.05, 1.7, -0.4, 0.0, 0.9, -2.1, 0.6};
    double acc = 0.0;
    for (double z : steps) acc += z * std::sqrt(0.1);
    const std::vector<double> one{acc / std::sqrt(1.0)};
    EXPECT_NEAR(sample_terminal_price(kMarket, 7.0, 1.0, steps), sample_terminal_price(kMarket, 7.0, 1.0, one),
                1e-12);
}

TEST(MonteCarlo, Table2CallWithinThreeStandardErrors) {
    const auto r = price_monte_carlo(kTable2Call, kMarket);
    const double se = r.extra.at("se");
    EXPECT_GT(se, 0.0);
    EXPECT_LE(std::abs(r.price - 0.63791), 3.0 * se + 5e-4);
    EXPECT_LE(std::abs(r.price - black_scholes_price(kTable2Call, kMarket)), 3.0 * se);
}

TEST(MonteCarlo, SinglePathEstimator) {
    McConfig one;
    one.n_paths = 1;
    one.seed = 1234;
    const auto r = price_monte_carlo(kTable2Call, kMarket, one);
    const std::vector<double> z{path_normal(1234, 0, 0)};
    const double s_t = sample_terminal_price(kMarket, 7.0, 1.0, z);
    EXPECT_DOUBLE_EQ(r.price, std::exp(-0.05) * payoff(kTable2Call, s_t));
    EXPECT_EQ(r.extra.at("se"), 0.0);
    EXPECT_EQ(r.extra.at("se_defined"), 0.0);
}

TEST(MonteCarlo, DeterministicWithoutVolatility) {
    const MarketParams no_vol{0.05, 0.0};
    McConfig cfg;
    cfg.n_paths = 10000;
    const OptionContract c{OptionKind::Call, 6.5, 1.0, 7.0};
    const auto r = price_monte_carlo(c, no_vol, cfg);
    EXPECT_NEAR(r.price, std::exp(-0.05) * (7.0 * std::exp(0.05) - 6.5), 1e-12);
    EXPECT_EQ(r.extra.at("se"), 0.0);
}

TEST(MonteCarlo, BitIdenticalAcrossWorkerCounts) {
    McConfig cfg;
    cfg.n_paths = 50001;
    cfg.seed = 77;
    const auto serial = price_monte_carlo(kTable2Call, kMarket, cfg, McExecution::Serial);
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 4, 8}) {
        omp_set_num_threads(threads);
        const auto par = price_monte_carlo(kTable2Call, kMarket, cfg, McExecution::Parallel);
        EXPECT_EQ(par.price, serial.price) << threads;
        EXPECT_EQ(par.extra.at("se"), serial.extra.at("se")) << threads;
    }
    omp_set_num_threads(saved);
    EXPECT_EQ(price_monte_carlo(kTable2Call, kMarket, cfg).price, serial.price);
}

TEST(MonteCarlo, MultiStepAndAntitheticRemainUnbiased) {
    McConfig cfg;
    cfg.n_paths = 100000;
    cfg.n_time_steps = 4;
    auto r = price_monte_carlo(kTable2Call, kMarket, cfg);
    const double exact = black_scholes_price(kTable2Call, kMarket);
    EXPECT_LE(std::abs(r.price - exact), 4.0 * r.extra.at("se"));
    cfg.n_time_steps = 1;
    cfg.antithetic = true;
    r = price_monte_carlo(kTable2Call, kMarket, cfg);
    EXPECT_LE(std::abs(r.price - exact), 4.0 * r.extra.at("se"));
    cfg.n_paths = 3;
    EXPECT_THROW(price_monte_carlo(kTable2Call, kMarket, cfg), std::invalid_argument);
}

TEST(MonteCarlo, StandardErrorHalvesWhenPathsQuadruple) {
    double ratio_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        McConfig small;
        small.n_paths = 25000;
        small.seed = seed;
        McConfig large = small;
        large.n_paths = 100000;
        ratio_sum += price_monte_carlo(kTable2Call, kMarket, small).extra.at("se") /
                     price_monte_carlo(kTable2Call, kMarket, large).extra.at("se");
    }
    EXPECT_NEAR(ratio_sum / 10.0, 2.0, 0.4);
}

TEST(MonteCarlo, DiscountedAssetIsAMartingale) {
    McConfig cfg;
    const auto est = simulate_discounted_payoff(kMarket, 7.0, 1.0, cfg, [](double s) { return s; });
    EXPECT_LE(std::abs(est.mean - 7.0), 3.0 * est.standard_error);
}

TEST(MonteCarlo, ConfigValidation) {
    McConfig bad;
    bad.n_paths = 0;
    EXPECT_THROW(price_monte_carlo(kTable2Call, kMarket, bad), std::invalid_argument);
    bad = McConfig{};
    bad.n_time_steps = 0;
    EXPECT_THROW(price_monte_carlo(kTable2Call, kMarket, bad), std::invalid_argument);
}
