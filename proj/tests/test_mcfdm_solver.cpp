#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mcfdm/analytic_oracle.hpp"
#include "mcfdm/mcfdm_solver.hpp"
#include "oracles.hpp"

using namespace mcfdm;

namespace {

const MarketParams kMarket{0.05, 0.25};
const OptionContract kTable2Call{OptionKind::Call, 7.5, 1.0, 7.0};

ThetaConfig literal(double scaling = 1.0) {
    ThetaConfig c;
    c.normalize = false;
    c.scaling = scaling;
    return c;
}

}  // namespace

// ---- theta_at ------------------------------------------------------------

TEST(Theta, ConstantProfileLiteralValue) {
    EXPECT_NEAR(theta_at(kMarket, 3.0, 0.1, literal()), 1.25, 1e-12);
    for (std::size_t points : {2, 3, 7, 64, 1000}) {
        ThetaConfig c = literal();
        c.quadrature_points = points;
        for (double s : {0.2, 1.0, 17.3})
            for (double ds : {0.01, 0.22, 0.3}) {
                if (s - ds / 2 <= 0.0) continue;
                EXPECT_NEAR(theta_at(kMarket, s, ds, c), kMarket.sigma / (2.0 * ds), 1e-12 * kMarket.sigma / ds);
            }
    }
}

TEST(Theta, ConstantProfileNormalizesToOne) {
    for (double s : {0.5, 5.0, 29.7})
        for (double ds : {0.05, 0.22, 0.3}) EXPECT_NEAR(theta_at(kMarket, s, ds, ThetaConfig{}), 1.0, 1e-12);
}

TEST(Theta, ProportionalProfileMatchesLogAntiderivative) {
    const MarketParams prop{0.05, 0.25, AlphaProfile::Proportional};
    // Antiderivative of 1/(sigma S) is ln(S)/sigma.
    const double expected = 0.25 / (2.0 * std::log(5.05 / 4.95));
    EXPECT_NEAR(expected, 6.24979166111085, 1e-12);
    // 64-point midpoint rule: relative error about (h/S)^2 / 12 with h = ds / 64.
    EXPECT_NEAR(theta_at(prop, 5.0, 0.1, literal()), expected, 1e-8 * expected);
    // Independent quadrature of the cell integral.
    const double integral = reference::integrate([](double s) { return 1.0 / (0.25 * s); }, 4.95, 5.05);
    EXPECT_NEAR(theta_at(prop, 5.0, 0.1, literal()), 0.5 / integral, 1e-8 * expected);
}

TEST(Theta, ProportionalMidpointIsSecondOrder) {
    const MarketParams prop{0.05, 0.25, AlphaProfile::Proportional};
    for (double s : {1.0, 3.0, 10.0, 29.7}) {
        const double ds = 0.1 * s;
        const double exact = 0.25 / (2.0 * std::log((s + ds / 2) / (s - ds / 2)));
        ThetaConfig coarse = literal();
        ThetaConfig fine = literal();
        fine.quadrature_points = 2 * coarse.quadrature_points;
        const double e_coarse = std::abs(theta_at(prop, s, ds, coarse) - exact);
        const double e_fine = std::abs(theta_at(prop, s, ds, fine) - exact);
        EXPECT_LE(e_coarse, 3e-7 * exact);
        EXPECT_NEAR(e_coarse / e_fine, 4.0, 0.1);
    }
}

TEST(Theta, ScalingIsExactlyLinear) {
    const MarketParams prop{0.05, 0.25, AlphaProfile::Proportional};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> k(0.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double scale = k(rng);
        for (bool normalize : {true, false}) {
            ThetaConfig one;
            one.normalize = normalize;
            ThetaConfig scaled = one;
            scaled.scaling = scale;
            EXPECT_EQ(theta_at(prop, 5.0, 0.2, scaled), scale * theta_at(prop, 5.0, 0.2, one));
        }
    }
}

TEST(Theta, RejectsCellsBelowZeroAndBadConfig) {
    EXPECT_THROW(theta_at(kMarket, 0.05, 0.1, ThetaConfig{}), std::invalid_argument);
    ThetaConfig bad;
    bad.quadrature_points = 1;
    EXPECT_THROW(theta_at(kMarket, 5.0, 0.1, bad), std::invalid_argument);
    bad = ThetaConfig{};
    bad.scaling = -1.0;
    EXPECT_THROW(theta_at(kMarket, 5.0, 0.1, bad), std::invalid_argument);
}

// ---- flux difference and stencil -----------------------------------------

TEST(ConvectionFlux, Examples) {
    EXPECT_EQ(kernels::convection_flux_difference({1, 1, 1}, 1.0), 0.0);
    EXPECT_EQ(kernels::convection_flux_difference({0, 1, 2}, 1.0), 1.0);
    EXPECT_EQ(kernels::convection_flux_difference({0, 1, 2}, 2.5), 2.5);
}

TEST(ExplicitKernel, ToyStencilByHand) {
    // S=(4,5,6), v=(0,0.5,1.5), sigma=0.25, r=0.05, dS=1, dt=0.01, theta=1:
    //   diffusion   0.5*0.0625*25*(1.5 - 1.0 + 0.0)  = 0.390625
    //   convection  0.05*5*1*(1.5 - 0.0)/2            = 0.1875
    //   reaction   -0.05*0.5                          = -0.025
    //   v1' = 0.5 + 0.01*0.553125                     = 0.50553125
    const std::vector<double> s{4, 5, 6}, theta{0, 1, 0}, in{0, 0.5, 1.5};
    std::vector<double> out(3, 0.0);
    kernels::StencilInputs p{s, theta, 0.25, 0.05, 1.0, 0.01};
    kernels::explicit_interior_serial(p, in, out);
    EXPECT_NEAR(out[1], 0.50553125, 1e-15);
}

TEST(ExplicitKernel, LinearFieldReproducesAnalyticStencil) {
    const auto disc = build_grid(kTable2Call, 100, 1000);
    std::vector<double> s(disc.n_nodes()), theta(disc.n_nodes(), 1.0), in(disc.n_nodes()), out(disc.n_nodes());
    const double a = 0.7, b = -1.3;
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = disc.node(i);
        in[i] = a * s[i] + b;
    }
    kernels::StencilInputs p{s, theta, kMarket.sigma, kMarket.rate, disc.ds, disc.dt};
    kernels::explicit_interior_serial(p, in, out);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double expected = disc.dt * (kMarket.rate * s[i] * a - kMarket.rate * (a * s[i] + b)) + in[i];
        EXPECT_NEAR(out[i], expected, 1e-12) << i;
    }
}

TEST(ExplicitKernel, ParallelSweepIsBitIdenticalToSerial) {
    const std::size_t n = 20001;
    std::vector<double> s(n), theta(n), in(n), serial(n, 0.0), parallel(n, 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = 0.01 * double(i);
        theta[i] = 0.5 + u(rng);
        in[i] = u(rng);
    }
    kernels::StencilInputs p{s, theta, 0.3, 0.04, 0.01, 1e-6};
    for (auto conv : {kernels::Convection::Enabled, kernels::Convection::Disabled}) {
        kernels::explicit_interior_serial(p, in, serial, conv);
        kernels::explicit_interior_parallel(p, in, parallel, conv, 0);
        for (std::size_t i = 1; i + 1 < n; ++i) ASSERT_EQ(serial[i], parallel[i]) << i;
    }
}

TEST(ExplicitStep, ZeroStepLeavesPayoffUnchanged) {
    auto disc = build_grid(kTable2Call, 100, 1000);
    disc.dt = 0.0;
    std::vector<double> level(disc.n_nodes());
    for (std::size_t i = 0; i < level.size(); ++i) level[i] = payoff(kTable2Call, disc.node(i));
    const auto next = explicit_step(level, kTable2Call, kMarket, disc, ThetaConfig{}, 0);
    for (std::size_t i = 0; i < level.size(); ++i) EXPECT_DOUBLE_EQ(next[i], level[i]);
}

TEST(ExplicitStep, SingleStepFromPayoffStaysNonNegativeAndBounded) {
    // Strike on a node: s_max = 30, ds = 0.3, K = 7.5 = 25 ds.
    const auto disc = build_grid(kTable2Call, 100, 1000, SMaxExplicit{30.0});
    std::vector<double> level(disc.n_nodes());
    for (std::size_t i = 0; i < level.size(); ++i) level[i] = payoff(kTable2Call, disc.node(i));
    const auto next = explicit_step(level, kTable2Call, kMarket, disc, ThetaConfig{}, 0);
    for (double v : next) EXPECT_GE(v, 0.0);
    const std::size_t k = 25;
    ASSERT_NEAR(disc.node(k), 7.5, 1e-12);
    const double slope = 1.0;
    EXPECT_LE(next[k], 0.5 * (level[k - 1] + level[k + 1]) + kMarket.rate * 7.5 * 1.0 * disc.dt * slope);
    // Edges carry the boundary values at tau = dt.
    EXPECT_DOUBLE_EQ(next.front(), 0.0);
    EXPECT_DOUBLE_EQ(next.back(), 30.0 - 7.5 * std::exp(-0.05 * disc.dt));
}

// ---- stability bound -----------------------------------------------------

TEST(MaxStableDt, WorstNodeFormula) {
    const OptionContract c{OptionKind::Call, 5.5, 1.0, 5.0};
    const auto disc = build_grid(c, 100, 1000);
    ASSERT_DOUBLE_EQ(disc.s_max, 22.0);
    // 0.22^2 / (0.0625*21.78^2 + 0.05*21.78*0.22 + 0.05*0.22^2), direct evaluation.
    EXPECT_NEAR(max_stable_dt(kMarket, disc, ThetaConfig{}), 0.001619269304726242, 1e-15);
}

TEST(MaxStableDt, UnconstrainedWithoutDiffusionOrDrift) {
    const auto disc = build_grid(kTable2Call, 100, 1000);
    const MarketParams still{0.0, 0.0};
    EXPECT_EQ(max_stable_dt(still, disc, ThetaConfig{}), std::numeric_limits<double>::infinity());
}

TEST(MaxStableDt, QuartersWhenSpacingHalves) {
    const auto coarse = build_grid(kTable2Call, 100, 1000);
    const auto fine = build_grid(kTable2Call, 200, 1000);
    const double ratio = max_stable_dt(kMarket, coarse, ThetaConfig{}) / max_stable_dt(kMarket, fine, ThetaConfig{});
    EXPECT_NEAR(ratio, 4.0, 0.05);
}

// ---- full solve ------------------------------------------------------------

TEST(SolveMcfdm, Table2CallAtDefaults) {
    const auto disc = build_grid(kTable2Call, 100, 1000);
    const auto report = solve_mcfdm(kTable2Call, kMarket, disc);
    EXPECT_NEAR(report.result.price, 0.63791, 5e-3);
    EXPECT_LE(*report.result.abs_error, 1e-2);
    EXPECT_GT(report.cfl_margin, 1.0);
    EXPECT_FALSE(report.oscillation);
    EXPECT_EQ(report.theta.size(), disc.n_nodes());
    EXPECT_GE(report.result.elapsed_seconds, 0.0);
}

TEST(SolveMcfdm, PutAgainstOracle) {
    const OptionContract put{OptionKind::Put, 7.5, 0.5, 7.0};
    const auto report = solve_mcfdm(put, kMarket, build_grid(put, 100, 1000));
    EXPECT_NEAR(report.result.price, black_scholes_price(put, kMarket), 5e-3);
}

TEST(SolveMcfdm, VanishingMaturityReturnsPayoff) {
    for (auto kind : {OptionKind::Call, OptionKind::Put}) {
        const OptionContract c{kind, 7.5, 1e-12, 7.0};
        const auto report = solve_mcfdm(c, kMarket, build_grid(c, 100, 1));
        EXPECT_NEAR(report.result.price, payoff(c, 7.0), 1e-9);
    }
}

TEST(SolveMcfdm, RefinementDoesNotIncreaseError) {
    const auto coarse = solve_mcfdm(kTable2Call, kMarket, build_grid(kTable2Call, 100, 1000));
    const auto fine = solve_mcfdm(kTable2Call, kMarket, build_grid(kTable2Call, 200, 4000));
    EXPECT_LE(*fine.result.abs_error, *coarse.result.abs_error);
}

TEST(SolveMcfdm, PutCallParity) {
    const OptionContract put{OptionKind::Put, 7.5, 1.0, 7.0};
    const double c = solve_mcfdm(kTable2Call, kMarket, build_grid(kTable2Call, 100, 1000)).result.price;
    const double p = solve_mcfdm(put, kMarket, build_grid(put, 100, 1000)).result.price;
    EXPECT_LE(std::abs(c - p - (7.0 - 7.5 * std::exp(-0.05))), 5e-3);
}

TEST(SolveMcfdm, ZeroScalingEqualsConvectionDisabled) {
    const auto disc = build_grid(kTable2Call, 100, 1000);
    ThetaConfig off;
    off.scaling = 0.0;
    McfdmOptions disabled;
    disabled.convection = kernels::Convection::Disabled;
    const double a = solve_mcfdm(kTable2Call, kMarket, disc, off).result.price;
    const double b = solve_mcfdm(kTable2Call, kMarket, disc, ThetaConfig{}, disabled).result.price;
    EXPECT_LE(std::abs(a - b), 1e-14);
}

TEST(SolveMcfdm, SerialAndParallelKernelsAgreeExactly) {
    const auto disc = build_grid(kTable2Call, 400, 20000);
    McfdmOptions serial, parallel;
    serial.kernel = KernelPolicy::Serial;
    parallel.min_parallel_nodes = 0;
    EXPECT_EQ(solve_mcfdm(kTable2Call, kMarket, disc, {}, serial).result.price,
              solve_mcfdm(kTable2Call, kMarket, disc, {}, parallel).result.price);
}

TEST(SolveMcfdm, StabilityRejectionAndOverride) {
    const auto disc = build_grid(kTable2Call, 100, 100);
    try {
        solve_mcfdm(kTable2Call, kMarket, disc);
        FAIL() << "expected StabilityError";
    } catch (const StabilityError& e) {
        EXPECT_NEAR(e.dt_max(), max_stable_dt(kMarket, disc, ThetaConfig{}), 1e-15);
        EXPECT_GT(e.dt(), e.dt_max());
    }
    McfdmOptions force;
    force.allow_unstable = true;
    const auto report = solve_mcfdm(kTable2Call, kMarket, disc, {}, force);
    EXPECT_TRUE(report.stability_override);
    EXPECT_LT(report.cfl_margin, 1.0);
}

TEST(SolveMcfdm, SurfaceIsKeptOnRequest) {
    const auto disc = build_grid(kTable2Call, 50, 400);
    McfdmOptions keep;
    keep.keep_surface = true;
    const auto report = solve_mcfdm(kTable2Call, kMarket, disc, {}, keep);
    ASSERT_TRUE(report.surface.has_value());
    for (std::size_t i = 0; i < disc.n_nodes(); ++i) {
        EXPECT_EQ(report.surface->at(i, 0), payoff(kTable2Call, disc.node(i)));
        for (std::size_t n = 0; n <= disc.n_time; ++n) EXPECT_GE(report.surface->at(i, n), 0.0);
    }
}

TEST(SolveMcfdm, LargeScalingRegressions) {
    const auto disc = build_grid(kTable2Call, 100, 1000);
    ThetaConfig k;
    k.scaling = 20.0;
    EXPECT_FALSE(solve_mcfdm(kTable2Call, kMarket, disc, k).oscillation);
    k.scaling = 78.0;
    const auto flagged = solve_mcfdm(kTable2Call, kMarket, disc, k);
    EXPECT_TRUE(flagged.oscillation);
    EXPECT_GT(flagged.overshoot_count, 0u);
    k.scaling = 100.0;
    EXPECT_THROW(solve_mcfdm(kTable2Call, kMarket, disc, k), StabilityError);
}

TEST(SolveMcfdm, ProportionalProfileStaysCloseToConstant) {
    const MarketParams prop{0.05, 0.25, AlphaProfile::Proportional};
    const auto disc = build_grid(kTable2Call, 100, 1000);
    const double a = solve_mcfdm(kTable2Call, kMarket, disc).result.price;
    const double b = solve_mcfdm(kTable2Call, prop, disc).result.price;
    EXPECT_NEAR(a, b, 1e-3);
}
