#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "mcfdm/core_model.hpp"

namespace mcfdm {

struct McConfig {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 42;
    std::size_t n_time_steps = 1;
    bool antithetic = false;

    void validate() const;
};

/// Paths per reduction block. Partial sums are merged in block order, so the
/// estimate does not depend on how blocks are scheduled.
inline constexpr std::size_t kPathsPerBlock = 4096;

enum class McExecution { Serial, Parallel };

struct McEstimate {
    double mean = 0.0;            // discounted
    double standard_error = 0.0;  // discounted; 0 when fewer than two samples
    std::size_t samples = 0;      // independent samples (pairs when antithetic)
};

/// Log-Euler recursion S <- S exp((r - sigma^2/2) dt + sigma sqrt(dt) Z), one
/// draw per step; `normals.size()` sets the step count.
double sample_terminal_price(const MarketParams& market, double s0, double t_total, std::span<const double> normals);

/// Standard normal draw for (seed, path, step). Path index is global.
double path_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step);

/// Discounted mean of an arbitrary terminal payoff.
McEstimate simulate_discounted_payoff(const MarketParams& market, double s0, double maturity,
                                      const McConfig& config, const std::function<double(double)>& terminal_payoff,
                                      McExecution execution = McExecution::Parallel);

PricingResult price_monte_carlo(const OptionContract& contract, const MarketParams& market,
                                const McConfig& config = {}, McExecution execution = McExecution::Parallel);

}  // namespace mcfdm
