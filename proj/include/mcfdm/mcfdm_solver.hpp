#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcfdm/core_model.hpp"
#include "mcfdm/explicit_kernels.hpp"

namespace mcfdm {

/// Convection tuning factor settings.
///
/// The raw factor is 1 / (2 * integral of 1/alpha over the cell [s - ds/2, s + ds/2]),
/// which equals alpha / (2 ds) for a constant profile. In normalized mode it is
/// divided by alpha(s) / (2 ds), so a constant profile gives exactly the central
/// scheme and `scaling` becomes a plain enhance (> 1) / weaken (< 1) multiplier.
/// `scaling` = 0 switches the convection flux off.
struct ThetaConfig {
    double scaling = 1.0;
    std::size_t quadrature_points = 64;
    bool normalize = true;

    void validate() const;
};

/// Thrown when the explicit step exceeds the stability bound.
class StabilityError : public std::runtime_error {
public:
    StabilityError(double dt, double dt_max);
    double dt() const { return dt_; }
    double dt_max() const { return dt_max_; }

private:
    double dt_;
    double dt_max_;
};

enum class KernelPolicy { Serial, Parallel };

struct McfdmOptions {
    bool allow_unstable = false;
    kernels::Convection convection = kernels::Convection::Enabled;
    KernelPolicy kernel = KernelPolicy::Parallel;
    std::size_t min_parallel_nodes = 4096;
    bool keep_surface = false;
};

struct McfdmReport {
    PricingResult result;
    std::vector<double> theta;  // per node; boundary entries are 0
    double cfl_margin = 0.0;    // dt_max / dt; +inf when unconstrained
    bool stability_override = false;
    bool oscillation = false;
    std::size_t overshoot_count = 0;
    std::optional<PriceSurface> surface;
};

double theta_at(const MarketParams& market, double s, double ds, const ThetaConfig& config);

/// Tuning factor at every node of the grid (0 at the two boundary nodes).
std::vector<double> theta_profile(const MarketParams& market, const Discretization& disc, const ThetaConfig& config);

/// Explicit bound min_i ds^2 / (sigma^2 S_i^2 + r S_i theta_i ds + r ds^2) over
/// interior nodes; +inf when every denominator vanishes.
double max_stable_dt(const MarketParams& market, const Discretization& disc, const ThetaConfig& config);

/// Advance level `level_index` to `level_index + 1`: interior stencil, then
/// Dirichlet edges at the new backward time.
std::vector<double> explicit_step(const std::vector<double>& level, const OptionContract& contract,
                                  const MarketParams& market, const Discretization& disc,
                                  const ThetaConfig& config, std::size_t level_index);

McfdmReport solve_mcfdm(const OptionContract& contract, const MarketParams& market, const Discretization& disc,
                        const ThetaConfig& config = {}, const McfdmOptions& options = {});

}  // namespace mcfdm
