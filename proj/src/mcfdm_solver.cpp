#include "mcfdm/mcfdm_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcfdm/analytic_oracle.hpp"

namespace mcfdm {

void ThetaConfig::validate() const {
    if (!(scaling >= 0.0) || !std::isfinite(scaling)) throw std::invalid_argument("theta scaling must be >= 0");
    if (quadrature_points < 2) throw std::invalid_argument("quadrature_points must be >= 2");
}

namespace {

std::string stability_message(double dt, double dt_max) {
    std::ostringstream os;
    os.precision(6);
    os << "explicit step dt=" << dt << " exceeds stability bound dt_max=" << dt_max;
    return os.str();
}

// Composite midpoint rule for the cell integral of 1/alpha.
double inverse_alpha_integral(const MarketParams& market, double lo, double hi, std::size_t points) {
    const double h = (hi - lo) / static_cast<double>(points);
    double sum = 0.0;
    for (std::size_t j = 0; j < points; ++j) {
        const double a = market.alpha(lo + (static_cast<double>(j) + 0.5) * h);
        if (!(a > 0.0)) throw std::invalid_argument("theta_at: alpha must be positive on the cell");
        sum += 1.0 / a;
    }
    return h * sum;
}

}  // namespace

StabilityError::StabilityError(double dt, double dt_max)
    : std::runtime_error(stability_message(dt, dt_max)), dt_(dt), dt_max_(dt_max) {}

double theta_at(const MarketParams& market, double s, double ds, const ThetaConfig& config) {
    config.validate();
    if (!(ds > 0.0)) throw std::invalid_argument("theta_at: ds must be > 0");
    const double lo = s - 0.5 * ds;
    const double hi = s + 0.5 * ds;
    if (!(lo > 0.0)) throw std::invalid_argument("theta_at: cell extends below S=0");

    const double raw = 0.5 / inverse_alpha_integral(market, lo, hi, config.quadrature_points);
    if (!config.normalize) return config.scaling * raw;
    const double reference = market.alpha(s) / (2.0 * ds);
    if (!(reference > 0.0)) throw std::invalid_argument("theta_at: alpha must be positive on the cell");
    return config.scaling * (raw / reference);
}

std::vector<double> theta_profile(const MarketParams& market, const Discretization& disc, const ThetaConfig& config) {
    std::vector<double> theta(disc.n_nodes(), 0.0);
    for (std::size_t i = 1; i < disc.n_space; ++i) theta[i] = theta_at(market, disc.node(i), disc.ds, config);
    return theta;
}

namespace {

double max_stable_dt_for(const MarketParams& market, const Discretization& disc, const std::vector<double>& theta) {
    const double ds2 = disc.ds * disc.ds;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < disc.n_space; ++i) {
        const double s = disc.node(i);
        const double denom = market.sigma * market.sigma * s * s + market.rate * s * theta[i] * disc.ds +
                             market.rate * ds2;
        if (denom > 0.0) best = std::min(best, ds2 / denom);
    }
    return best;
}

kernels::StencilInputs stencil_for(const MarketParams& market, const Discretization& disc,
                                   const std::vector<double>& nodes, const std::vector<double>& theta, double dt) {
    return {nodes, theta, market.sigma, market.rate, disc.ds, dt};
}

std::vector<double> node_coordinates(const Discretization& disc) {
    std::vector<double> nodes(disc.n_nodes());
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = disc.node(i);
    return nodes;
}

void apply_edges(std::vector<double>& level, const OptionContract& contract, const MarketParams& market,
                 const Discretization& disc, double tau) {
    level.front() = boundary_value(contract, market, Edge::Lower, tau, disc.s_max);
    level.back() = boundary_value(contract, market, Edge::Upper, tau, disc.s_max);
}

}  // namespace

double max_stable_dt(const MarketParams& market, const Discretization& disc, const ThetaConfig& config) {
    // theta_at rejects sigma = 0 profiles; the bound itself does not need them.
    if (config.scaling == 0.0 || market.rate == 0.0)
        return max_stable_dt_for(market, disc, std::vector<double>(disc.n_nodes(), 0.0));
    return max_stable_dt_for(market, disc, theta_profile(market, disc, config));
}

std::vector<double> explicit_step(const std::vector<double>& level, const OptionContract& contract,
                                  const MarketParams& market, const Discretization& disc,
                                  const ThetaConfig& config, std::size_t level_index) {
    if (level.size() != disc.n_nodes()) throw std::invalid_argument("explicit_step: level size mismatch");
    const auto theta = theta_profile(market, disc, config);
    const auto nodes = node_coordinates(disc);
    std::vector<double> next(level.size());
    kernels::explicit_interior_serial(stencil_for(market, disc, nodes, theta, disc.dt), level, next);
    const double tau_next = std::min(contract.maturity, static_cast<double>(level_index + 1) * disc.dt);
    apply_edges(next, contract, market, disc, tau_next);
    return next;
}

McfdmReport solve_mcfdm(const OptionContract& contract, const MarketParams& market, const Discretization& disc,
                        const ThetaConfig& config, const McfdmOptions& options) {
    contract.validate();
    market.validate();
    config.validate();

    const auto start = std::chrono::steady_clock::now();

    McfdmReport report;
    report.theta = theta_profile(market, disc, config);
    const double dt_max = max_stable_dt_for(market, disc, report.theta);
    report.cfl_margin = dt_max / disc.dt;
    if (disc.dt > dt_max) {
        if (!options.allow_unstable) throw StabilityError(disc.dt, dt_max);
        report.stability_override = true;
    }

    const auto nodes = node_coordinates(disc);
    const auto stencil = stencil_for(market, disc, nodes, report.theta, disc.dt);

    std::vector<double> current(disc.n_nodes());
    for (std::size_t i = 0; i < current.size(); ++i) current[i] = payoff(contract, nodes[i]);
    std::vector<double> next(current.size());

    if (options.keep_surface) {
        report.surface.emplace(disc);
        for (std::size_t i = 0; i < current.size(); ++i) report.surface->at(i, 0) = current[i];
    }

    const double maturity = contract.maturity;
    for (std::size_t n = 0; n < disc.n_time; ++n) {
        if (options.kernel == KernelPolicy::Serial)
            kernels::explicit_interior_serial(stencil, current, next, options.convection);
        else
            kernels::explicit_interior_parallel(stencil, current, next, options.convection,
                                                options.min_parallel_nodes);
        const double tau = std::min(maturity, static_cast<double>(n + 1) * disc.dt);
        apply_edges(next, contract, market, disc, tau);
        report.overshoot_count += kernels::count_overshoots(current, next);
        if (report.surface)
            for (std::size_t i = 0; i < next.size(); ++i) report.surface->at(i, n + 1) = next[i];
        current.swap(next);
    }

    const double price = interpolate_level(current, disc, contract.spot);
    const auto stop = std::chrono::steady_clock::now();

    report.oscillation = report.overshoot_count > 0;
    auto& result = report.result;
    result.method = Method::MCFDM;
    result.price = price;
    result.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
    result.abs_error = std::abs(price - black_scholes_price(contract, market));
    result.extra["theta_scale"] = config.scaling;
    result.extra["cfl_margin"] = report.cfl_margin;
    result.extra["oscillation"] = report.oscillation ? 1.0 : 0.0;
    result.extra["n_space"] = static_cast<double>(disc.n_space);
    result.extra["n_time"] = static_cast<double>(disc.n_time);
    return report;
}

}  // namespace mcfdm
