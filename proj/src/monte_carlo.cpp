#include "mcfdm/monte_carlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mcfdm/analytic_oracle.hpp"
#include "mcfdm/philox.hpp"

namespace mcfdm {

void McConfig::validate() const {
    if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
    if (n_time_steps < 1) throw std::invalid_argument("n_time_steps must be >= 1");
    if (antithetic && n_paths % 2 != 0) throw std::invalid_argument("antithetic sampling needs an even n_paths");
}

double sample_terminal_price(const MarketParams& market, double s0, double t_total, std::span<const double> normals) {
    if (!(s0 > 0.0)) throw std::invalid_argument("sample_terminal_price: s0 must be > 0");
    if (normals.empty()) throw std::invalid_argument("sample_terminal_price: need at least one step");
    const double dt = t_total / static_cast<double>(normals.size());
    const double drift = (market.rate - 0.5 * market.sigma * market.sigma) * dt;
    const double diffusion = market.sigma * std::sqrt(dt);
    double s = s0;
    for (double z : normals) s *= std::exp(drift + diffusion * z);
    return s;
}

double path_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    // Counter layout: (path low word, path high word, step / 2, 0); each block of
    // four output words yields two uniforms.
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                                  static_cast<std::uint32_t>(step >> 1), 0u};
    const auto words = Philox4x32::generate(ctr, Philox4x32::key_from_seed(seed));
    const double u = (step & 1u) == 0 ? Philox4x32::to_open_unit(words[0], words[1])
                                      : Philox4x32::to_open_unit(words[2], words[3]);
    return inverse_std_normal_cdf(u);
}

namespace {

struct Moments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double n = static_cast<double>(count + other.count);
        const double delta = other.mean - mean;
        mean += delta * static_cast<double>(other.count) / n;
        m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / n;
        count += other.count;
    }
};

struct PathKernel {
    const MarketParams& market;
    double s0;
    double maturity;
    const McConfig& config;
    const std::function<double(double)>& terminal_payoff;

    double terminal(std::uint64_t path, double sign, std::vector<double>& scratch) const {
        for (std::size_t k = 0; k < scratch.size(); ++k) scratch[k] = sign * path_normal(config.seed, path, k);
        return sample_terminal_price(market, s0, maturity, scratch);
    }

    Moments run_block(std::size_t block, std::size_t samples) const {
        Moments m;
        std::vector<double> scratch(config.n_time_steps);
        const std::size_t first = block * kPathsPerBlock;
        const std::size_t last = std::min(samples, first + kPathsPerBlock);
        for (std::size_t j = first; j < last; ++j) {
            double value = terminal_payoff(terminal(j, 1.0, scratch));
            if (config.antithetic) value = 0.5 * (value + terminal_payoff(terminal(j, -1.0, scratch)));
            m.add(value);
        }
        return m;
    }
};

}  // namespace

McEstimate simulate_discounted_payoff(const MarketParams& market, double s0, double maturity,
                                      const McConfig& config, const std::function<double(double)>& terminal_payoff,
                                      McExecution execution) {
    config.validate();
    if (!(market.sigma >= 0.0) || !(market.rate >= 0.0)) throw std::invalid_argument("invalid market parameters");
    if (!(maturity > 0.0)) throw std::invalid_argument("maturity must be > 0");

    const std::size_t samples = config.antithetic ? config.n_paths / 2 : config.n_paths;
    const std::size_t n_blocks = (samples + kPathsPerBlock - 1) / kPathsPerBlock;
    const PathKernel kernel{market, s0, maturity, config, terminal_payoff};

    std::vector<Moments> partial(n_blocks);
    if (execution == McExecution::Serial) {
        for (std::size_t b = 0; b < n_blocks; ++b) partial[b] = kernel.run_block(b, samples);
    } else {
        const auto blocks = static_cast<std::int64_t>(n_blocks);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t b = 0; b < blocks; ++b)
            partial[static_cast<std::size_t>(b)] = kernel.run_block(static_cast<std::size_t>(b), samples);
    }

    Moments total;
    for (const auto& m : partial) total.merge(m);

    const double discount = std::exp(-market.rate * maturity);
    McEstimate est;
    est.samples = total.count;
    est.mean = discount * total.mean;
    if (total.count > 1) {
        const double variance = total.m2 / static_cast<double>(total.count - 1);
        est.standard_error = discount * std::sqrt(variance / static_cast<double>(total.count));
    }
    return est;
}

PricingResult price_monte_carlo(const OptionContract& contract, const MarketParams& market, const McConfig& config,
                                McExecution execution) {
    contract.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto est = simulate_discounted_payoff(
        market, contract.spot, contract.maturity, config, [&](double s) { return payoff(contract, s); }, execution);
    const auto stop = std::chrono::steady_clock::now();

    PricingResult result;
    result.method = Method::MonteCarlo;
    result.price = est.mean;
    result.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
    double reference;
    if (market.sigma > 0.0) {
        reference = black_scholes_price(contract, market);
    } else {
        const double discount = std::exp(-market.rate * contract.maturity);
        reference = discount * payoff(contract, contract.spot / discount);
    }
    result.abs_error = std::abs(est.mean - reference);
    result.extra["se"] = est.standard_error;
    result.extra["se_defined"] = est.samples > 1 ? 1.0 : 0.0;
    result.extra["paths"] = static_cast<double>(config.n_paths);
    result.extra["seed"] = static_cast<double>(config.seed);
    return result;
}

}  // namespace mcfdm
