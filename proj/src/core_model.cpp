#include "mcfdm/core_model.hpp"

#include <algorithm>
#include <cmath>

namespace mcfdm {

double MarketParams::alpha(double s) const {
    switch (alpha_profile) {
        case AlphaProfile::Constant:
            return sigma;
        case AlphaProfile::Proportional:
            return sigma * s;
    }
    return sigma;
}

void MarketParams::validate() const {
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw std::invalid_argument("rate must be finite and >= 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be finite and > 0");
}

void OptionContract::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike))
        throw std::invalid_argument("strike must be finite and > 0");
    if (!(maturity > 0.0) || !std::isfinite(maturity))
        throw std::invalid_argument("maturity must be finite and > 0");
    if (!(spot > 0.0) || !std::isfinite(spot))
        throw std::invalid_argument("spot must be finite and > 0");
}

PriceSurface::PriceSurface(const Discretization& disc)
    : disc_(disc), values_(disc.n_nodes() * (disc.n_time + 1), 0.0) {}

std::string to_string(Method m) {
    switch (m) {
        case Method::MCFDM: return "MCFDM";
        case Method::CFDM: return "CFDM";
        case Method::MonteCarlo: return "MonteCarlo";
        case Method::Exact: return "Exact";
    }
    return "?";
}

std::string to_string(OptionKind k) { return k == OptionKind::Call ? "call" : "put"; }

std::optional<Method> parse_method(const std::string& s) {
    std::string l = s;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
    if (l == "mcfdm") return Method::MCFDM;
    if (l == "cfdm" || l == "cn" || l == "crank-nicolson") return Method::CFDM;
    if (l == "mc" || l == "montecarlo" || l == "monte-carlo") return Method::MonteCarlo;
    if (l == "exact") return Method::Exact;
    return std::nullopt;
}

double payoff(const OptionContract& contract, double s) {
    return contract.kind == OptionKind::Call ? std::max(s - contract.strike, 0.0)
                                             : std::max(contract.strike - s, 0.0);
}

double boundary_value(const OptionContract& contract, const MarketParams& market,
                      Edge edge, double tau, double s_max) {
    if (!(tau >= 0.0) || tau > contract.maturity)
        throw std::invalid_argument("tau outside [0, maturity]");
    const double discounted_strike = contract.strike * std::exp(-market.rate * tau);
    if (contract.kind == OptionKind::Call)
        return edge == Edge::Lower ? 0.0 : s_max - discounted_strike;
    return edge == Edge::Lower ? discounted_strike : 0.0;
}

namespace {

// Candidate s_max values above floor_value giving spot an integral node index with
// n_space intervals; returns the one closest to target.
std::optional<double> aligned_s_max(double spot, double floor_value, double target, std::size_t n_space) {
    const double n = static_cast<double>(n_space);
    const double index_guess = spot * n / target;
    std::optional<double> best;
    for (double idx : {std::floor(index_guess), std::ceil(index_guess)}) {
        if (idx < 1.0 || idx >= n) continue;
        const double s_max = spot * n / idx;
        if (s_max <= floor_value) continue;
        if (!best || std::abs(s_max - target) < std::abs(*best - target)) best = s_max;
    }
    return best;
}

}  // namespace

Discretization build_grid(const OptionContract& contract, std::size_t n_space,
                          std::size_t n_time, const SMaxPolicy& policy) {
    contract.validate();
    if (n_space < 4) throw std::invalid_argument("n_space must be >= 4");
    if (n_time < 1) throw std::invalid_argument("n_time must be >= 1");

    const double floor_value = std::max(contract.spot, contract.strike);
    double s_max = kAutoTruncationFactor * floor_value;
    if (const auto* exp = std::get_if<SMaxExplicit>(&policy)) {
        if (!(exp->value > floor_value) || !std::isfinite(exp->value))
            throw std::invalid_argument("explicit s_max must exceed max(spot, strike)");
        s_max = exp->value;
    } else if (std::holds_alternative<SMaxAutoAligned>(policy)) {
        if (auto aligned = aligned_s_max(contract.spot, floor_value, s_max, n_space)) s_max = *aligned;
    }

    Discretization d;
    d.s_max = s_max;
    d.n_space = n_space;
    d.n_time = n_time;
    d.ds = s_max / static_cast<double>(n_space);
    d.dt = contract.maturity / static_cast<double>(n_time);
    return d;
}

double interpolate_level(const std::vector<double>& level, const Discretization& disc, double s) {
    if (level.size() != disc.n_nodes()) throw std::invalid_argument("level size does not match grid");
    if (s <= 0.0) return level.front();
    if (s >= disc.s_max) return level.back();
    const double x = s / disc.ds;
    auto i = static_cast<std::size_t>(std::floor(x));
    // Snap to a node when s is within rounding of it.
    const double nearest = std::round(x);
    if (std::abs(x - nearest) < 1e-10) return level[static_cast<std::size_t>(nearest)];
    if (i >= disc.n_space) i = disc.n_space - 1;
    const double w = x - static_cast<double>(i);
    return (1.0 - w) * level[i] + w * level[i + 1];
}

}  // namespace mcfdm
