#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mcfdm {

enum class OptionKind { Call, Put };

/// Local-volatility profile used only by the convection tuning factor.
///   Constant:     alpha(S) = sigma
///   Proportional: alpha(S) = sigma * S
enum class AlphaProfile { Constant, Proportional };

struct MarketParams {
    double rate = 0.05;
    double sigma = 0.25;
    AlphaProfile alpha_profile = AlphaProfile::Constant;

    double alpha(double s) const;
    void validate() const;
};

struct OptionContract {
    OptionKind kind = OptionKind::Call;
    double strike = 1.0;
    double maturity = 1.0;
    double spot = 1.0;

    void validate() const;
};

/// Uniform price/time grid. Nodes are S_i = i * ds for i = 0..n_space and
/// backward-time levels tau_n = n * dt for n = 0..n_time.
struct Discretization {
    double s_max = 0.0;
    std::size_t n_space = 0;
    std::size_t n_time = 0;
    double ds = 0.0;
    double dt = 0.0;

    double node(std::size_t i) const { return static_cast<double>(i) * ds; }
    std::size_t n_nodes() const { return n_space + 1; }
};

/// Option values v[n][i] at node i and backward-time level n.
/// Level 0 is the maturity payoff, level n_time the valuation date.
class PriceSurface {
public:
    explicit PriceSurface(const Discretization& disc);

    double& at(std::size_t i, std::size_t n) { return values_[n * disc_.n_nodes() + i]; }
    double at(std::size_t i, std::size_t n) const { return values_[n * disc_.n_nodes() + i]; }
    const Discretization& discretization() const { return disc_; }

private:
    Discretization disc_;
    std::vector<double> values_;
};

enum class Method { MCFDM, CFDM, MonteCarlo, Exact };

std::string to_string(Method m);
std::string to_string(OptionKind k);
std::optional<Method> parse_method(const std::string& s);

struct PricingResult {
    Method method = Method::Exact;
    double price = 0.0;
    std::optional<double> abs_error;
    double elapsed_seconds = 0.0;
    /// Method-specific numbers: "se", "theta_scale", "cfl_margin", ...
    std::map<std::string, double> extra;
};

double payoff(const OptionContract& contract, double s);

enum class Edge { Lower, Upper };

/// Dirichlet value at a truncation edge, tau years before maturity.
/// Calls: 0 at S=0 and s_max - K e^{-r tau} at s_max.
/// Puts: K e^{-r tau} at S=0 and 0 at s_max.
double boundary_value(const OptionContract& contract, const MarketParams& market,
                      Edge edge, double tau, double s_max);

struct SMaxAuto {};
/// Like SMaxAuto, then nudges s_max (same n_space) so that spot sits on a node.
/// Needs spot * n_space > max(spot, strike); otherwise the automatic value is kept.
struct SMaxAutoAligned {};
struct SMaxExplicit {
    double value;
};
using SMaxPolicy = std::variant<SMaxAuto, SMaxAutoAligned, SMaxExplicit>;

inline constexpr double kAutoTruncationFactor = 4.0;

Discretization build_grid(const OptionContract& contract, std::size_t n_space,
                          std::size_t n_time, const SMaxPolicy& policy = SMaxAuto{});

/// Linear interpolation of a level (indexed by node) at price s.
double interpolate_level(const std::vector<double>& level, const Discretization& disc, double s);

}  // namespace mcfdm
