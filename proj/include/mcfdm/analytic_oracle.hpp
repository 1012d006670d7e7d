#pragma once

#include <stdexcept>
#include <string>

#include "mcfdm/core_model.hpp"

namespace mcfdm {

enum class CdfMethod { ErfBased, RationalApprox };

struct OracleConfig {
    CdfMethod cdf_method = CdfMethod::ErfBased;
    double quadrature_tolerance = 1e-10;

    void validate() const;
};

/// Raised when adaptive quadrature cannot reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}
    double achieved_error() const { return achieved_error_; }

private:
    double achieved_error_;
};

/// Standard normal CDF. N(x) + N(-x) = 1 up to one rounding of the upper tail.
double std_normal_cdf(double x, CdfMethod method = CdfMethod::ErfBased);

/// Inverse of the standard normal CDF on (0, 1), accurate to ~1e-15 relative.
double inverse_std_normal_cdf(double p);

/// Closed-form Black-Scholes price of a European call or put.
double black_scholes_price(const OptionContract& contract, const MarketParams& market,
                           const OracleConfig& config = {});

/// Discounted expectation of the payoff under the lognormal law of S_T,
/// evaluated by adaptive Gauss-Kronrod quadrature. Independent of the closed form.
double risk_neutral_integral_price(const OptionContract& contract, const MarketParams& market,
                                   double tolerance);

}  // namespace mcfdm
