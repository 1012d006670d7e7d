#include "mcfdm/analytic_oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace mcfdm {

void OracleConfig::validate() const {
    if (!(quadrature_tolerance > 0.0)) throw std::invalid_argument("quadrature_tolerance must be > 0");
}

namespace {

// Lower tail N(-|x|) via West's double-precision rational form (Hart 1968).
double lower_tail_rational(double x_abs) {
    if (x_abs > 37.0) return 0.0;
    const double e = std::exp(-0.5 * x_abs * x_abs);
    if (x_abs < 7.07106781186547) {
        double num = 3.52624965998911e-02 * x_abs + 0.700383064443688;
        num = num * x_abs + 6.37396220353165;
        num = num * x_abs + 33.912866078383;
        num = num * x_abs + 112.079291497871;
        num = num * x_abs + 221.213596169931;
        num = num * x_abs + 220.206867912376;
        double den = 8.83883476483184e-02 * x_abs + 1.75566716318264;
        den = den * x_abs + 16.064177579207;
        den = den * x_abs + 86.7807322029461;
        den = den * x_abs + 296.564248779674;
        den = den * x_abs + 637.333633378831;
        den = den * x_abs + 793.826512519948;
        den = den * x_abs + 440.413735824752;
        return e * num / den;
    }
    double b = x_abs + 0.65;
    b = x_abs + 4.0 / b;
    b = x_abs + 3.0 / b;
    b = x_abs + 2.0 / b;
    b = x_abs + 1.0 / b;
    return e / b / 2.506628274631;
}

double lower_tail_erf(double x_abs) { return 0.5 * std::erfc(x_abs / std::numbers::sqrt2); }

}  // namespace

double std_normal_cdf(double x, CdfMethod method) {
    if (!std::isfinite(x)) throw std::invalid_argument("std_normal_cdf: non-finite input");
    const double x_abs = std::abs(x);
    const double tail = method == CdfMethod::ErfBased ? lower_tail_erf(x_abs) : lower_tail_rational(x_abs);
    return x < 0.0 ? tail : 1.0 - tail;
}

double inverse_std_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_std_normal_cdf: p outside (0, 1)");

    // Acklam's rational approximation (relative error ~1.15e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // ... polished by one Halley step against the erfc-based CDF.
    const double e = std_normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double black_scholes_price(const OptionContract& contract, const MarketParams& market,
                           const OracleConfig& config) {
    contract.validate();
    market.validate();
    const double s0 = contract.spot;
    const double k = contract.strike;
    const double t = contract.maturity;
    const double vol_sqrt_t = market.sigma * std::sqrt(t);
    const double discount = std::exp(-market.rate * t);
    const double d1 = (std::log(s0 / k) + (market.rate + 0.5 * market.sigma * market.sigma) * t) / vol_sqrt_t;
    const double d2 = d1 - vol_sqrt_t;
    const auto cdf = [&](double x) { return std_normal_cdf(x, config.cdf_method); };
    if (contract.kind == OptionKind::Call) return s0 * cdf(d1) - k * discount * cdf(d2);
    return k * discount * cdf(-d2) - s0 * cdf(-d1);
}

double risk_neutral_integral_price(const OptionContract& contract, const MarketParams& market,
                                   double tolerance) {
    contract.validate();
    market.validate();
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");

    // S_T = S0 exp(m + v z), z ~ N(0, 1). The integrand is smooth on either side
    // of the exercise boundary z*, so integrate the exercised side only.
    const double t = contract.maturity;
    const double m = (market.rate - 0.5 * market.sigma * market.sigma) * t;
    const double v = market.sigma * std::sqrt(t);
    const double z_star = (std::log(contract.strike / contract.spot) - m) / v;
    constexpr double z_limit = 40.0;

    const auto terminal = [&](double z) { return contract.spot * std::exp(m + v * z); };
    const auto density = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
    const auto integrand = [&](double z) { return payoff(contract, terminal(z)) * density(z); };

    double lo = -z_limit;
    double hi = z_limit;
    if (contract.kind == OptionKind::Call)
        lo = std::max(lo, z_star);
    else
        hi = std::min(hi, z_star);
    if (lo >= hi) return 0.0;

    // Split around the density peak so every panel sees a smooth, resolved integrand.
    std::vector<double> breaks{lo};
    for (double p : {-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0})
        if (p > lo && p < hi) breaks.push_back(p);
    breaks.push_back(hi);

    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    double total_error = 0.0;
    const double relative_tol = std::max(1e-12, 1e-3 * tolerance);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double err = 0.0;
        double l1 = 0.0;
        total += Quadrature::integrate(integrand, breaks[i], breaks[i + 1], 10, relative_tol, &err, &l1);
        total_error += err;
    }
    const double discounted = std::exp(-market.rate * t) * total;
    if (total_error > tolerance)
        throw QuadratureError("risk-neutral quadrature did not converge", total_error);
    return discounted;
}

}  // namespace mcfdm
