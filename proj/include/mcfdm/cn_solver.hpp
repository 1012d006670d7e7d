#pragma once

#include <stdexcept>
#include <vector>

#include "mcfdm/core_model.hpp"

namespace mcfdm {

struct TridiagonalSystem {
    std::vector<double> lower;  // n-1 sub-diagonal entries, lower[i] multiplies x[i] in row i+1
    std::vector<double> diag;   // n
    std::vector<double> upper;  // n-1 super-diagonal entries, upper[i] multiplies x[i+1] in row i
    std::vector<double> rhs;    // n

    std::size_t size() const { return diag.size(); }
    void validate() const;
    /// A * x for the coefficient bands.
    std::vector<double> multiply(const std::vector<double>& x) const;
};

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thomas elimination. Throws SingularSystemError on a pivot below 1e-14 * scale.
std::vector<double> thomas_solve(const TridiagonalSystem& system);

/// Crank-Nicolson with central differences in S, boundary values folded into
/// the right-hand side, price read at spot by linear interpolation.
PricingResult solve_crank_nicolson(const OptionContract& contract, const MarketParams& market,
                                   const Discretization& disc);

/// Same scheme, returning the valuation-date level instead of a price.
std::vector<double> crank_nicolson_level(const OptionContract& contract, const MarketParams& market,
                                         const Discretization& disc);

}  // namespace mcfdm
