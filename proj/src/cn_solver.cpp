#include "mcfdm/cn_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mcfdm/analytic_oracle.hpp"

namespace mcfdm {

void TridiagonalSystem::validate() const {
    const std::size_t n = diag.size();
    if (n == 0) throw std::invalid_argument("tridiagonal system is empty");
    if (lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n)
        throw std::invalid_argument("tridiagonal band lengths are inconsistent");
}

std::vector<double> TridiagonalSystem::multiply(const std::vector<double>& x) const {
    validate();
    const std::size_t n = diag.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += lower[i - 1] * x[i - 1];
        if (i + 1 < n) v += upper[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

std::vector<double> thomas_solve(const TridiagonalSystem& system) {
    system.validate();
    const std::size_t n = system.size();

    double scale = 0.0;
    for (double d : system.diag) scale = std::max(scale, std::abs(d));
    for (double d : system.lower) scale = std::max(scale, std::abs(d));
    for (double d : system.upper) scale = std::max(scale, std::abs(d));
    const double pivot_floor = 1e-14 * std::max(scale, 1e-300);

    std::vector<double> c(n);  // modified super-diagonal
    std::vector<double> x(n);  // modified rhs, then solution

    double pivot = system.diag[0];
    if (std::abs(pivot) < pivot_floor) throw SingularSystemError("thomas_solve: zero pivot in row 0");
    c[0] = n > 1 ? system.upper[0] / pivot : 0.0;
    x[0] = system.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = system.diag[i] - system.lower[i - 1] * c[i - 1];
        if (std::abs(pivot) < pivot_floor)
            throw SingularSystemError("thomas_solve: zero pivot in row " + std::to_string(i));
        c[i] = i + 1 < n ? system.upper[i] / pivot : 0.0;
        x[i] = (system.rhs[i] - system.lower[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

std::vector<double> crank_nicolson_level(const OptionContract& contract, const MarketParams& market,
                                         const Discretization& disc) {
    contract.validate();
    market.validate();
    const std::size_t n_nodes = disc.n_nodes();
    const std::size_t m = n_nodes - 2;  // interior unknowns
    const double dt = disc.dt;
    const double ds = disc.ds;
    const double r = market.rate;
    const double sig2 = market.sigma * market.sigma;

    // L v_i = a_i v_{i-1} + b_i v_i + c_i v_{i+1}
    std::vector<double> a(n_nodes, 0.0), b(n_nodes, 0.0), c(n_nodes, 0.0);
    for (std::size_t i = 1; i + 1 < n_nodes; ++i) {
        const double s = disc.node(i);
        const double diffusion = 0.5 * sig2 * s * s / (ds * ds);
        const double convection = 0.5 * r * s / ds;
        a[i] = diffusion - convection;
        b[i] = -2.0 * diffusion - r;
        c[i] = diffusion + convection;
    }

    TridiagonalSystem system;
    system.lower.resize(m - 1);
    system.diag.resize(m);
    system.upper.resize(m - 1);
    system.rhs.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        system.diag[k] = 1.0 - 0.5 * dt * b[i];
        if (k > 0) system.lower[k - 1] = -0.5 * dt * a[i];
        if (k + 1 < m) system.upper[k] = -0.5 * dt * c[i];
    }

    std::vector<double> v(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) v[i] = payoff(contract, disc.node(i));

    for (std::size_t n = 0; n < disc.n_time; ++n) {
        const double tau_next = std::min(contract.maturity, static_cast<double>(n + 1) * dt);
        const double lo_next = boundary_value(contract, market, Edge::Lower, tau_next, disc.s_max);
        const double hi_next = boundary_value(contract, market, Edge::Upper, tau_next, disc.s_max);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = k + 1;
            system.rhs[k] = v[i] + 0.5 * dt * (a[i] * v[i - 1] + b[i] * v[i] + c[i] * v[i + 1]);
        }
        system.rhs.front() += 0.5 * dt * a[1] * lo_next;
        system.rhs.back() += 0.5 * dt * c[n_nodes - 2] * hi_next;
        const auto interior = thomas_solve(system);
        std::copy(interior.begin(), interior.end(), v.begin() + 1);
        v.front() = lo_next;
        v.back() = hi_next;
    }
    return v;
}

PricingResult solve_crank_nicolson(const OptionContract& contract, const MarketParams& market,
                                   const Discretization& disc) {
    const auto start = std::chrono::steady_clock::now();
    const auto level = crank_nicolson_level(contract, market, disc);
    const double price = interpolate_level(level, disc, contract.spot);
    const auto stop = std::chrono::steady_clock::now();

    PricingResult result;
    result.method = Method::CFDM;
    result.price = price;
    result.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
    result.abs_error = std::abs(price - black_scholes_price(contract, market));
    result.extra["n_space"] = static_cast<double>(disc.n_space);
    result.extra["n_time"] = static_cast<double>(disc.n_time);
    return result;
}

}  // namespace mcfdm
