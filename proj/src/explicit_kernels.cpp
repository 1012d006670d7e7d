#include "mcfdm/explicit_kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace mcfdm::kernels {

namespace {

template <Convection C>
inline double update_node(const StencilInputs& p, std::span<const double> in, std::size_t i) {
    const double s = p.nodes[i];
    const double v_left = in[i - 1];
    const double v_mid = in[i];
    const double v_right = in[i + 1];
    const double diffusion = 0.5 * p.sigma * p.sigma * s * s * (v_right - 2.0 * v_mid + v_left) / (p.ds * p.ds);
    double rhs = diffusion;
    if constexpr (C == Convection::Enabled)
        rhs += p.rate * s * convection_flux_difference({v_left, v_mid, v_right}, p.theta[i]) / p.ds;
    rhs -= p.rate * v_mid;
    return v_mid + p.dt * rhs;
}

void check_sizes(const StencilInputs& p, std::span<const double> in, std::span<double> out) {
    const std::size_t n = in.size();
    if (n < 3 || out.size() != n || p.nodes.size() != n || p.theta.size() != n)
        throw std::invalid_argument("explicit sweep: inconsistent level sizes");
}

template <Convection C>
void sweep_serial(const StencilInputs& p, std::span<const double> in, std::span<double> out) {
    const std::size_t last = in.size() - 1;
    for (std::size_t i = 1; i < last; ++i) out[i] = update_node<C>(p, in, i);
}

template <Convection C>
void sweep_parallel(const StencilInputs& p, std::span<const double> in, std::span<double> out, bool go_parallel) {
    const auto last = static_cast<std::int64_t>(in.size()) - 1;
#pragma omp parallel for schedule(static) if (go_parallel)
    for (std::int64_t i = 1; i < last; ++i) out[i] = update_node<C>(p, in, static_cast<std::size_t>(i));
}

}  // namespace

void explicit_interior_serial(const StencilInputs& inputs, std::span<const double> in, std::span<double> out,
                              Convection convection) {
    check_sizes(inputs, in, out);
    if (convection == Convection::Enabled)
        sweep_serial<Convection::Enabled>(inputs, in, out);
    else
        sweep_serial<Convection::Disabled>(inputs, in, out);
}

void explicit_interior_parallel(const StencilInputs& inputs, std::span<const double> in, std::span<double> out,
                                Convection convection, std::size_t min_parallel_nodes) {
    check_sizes(inputs, in, out);
    const bool go_parallel = in.size() - 2 >= min_parallel_nodes;
    if (convection == Convection::Enabled)
        sweep_parallel<Convection::Enabled>(inputs, in, out, go_parallel);
    else
        sweep_parallel<Convection::Disabled>(inputs, in, out, go_parallel);
}

std::size_t count_overshoots(std::span<const double> in, std::span<const double> out, double tolerance) {
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < in.size(); ++i) {
        const double local_max = std::max({in[i - 1], in[i], in[i + 1]});
        if (out[i] > local_max + tolerance) ++count;
    }
    return count;
}

}  // namespace mcfdm::kernels
