#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace mcfdm::kernels {

enum class Convection { Enabled, Disabled };

/// Inputs of one explicit interior sweep. `nodes` and `theta` are indexed like
/// the level vectors; only entries 1..n-2 are read.
struct StencilInputs {
    std::span<const double> nodes;
    std::span<const double> theta;
    double sigma = 0.0;
    double rate = 0.0;
    double ds = 0.0;
    double dt = 0.0;
};

/// theta * (Phi_{i+1/2} - Phi_{i-1/2}) with arithmetic-average half-node flux,
/// which telescopes to theta * (v_{i+1} - v_{i-1}) / 2.
inline double convection_flux_difference(const std::array<double, 3>& v, double theta) {
    const double flux_right = 0.5 * (v[2] + v[1]);
    const double flux_left = 0.5 * (v[1] + v[0]);
    return theta * (flux_right - flux_left);
}

/// Serial reference sweep: writes interior entries of `out` from `in`.
void explicit_interior_serial(const StencilInputs& inputs, std::span<const double> in, std::span<double> out,
                              Convection convection = Convection::Enabled);

/// OpenMP sweep, bit-identical to the serial reference. Runs serially when the
/// interior is smaller than `min_parallel_nodes`.
void explicit_interior_parallel(const StencilInputs& inputs, std::span<const double> in, std::span<double> out,
                                Convection convection = Convection::Enabled,
                                std::size_t min_parallel_nodes = 4096);

/// Number of interior nodes whose new value exceeds the largest of its three
/// previous-level neighbours by more than `tolerance` (discrete maximum
/// principle violation).
std::size_t count_overshoots(std::span<const double> in, std::span<const double> out, double tolerance = 1e-9);

}  // namespace mcfdm::kernels
