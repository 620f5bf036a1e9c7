#pragma once

// Continuous-variable EPR pair on a 2D grid.
//
// The ideal joint state is proportional to delta(x_I - x_II + x0). It is
// regularized as
//
//   Psi(x_I, x_II) = exp(-(x_I - x_II + x0)^2 / (4 sigma^2))
//                  * exp(-((x_I + x_II) / 2)^2 / (4 Lambda^2)),   Lambda = L / 8,
//
// so |Psi|^2 has standard deviation sigma in the relative offset and Lambda in
// the centre-of-mass coordinate, then normalized on the grid.
//
// Grid: N nodes per axis, spacing h = L / N, x_j = (j - N/2) h.
// Momentum grid: dp = 2 pi hbar / (N h), p_k = (k - N/2) dp.
// Transform (per axis, unitary in the discrete L2 norm):
//
//   Psi~(p_k) = h / sqrt(2 pi hbar) * sum_j Psi(x_j) exp(-i p_k x_j / hbar)
//
// so that sum |Psi~|^2 dp^2 = sum |Psi|^2 h^2.

#include <complex>
#include <cstddef>
#include <vector>

#include "eprlab/qcore.hpp"

namespace eprlab::eprpair {

/// N centered nodes with the given spacing: coord(j) = (j - N/2) * spacing.
struct Axis {
    double spacing;
    std::size_t points;

    double coord(std::size_t j) const
    {
        return (static_cast<double>(j) - static_cast<double>(points / 2)) * spacing;
    }
    double lower() const { return coord(0); }
    double upper() const { return coord(points - 1); }
    /// Nearest node to `value`; throws InvalidArgument outside [lower, upper].
    std::size_t nearest(double value) const;
};

struct EprConfig {
    double x0 = 0.0;
    double sigma = 0.5;
    double extent = 40.0;     // L
    std::size_t points = 512; // per axis

    double spacing() const { return extent / static_cast<double>(points); }
    double envelope_width() const { return extent / 8.0; }
    /// Throws GridTooSmall unless sigma > 0, L >= 10 sigma + 2|x0|,
    /// points >= 64 (even) and sigma >= h.
    void validate() const;
};

enum class Domain { Position, Momentum };

/// Complex samples on a uniform 2D grid, row-major in (I, II).
class GridFunction {
public:
    GridFunction(std::vector<Complex> values, Axis axis_I, Axis axis_II, Domain domain);

    const std::vector<Complex>& values() const { return values_; }
    const Axis& axis_I() const { return axis_I_; }
    const Axis& axis_II() const { return axis_II_; }
    Domain domain() const { return domain_; }

    Complex at(std::size_t i, std::size_t j) const { return values_[i * axis_II_.points + j]; }
    /// sqrt(sum |v|^2 * cell area).
    double norm() const;

private:
    std::vector<Complex> values_;
    Axis axis_I_;
    Axis axis_II_;
    Domain domain_;
};

/// A conditional distribution over the system-II coordinate, as probability
/// masses on grid nodes.
struct Distribution1D {
    double slice_coordinate;  // node actually used for system I
    std::vector<double> coordinate;
    std::vector<double> probability;

    double mean() const;
    double stddev() const;
};

GridFunction build_epr_state(const EprConfig& cfg);

/// Unitary 2D transform of a position-space function to momentum space.
GridFunction to_momentum(const GridFunction& psi);

/// Distribution of x_II given x_I = x (nearest grid line).
Distribution1D condition_on_position(const GridFunction& psi, double x);

/// Distribution of p_II given p_I = p (nearest momentum line). Accepts either
/// domain; a position-space input is transformed first. Throws InvalidArgument
/// when |p| is at or beyond the Nyquist bound pi hbar / h.
Distribution1D condition_on_momentum(const GridFunction& psi, double p);

struct Moments {
    double mean;
    double stddev;
};

/// Moments of x_I - x_II + x0 under |Psi|^2.
Moments relative_offset_moments(const GridFunction& psi, double x0);

}  // namespace eprlab::eprpair
