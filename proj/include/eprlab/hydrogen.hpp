#pragma once

// Bound hydrogenic orbitals and quadrature-based expectation values.
//
// All lengths are in units of the Bohr radius and momenta in hbar / a_B.
// Radial integrals use composite Simpson on a uniform grid (a trailing
// Simpson 3/8 panel handles an odd interval count); angular integrals use
// Gauss-Legendre in cos(theta) and the trapezoid rule in phi.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "eprlab/qcore.hpp"

namespace eprlab::hydrogen {

class Orbital {
public:
    /// Throws InvalidArgument unless n >= 1, 0 <= l < n, |m| <= l.
    Orbital(int n, int l, int m);

    int n() const { return n_; }
    int l() const { return l_; }
    int m() const { return m_; }

private:
    int n_;
    int l_;
    int m_;
};

class RadialGrid {
public:
    /// Nodes r_i = i * r_max / (points - 1). Requires r_max > 0 and points >= 16.
    RadialGrid(double r_max, std::size_t points);

    /// r_max = 40 n^2 a_B with 4096 points.
    static RadialGrid default_for(int n);

    double r_max() const { return r_max_; }
    std::size_t points() const { return points_; }
    double spacing() const { return spacing_; }
    double r(std::size_t i) const { return spacing_ * static_cast<double>(i); }

    /// Throws GridTooSmall if r_max < 20 n^2 a_B.
    void require_contains(int n) const;

private:
    double r_max_;
    std::size_t points_;
    double spacing_;
};

/// Generalized Laguerre polynomial L^alpha_k(x) by three-term recurrence.
double laguerre(int k, double alpha, double x);

/// Y_l^m(theta, phi) with the Condon-Shortley phase.
std::complex<double> spherical_harmonic(int l, int m, double theta, double phi);

/// Normalized radial function R_nl(r).
double radial_function(int n, int l, double r);

/// psi_nlm(r, theta, phi) = R_nl(r) Y_l^m(theta, phi). Requires r >= 0.
std::complex<double> eval_orbital(const Orbital& o, double r, double theta, double phi);

/// Composite Simpson over uniformly spaced samples.
double simpson(std::span<const double> f, double h);

/// <r> = int |R_nl|^2 r^3 dr.
double expect_r(int n, int l, const RadialGrid& grid);
/// (a_B / 2)(3 n^2 - l(l+1)).
double expect_r_closed_form(int n, int l);

/// <psi_100| -i hbar d/dr |psi_100> over the 3D measure with the bare radial
/// derivative (non-Hermitian on the half-line). Evaluates to i hbar / a_B.
std::complex<double> expect_radial_p_ground(const RadialGrid& grid);
/// Same with the Hermitian radial momentum -i hbar (d/dr + 1/r); evaluates to 0.
std::complex<double> expect_radial_p_ground_hermitized(const RadialGrid& grid);

/// <a|b> over all space.
std::complex<double> overlap(const Orbital& a, const Orbital& b, const RadialGrid& grid);

/// Gram matrix of `orbitals`; radial samples and angular integrals are shared
/// between entries.
Eigen::MatrixXcd overlap_matrix(const std::vector<Orbital>& orbitals, const RadialGrid& grid);

// --- [x, p] on a grid ---

struct CommutatorReport {
    double spacing;
    double max_interior_residual;           // at `spacing`
    double refined_residual;                // at spacing / 2
    std::optional<double> convergence_order; // log2(residual / refined); empty if residuals vanish
    double error_constant;                  // max_interior_residual / spacing^2
};

/// max over interior nodes of |([x, p] f - i hbar f)|, with x diagonal and
/// p = -i hbar D (central difference, Dirichlet ends).
double commutator_residual(const qcore::UniformGrid1D& grid, const CVector& samples);

/// Samples `f` on `grid` and on the grid with half the spacing over the same
/// interval, and estimates the convergence order of the commutator residual.
/// Throws InvalidArgument if |f| at either edge exceeds 1e-6 max|f|.
CommutatorReport grid_commutator_check(const qcore::UniformGrid1D& grid,
                                       const std::function<std::complex<double>(double)>& f);

}  // namespace eprlab::hydrogen
