#pragma once

// Finite-dimensional state/operator algebra shared by every other module.
//
// Conventions: atomic units (hbar = m_e = a_B = 1). Bipartite amplitudes are
// stored as a dI x dII matrix; the flattened (Kronecker) index of |m>|n> is
// m * dII + n, which matches kron(A, B).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eprlab/random.hpp"

namespace eprlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Reduced Planck constant in the configured unit system.
inline constexpr double hbar = 1.0;
/// Bohr radius in the configured unit system.
inline constexpr double bohr_radius = 1.0;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
/// Relative gap below which two eigenvalues are one eigenspace.
inline constexpr double kDegeneracyTolerance = 1e-9;

}  // namespace eprlab

namespace eprlab::qcore {

class StateVector {
public:
    /// Normalizes `amplitudes`. Labels default to "0", "1", ...
    explicit StateVector(CVector amplitudes, std::vector<std::string> labels = {});

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const CVector& amplitudes() const { return amps_; }
    const std::vector<std::string>& labels() const { return labels_; }
    Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

    /// <this|other>
    Complex inner(const StateVector& other) const;

private:
    CVector amps_;
    std::vector<std::string> labels_;
};

/// |<a|b>|, the global-phase-insensitive overlap.
double overlap_magnitude(const StateVector& a, const StateVector& b);
bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = 1e-10);

class LinearOperator {
public:
    /// Throws if `entries` is not square, or if `hermitian` is set and
    /// max |M - M^dagger| exceeds kHermitianTolerance.
    explicit LinearOperator(CMatrix entries, bool hermitian = false);

    /// Hermitian observable; same validation as the constructor.
    static LinearOperator observable(CMatrix entries) { return LinearOperator(std::move(entries), true); }
    static LinearOperator identity(std::size_t dim);
    static LinearOperator zero(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const CMatrix& entries() const { return m_; }
    bool is_hermitian() const { return hermitian_; }

private:
    CMatrix m_;
    bool hermitian_;
};

/// Kronecker product a (x) b; Hermitian when both factors are.
LinearOperator kron(const LinearOperator& a, const LinearOperator& b);
/// Operator product a * b (no Hermitian flag).
LinearOperator product(const LinearOperator& a, const LinearOperator& b);

LinearOperator pauli_x();
LinearOperator pauli_y();
LinearOperator pauli_z();
/// n . sigma for a unit vector n = (nx, ny, nz).
LinearOperator spin_along(const Eigen::Vector3d& n);

/// M s, not renormalized.
CVector apply(const LinearOperator& op, const StateVector& s);
/// <s|M|s>
Complex expectation(const LinearOperator& op, const StateVector& s);
/// AB - BA. Never flagged Hermitian.
LinearOperator commutator(const LinearOperator& a, const LinearOperator& b);
/// lambda = <s|M|s> if |M s - lambda s| <= tol |s|.
std::optional<Complex> is_eigenstate(const LinearOperator& op, const StateVector& s, double tol);

struct EigenSpace {
    double eigenvalue;
    std::vector<Eigen::Index> columns;  // into Eigensystem::vectors
};

/// Dense Hermitian eigen-decomposition, eigenvalues ascending, with
/// eigenspaces grouped when |l_i - l_j| <= kDegeneracyTolerance * max|l|.
struct Eigensystem {
    Eigen::VectorXd values;
    CMatrix vectors;
    std::vector<EigenSpace> spaces;

    /// Orthogonal projector onto eigenspace k.
    CMatrix projector(std::size_t k) const;
};

Eigensystem eigensystem(const LinearOperator& op);

/// Born probability of each eigenspace of `sys` for state s.
std::vector<double> born_probabilities(const Eigensystem& sys, const StateVector& s);

/// Index into a probability table from one uniform draw u in [0,1).
std::size_t sample_index(const std::vector<double>& probabilities, double u);

struct MeasurementRecord {
    double eigenvalue;
    double probability;
    StateVector post_state;
    std::size_t outcome;  // eigenspace index, ascending eigenvalue order
};

MeasurementRecord measure_observable(const LinearOperator& op, const StateVector& s, RandomStream& rng);
/// Same as above with a precomputed decomposition of `op`.
MeasurementRecord measure_observable(const Eigensystem& sys, const StateVector& s, RandomStream& rng);

/// exp(-i H t / hbar) s.
StateVector evolve(const LinearOperator& h, double t, const StateVector& s);

/// Haar-random pure state.
StateVector random_state(std::size_t dim, RandomStream& rng);
/// GUE-like random Hermitian matrix (entries ~ N(0,1)).
LinearOperator random_hermitian(std::size_t dim, RandomStream& rng);

// --- grid-discretized x and p ---

struct UniformGrid1D {
    double x_min;
    double spacing;
    std::size_t points;

    double x(std::size_t i) const { return x_min + spacing * static_cast<double>(i); }
    /// Grid of `points` nodes spanning [lo, hi] inclusive.
    static UniformGrid1D spanning(double lo, double hi, std::size_t points);
};

enum class Boundary { Dirichlet, Periodic };

/// Diagonal x-hat.
LinearOperator position_operator(const UniformGrid1D& grid);
/// -i hbar D with the second-order central difference D.
LinearOperator momentum_operator(const UniformGrid1D& grid, Boundary boundary = Boundary::Dirichlet);

}  // namespace eprlab::qcore
