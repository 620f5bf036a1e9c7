#pragma once

// Expansion of a joint state in the eigenbasis of an observable on system I,
// collapse on measurement, and the remote (system II) state that results.

#include <optional>
#include <utility>
#include <vector>

#include "eprlab/bipartite.hpp"
#include "eprlab/qcore.hpp"

namespace eprlab::measurement {

using qcore::BipartiteState;
using qcore::LinearOperator;
using qcore::StateVector;

/// One eigenvector u_n of the system-I observable and its (unnormalized)
/// system-II coefficient vector psi_n[j] = sum_m conj(u_n[m]) amps[m][j].
struct ExpansionTerm {
    double eigenvalue;
    CVector basis_vector;
    CVector coefficients;
    double probability;  // |psi_n|^2
};

/// An eigenspace of the observable; a measurement outcome.
struct Outcome {
    double eigenvalue;
    std::vector<std::size_t> terms;
    double probability;
};

struct ExpansionResult {
    std::vector<ExpansionTerm> terms;
    std::vector<Outcome> outcomes;  // ascending eigenvalue
    std::vector<std::string> labels_I;
    std::vector<std::string> labels_II;

    /// sum_n u_n (x) psi_n as a dI x dII matrix.
    CMatrix reconstruct() const;
    /// Terms whose coefficient vector has norm above `tol`.
    std::size_t nonzero_terms(double tol = 1e-12) const;
    /// Outcome whose eigenvalue lies within `tol` of `eigenvalue`; throws if none.
    std::size_t outcome_index(double eigenvalue, double tol = 1e-9) const;
};

ExpansionResult expand_bipartite(const BipartiteState& psi, const LinearOperator& a);

/// Normalized projection of the joint state onto outcome k.
BipartiteState collapse(const ExpansionResult& expansion, std::size_t outcome);

/// System-II state after outcome k. Empty when the collapsed state is still
/// entangled, which can only happen for a degenerate outcome.
std::optional<StateVector> remote_state(const ExpansionResult& expansion, std::size_t outcome);

struct SubsystemMeasurement {
    double eigenvalue;
    std::size_t outcome;
    double probability;
    BipartiteState collapsed;
    std::optional<StateVector> remote;
};

SubsystemMeasurement measure_subsystem(const BipartiteState& psi, const LinearOperator& a, RandomStream& rng);
SubsystemMeasurement measure_subsystem(const ExpansionResult& expansion, RandomStream& rng);

/// The two descriptions of system II: remote state after outcome `outcome_a`
/// of `a`, and after outcome `outcome_b` of `b` (both acting on system I).
std::pair<StateVector, StateVector> remote_state_pair(const BipartiteState& psi, const LinearOperator& a,
                                                      const LinearOperator& b, std::size_t outcome_a,
                                                      std::size_t outcome_b);

struct SimultaneityReport {
    bool is_simultaneous;
    std::optional<double> eigen_a;
    std::optional<double> eigen_b;
};

/// True iff `s` is an eigenstate of both `a` and `b` at tolerance `tol`.
SimultaneityReport simultaneous_eigenstate_check(const StateVector& s, const LinearOperator& a,
                                                 const LinearOperator& b, double tol);

/// a (x) 1 on the joint space of dimension a.dim() * dim_II.
LinearOperator on_subsystem_I(const LinearOperator& a, std::size_t dim_II);
/// 1 (x) b on the joint space of dimension dim_I * b.dim().
LinearOperator on_subsystem_II(std::size_t dim_I, const LinearOperator& b);

}  // namespace eprlab::measurement
