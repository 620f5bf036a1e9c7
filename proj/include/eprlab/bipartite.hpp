#pragma once

#include <string>
#include <vector>

#include "eprlab/qcore.hpp"

namespace eprlab::qcore {

/// Joint pure state of systems I and II as a dI x dII amplitude matrix,
/// normalized in the Frobenius norm.
class BipartiteState {
public:
    explicit BipartiteState(CMatrix amps, std::vector<std::string> labels_I = {},
                            std::vector<std::string> labels_II = {});

    /// Unflattens a state of length dI * dII (index m * dII + n).
    static BipartiteState from_flat(const StateVector& s, std::size_t dI, std::size_t dII);

    std::size_t dim_I() const { return static_cast<std::size_t>(amps_.rows()); }
    std::size_t dim_II() const { return static_cast<std::size_t>(amps_.cols()); }
    const CMatrix& amplitudes() const { return amps_; }
    const std::vector<std::string>& labels_I() const { return labels_I_; }
    const std::vector<std::string>& labels_II() const { return labels_II_; }

    /// Kronecker-ordered state on the joint space.
    StateVector flatten() const;
    /// Exchanges the roles of I and II.
    BipartiteState swapped() const;

private:
    CMatrix amps_;
    std::vector<std::string> labels_I_;
    std::vector<std::string> labels_II_;
};

BipartiteState tensor_product(const StateVector& sI, const StateVector& sII);

/// Singular values of the amplitude matrix, descending.
Eigen::VectorXd schmidt_coefficients(const BipartiteState& psi);
/// Number of Schmidt coefficients above `tol`.
std::size_t schmidt_rank(const BipartiteState& psi, double tol = 1e-10);

}  // namespace eprlab::qcore
