#include "eprlab/measurement.hpp"

#include <cmath>
#include <string>

#include "eprlab/errors.hpp"

namespace eprlab::measurement {

ExpansionResult expand_bipartite(const BipartiteState& psi, const LinearOperator& a)
{
    if (!a.is_hermitian()) {
        throw NotHermitian("expand_bipartite: observable on system I must be Hermitian");
    }
    if (a.dim() != psi.dim_I()) {
        throw DimensionMismatch("expand_bipartite: observable dimension " + std::to_string(a.dim()) +
                                " vs system I dimension " + std::to_string(psi.dim_I()));
    }
    const qcore::Eigensystem sys = qcore::eigensystem(a);
    // row n of coeffs is psi_n
    const CMatrix coeffs = sys.vectors.adjoint() * psi.amplitudes();

    ExpansionResult out;
    out.labels_I = psi.labels_I();
    out.labels_II = psi.labels_II();
    out.terms.reserve(static_cast<std::size_t>(sys.values.size()));
    for (Eigen::Index n = 0; n < sys.values.size(); ++n) {
        CVector c = coeffs.row(n).transpose();
        const double p = c.squaredNorm();
        out.terms.push_back({sys.values(n), sys.vectors.col(n), std::move(c), p});
    }
    for (const auto& space : sys.spaces) {
        Outcome o{space.eigenvalue, {}, 0.0};
        for (Eigen::Index c : space.columns) {
            o.terms.push_back(static_cast<std::size_t>(c));
            o.probability += out.terms[static_cast<std::size_t>(c)].probability;
        }
        out.outcomes.push_back(std::move(o));
    }
    return out;
}

CMatrix ExpansionResult::reconstruct() const
{
    const auto dI = static_cast<Eigen::Index>(labels_I.size());
    const auto dII = static_cast<Eigen::Index>(labels_II.size());
    CMatrix m = CMatrix::Zero(dI, dII);
    for (const auto& t : terms) {
        m += t.basis_vector * t.coefficients.transpose();
    }
    return m;
}

std::size_t ExpansionResult::nonzero_terms(double tol) const
{
    std::size_t count = 0;
    for (const auto& t : terms) {
        if (t.coefficients.norm() > tol) {
            ++count;
        }
    }
    return count;
}

std::size_t ExpansionResult::outcome_index(double eigenvalue, double tol) const
{
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (std::abs(outcomes[k].eigenvalue - eigenvalue) <= tol) {
            return k;
        }
    }
    throw InvalidArgument("outcome_index: no eigenvalue near " + std::to_string(eigenvalue));
}

namespace {

CMatrix projected_amplitudes(const ExpansionResult& e, std::size_t outcome)
{
    if (outcome >= e.outcomes.size()) {
        throw InvalidArgument("outcome index " + std::to_string(outcome) + " out of range (" +
                              std::to_string(e.outcomes.size()) + " outcomes)");
    }
    const auto dI = static_cast<Eigen::Index>(e.labels_I.size());
    const auto dII = static_cast<Eigen::Index>(e.labels_II.size());
    CMatrix m = CMatrix::Zero(dI, dII);
    for (std::size_t n : e.outcomes[outcome].terms) {
        m += e.terms[n].basis_vector * e.terms[n].coefficients.transpose();
    }
    if (e.outcomes[outcome].probability <= 0.0) {
        throw InvalidArgument("outcome " + std::to_string(outcome) + " has zero probability");
    }
    return m;
}

}  // namespace

BipartiteState collapse(const ExpansionResult& expansion, std::size_t outcome)
{
    return BipartiteState(projected_amplitudes(expansion, outcome), expansion.labels_I, expansion.labels_II);
}

std::optional<StateVector> remote_state(const ExpansionResult& expansion, std::size_t outcome)
{
    const CMatrix m = projected_amplitudes(expansion, outcome);
    const auto& members = expansion.outcomes[outcome].terms;
    if (members.size() == 1) {
        return StateVector(expansion.terms[members.front()].coefficients, expansion.labels_II);
    }
    // degenerate eigenspace: the remote state is pure only if the projection is a product
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() > 1 && sv(1) > 1e-10 * sv(0)) {
        return std::nullopt;
    }
    // m = s0 u0 v0^dagger, so the system-II factor is conj(v0)
    return StateVector(svd.matrixV().col(0).conjugate(), expansion.labels_II);
}

SubsystemMeasurement measure_subsystem(const ExpansionResult& expansion, RandomStream& rng)
{
    std::vector<double> probs;
    probs.reserve(expansion.outcomes.size());
    for (const auto& o : expansion.outcomes) {
        probs.push_back(o.probability);
    }
    const std::size_t k = qcore::sample_index(probs, rng.uniform());
    return {expansion.outcomes[k].eigenvalue, k, expansion.outcomes[k].probability, collapse(expansion, k),
            remote_state(expansion, k)};
}

SubsystemMeasurement measure_subsystem(const BipartiteState& psi, const LinearOperator& a, RandomStream& rng)
{
    return measure_subsystem(expand_bipartite(psi, a), rng);
}

std::pair<StateVector, StateVector> remote_state_pair(const BipartiteState& psi, const LinearOperator& a,
                                                      const LinearOperator& b, std::size_t outcome_a,
                                                      std::size_t outcome_b)
{
    const ExpansionResult ea = expand_bipartite(psi, a);
    const ExpansionResult eb = expand_bipartite(psi, b);
    auto ra = remote_state(ea, outcome_a);
    auto rb = remote_state(eb, outcome_b);
    if (!ra || !rb) {
        throw InvalidArgument("remote_state_pair: degenerate outcome leaves system II entangled");
    }
    return {std::move(*ra), std::move(*rb)};
}

SimultaneityReport simultaneous_eigenstate_check(const StateVector& s, const LinearOperator& a,
                                                 const LinearOperator& b, double tol)
{
    if (a.dim() != b.dim() || a.dim() != s.dim()) {
        throw DimensionMismatch("simultaneous_eigenstate_check: operator and state dimensions differ");
    }
    if (!a.is_hermitian() || !b.is_hermitian()) {
        throw NotHermitian("simultaneous_eigenstate_check: observables must be Hermitian");
    }
    SimultaneityReport report{false, std::nullopt, std::nullopt};
    if (auto la = qcore::is_eigenstate(a, s, tol)) {
        report.eigen_a = la->real();
    }
    if (auto lb = qcore::is_eigenstate(b, s, tol)) {
        report.eigen_b = lb->real();
    }
    report.is_simultaneous = report.eigen_a.has_value() && report.eigen_b.has_value();
    return report;
}

LinearOperator on_subsystem_I(const LinearOperator& a, std::size_t dim_II)
{
    return qcore::kron(a, LinearOperator::identity(dim_II));
}

LinearOperator on_subsystem_II(std::size_t dim_I, const LinearOperator& b)
{
    return qcore::kron(LinearOperator::identity(dim_I), b);
}

}  // namespace eprlab::measurement
