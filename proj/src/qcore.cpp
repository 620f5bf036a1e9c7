#include "eprlab/qcore.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eprlab/bipartite.hpp"
#include "eprlab/errors.hpp"

namespace eprlab::qcore {

namespace {

std::vector<std::string> index_labels(std::size_t n)
{
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::to_string(i));
    }
    return out;
}

void require_same_dim(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

void require_hermitian(const LinearOperator& op, const char* what)
{
    if (!op.is_hermitian()) {
        throw NotHermitian(std::string(what) + " requires a Hermitian operator");
    }
}

}  // namespace

// --- StateVector ---

StateVector::StateVector(CVector amplitudes, std::vector<std::string> labels)
    : amps_(std::move(amplitudes)), labels_(std::move(labels))
{
    if (amps_.size() < 1) {
        throw InvalidArgument("StateVector: empty amplitude list");
    }
    const double norm = amps_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw InvalidArgument("StateVector: amplitudes have zero or non-finite norm");
    }
    amps_ /= norm;
    if (labels_.empty()) {
        labels_ = index_labels(dim());
    } else if (labels_.size() != dim()) {
        throw DimensionMismatch("StateVector: label count does not match amplitude count");
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index)
{
    if (index >= dim) {
        throw InvalidArgument("StateVector::basis: index out of range");
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

Complex StateVector::inner(const StateVector& other) const
{
    require_same_dim(dim(), other.dim(), "inner");
    return amps_.dot(other.amps_);  // Eigen's dot conjugates the left operand
}

double overlap_magnitude(const StateVector& a, const StateVector& b)
{
    return std::abs(a.inner(b));
}

bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol)
{
    if (a.dim() != b.dim()) {
        return false;
    }
    const Complex ov = a.inner(b);
    if (std::abs(ov) == 0.0) {
        return false;
    }
    // align b's phase to a, then compare entrywise
    const Complex phase = ov / std::abs(ov);
    return (a.amplitudes() - b.amplitudes() * std::conj(phase)).cwiseAbs().maxCoeff() <= tol;
}

// --- LinearOperator ---

LinearOperator::LinearOperator(CMatrix entries, bool hermitian)
    : m_(std::move(entries)), hermitian_(hermitian)
{
    if (m_.rows() != m_.cols() || m_.rows() < 1) {
        throw DimensionMismatch("LinearOperator: matrix must be square and non-empty");
    }
    if (hermitian_) {
        const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
        if (asym > kHermitianTolerance) {
            throw NotHermitian("LinearOperator: Hermitian flag set but max|M - M^dagger| = " +
                               std::to_string(asym));
        }
    }
}

LinearOperator LinearOperator::identity(std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim);
    return LinearOperator(CMatrix::Identity(n, n), true);
}

LinearOperator LinearOperator::zero(std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim);
    return LinearOperator(CMatrix::Zero(n, n), true);
}

LinearOperator kron(const LinearOperator& a, const LinearOperator& b)
{
    const CMatrix& A = a.entries();
    const CMatrix& B = b.entries();
    CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        }
    }
    return LinearOperator(std::move(out), a.is_hermitian() && b.is_hermitian());
}

LinearOperator product(const LinearOperator& a, const LinearOperator& b)
{
    require_same_dim(a.dim(), b.dim(), "product");
    return LinearOperator(a.entries() * b.entries());
}

LinearOperator pauli_x()
{
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return LinearOperator::observable(m);
}

LinearOperator pauli_y()
{
    const Complex i(0, 1);
    CMatrix m(2, 2);
    m << 0, -i, i, 0;
    return LinearOperator::observable(m);
}

LinearOperator pauli_z()
{
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return LinearOperator::observable(m);
}

LinearOperator spin_along(const Eigen::Vector3d& n)
{
    CMatrix m = n.x() * pauli_x().entries() + n.y() * pauli_y().entries() + n.z() * pauli_z().entries();
    // n . sigma is Hermitian by construction; drop round-off in the off-diagonal
    m = 0.5 * (m + m.adjoint()).eval();
    return LinearOperator::observable(std::move(m));
}

// --- core operations ---

CVector apply(const LinearOperator& op, const StateVector& s)
{
    require_same_dim(op.dim(), s.dim(), "apply");
    return op.entries() * s.amplitudes();
}

Complex expectation(const LinearOperator& op, const StateVector& s)
{
    require_same_dim(op.dim(), s.dim(), "expectation");
    return s.amplitudes().dot(op.entries() * s.amplitudes());
}

LinearOperator commutator(const LinearOperator& a, const LinearOperator& b)
{
    require_same_dim(a.dim(), b.dim(), "commutator");
    return LinearOperator(a.entries() * b.entries() - b.entries() * a.entries());
}

std::optional<Complex> is_eigenstate(const LinearOperator& op, const StateVector& s, double tol)
{
    require_same_dim(op.dim(), s.dim(), "is_eigenstate");
    const CVector ms = op.entries() * s.amplitudes();
    const Complex lambda = s.amplitudes().dot(ms);
    const double residual = (ms - lambda * s.amplitudes()).norm();
    if (residual <= tol * s.amplitudes().norm()) {
        return lambda;
    }
    return std::nullopt;
}

// --- eigen-decomposition and measurement ---

CMatrix Eigensystem::projector(std::size_t k) const
{
    const auto n = vectors.rows();
    CMatrix p = CMatrix::Zero(n, n);
    for (Eigen::Index c : spaces.at(k).columns) {
        p += vectors.col(c) * vectors.col(c).adjoint();
    }
    return p;
}

Eigensystem eigensystem(const LinearOperator& op)
{
    require_hermitian(op, "eigensystem");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(op.entries());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigensystem: Hermitian eigensolver did not converge");
    }
    Eigensystem sys{solver.eigenvalues(), solver.eigenvectors(), {}};

    const double scale = sys.values.cwiseAbs().maxCoeff();
    const double gap = kDegeneracyTolerance * scale;
    for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
        if (!sys.spaces.empty() &&
            std::abs(sys.values(i) - sys.values(sys.spaces.back().columns.front())) <= gap) {
            sys.spaces.back().columns.push_back(i);
        } else {
            sys.spaces.push_back({sys.values(i), {i}});
        }
    }
    // representative eigenvalue: mean over the cluster
    for (auto& space : sys.spaces) {
        double sum = 0.0;
        for (Eigen::Index c : space.columns) {
            sum += sys.values(c);
        }
        space.eigenvalue = sum / static_cast<double>(space.columns.size());
    }
    return sys;
}

std::vector<double> born_probabilities(const Eigensystem& sys, const StateVector& s)
{
    require_same_dim(static_cast<std::size_t>(sys.vectors.rows()), s.dim(), "born_probabilities");
    const CVector coeffs = sys.vectors.adjoint() * s.amplitudes();
    std::vector<double> probs;
    probs.reserve(sys.spaces.size());
    for (const auto& space : sys.spaces) {
        double p = 0.0;
        for (Eigen::Index c : space.columns) {
            p += std::norm(coeffs(c));
        }
        probs.push_back(p);
    }
    return probs;
}

std::size_t sample_index(const std::vector<double>& probabilities, double u)
{
    double total = 0.0;
    for (double p : probabilities) {
        total += p;
    }
    const double target = u * total;
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        if (probabilities[k] > 0.0) {
            last_nonzero = k;
        }
        acc += probabilities[k];
        if (target < acc) {
            return k;
        }
    }
    return last_nonzero;
}

MeasurementRecord measure_observable(const Eigensystem& sys, const StateVector& s, RandomStream& rng)
{
    const std::vector<double> probs = born_probabilities(sys, s);
    const std::size_t k = sample_index(probs, rng.uniform());
    const CVector projected = sys.projector(k) * s.amplitudes();
    return {sys.spaces[k].eigenvalue, probs[k], StateVector(projected, s.labels()), k};
}

MeasurementRecord measure_observable(const LinearOperator& op, const StateVector& s, RandomStream& rng)
{
    require_hermitian(op, "measure_observable");
    require_same_dim(op.dim(), s.dim(), "measure_observable");
    return measure_observable(eigensystem(op), s, rng);
}

StateVector evolve(const LinearOperator& h, double t, const StateVector& s)
{
    require_hermitian(h, "evolve");
    require_same_dim(h.dim(), s.dim(), "evolve");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.entries());
    const CMatrix& v = solver.eigenvectors();
    CVector phases(solver.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::exp(Complex(0.0, -solver.eigenvalues()(i) * t / hbar));
    }
    const CVector out = v * phases.asDiagonal() * (v.adjoint() * s.amplitudes());
    return StateVector(out, s.labels());
}

StateVector random_state(std::size_t dim, RandomStream& rng)
{
    CVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        v(i) = Complex(re, im);
    }
    return StateVector(std::move(v));
}

LinearOperator random_hermitian(std::size_t dim, RandomStream& rng)
{
    const auto n = static_cast<Eigen::Index>(dim);
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(i, j) = Complex(re, im);
        }
    }
    CMatrix h = 0.5 * (g + g.adjoint());
    return LinearOperator::observable(std::move(h));
}

// --- grid operators ---

UniformGrid1D UniformGrid1D::spanning(double lo, double hi, std::size_t points)
{
    if (points < 2 || !(hi > lo)) {
        throw InvalidArgument("UniformGrid1D: need hi > lo and at least 2 points");
    }
    return {lo, (hi - lo) / static_cast<double>(points - 1), points};
}

LinearOperator position_operator(const UniformGrid1D& grid)
{
    const auto n = static_cast<Eigen::Index>(grid.points);
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = grid.x(static_cast<std::size_t>(i));
    }
    return LinearOperator::observable(std::move(m));
}

LinearOperator momentum_operator(const UniformGrid1D& grid, Boundary boundary)
{
    const auto n = static_cast<Eigen::Index>(grid.points);
    if (n < 3) {
        throw GridTooSmall("momentum_operator: need at least 3 grid points");
    }
    // (p f)_j = -i hbar (f_{j+1} - f_{j-1}) / (2h)
    const Complex c(0.0, -hbar / (2.0 * grid.spacing));
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j + 1 < n) {
            m(j, j + 1) = c;
        } else if (boundary == Boundary::Periodic) {
            m(j, 0) = c;
        }
        if (j > 0) {
            m(j, j - 1) = -c;
        } else if (boundary == Boundary::Periodic) {
            m(j, n - 1) = -c;
        }
    }
    return LinearOperator::observable(std::move(m));
}

// --- bipartite ---

BipartiteState::BipartiteState(CMatrix amps, std::vector<std::string> labels_I,
                               std::vector<std::string> labels_II)
    : amps_(std::move(amps)), labels_I_(std::move(labels_I)), labels_II_(std::move(labels_II))
{
    if (amps_.rows() < 1 || amps_.cols() < 1) {
        throw InvalidArgument("BipartiteState: empty amplitude matrix");
    }
    const double norm = amps_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw InvalidArgument("BipartiteState: amplitudes have zero or non-finite norm");
    }
    amps_ /= norm;
    if (labels_I_.empty()) {
        labels_I_ = index_labels(dim_I());
    }
    if (labels_II_.empty()) {
        labels_II_ = index_labels(dim_II());
    }
    if (labels_I_.size() != dim_I() || labels_II_.size() != dim_II()) {
        throw DimensionMismatch("BipartiteState: label count does not match amplitude shape");
    }
}

BipartiteState BipartiteState::from_flat(const StateVector& s, std::size_t dI, std::size_t dII)
{
    if (dI * dII != s.dim()) {
        throw DimensionMismatch("BipartiteState::from_flat: dI * dII != state dimension");
    }
    CMatrix amps(static_cast<Eigen::Index>(dI), static_cast<Eigen::Index>(dII));
    for (std::size_t m = 0; m < dI; ++m) {
        for (std::size_t n = 0; n < dII; ++n) {
            amps(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = s[m * dII + n];
        }
    }
    return BipartiteState(std::move(amps));
}

StateVector BipartiteState::flatten() const
{
    CVector v(amps_.size());
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(amps_.size()));
    for (Eigen::Index m = 0; m < amps_.rows(); ++m) {
        for (Eigen::Index n = 0; n < amps_.cols(); ++n) {
            v(m * amps_.cols() + n) = amps_(m, n);
            labels.push_back(labels_I_[static_cast<std::size_t>(m)] + "," +
                             labels_II_[static_cast<std::size_t>(n)]);
        }
    }
    return StateVector(std::move(v), std::move(labels));
}

BipartiteState BipartiteState::swapped() const
{
    return BipartiteState(amps_.transpose(), labels_II_, labels_I_);
}

BipartiteState tensor_product(const StateVector& sI, const StateVector& sII)
{
    return BipartiteState(sI.amplitudes() * sII.amplitudes().transpose(), sI.labels(), sII.labels());
}

Eigen::VectorXd schmidt_coefficients(const BipartiteState& psi)
{
    Eigen::JacobiSVD<CMatrix> svd(psi.amplitudes());
    return svd.singularValues();
}

std::size_t schmidt_rank(const BipartiteState& psi, double tol)
{
    const Eigen::VectorXd s = schmidt_coefficients(psi);
    return static_cast<std::size_t>((s.array() > tol).count());
}

}  // namespace eprlab::qcore
