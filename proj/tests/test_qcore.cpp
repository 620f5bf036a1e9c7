#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eprlab/bipartite.hpp"
#include "eprlab/errors.hpp"
#include "eprlab/qcore.hpp"
#include "oracles.hpp"

using namespace eprlab;
using namespace eprlab::qcore;
using std::numbers::pi;

namespace {

CVector vec(std::initializer_list<Complex> xs)
{
    CVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (Complex x : xs) {
        v(i++) = x;
    }
    return v;
}

double max_abs(const CMatrix& m)
{
    return m.cwiseAbs().maxCoeff();
}

const Complex I{0.0, 1.0};

CVector kron_vector_oracle(const StateVector& a, const StateVector& b)
{
    CVector out(static_cast<Eigen::Index>(a.dim() * b.dim()));
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out(static_cast<Eigen::Index>(i * b.dim() + j)) = a[i] * b[j];
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("qcore")
{
    TEST_CASE("state vectors are normalized on construction")
    {
        const StateVector s(vec({3.0, 4.0 * I}));
        CHECK(s.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(s[0] - Complex(0.6)) < 1e-15);
        CHECK(s.labels() == std::vector<std::string>{"0", "1"});
        CHECK_THROWS_AS(StateVector{CVector()}, InvalidArgument);
        CHECK_THROWS_AS(StateVector(CVector::Zero(3)), InvalidArgument);
        CHECK_THROWS_AS(StateVector(vec({1.0, 0.0}), {"only"}), DimensionMismatch);
    }

    TEST_CASE("equality up to global phase")
    {
        const StateVector a(vec({1.0, I}));
        const StateVector b(vec({std::exp(I * 0.7), I * std::exp(I * 0.7)}));
        CHECK(equal_up_to_phase(a, b));
        CHECK_FALSE(equal_up_to_phase(a, StateVector(vec({1.0, -I}))));
        CHECK(overlap_magnitude(a, b) == doctest::Approx(1.0));
    }

    TEST_CASE("hermitian flag is validated")
    {
        CMatrix m(2, 2);
        m << 1.0, I, 0.0, 1.0;
        CHECK_THROWS_AS(LinearOperator::observable(m), NotHermitian);
        CHECK_NOTHROW(LinearOperator{m});
        CHECK_THROWS_AS(LinearOperator(CMatrix::Zero(2, 3)), DimensionMismatch);
        CHECK(pauli_y().is_hermitian());
    }

    TEST_CASE("apply")
    {
        RandomStream rng(11);
        const StateVector s = random_state(5, rng);
        CHECK((apply(LinearOperator::identity(5), s) - s.amplitudes()).norm() < 1e-15);
        const CVector flipped = apply(pauli_x(), StateVector::basis(2, 0));
        CHECK((flipped - vec({0.0, 1.0})).norm() < 1e-15);
        CHECK_THROWS_AS(apply(pauli_x(), s), DimensionMismatch);
    }

    TEST_CASE("finite-difference momentum on a plane wave")
    {
        const auto grid = UniformGrid1D::spanning(-5.0, 5.0, 401);
        const double p = 1.3;
        CVector f(static_cast<Eigen::Index>(grid.points));
        for (std::size_t j = 0; j < grid.points; ++j) {
            f(static_cast<Eigen::Index>(j)) = std::exp(I * p * grid.x(j) / hbar);
        }
        const StateVector s(f);
        const CVector pf = apply(momentum_operator(grid), s);
        // central difference gives hbar sin(p h / hbar) / h
        const double h = grid.spacing;
        const double discrete_p = hbar * std::sin(p * h / hbar) / h;
        double worst = 0.0;
        for (Eigen::Index j = 1; j + 1 < pf.size(); ++j) {
            worst = std::max(worst, std::abs(pf(j) - discrete_p * s.amplitudes()(j)));
        }
        CHECK(worst < 1e-12);
        CHECK(std::abs(discrete_p - p) < p * p * p * h * h);

        // periodic wrap: choose p commensurate with the period
        const auto ring = UniformGrid1D{0.0, 2.0 * pi / 200.0, 200};
        CVector g(200);
        for (std::size_t j = 0; j < 200; ++j) {
            g(static_cast<Eigen::Index>(j)) = std::exp(I * 3.0 * ring.x(j));
        }
        const StateVector sg(g);
        const auto pp = momentum_operator(ring, Boundary::Periodic);
        const auto ev = is_eigenstate(pp, sg, 1e-10);
        REQUIRE(ev.has_value());
        CHECK(std::abs(*ev - 3.0) < 3.0 * 3.0 * 3.0 * ring.spacing * ring.spacing);
        CHECK(pp.is_hermitian());
    }

    TEST_CASE("expectation examples")
    {
        CHECK(std::abs(expectation(pauli_z(), StateVector::basis(2, 0)) - 1.0) < 1e-15);
        CHECK(std::abs(expectation(pauli_x(), StateVector::basis(2, 0))) < 1e-15);
        const BipartiteState singlet(CMatrix{{0.0, 1.0}, {-1.0, 0.0}});
        CHECK(std::abs(expectation(kron(pauli_z(), pauli_z()), singlet.flatten()) + 1.0) < 1e-14);
        CHECK_THROWS_AS(expectation(pauli_z(), singlet.flatten()), DimensionMismatch);
    }

    TEST_CASE("hermitian expectations are real (property)")
    {
        RandomStream rng(2024);
        double worst = 0.0;
        for (int trial = 0; trial < 500; ++trial) {
            const std::size_t d = 1 + static_cast<std::size_t>(trial % 12);
            const auto h = random_hermitian(d, rng);
            const auto s = random_state(d, rng);
            worst = std::max(worst, std::abs(expectation(h, s).imag()));
        }
        CHECK(worst <= 1e-12);
    }

    TEST_CASE("commutator examples")
    {
        const auto z = commutator(pauli_x(), pauli_x());
        CHECK(max_abs(z.entries()) == 0.0);
        const auto c = commutator(pauli_x(), pauli_y());
        CHECK(max_abs(c.entries() - 2.0 * I * pauli_z().entries()) < 1e-15);
        CHECK_FALSE(c.is_hermitian());
        CHECK_THROWS_AS(commutator(pauli_x(), LinearOperator::identity(3)), DimensionMismatch);
    }

    TEST_CASE("commutator antisymmetry (property)")
    {
        RandomStream rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t d = 2 + static_cast<std::size_t>(trial % 7);
            CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            CMatrix b = a;
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                for (Eigen::Index j = 0; j < a.cols(); ++j) {
                    a(i, j) = Complex(rng.normal(), rng.normal());
                    b(i, j) = Complex(rng.normal(), rng.normal());
                }
            }
            const CMatrix ab = commutator(LinearOperator(a), LinearOperator(b)).entries();
            const CMatrix ba = commutator(LinearOperator(b), LinearOperator(a)).entries();
            CHECK(max_abs(ab + ba) <= 1e-12);
            // for Hermitian inputs the commutator is anti-Hermitian
            const auto ha = random_hermitian(d, rng);
            const auto hb = random_hermitian(d, rng);
            const CMatrix hc = commutator(ha, hb).entries();
            CHECK(max_abs(hc + hc.adjoint()) <= 1e-12);
        }
    }

    TEST_CASE("grid commutator reproduces i hbar at interior points")
    {
        const auto grid = UniformGrid1D::spanning(-8.0, 8.0, 801);
        CVector f(static_cast<Eigen::Index>(grid.points));
        for (std::size_t j = 0; j < grid.points; ++j) {
            f(static_cast<Eigen::Index>(j)) = std::exp(-0.5 * grid.x(j) * grid.x(j));
        }
        const auto x = position_operator(grid);
        const auto p = momentum_operator(grid);
        const CVector cf = commutator(x, p).entries() * f;
        double worst = 0.0;
        for (Eigen::Index j = 1; j + 1 < f.size(); ++j) {
            worst = std::max(worst, std::abs(cf(j) - I * hbar * f(j)));
        }
        // truncation ~ hbar h^2 |f''| / 2 with |f''| <= 1
        CHECK(worst < 0.5 * grid.spacing * grid.spacing * 1.01);
    }

    TEST_CASE("is_eigenstate")
    {
        const auto up = is_eigenstate(pauli_z(), StateVector::basis(2, 0), 1e-9);
        REQUIRE(up.has_value());
        CHECK(std::abs(*up - 1.0) < 1e-15);
        CHECK_FALSE(is_eigenstate(pauli_x(), StateVector::basis(2, 0), 1e-9).has_value());
        CHECK_THROWS_AS(is_eigenstate(pauli_x(), StateVector::basis(3, 0), 1e-9), DimensionMismatch);
    }

    TEST_CASE("eigensystem groups degenerate eigenvalues")
    {
        CMatrix m = CMatrix::Zero(4, 4);
        m.diagonal() << 2.0, -1.0, 2.0, 2.0 + 1e-12;
        const auto sys = eigensystem(LinearOperator::observable(m));
        REQUIRE(sys.spaces.size() == 2);
        CHECK(sys.spaces[0].eigenvalue == doctest::Approx(-1.0));
        CHECK(sys.spaces[1].columns.size() == 3);
        const CMatrix proj = sys.projector(1);
        CHECK(max_abs(proj * proj - proj) < 1e-12);
        CHECK(proj.trace().real() == doctest::Approx(3.0));
        CHECK_THROWS_AS(eigensystem(LinearOperator(CMatrix{{0.0, 1.0}, {0.0, 0.0}})), NotHermitian);
    }

    TEST_CASE("measure_observable examples")
    {
        RandomStream rng(3);
        const auto rec = measure_observable(pauli_z(), StateVector::basis(2, 0), rng);
        CHECK(rec.eigenvalue == doctest::Approx(1.0));
        CHECK(rec.probability == doctest::Approx(1.0));
        CHECK(equal_up_to_phase(rec.post_state, StateVector::basis(2, 0)));
        CHECK_THROWS_AS(measure_observable(LinearOperator(CMatrix{{0.0, 1.0}, {0.0, 0.0}}), rec.post_state, rng),
                        NotHermitian);
    }

    TEST_CASE("Born frequencies within 5 sigma and post states are eigenstates (property)")
    {
        RandomStream rng(77);
        const std::size_t d = 4;
        const auto h = random_hermitian(d, rng);
        const auto s = random_state(d, rng);
        const auto sys = eigensystem(h);
        const auto probs = born_probabilities(sys, s);
        // independent oracle: |<v_k|s>|^2 from the raw eigenvectors
        for (std::size_t k = 0; k < d; ++k) {
            const Complex amp = sys.vectors.col(static_cast<Eigen::Index>(k)).dot(s.amplitudes());
            CHECK(std::norm(amp) == doctest::Approx(probs[k]).epsilon(1e-10));
        }
        const std::uint64_t n = 100000;
        std::vector<std::uint64_t> counts(sys.spaces.size(), 0);
        for (std::uint64_t i = 0; i < n; ++i) {
            const auto rec = measure_observable(sys, s, rng);
            ++counts[rec.outcome];
            if (i < 200) {
                const auto ev = is_eigenstate(h, rec.post_state, 1e-9);
                REQUIRE(ev.has_value());
                CHECK(std::abs(*ev - rec.eigenvalue) < 1e-9);
            }
        }
        for (std::size_t k = 0; k < counts.size(); ++k) {
            const double freq = static_cast<double>(counts[k]) / static_cast<double>(n);
            CHECK(std::abs(freq - probs[k]) <= 5.0 * oracle::binomial_sigma(probs[k], n) + 1e-12);
        }
    }

    TEST_CASE("sigma_z on |+> gives each branch half the time")
    {
        RandomStream rng(8);
        const StateVector plus(vec({1.0, 1.0}));
        const std::uint64_t n = 100000;
        std::uint64_t up = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            up += measure_observable(pauli_z(), plus, rng).eigenvalue > 0 ? 1 : 0;
        }
        CHECK(std::abs(static_cast<double>(up) / n - 0.5) <= 4.0 / std::sqrt(static_cast<double>(n)));
    }

    TEST_CASE("evolve examples")
    {
        const StateVector plus(vec({1.0, 1.0}));
        const auto same = evolve(LinearOperator::zero(2), 1.7, plus);
        CHECK((same.amplitudes() - plus.amplitudes()).norm() < 1e-15);

        const auto out = evolve(pauli_z(), pi * hbar / 2.0, plus);
        const StateVector expected(vec({std::exp(-I * pi / 2.0), std::exp(I * pi / 2.0)}));
        CHECK(equal_up_to_phase(out, expected, 1e-12));
        CHECK_THROWS_AS(evolve(LinearOperator(CMatrix{{0.0, 1.0}, {0.0, 0.0}}), 1.0, plus), NotHermitian);
    }

    TEST_CASE("evolve preserves norms and inner products (property)")
    {
        RandomStream rng(19);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t d = 1 + static_cast<std::size_t>(trial % 9);
            const auto h = random_hermitian(d, rng);
            const double t = 4.0 * rng.uniform() - 2.0;
            const auto a = random_state(d, rng);
            const auto b = random_state(d, rng);
            const auto ea = evolve(h, t, a);
            const auto eb = evolve(h, t, b);
            CHECK(std::abs(ea.amplitudes().norm() - 1.0) <= 1e-12);
            CHECK(std::abs(ea.inner(eb) - a.inner(b)) <= 1e-10);
        }
    }

    TEST_CASE("commuting observables share an eigenbasis (property)")
    {
        RandomStream rng(41);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t d = 2 + static_cast<std::size_t>(trial % 6);
            const auto m = random_hermitian(d, rng);
            const CMatrix& e = m.entries();
            const auto a = LinearOperator::observable(0.5 * (e * e + (e * e).adjoint()));
            const CMatrix poly = 3.0 * e - e * e * e;
            const auto b = LinearOperator::observable(0.5 * (poly + poly.adjoint()));
            CHECK(max_abs(commutator(a, b).entries()) < 1e-9);
            const auto sys = eigensystem(m);
            for (Eigen::Index k = 0; k < sys.vectors.cols(); ++k) {
                const StateVector v(sys.vectors.col(k));
                CHECK(is_eigenstate(a, v, 1e-9).has_value());
                CHECK(is_eigenstate(b, v, 1e-9).has_value());
            }
        }
    }

    TEST_CASE("tensor product")
    {
        const auto psi = tensor_product(StateVector::basis(2, 0), StateVector::basis(2, 1));
        CMatrix expected = CMatrix::Zero(2, 2);
        expected(0, 1) = 1.0;
        CHECK(max_abs(psi.amplitudes() - expected) == 0.0);
        CHECK(psi.amplitudes().norm() == doctest::Approx(1.0));
        CHECK(schmidt_rank(psi) == 1);

        RandomStream rng(4);
        const auto a = random_state(3, rng);
        const auto b = random_state(4, rng);
        const auto ab = tensor_product(a, b);
        CHECK((ab.flatten().amplitudes() - kron_vector_oracle(a, b)).norm() < 1e-14);
    }

    TEST_CASE("flatten follows the Kronecker index and swapping transposes")
    {
        RandomStream rng(6);
        CMatrix amps(2, 3);
        for (Eigen::Index i = 0; i < 2; ++i) {
            for (Eigen::Index j = 0; j < 3; ++j) {
                amps(i, j) = Complex(rng.normal(), rng.normal());
            }
        }
        const BipartiteState psi(amps);
        const CVector flat = psi.flatten().amplitudes();
        for (Eigen::Index i = 0; i < 2; ++i) {
            for (Eigen::Index j = 0; j < 3; ++j) {
                CHECK(std::abs(flat(i * 3 + j) - psi.amplitudes()(i, j)) < 1e-15);
            }
        }
        const auto back = BipartiteState::from_flat(psi.flatten(), 2, 3);
        CHECK(max_abs(back.amplitudes() - psi.amplitudes()) < 1e-15);
        CHECK(max_abs(psi.swapped().amplitudes() - psi.amplitudes().transpose()) < 1e-15);
        CHECK_THROWS_AS(BipartiteState::from_flat(psi.flatten(), 3, 3), DimensionMismatch);
    }

    TEST_CASE("random streams are reproducible and keyed")
    {
        RandomStream a(123, 4);
        RandomStream b(123, 4);
        RandomStream c(123, 5);
        bool differs = false;
        for (int i = 0; i < 100; ++i) {
            const double ua = a.uniform();
            CHECK(ua == b.uniform());
            CHECK(ua >= 0.0);
            CHECK(ua < 1.0);
            differs = differs || (ua != c.uniform());
        }
        CHECK(differs);
        RandomStream d1 = a.derive(3);
        RandomStream d2 = b.derive(3);
        CHECK(d1.next_u64() == d2.next_u64());
        CHECK(a.derive(3).next_u64() != a.derive(4).next_u64());
    }
}
