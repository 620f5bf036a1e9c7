#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eprlab/eprpair.hpp"
#include "eprlab/errors.hpp"
#include "oracles.hpp"

using namespace eprlab;
using namespace eprlab::eprpair;

namespace {

EprConfig small(double x0 = 0.0, double sigma = 0.5)
{
    EprConfig c;
    c.x0 = x0;
    c.sigma = sigma;
    c.extent = 40.0;
    c.points = 256;
    return c;
}

}  // namespace

TEST_SUITE("eprpair")
{
    TEST_CASE("config validation")
    {
        EprConfig c = small();
        CHECK_NOTHROW(c.validate());
        c.sigma = 0.0;
        CHECK_THROWS_AS(c.validate(), GridTooSmall);
        c = small();
        c.points = 32;
        CHECK_THROWS_AS(c.validate(), GridTooSmall);
        c = small();
        c.points = 255;
        CHECK_THROWS_AS(c.validate(), GridTooSmall);
        c = small(18.0);
        CHECK_THROWS_AS(build_epr_state(c), GridTooSmall);
        c = small(0.0, 0.05);
        CHECK_THROWS_AS(build_epr_state(c), GridTooSmall);
    }

    TEST_CASE("grid geometry")
    {
        const Axis ax{0.5, 8};
        CHECK(ax.coord(4) == 0.0);
        CHECK(ax.lower() == -2.0);
        CHECK(ax.upper() == 1.5);
        CHECK(ax.nearest(0.74) == 5);
        CHECK(ax.nearest(1.7) == 7);
        CHECK_THROWS_AS(ax.nearest(2.0), InvalidArgument);
        CHECK_THROWS_AS(ax.nearest(-2.5), InvalidArgument);
    }

    TEST_CASE("state is normalized with the right relative-offset marginal")
    {
        const auto cfg = small(1.5, 0.5);
        const auto psi = build_epr_state(cfg);
        CHECK(std::abs(psi.norm() - 1.0) <= 1e-10);
        const auto m = relative_offset_moments(psi, cfg.x0);
        CHECK(std::abs(m.mean) < 1e-3);
        CHECK(m.stddev == doctest::Approx(cfg.sigma).epsilon(0.02));
    }

    TEST_CASE("x0 = 0 state is exchange symmetric")
    {
        const auto psi = build_epr_state(small());
        double worst = 0.0;
        for (std::size_t i = 0; i < 256; ++i) {
            for (std::size_t j = 0; j < 256; ++j) {
                worst = std::max(worst, std::abs(psi.at(i, j) - psi.at(j, i)));
            }
        }
        CHECK(worst == 0.0);
    }

    TEST_CASE("position conditioning")
    {
        const auto cfg = small(1.5, 0.5);
        const auto psi = build_epr_state(cfg);
        const double lambda = cfg.envelope_width();
        for (double x : {-3.125, 0.0, 2.5}) {
            const auto d = condition_on_position(psi, x);
            CHECK(d.slice_coordinate == doctest::Approx(x));
            CHECK(std::abs(d.mean() - (x + cfg.x0)) <= cfg.sigma / 10.0);
            CHECK(d.mean() ==
                  doctest::Approx(oracle::conditional_position_mean(x, cfg.x0, cfg.sigma, lambda)).epsilon(1e-6));
            CHECK(d.stddev() == doctest::Approx(cfg.sigma).epsilon(0.1));
            CHECK(d.stddev() == doctest::Approx(oracle::conditional_position_std(cfg.sigma, lambda)).epsilon(1e-4));
        }
        CHECK_THROWS_AS(condition_on_position(psi, 25.0), InvalidArgument);
        CHECK_THROWS_AS(condition_on_position(to_momentum(psi), 0.0), InvalidArgument);
    }

    TEST_CASE("position conditioning at x = 0 is symmetric when x0 = 0")
    {
        const auto d = condition_on_position(build_epr_state(small()), 0.0);
        const std::size_t n = d.probability.size();
        // node n/2 is the origin; node 0 has no mirror partner
        for (std::size_t j = 1; j < n; ++j) {
            CHECK(d.probability[j] == doctest::Approx(d.probability[n - j]).epsilon(1e-12));
        }
        CHECK(std::abs(d.mean()) < 1e-12);
    }

    TEST_CASE("momentum conditioning")
    {
        const auto cfg = small(1.5, 0.5);
        const auto psi = build_epr_state(cfg);
        const auto mom = to_momentum(psi);
        const double lambda = cfg.envelope_width();
        const double dp = mom.axis_I().spacing;
        CHECK(dp == doctest::Approx(2.0 * std::numbers::pi * hbar / cfg.extent));
        for (int k : {-5, 0, 3, 8}) {
            const double p = k * dp;
            const auto d = condition_on_momentum(mom, p);
            CHECK(d.slice_coordinate == doctest::Approx(p));
            CHECK(std::abs(d.mean() + p) <= 1.0 / (10.0 * lambda));
            // the conditional width (about 1/(2 Lambda)) is below dp and the
            // envelope is cut by the box, so the spread matches the continuum
            // oracle only to a few percent; the mean is much tighter
            CHECK(d.mean() == doctest::Approx(oracle::conditional_momentum_mean(p, cfg.sigma, lambda)).epsilon(1e-4));
            CHECK(d.stddev() == doctest::Approx(oracle::conditional_momentum_std(cfg.sigma, lambda)).epsilon(0.05));
            CHECK(d.stddev() == doctest::Approx(1.0 / (2.0 * lambda)).epsilon(0.05));
        }
        // a position-space input is transformed first
        const auto same = condition_on_momentum(psi, 3 * dp);
        CHECK(same.mean() == doctest::Approx(condition_on_momentum(mom, 3 * dp).mean()));
        const double nyquist = std::numbers::pi * hbar / cfg.spacing();
        CHECK_THROWS_AS(condition_on_momentum(mom, nyquist), InvalidArgument);
        CHECK_THROWS_AS(condition_on_momentum(mom, -1.2 * nyquist), InvalidArgument);
    }

    TEST_CASE("momentum conditioning at p = 0 is symmetric")
    {
        const auto d = condition_on_momentum(build_epr_state(small(1.5)), 0.0);
        const std::size_t n = d.probability.size();
        for (std::size_t j = 1; j < n; ++j) {
            CHECK(d.probability[j] == doctest::Approx(d.probability[n - j]).epsilon(1e-9));
        }
        // only the unpaired Nyquist node can shift the mean
        CHECK(std::abs(d.mean()) <= d.probability[0] * std::abs(d.coordinate[0]) * (1.0 + 1e-6) + 1e-14);
    }

    TEST_CASE("transform of a product Gaussian matches the analytic transform")
    {
        // psi(x1, x2) = g(x1) g(x2), g(x) = (2 pi s^2)^(-1/4) exp(-x^2 / (4 s^2))
        // g~(p) = (2 s^2 / pi)^(1/4) exp(-s^2 p^2) with hbar = 1
        const double s = 1.3;
        const Axis ax{40.0 / 128.0, 128};
        std::vector<Complex> v(128 * 128);
        auto g = [&](double x) { return std::pow(2.0 * std::numbers::pi * s * s, -0.25) * std::exp(-x * x / (4 * s * s)); };
        auto gt = [&](double p) { return std::pow(2.0 * s * s / std::numbers::pi, 0.25) * std::exp(-s * s * p * p); };
        for (std::size_t i = 0; i < 128; ++i) {
            for (std::size_t j = 0; j < 128; ++j) {
                v[i * 128 + j] = g(ax.coord(i)) * g(ax.coord(j));
            }
        }
        const auto mom = to_momentum(GridFunction(v, ax, ax, Domain::Position));
        double worst = 0.0;
        for (std::size_t k = 0; k < 128; ++k) {
            for (std::size_t l = 0; l < 128; ++l) {
                const double pk = mom.axis_I().coord(k);
                const double pl = mom.axis_II().coord(l);
                worst = std::max(worst, std::abs(mom.at(k, l) - gt(pk) * gt(pl)));
            }
        }
        CHECK(worst < 1e-10);
        CHECK_THROWS_AS(to_momentum(mom), InvalidArgument);
    }

    TEST_CASE("Parseval (property)")
    {
        for (double sigma : {0.3, 0.5, 1.0}) {
            for (double x0 : {-2.0, 0.0, 3.0}) {
                const auto psi = build_epr_state(small(x0, sigma));
                CHECK(std::abs(to_momentum(psi).norm() - psi.norm()) <= 1e-10);
            }
        }
    }

    TEST_CASE("narrowing sigma shrinks position spread, momentum spread set by the envelope (property)")
    {
        const double lambda = small().envelope_width();
        double prev_var = 1e9;
        for (double sigma : {1.0, 0.5, 0.25}) {
            const auto psi = build_epr_state(small(0.0, sigma));
            const auto pos = condition_on_position(psi, 0.0);
            const double var = pos.stddev() * pos.stddev();
            CHECK(var < prev_var);
            CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.1));
            prev_var = var;
            const auto mom = condition_on_momentum(psi, 0.0);
            CHECK(mom.stddev() == doctest::Approx(1.0 / (2.0 * lambda)).epsilon(0.05));
            CHECK(std::abs(psi.norm() - 1.0) <= 1e-10);
        }
    }

    TEST_CASE("grid function shape check")
    {
        const Axis ax{1.0, 4};
        CHECK_THROWS_AS(GridFunction(std::vector<Complex>(15), ax, ax, Domain::Position), DimensionMismatch);
    }
}
