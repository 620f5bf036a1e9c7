#include "eprlab/hydrogen.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "eprlab/errors.hpp"

namespace eprlab::hydrogen {

using std::numbers::pi;

Orbital::Orbital(int n, int l, int m) : n_(n), l_(l), m_(m)
{
    if (n < 1 || l < 0 || l > n - 1 || m < -l || m > l) {
        throw InvalidArgument("Orbital: invalid quantum numbers (n=" + std::to_string(n) +
                              ", l=" + std::to_string(l) + ", m=" + std::to_string(m) + ")");
    }
}

RadialGrid::RadialGrid(double r_max, std::size_t points)
    : r_max_(r_max), points_(points), spacing_(r_max / static_cast<double>(points - 1))
{
    if (!(r_max > 0.0) || points < 16) {
        throw GridTooSmall("RadialGrid: need r_max > 0 and at least 16 points");
    }
}

RadialGrid RadialGrid::default_for(int n)
{
    return RadialGrid(40.0 * n * n * bohr_radius, 4096);
}

void RadialGrid::require_contains(int n) const
{
    const double bound = 20.0 * n * n * bohr_radius;
    if (r_max_ < bound) {
        throw GridTooSmall("RadialGrid: r_max " + std::to_string(r_max_) + " below containment bound " +
                           std::to_string(bound) + " for n=" + std::to_string(n));
    }
}

double laguerre(int k, double alpha, double x)
{
    if (k < 0) {
        throw InvalidArgument("laguerre: negative degree");
    }
    double prev = 1.0;
    if (k == 0) {
        return prev;
    }
    double cur = 1.0 + alpha - x;
    for (int j = 1; j < k; ++j) {
        const double next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

// P_l^m(x), m >= 0, Condon-Shortley phase included.
double assoc_legendre(int l, int m, double x)
{
    double pmm = 1.0;
    const double somx2 = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if (l == m) {
        return pmm;
    }
    double pmmp1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) {
        return pmmp1;
    }
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = ((2.0 * ll - 1.0) * x * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

double log_factorial(int n)
{
    return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

std::complex<double> spherical_harmonic(int l, int m, double theta, double phi)
{
    if (l < 0 || std::abs(m) > l) {
        throw InvalidArgument("spherical_harmonic: need l >= 0 and |m| <= l");
    }
    const int am = std::abs(m);
    const double norm =
        std::sqrt((2.0 * l + 1.0) / (4.0 * pi) * std::exp(log_factorial(l - am) - log_factorial(l + am)));
    const std::complex<double> y =
        norm * assoc_legendre(l, am, std::cos(theta)) * std::polar(1.0, static_cast<double>(am) * phi);
    if (m >= 0) {
        return y;
    }
    return ((am % 2 == 0) ? 1.0 : -1.0) * std::conj(y);
}

double radial_function(int n, int l, double r)
{
    const double na = n * bohr_radius;
    const double rho = 2.0 * r / na;
    const double log_norm = 3.0 * std::log(2.0 / na) + log_factorial(n - l - 1) - std::log(2.0 * n) -
                            log_factorial(n + l);
    return std::exp(0.5 * log_norm) * std::exp(-rho / 2.0) * std::pow(rho, l) *
           laguerre(n - l - 1, 2.0 * l + 1.0, rho);
}

std::complex<double> eval_orbital(const Orbital& o, double r, double theta, double phi)
{
    if (r < 0.0) {
        throw InvalidArgument("eval_orbital: r must be non-negative");
    }
    return radial_function(o.n(), o.l(), r) * spherical_harmonic(o.l(), o.m(), theta, phi);
}

double simpson(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    if (n < 2) {
        return 0.0;
    }
    if (n == 2) {
        return 0.5 * h * (f[0] + f[1]);
    }
    if (n == 4) {
        return 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);
    }
    const std::size_t intervals = n - 1;
    // Simpson needs an even interval count; close with a 3/8 panel otherwise
    const std::size_t simpson_end = (intervals % 2 == 0) ? n - 1 : n - 4;
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < simpson_end; ++i) {
        (i % 2 == 1 ? odd : even) += f[i];
    }
    double total = h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[simpson_end]);
    if (simpson_end != n - 1) {
        const std::size_t j = simpson_end;
        total += 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
    }
    return total;
}

namespace {

std::vector<double> sample_radial(int n, int l, const RadialGrid& grid)
{
    std::vector<double> out(grid.points());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = radial_function(n, l, grid.r(i));
    }
    return out;
}

// Fourth-order finite-difference derivative with one-sided stencils at the ends.
std::vector<double> derivative(const std::vector<double>& f, double h)
{
    const std::size_t n = f.size();
    std::vector<double> d(n);
    const double s = 1.0 / (12.0 * h);
    d[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = s * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    d[n - 2] = -s * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
    d[n - 1] = -s * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
    return d;
}

// int conj(Y_l^m) Y_l'^m' dOmega
std::complex<double> angular_overlap(int l, int m, int lp, int mp)
{
    constexpr int kPhiNodes = 64;
    using Gauss = boost::math::quadrature::gauss<double, 30>;
    std::complex<double> total = 0.0;
    const double dphi = 2.0 * pi / kPhiNodes;
    for (int k = 0; k < kPhiNodes; ++k) {
        const double phi = k * dphi;
        auto integrand = [&](double x) {
            const double theta = std::acos(x);
            return std::conj(spherical_harmonic(l, m, theta, phi)) * spherical_harmonic(lp, mp, theta, phi);
        };
        const double re = Gauss::integrate([&](double x) { return integrand(x).real(); }, -1.0, 1.0);
        const double im = Gauss::integrate([&](double x) { return integrand(x).imag(); }, -1.0, 1.0);
        total += std::complex<double>(re, im) * dphi;
    }
    return total;
}

}  // namespace

double expect_r(int n, int l, const RadialGrid& grid)
{
    static_cast<void>(Orbital(n, l, 0));
    grid.require_contains(n);
    const std::vector<double> R = sample_radial(n, l, grid);
    std::vector<double> integrand(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double r = grid.r(i);
        integrand[i] = R[i] * R[i] * r * r * r;
    }
    return simpson(integrand, grid.spacing());
}

double expect_r_closed_form(int n, int l)
{
    return 0.5 * bohr_radius * (3.0 * n * n - l * (l + 1.0));
}

std::complex<double> expect_radial_p_ground(const RadialGrid& grid)
{
    grid.require_contains(1);
    // psi_100 = R_10 Y_00; the angular factor integrates to one
    const std::vector<double> R = sample_radial(1, 0, grid);
    const std::vector<double> dR = derivative(R, grid.spacing());
    std::vector<double> integrand(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double r = grid.r(i);
        integrand[i] = R[i] * dR[i] * r * r;
    }
    return std::complex<double>(0.0, -hbar) * simpson(integrand, grid.spacing());
}

std::complex<double> expect_radial_p_ground_hermitized(const RadialGrid& grid)
{
    grid.require_contains(1);
    const std::vector<double> R = sample_radial(1, 0, grid);
    const std::vector<double> dR = derivative(R, grid.spacing());
    std::vector<double> integrand(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double r = grid.r(i);
        // R (R' + R / r) r^2, written without the 1/r singularity
        integrand[i] = R[i] * dR[i] * r * r + R[i] * R[i] * r;
    }
    return std::complex<double>(0.0, -hbar) * simpson(integrand, grid.spacing());
}

std::complex<double> overlap(const Orbital& a, const Orbital& b, const RadialGrid& grid)
{
    grid.require_contains(std::max(a.n(), b.n()));
    const std::vector<double> Ra = sample_radial(a.n(), a.l(), grid);
    const std::vector<double> Rb = sample_radial(b.n(), b.l(), grid);
    std::vector<double> integrand(Ra.size());
    for (std::size_t i = 0; i < Ra.size(); ++i) {
        const double r = grid.r(i);
        integrand[i] = Ra[i] * Rb[i] * r * r;
    }
    return simpson(integrand, grid.spacing()) * angular_overlap(a.l(), a.m(), b.l(), b.m());
}

Eigen::MatrixXcd overlap_matrix(const std::vector<Orbital>& orbitals, const RadialGrid& grid)
{
    int n_max = 1;
    for (const auto& o : orbitals) {
        n_max = std::max(n_max, o.n());
    }
    grid.require_contains(n_max);

    std::map<std::pair<int, int>, std::vector<double>> radial;
    for (const auto& o : orbitals) {
        const auto key = std::make_pair(o.n(), o.l());
        if (radial.find(key) == radial.end()) {
            radial.emplace(key, sample_radial(o.n(), o.l(), grid));
        }
    }
    std::map<std::array<int, 4>, double> radial_part;
    std::map<std::array<int, 4>, std::complex<double>> angular_part;

    const auto size = static_cast<Eigen::Index>(orbitals.size());
    Eigen::MatrixXcd gram(size, size);
    std::vector<double> integrand(grid.points());
    for (Eigen::Index i = 0; i < size; ++i) {
        const Orbital& a = orbitals[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < size; ++j) {
            const Orbital& b = orbitals[static_cast<std::size_t>(j)];
            const std::array<int, 4> rk{a.n(), a.l(), b.n(), b.l()};
            auto rit = radial_part.find(rk);
            if (rit == radial_part.end()) {
                const auto& Ra = radial.at({a.n(), a.l()});
                const auto& Rb = radial.at({b.n(), b.l()});
                for (std::size_t k = 0; k < integrand.size(); ++k) {
                    const double r = grid.r(k);
                    integrand[k] = Ra[k] * Rb[k] * r * r;
                }
                rit = radial_part.emplace(rk, simpson(integrand, grid.spacing())).first;
            }
            const std::array<int, 4> ak{a.l(), a.m(), b.l(), b.m()};
            auto ait = angular_part.find(ak);
            if (ait == angular_part.end()) {
                ait = angular_part.emplace(ak, angular_overlap(a.l(), a.m(), b.l(), b.m())).first;
            }
            gram(i, j) = rit->second * ait->second;
        }
    }
    return gram;
}

// --- commutator on a grid ---

double commutator_residual(const qcore::UniformGrid1D& grid, const CVector& samples)
{
    if (samples.size() != static_cast<Eigen::Index>(grid.points)) {
        throw DimensionMismatch("commutator_residual: sample count does not match grid");
    }
    const auto x = qcore::position_operator(grid).entries();
    const auto p = qcore::momentum_operator(grid, qcore::Boundary::Dirichlet).entries();
    const CVector comm_f = x * (p * samples) - p * (x * samples);
    const CVector residual = comm_f - Complex(0.0, hbar) * samples;

    double worst = 0.0;
    for (Eigen::Index j = 1; j + 1 < residual.size(); ++j) {
        worst = std::max(worst, std::abs(residual(j)));
    }
    return worst;
}

CommutatorReport grid_commutator_check(const qcore::UniformGrid1D& grid,
                                       const std::function<std::complex<double>(double)>& f)
{
    if (grid.points < 5) {
        throw GridTooSmall("grid_commutator_check: need at least 5 points");
    }
    auto sample = [&](const qcore::UniformGrid1D& g) {
        CVector v(static_cast<Eigen::Index>(g.points));
        for (std::size_t i = 0; i < g.points; ++i) {
            v(static_cast<Eigen::Index>(i)) = f(g.x(i));
        }
        return v;
    };
    const CVector coarse = sample(grid);
    const double peak = coarse.cwiseAbs().maxCoeff();
    const double edge = std::max(std::abs(coarse(0)), std::abs(coarse(coarse.size() - 1)));
    if (edge > 1e-6 * peak) {
        throw InvalidArgument("grid_commutator_check: test function does not decay at the grid edges");
    }
    const qcore::UniformGrid1D fine{grid.x_min, grid.spacing / 2.0, 2 * (grid.points - 1) + 1};

    CommutatorReport report{};
    report.spacing = grid.spacing;
    report.max_interior_residual = commutator_residual(grid, coarse);
    report.refined_residual = commutator_residual(fine, sample(fine));
    report.error_constant = report.max_interior_residual / (grid.spacing * grid.spacing);
    if (report.max_interior_residual > 0.0 && report.refined_residual > 0.0) {
        report.convergence_order = std::log2(report.max_interior_residual / report.refined_residual);
    }
    return report;
}

}  // namespace eprlab::hydrogen
