#pragma once
// Reference values computed independently of the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace oracle {

inline double binomial_sigma(double p, std::uint64_t n)
{
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// <r> for hydrogen (n, l) in Bohr radii.
inline double mean_radius(int n, int l)
{
    return 0.5 * (3.0 * n * n - l * (l + 1.0));
}

// psi_100(r) = exp(-r) / sqrt(pi) in atomic units.
inline double ground_state(double r)
{
    return std::exp(-r) / std::sqrt(std::numbers::pi);
}

// -a.b for unit vectors given by polar/azimuth in degrees.
inline double singlet_correlation(double ta, double pa, double tb, double pb)
{
    const double d = std::numbers::pi / 180.0;
    const double dot = std::sin(ta * d) * std::sin(tb * d) * std::cos((pa - pb) * d) + std::cos(ta * d) * std::cos(tb * d);
    return -dot;
}

// Preassigned +/-z pair, deterministic sign rule (ties -> +1):
// electron sign(a.s), positron sign(-b.s), averaged over s = +z, -z.
inline double definite_sign_correlation(double az, double bz)
{
    auto sgn = [](double v) { return v >= 0.0 ? 1.0 : -1.0; };
    double e = 0.0;
    for (double s : {1.0, -1.0}) {
        e += 0.5 * sgn(az * s) * sgn(-bz * s);
    }
    return e;
}

// Same with +1 probability (1 + a.s)/2 per particle.
inline double definite_cosine_correlation(double az, double bz)
{
    double e = 0.0;
    for (double s : {1.0, -1.0}) {
        e += 0.5 * (az * s) * (-bz * s);
    }
    return e;
}

// Gaussian conditionals of the regularized EPR state with relative width
// sigma and centre-of-mass width lambda.
inline double conditional_position_mean(double x, double x0, double sigma, double lambda)
{
    const double a = 1.0 / (sigma * sigma);
    const double b = 1.0 / (4.0 * lambda * lambda);
    return ((x + x0) * a - x * b) / (a + b);
}

inline double conditional_position_std(double sigma, double lambda)
{
    return 1.0 / std::sqrt(1.0 / (sigma * sigma) + 1.0 / (4.0 * lambda * lambda));
}

inline double conditional_momentum_mean(double p, double sigma, double lambda)
{
    const double sp = 1.0 / (2.0 * lambda);  // centre-of-mass momentum width
    const double sq = 1.0 / (2.0 * sigma);   // relative momentum width
    const double a = 1.0 / (sp * sp);
    const double b = 1.0 / (4.0 * sq * sq);
    return -p * (a - b) / (a + b);
}

inline double conditional_momentum_std(double sigma, double lambda)
{
    const double sp = 1.0 / (2.0 * lambda);
    const double sq = 1.0 / (2.0 * sigma);
    return 1.0 / std::sqrt(1.0 / (sp * sp) + 1.0 / (4.0 * sq * sq));
}

}  // namespace oracle
