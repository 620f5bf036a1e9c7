#include "eprlab/eprpair.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "eprlab/errors.hpp"

namespace eprlab::eprpair {

using std::numbers::pi;

namespace {

// the FFTW planner is not re-entrant
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

double sign_of_parity(std::size_t k)
{
    return (k % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

std::size_t Axis::nearest(double value) const
{
    const double lo = lower();
    const double hi = upper();
    if (!(value >= lo - 0.5 * spacing && value <= hi + 0.5 * spacing)) {
        throw InvalidArgument("coordinate " + std::to_string(value) + " outside grid [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
    }
    const long idx = std::lround((value - lo) / spacing);
    return static_cast<std::size_t>(std::clamp<long>(idx, 0, static_cast<long>(points) - 1));
}

void EprConfig::validate() const
{
    if (!(sigma > 0.0)) {
        throw GridTooSmall("EprConfig: sigma must be positive");
    }
    if (points < 64 || points % 2 != 0) {
        throw GridTooSmall("EprConfig: need an even number of points per axis, at least 64");
    }
    if (extent < 10.0 * sigma + 2.0 * std::abs(x0)) {
        throw GridTooSmall("EprConfig: extent " + std::to_string(extent) + " below 10 sigma + 2|x0| = " +
                           std::to_string(10.0 * sigma + 2.0 * std::abs(x0)));
    }
    if (sigma < spacing()) {
        throw GridTooSmall("EprConfig: sigma " + std::to_string(sigma) + " not resolved by spacing " +
                           std::to_string(spacing()));
    }
}

GridFunction::GridFunction(std::vector<Complex> values, Axis axis_I, Axis axis_II, Domain domain)
    : values_(std::move(values)), axis_I_(axis_I), axis_II_(axis_II), domain_(domain)
{
    if (values_.size() != axis_I_.points * axis_II_.points) {
        throw DimensionMismatch("GridFunction: sample count does not match grid shape");
    }
}

double GridFunction::norm() const
{
    double sum = 0.0;
    for (const Complex& v : values_) {
        sum += std::norm(v);
    }
    return std::sqrt(sum * axis_I_.spacing * axis_II_.spacing);
}

double Distribution1D::mean() const
{
    double m = 0.0;
    for (std::size_t j = 0; j < coordinate.size(); ++j) {
        m += coordinate[j] * probability[j];
    }
    return m;
}

double Distribution1D::stddev() const
{
    const double m = mean();
    double v = 0.0;
    for (std::size_t j = 0; j < coordinate.size(); ++j) {
        const double d = coordinate[j] - m;
        v += d * d * probability[j];
    }
    return std::sqrt(v);
}

GridFunction build_epr_state(const EprConfig& cfg)
{
    cfg.validate();
    const Axis axis{cfg.spacing(), cfg.points};
    const double four_sigma2 = 4.0 * cfg.sigma * cfg.sigma;
    const double lambda = cfg.envelope_width();
    const double four_lambda2 = 4.0 * lambda * lambda;

    std::vector<Complex> values(cfg.points * cfg.points);
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg.points; ++i) {
        const double x1 = axis.coord(i);
        for (std::size_t j = 0; j < cfg.points; ++j) {
            const double x2 = axis.coord(j);
            const double rel = x1 - x2 + cfg.x0;
            const double com = 0.5 * (x1 + x2);
            const double v = std::exp(-rel * rel / four_sigma2 - com * com / four_lambda2);
            values[i * cfg.points + j] = v;
            sum += v * v;
        }
    }
    const double scale = 1.0 / std::sqrt(sum * axis.spacing * axis.spacing);
    for (Complex& v : values) {
        v *= scale;
    }
    return GridFunction(std::move(values), axis, axis, Domain::Position);
}

GridFunction to_momentum(const GridFunction& psi)
{
    if (psi.domain() != Domain::Position) {
        throw InvalidArgument("to_momentum: input is already in momentum space");
    }
    const Axis& ax1 = psi.axis_I();
    const Axis& ax2 = psi.axis_II();
    const std::size_t n1 = ax1.points;
    const std::size_t n2 = ax2.points;
    if (n1 % 2 != 0 || n2 % 2 != 0) {
        throw InvalidArgument("to_momentum: grid needs an even number of points per axis");
    }

    // Centered indices turn exp(-i p_k x_j) into (-1)^(j + k + N/2) times the
    // standard DFT kernel.
    std::vector<Complex> buf(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            buf[i * n2 + j] = psi.at(i, j) * (sign_of_parity(i) * sign_of_parity(j));
        }
    }

    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(n1), static_cast<int>(n2), data, data, FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    const double scale = ax1.spacing / std::sqrt(2.0 * pi * hbar) * ax2.spacing / std::sqrt(2.0 * pi * hbar);
    const double global = sign_of_parity(n1 / 2) * sign_of_parity(n2 / 2);
    for (std::size_t k = 0; k < n1; ++k) {
        for (std::size_t l = 0; l < n2; ++l) {
            buf[k * n2 + l] *= scale * global * sign_of_parity(k) * sign_of_parity(l);
        }
    }
    const Axis p1{2.0 * pi * hbar / (static_cast<double>(n1) * ax1.spacing), n1};
    const Axis p2{2.0 * pi * hbar / (static_cast<double>(n2) * ax2.spacing), n2};
    return GridFunction(std::move(buf), p1, p2, Domain::Momentum);
}

namespace {

Distribution1D slice_row(const GridFunction& f, std::size_t row)
{
    const Axis& ax2 = f.axis_II();
    Distribution1D d;
    d.slice_coordinate = f.axis_I().coord(row);
    d.coordinate.resize(ax2.points);
    d.probability.resize(ax2.points);
    double total = 0.0;
    for (std::size_t j = 0; j < ax2.points; ++j) {
        d.coordinate[j] = ax2.coord(j);
        d.probability[j] = std::norm(f.at(row, j));
        total += d.probability[j];
    }
    if (!(total > 0.0)) {
        throw InvalidArgument("conditioning slice carries zero probability");
    }
    for (double& p : d.probability) {
        p /= total;
    }
    return d;
}

}  // namespace

Distribution1D condition_on_position(const GridFunction& psi, double x)
{
    if (psi.domain() != Domain::Position) {
        throw InvalidArgument("condition_on_position: expects a position-space function");
    }
    return slice_row(psi, psi.axis_I().nearest(x));
}

Distribution1D condition_on_momentum(const GridFunction& psi, double p)
{
    const GridFunction mom = (psi.domain() == Domain::Momentum) ? psi : to_momentum(psi);
    const double nyquist = -mom.axis_I().lower();  // pi hbar / h
    if (!(std::abs(p) < nyquist)) {
        throw InvalidArgument("condition_on_momentum: |p| = " + std::to_string(std::abs(p)) +
                              " not below the Nyquist bound " + std::to_string(nyquist));
    }
    return slice_row(mom, mom.axis_I().nearest(p));
}

Moments relative_offset_moments(const GridFunction& psi, double x0)
{
    const Axis& ax1 = psi.axis_I();
    const Axis& ax2 = psi.axis_II();
    double total = 0.0;
    double first = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < ax1.points; ++i) {
        for (std::size_t j = 0; j < ax2.points; ++j) {
            const double w = std::norm(psi.at(i, j));
            const double u = ax1.coord(i) - ax2.coord(j) + x0;
            total += w;
            first += w * u;
            second += w * u * u;
        }
    }
    const double mean = first / total;
    return {mean, std::sqrt(std::max(0.0, second / total - mean * mean))};
}

}  // namespace eprlab::eprpair
