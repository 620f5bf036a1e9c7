#include "eprlab/spinlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "eprlab/errors.hpp"
#include "eprlab/measurement.hpp"

namespace eprlab::spinlab {

namespace {

int spin_value(double eigenvalue)
{
    return eigenvalue > 0.0 ? 1 : -1;
}

/// Outcome for a particle whose definite spin is s_z * z.
int definite_outcome(const Eigen::Vector3d& axis, double s_z, DefiniteRule rule, RandomStream& rng)
{
    const double projection = axis.z() * s_z;
    if (rule == DefiniteRule::DeterministicSign) {
        return projection >= 0.0 ? 1 : -1;
    }
    return rng.uniform() < 0.5 * (1.0 + projection) ? 1 : -1;
}

const qcore::LinearOperator& sigma_x_flip()
{
    static const qcore::LinearOperator op = qcore::pauli_x();
    return op;
}

/// Born-rule tables for "measure system I along `first`, then system II along
/// `second` on the collapsed remote state" starting from `psi`.
struct SequentialTables {
    std::vector<double> first_probs;
    std::vector<int> first_values;
    std::vector<std::vector<double>> second_probs;  // indexed by first outcome
    std::vector<int> second_values;
    std::vector<qcore::StateVector> remote;         // remote state per first outcome
};

SequentialTables prepare_sequential(const BipartiteState& psi, const qcore::LinearOperator& first,
                                    const qcore::LinearOperator& second)
{
    const measurement::ExpansionResult e = measurement::expand_bipartite(psi, first);
    const qcore::Eigensystem sys2 = qcore::eigensystem(second);
    SequentialTables t;
    for (const auto& space : sys2.spaces) {
        t.second_values.push_back(spin_value(space.eigenvalue));
    }
    for (std::size_t k = 0; k < e.outcomes.size(); ++k) {
        t.first_probs.push_back(e.outcomes[k].probability);
        t.first_values.push_back(spin_value(e.outcomes[k].eigenvalue));
        if (e.outcomes[k].probability > 0.0) {
            qcore::StateVector r = *measurement::remote_state(e, k);
            t.second_probs.push_back(qcore::born_probabilities(sys2, r));
            t.remote.push_back(std::move(r));
        } else {
            // never sampled; keep indices aligned
            t.second_probs.emplace_back(sys2.spaces.size(), 0.0);
            t.remote.push_back(qcore::StateVector::basis(psi.dim_II(), 0));
        }
    }
    return t;
}

struct Tally {
    std::int64_t product_sum = 0;
    std::uint64_t electron_up = 0;
    std::uint64_t positron_down = 0;
    std::uint64_t samples = 0;

    void add(const PairOutcome& o)
    {
        product_sum += o.electron * o.positron;
        electron_up += (o.electron > 0) ? 1u : 0u;
        positron_down += (o.positron < 0) ? 1u : 0u;
        ++samples;
    }
    Tally& operator+=(const Tally& other)
    {
        product_sum += other.product_sum;
        electron_up += other.electron_up;
        positron_down += other.positron_down;
        samples += other.samples;
        return *this;
    }
};

/// Runs `per_pair(rng)` n times, block b on rng.derive(b). Integer tallies make
/// the total independent of the worker count and scheduling order.
template <class PerPair>
Tally run_blocks(std::uint64_t n, const RandomStream& rng, SamplingOptions opts, const PerPair& per_pair)
{
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<Tally> tallies(blocks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
            RandomStream stream = rng.derive(b);
            const std::uint64_t count = std::min(kBlockSize, n - b * kBlockSize);
            Tally t;
            for (std::uint64_t i = 0; i < count; ++i) {
                t.add(per_pair(stream));
            }
            tallies[b] = t;
        }
    };
    unsigned workers = opts.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.workers;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(blocks, 1)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    Tally total;
    for (const auto& t : tallies) {
        total += t;
    }
    return total;
}

void require_samples(std::uint64_t n)
{
    if (n < 1) {
        throw InvalidArgument("sample count must be at least 1");
    }
}

}  // namespace

std::string model_name(const PairModel& model)
{
    return std::holds_alternative<QuantumEntangled>(model) ? "p1" : "p2";
}

std::string mode_name(SwitchMode mode)
{
    return mode == SwitchMode::PaperPrediction ? "paper-prediction" : "mechanistic";
}

AnalyzerSetting::AnalyzerSetting(const Eigen::Vector3d& direction) : dir_(direction)
{
    if (std::abs(dir_.norm() - 1.0) > 1e-12) {
        throw InvalidArgument("AnalyzerSetting: direction must be a unit vector");
    }
}

AnalyzerSetting AnalyzerSetting::from_angles(double polar, double azimuth)
{
    Eigen::Vector3d v(std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar));
    return AnalyzerSetting(v.normalized());
}

AnalyzerSetting AnalyzerSetting::from_degrees(double polar_deg, double azimuth_deg)
{
    constexpr double deg = std::numbers::pi / 180.0;
    return from_angles(polar_deg * deg, azimuth_deg * deg);
}

double CorrelationEstimate::std_error() const
{
    return std::sqrt(std::max(0.0, 1.0 - value * value) / static_cast<double>(samples));
}

BipartiteState singlet()
{
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix amps(2, 2);
    amps << 0.0, s, -s, 0.0;
    return BipartiteState(amps, {"up", "down"}, {"up", "down"});
}

bool draw_electron_up(RandomStream& rng)
{
    return rng.uniform() < 0.5;
}

PairOutcome sample_pair(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& b,
                        RandomStream& rng)
{
    if (const auto* definite = std::get_if<PreassignedDefinite>(&model)) {
        const double s_e = draw_electron_up(rng) ? 1.0 : -1.0;
        const int e = definite_outcome(a.direction(), s_e, definite->rule, rng);
        const int p = definite_outcome(b.direction(), -s_e, definite->rule, rng);
        return {e, p};
    }
    const auto electron = measurement::measure_subsystem(singlet(), qcore::spin_along(a.direction()), rng);
    const auto positron = qcore::measure_observable(qcore::spin_along(b.direction()), *electron.remote, rng);
    return {spin_value(electron.eigenvalue), spin_value(positron.eigenvalue)};
}

namespace {

Tally sample_correlation(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& b,
                         std::uint64_t n, const RandomStream& rng, SamplingOptions opts)
{
    if (const auto* definite = std::get_if<PreassignedDefinite>(&model)) {
        const DefiniteRule rule = definite->rule;
        const Eigen::Vector3d da = a.direction();
        const Eigen::Vector3d db = b.direction();
        return run_blocks(n, rng, opts, [&](RandomStream& s) {
            const double s_e = draw_electron_up(s) ? 1.0 : -1.0;
            const int e = definite_outcome(da, s_e, rule, s);
            const int p = definite_outcome(db, -s_e, rule, s);
            return PairOutcome{e, p};
        });
    }
    // Same draws as sample_pair, with the expansions hoisted out of the loop.
    const SequentialTables t =
        prepare_sequential(singlet(), qcore::spin_along(a.direction()), qcore::spin_along(b.direction()));
    return run_blocks(n, rng, opts, [&](RandomStream& s) {
        const std::size_t k = qcore::sample_index(t.first_probs, s.uniform());
        const std::size_t j = qcore::sample_index(t.second_probs[k], s.uniform());
        return PairOutcome{t.first_values[k], t.second_values[j]};
    });
}

}  // namespace

CorrelationEstimate correlation(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& b,
                                std::uint64_t n, const RandomStream& rng, SamplingOptions opts)
{
    require_samples(n);
    const Tally t = sample_correlation(model, a, b, n, rng, opts);
    return {static_cast<double>(t.product_sum) / static_cast<double>(t.samples), t.samples, t.product_sum,
            t.electron_up};
}

ChshResult chsh(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& a2,
                const AnalyzerSetting& b, const AnalyzerSetting& b2, std::uint64_t n, const RandomStream& rng,
                SamplingOptions opts)
{
    require_samples(n);
    ChshResult r{};
    r.terms[0] = correlation(model, a, b, n, rng.derive(0), opts);
    r.terms[1] = correlation(model, a, b2, n, rng.derive(1), opts);
    r.terms[2] = correlation(model, a2, b, n, rng.derive(2), opts);
    r.terms[3] = correlation(model, a2, b2, n, rng.derive(3), opts);
    r.S = r.terms[0].value - r.terms[1].value + r.terms[2].value + r.terms[3].value;
    double var = 0.0;
    for (const auto& term : r.terms) {
        var += term.std_error() * term.std_error();
    }
    r.std_error = std::sqrt(var);
    return r;
}

double analytic_correlation(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& b)
{
    const Eigen::Vector3d& da = a.direction();
    const Eigen::Vector3d& db = b.direction();
    if (std::holds_alternative<QuantumEntangled>(model)) {
        return -da.dot(db);
    }
    if (std::get<PreassignedDefinite>(model).rule == DefiniteRule::ProbabilisticCosine) {
        return -da.z() * db.z();
    }
    auto sgn = [](double v) { return v >= 0.0 ? 1.0 : -1.0; };
    return 0.5 * (sgn(da.z()) * sgn(-db.z()) + sgn(-da.z()) * sgn(db.z()));
}

SwitchReport switch_protocol(const PairModel& model, std::uint64_t n, SwitchMode mode, const RandomStream& rng,
                             SamplingOptions opts)
{
    require_samples(n);
    const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
    Tally t;
    if (const auto* definite = std::get_if<PreassignedDefinite>(&model)) {
        const DefiniteRule rule = definite->rule;
        if (mode == SwitchMode::PaperPrediction) {
            // electron keeps its preassigned value; every positron reads down
            t = run_blocks(n, rng, opts, [&](RandomStream& s) {
                return PairOutcome{draw_electron_up(s) ? 1 : -1, -1};
            });
        } else {
            t = run_blocks(n, rng, opts, [&](RandomStream& s) {
                const double s_e = draw_electron_up(s) ? 1.0 : -1.0;
                // device reads the positron along z and flips up to down
                const int before = definite_outcome(z, -s_e, rule, s);
                const double s_p = before > 0 ? -1.0 : -s_e;
                const int positron = definite_outcome(z, s_p, rule, s);
                const int electron = definite_outcome(z, s_e, rule, s);
                return PairOutcome{electron, positron};
            });
        }
    } else if (mode == SwitchMode::PaperPrediction) {
        // stated outcome for an entangled pair: electron up, positron down, every pair
        t = run_blocks(n, rng, opts, [](RandomStream&) { return PairOutcome{1, -1}; });
    } else {
        // positron (system II) measured first along z, then the electron on the
        // collapsed state
        const auto sz = qcore::pauli_z();
        const SequentialTables tables = prepare_sequential(singlet().swapped(), sz, sz);
        const qcore::Eigensystem sz_sys = qcore::eigensystem(sz);
        std::vector<std::vector<double>> detect_probs;
        for (std::size_t k = 0; k < tables.first_values.size(); ++k) {
            const qcore::StateVector measured = qcore::StateVector::basis(2, tables.first_values[k] > 0 ? 0 : 1);
            const qcore::StateVector after_device =
                tables.first_values[k] > 0
                    ? qcore::StateVector(qcore::apply(sigma_x_flip(), measured))
                    : measured;
            detect_probs.push_back(qcore::born_probabilities(sz_sys, after_device));
        }
        std::vector<int> sz_values;
        for (const auto& space : sz_sys.spaces) {
            sz_values.push_back(spin_value(space.eigenvalue));
        }
        t = run_blocks(n, rng, opts, [&](RandomStream& s) {
            const std::size_t k = qcore::sample_index(tables.first_probs, s.uniform());
            const std::size_t d = qcore::sample_index(detect_probs[k], s.uniform());
            const std::size_t e = qcore::sample_index(tables.second_probs[k], s.uniform());
            return PairOutcome{tables.second_values[e], sz_values[d]};
        });
    }
    return {t.samples, static_cast<double>(t.electron_up) / static_cast<double>(t.samples),
            static_cast<double>(t.positron_down) / static_cast<double>(t.samples), mode};
}

std::array<double, 2> switch_paper_table(const PairModel& model)
{
    if (std::holds_alternative<QuantumEntangled>(model)) {
        return {1.0, 1.0};
    }
    return {0.5, 1.0};
}

BipartiteState untangle(const BipartiteState& psi, RandomStream& rng)
{
    if (psi.dim_I() != 2 || psi.dim_II() != 2 ||
        qcore::overlap_magnitude(singlet().flatten(), psi.flatten()) < 1.0 - 1e-9) {
        throw InvalidArgument("untangle: input is not the singlet");
    }
    CMatrix amps = CMatrix::Zero(2, 2);
    if (draw_electron_up(rng)) {
        amps(0, 1) = 1.0;
    } else {
        amps(1, 0) = 1.0;
    }
    return BipartiteState(amps, {"up", "down"}, {"up", "down"});
}

PairOutcome measure_product_pair(const BipartiteState& product, const AnalyzerSetting& a,
                                 const AnalyzerSetting& b, DefiniteRule rule, RandomStream& rng)
{
    const CMatrix& m = product.amplitudes();
    if (m.rows() != 2 || m.cols() != 2) {
        throw DimensionMismatch("measure_product_pair: expects a two-spin state");
    }
    double s_e = 0.0;
    if (std::abs(std::abs(m(0, 1)) - 1.0) < 1e-9) {
        s_e = 1.0;
    } else if (std::abs(std::abs(m(1, 0)) - 1.0) < 1e-9) {
        s_e = -1.0;
    } else {
        throw InvalidArgument("measure_product_pair: expects up/down or down/up along z");
    }
    const int e = definite_outcome(a.direction(), s_e, rule, rng);
    const int p = definite_outcome(b.direction(), -s_e, rule, rng);
    return {e, p};
}

}  // namespace eprlab::spinlab
