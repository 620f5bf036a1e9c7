#pragma once

// Spin-1/2 pair experiments on the electron/positron singlet.
//
// Two source models are compared:
//   QuantumEntangled     the pair stays in the singlet until the electron is
//                        measured; the positron is then measured on the
//                        collapsed remote state.
//   PreassignedDefinite  each pair leaves the source as up/down or down/up
//                        along z with probability 1/2; each particle is then
//                        measured on its own definite state.
//
// Bulk estimators split the n samples into fixed blocks of kBlockSize pairs.
// Block b draws from rng.derive(b), so totals do not depend on the number of
// worker threads. The stream passed in only serves as the key and is not
// advanced by the bulk estimators.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <variant>

#include "eprlab/bipartite.hpp"
#include "eprlab/random.hpp"

namespace eprlab::spinlab {

using qcore::BipartiteState;

inline constexpr std::uint64_t kBlockSize = 1u << 16;

/// Outcome rule for a particle in a definite state s = +/-z measured along a.
enum class DefiniteRule {
    DeterministicSign,    // sign(a . s), ties at a . s = 0 go to +1
    ProbabilisticCosine,  // +1 with probability (1 + a . s) / 2 (extension)
};

struct QuantumEntangled {};
struct PreassignedDefinite {
    DefiniteRule rule = DefiniteRule::DeterministicSign;
};
using PairModel = std::variant<QuantumEntangled, PreassignedDefinite>;

/// "p1" / "p2"
std::string model_name(const PairModel& model);

class AnalyzerSetting {
public:
    /// Throws InvalidArgument unless |direction| = 1 within 1e-12.
    explicit AnalyzerSetting(const Eigen::Vector3d& direction);
    /// Polar and azimuthal angles in radians.
    static AnalyzerSetting from_angles(double polar, double azimuth);
    static AnalyzerSetting from_degrees(double polar_deg, double azimuth_deg);

    const Eigen::Vector3d& direction() const { return dir_; }

private:
    Eigen::Vector3d dir_;
};

struct PairOutcome {
    int electron;  // +1 up, -1 down
    int positron;
};

enum class SwitchMode { PaperPrediction, Mechanistic };
std::string mode_name(SwitchMode mode);

struct SwitchReport {
    std::uint64_t n_pairs;
    double p_electron_up;
    double p_positron_down;
    SwitchMode mode;
};

struct CorrelationEstimate {
    double value;          // mean of electron * positron
    std::uint64_t samples;
    std::int64_t sum;      // exact sum of +/-1 products
    std::uint64_t electron_up;

    /// sqrt((1 - E^2) / n)
    double std_error() const;
};

struct ChshResult {
    std::array<CorrelationEstimate, 4> terms;  // (a,b), (a,b2), (a2,b), (a2,b2)
    double S;
    double std_error;
};

struct SamplingOptions {
    unsigned workers = 0;  // 0: hardware concurrency
};

/// (0, 1/sqrt2, -1/sqrt2, 0) over (upup, updown, downup, downdown);
/// system I is the electron.
BipartiteState singlet();

/// One pair through the full state-vector path (expansion, collapse, Born rule).
PairOutcome sample_pair(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& b,
                        RandomStream& rng);

CorrelationEstimate correlation(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& b,
                                std::uint64_t n, const RandomStream& rng, SamplingOptions opts = {});

/// S = E(a,b) - E(a,b2) + E(a2,b) + E(a2,b2); term t uses rng.derive(t).
ChshResult chsh(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& a2,
                const AnalyzerSetting& b, const AnalyzerSetting& b2, std::uint64_t n, const RandomStream& rng,
                SamplingOptions opts = {});

/// Infinite-sample correlation: -a.b for the singlet, the average over the two
/// preassignments for the definite model.
double analytic_correlation(const PairModel& model, const AnalyzerSetting& a, const AnalyzerSetting& b);

/// Spin-switch run: a device flips every spin-up positron to spin-down before
/// detection, then the electron is measured along z.
SwitchReport switch_protocol(const PairModel& model, std::uint64_t n, SwitchMode mode, const RandomStream& rng,
                             SamplingOptions opts = {});

/// Probabilities claimed for the switch run: (1, 1) entangled, (1/2, 1) definite.
std::array<double, 2> switch_paper_table(const PairModel& model);

/// Singlet -> up/down or down/up product, 1/2 each. Throws InvalidArgument
/// unless psi equals the singlet up to a global phase within 1e-9.
BipartiteState untangle(const BipartiteState& psi, RandomStream& rng);

/// The preassignment draw shared by untangle and the definite model:
/// true means electron up, positron down.
bool draw_electron_up(RandomStream& rng);

/// Outcomes for a definite product pair (as produced by untangle) under `rule`.
PairOutcome measure_product_pair(const BipartiteState& product, const AnalyzerSetting& a,
                                 const AnalyzerSetting& b, DefiniteRule rule, RandomStream& rng);

}  // namespace eprlab::spinlab
