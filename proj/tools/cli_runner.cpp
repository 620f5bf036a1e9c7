#include "cli_runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "eprlab/bipartite.hpp"
#include "eprlab/eprpair.hpp"
#include "eprlab/errors.hpp"
#include "eprlab/hydrogen.hpp"
#include "eprlab/spinlab.hpp"

namespace eprlab::cli {

using nlohmann::ordered_json;

namespace {

constexpr const char* kOutputDirEnv = "EPRLAB_OUTPUT_DIR";

std::string num(double v)
{
    // shortest text that round-trips
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ordered_json complex_json(std::complex<double> z)
{
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

ordered_json config_json(const ExperimentConfig& cfg)
{
    ordered_json j;
    j["subcommand"] = cfg.subcommand;
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    j["model"] = cfg.model;
    j["rule"] = cfg.rule;
    j["mode"] = cfg.mode;
    ordered_json angles = ordered_json::array();
    for (const auto& [polar, azimuth] : cfg.angles) {
        angles.push_back({polar, azimuth});
    }
    j["angles"] = angles;
    if (cfg.r_max) {
        j["r_max"] = *cfg.r_max;
    }
    if (cfg.points) {
        j["points"] = *cfg.points;
    }
    j["n_max"] = cfg.n_max;
    if (cfg.extent) {
        j["extent"] = *cfg.extent;
    }
    if (cfg.grid_points) {
        j["grid_points"] = *cfg.grid_points;
    }
    j["sigma"] = cfg.sigma;
    j["x0"] = cfg.x0;
    j["condition_x"] = cfg.condition_x;
    if (cfg.condition_p) {
        j["condition_p"] = *cfg.condition_p;
    }
    j["format"] = cfg.format;
    return j;
}

spinlab::PairModel make_model(const ExperimentConfig& cfg)
{
    if (cfg.model == "p1") {
        return spinlab::QuantumEntangled{};
    }
    spinlab::PreassignedDefinite p2;
    p2.rule = (cfg.rule == "probabilistic") ? spinlab::DefiniteRule::ProbabilisticCosine
                                            : spinlab::DefiniteRule::DeterministicSign;
    return p2;
}

spinlab::AnalyzerSetting setting(const std::pair<double, double>& angles)
{
    return spinlab::AnalyzerSetting::from_degrees(angles.first, angles.second);
}

struct Artifact {
    ordered_json results;
    ordered_json statistics;
    std::string csv;
};

std::string render(const ExperimentConfig& cfg, const Artifact& a)
{
    if (cfg.format == "csv") {
        return a.csv;
    }
    ordered_json doc;
    doc["config"] = config_json(cfg);
    doc["results"] = a.results;
    doc["statistics"] = a.statistics;
    return doc.dump(2) + "\n";
}

// --- subcommands ---

Artifact run_hydrogen(const ExperimentConfig& cfg)
{
    Artifact a;
    std::ostringstream csv;
    csv << "quantity,n,l,m,n2,l2,m2,re,im,reference\n";

    auto grid_for = [&](int n) {
        const hydrogen::RadialGrid def = hydrogen::RadialGrid::default_for(n);
        return hydrogen::RadialGrid(cfg.r_max.value_or(def.r_max()), cfg.points.value_or(def.points()));
    };

    ordered_json radius = ordered_json::array();
    double worst_r = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
        for (int l = 0; l < n; ++l) {
            const double q = hydrogen::expect_r(n, l, grid_for(n));
            const double ref = hydrogen::expect_r_closed_form(n, l);
            const double rel = std::abs(q - ref) / ref;
            worst_r = std::max(worst_r, rel);
            radius.push_back({{"n", n}, {"l", l}, {"quadrature", q}, {"closed_form", ref}, {"relative_error", rel}});
            csv << "expect_r," << n << ',' << l << ",0,,,," << num(q) << ",0," << num(ref) << '\n';
        }
    }

    const hydrogen::RadialGrid g1 = grid_for(1);
    const auto bare = hydrogen::expect_radial_p_ground(g1);
    const auto herm = hydrogen::expect_radial_p_ground_hermitized(g1);
    csv << "radial_p_bare,1,0,0,,,," << num(bare.real()) << ',' << num(bare.imag()) << ',' << num(hbar / bohr_radius)
        << '\n';
    csv << "radial_p_hermitized,1,0,0,,,," << num(herm.real()) << ',' << num(herm.imag()) << ",0\n";

    // orthonormality over n <= 3 on a grid fine enough for the most compact orbital
    std::vector<hydrogen::Orbital> orbitals;
    for (int n = 1; n <= 3; ++n) {
        for (int l = 0; l < n; ++l) {
            for (int m = -l; m <= l; ++m) {
                orbitals.emplace_back(n, l, m);
            }
        }
    }
    const hydrogen::RadialGrid og(40.0 * 9.0 * bohr_radius, 4096 * 9 + 1);
    ordered_json ortho = ordered_json::array();
    double worst_ortho = 0.0;
    const Eigen::MatrixXcd gram = hydrogen::overlap_matrix(orbitals, og);
    for (std::size_t i = 0; i < orbitals.size(); ++i) {
        const auto& oa = orbitals[i];
        for (std::size_t k = 0; k < orbitals.size(); ++k) {
            const auto& ob = orbitals[k];
            const auto v = gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            const bool same = oa.n() == ob.n() && oa.l() == ob.l() && oa.m() == ob.m();
            worst_ortho = std::max(worst_ortho, std::abs(v - std::complex<double>(same ? 1.0 : 0.0)));
            ortho.push_back({{"a", {oa.n(), oa.l(), oa.m()}}, {"b", {ob.n(), ob.l(), ob.m()}}, {"re", v.real()},
                             {"im", v.imag()}});
            csv << "overlap," << oa.n() << ',' << oa.l() << ',' << oa.m() << ',' << ob.n() << ',' << ob.l() << ','
                << ob.m() << ',' << num(v.real()) << ',' << num(v.imag()) << ',' << (same ? 1 : 0) << '\n';
        }
    }

    a.results["expect_r"] = radius;
    a.results["radial_momentum_ground"] = {{"bare", complex_json(bare)},
                                           {"hermitized", complex_json(herm)},
                                           {"reference_bare", complex_json({0.0, hbar / bohr_radius})}};
    a.results["orthonormality"] = ortho;
    a.statistics = {{"max_expect_r_relative_error", worst_r},
                    {"radial_p_bare_relative_error",
                     std::abs(bare - std::complex<double>(0.0, hbar / bohr_radius)) / (hbar / bohr_radius)},
                    {"max_orthonormality_error", worst_ortho}};
    a.csv = csv.str();
    return a;
}

Artifact run_commutator(const ExperimentConfig& cfg)
{
    const double extent = cfg.extent.value_or(20.0);
    const std::size_t points = cfg.grid_points.value_or(201);
    const auto grid = qcore::UniformGrid1D::spanning(-extent / 2.0, extent / 2.0, points);
    const auto report = hydrogen::grid_commutator_check(
        grid, [](double x) { return std::complex<double>(std::exp(-0.5 * x * x), 0.0); });

    Artifact a;
    a.results = {{"test_function", "exp(-x^2/2)"},
                 {"spacing", report.spacing},
                 {"max_interior_residual", report.max_interior_residual},
                 {"refined_spacing", report.spacing / 2.0},
                 {"refined_residual", report.refined_residual},
                 {"error_constant", report.error_constant}};
    a.results["convergence_order"] =
        report.convergence_order ? ordered_json(*report.convergence_order) : ordered_json(nullptr);
    a.statistics = {{"expected_order", 2.0}};
    std::ostringstream csv;
    csv << "spacing,max_interior_residual,refined_residual,convergence_order,error_constant\n";
    csv << num(report.spacing) << ',' << num(report.max_interior_residual) << ',' << num(report.refined_residual)
        << ',' << (report.convergence_order ? num(*report.convergence_order) : std::string()) << ','
        << num(report.error_constant) << '\n';
    a.csv = csv.str();
    return a;
}

ordered_json distribution_json(const eprpair::Distribution1D& d)
{
    ordered_json pts = ordered_json::array();
    for (std::size_t j = 0; j < d.coordinate.size(); ++j) {
        pts.push_back({d.coordinate[j], d.probability[j]});
    }
    return pts;
}

Artifact run_epr(const ExperimentConfig& cfg)
{
    eprpair::EprConfig ec;
    ec.x0 = cfg.x0;
    ec.sigma = cfg.sigma;
    ec.extent = cfg.extent.value_or(40.0);
    ec.points = cfg.grid_points.value_or(512);

    const auto psi = eprpair::build_epr_state(ec);
    const auto mom = eprpair::to_momentum(psi);
    const double dp = mom.axis_I().spacing;
    const double p = cfg.condition_p.value_or(4.0 * dp);

    const auto pos = eprpair::condition_on_position(psi, cfg.condition_x);
    const auto mdist = eprpair::condition_on_momentum(mom, p);
    const auto rel = eprpair::relative_offset_moments(psi, ec.x0);
    const double lambda = ec.envelope_width();

    Artifact a;
    a.results["envelope_width"] = lambda;
    a.results["position"] = {{"requested_x", cfg.condition_x},
                             {"slice_x", pos.slice_coordinate},
                             {"mean", pos.mean()},
                             {"expected_mean", pos.slice_coordinate + ec.x0},
                             {"stddev", pos.stddev()},
                             {"distribution", distribution_json(pos)}};
    a.results["momentum"] = {{"requested_p", p},
                             {"slice_p", mdist.slice_coordinate},
                             {"mean", mdist.mean()},
                             {"expected_mean", -mdist.slice_coordinate},
                             {"stddev", mdist.stddev()},
                             {"distribution", distribution_json(mdist)}};
    a.results["relative_offset"] = {{"mean", rel.mean}, {"stddev", rel.stddev}};
    a.statistics = {
        {"position_norm", psi.norm()},
        {"momentum_norm", mom.norm()},
        {"parseval_error", std::abs(psi.norm() - mom.norm())},
        {"position_mean_error", std::abs(pos.mean() - (pos.slice_coordinate + ec.x0))},
        {"position_mean_tolerance", ec.sigma / 10.0},
        {"momentum_mean_error", std::abs(mdist.mean() + mdist.slice_coordinate)},
        {"momentum_mean_tolerance", 1.0 / (10.0 * lambda)},
    };

    const auto& chosen = (cfg.distribution == "momentum") ? mdist : pos;
    std::ostringstream csv;
    csv << "coordinate,probability\n";
    for (std::size_t j = 0; j < chosen.coordinate.size(); ++j) {
        csv << num(chosen.coordinate[j]) << ',' << num(chosen.probability[j]) << '\n';
    }
    a.csv = csv.str();
    return a;
}

Artifact run_singlet_correlation(const ExperimentConfig& cfg)
{
    const auto model = make_model(cfg);
    const RandomStream root(cfg.seed);
    Artifact a;
    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    csv << "a_polar,a_azimuth,b_polar,b_azimuth,samples,correlation,std_error,analytic,electron_up_fraction\n";
    double worst_z = 0.0;
    for (std::size_t i = 0; i + 1 < cfg.angles.size(); i += 2) {
        const auto sa = setting(cfg.angles[i]);
        const auto sb = setting(cfg.angles[i + 1]);
        const auto est = spinlab::correlation(model, sa, sb, cfg.samples, root.derive(i / 2), {cfg.workers});
        const double analytic = spinlab::analytic_correlation(model, sa, sb);
        const double up = static_cast<double>(est.electron_up) / static_cast<double>(est.samples);
        const double err = est.std_error();
        if (err > 0.0) {
            worst_z = std::max(worst_z, std::abs(est.value - analytic) / err);
        }
        rows.push_back({{"a", {cfg.angles[i].first, cfg.angles[i].second}},
                        {"b", {cfg.angles[i + 1].first, cfg.angles[i + 1].second}},
                        {"samples", est.samples},
                        {"correlation", est.value},
                        {"std_error", err},
                        {"analytic", analytic},
                        {"electron_up_fraction", up}});
        csv << num(cfg.angles[i].first) << ',' << num(cfg.angles[i].second) << ',' << num(cfg.angles[i + 1].first)
            << ',' << num(cfg.angles[i + 1].second) << ',' << est.samples << ',' << num(est.value) << ','
            << num(err) << ',' << num(analytic) << ',' << num(up) << '\n';
    }
    a.results["correlations"] = rows;
    a.statistics = {{"max_abs_z_score", worst_z}};
    a.csv = csv.str();
    return a;
}

Artifact run_chsh(const ExperimentConfig& cfg)
{
    const auto model = make_model(cfg);
    const auto sa = setting(cfg.angles[0]);
    const auto sa2 = setting(cfg.angles[1]);
    const auto sb = setting(cfg.angles[2]);
    const auto sb2 = setting(cfg.angles[3]);
    const auto r = spinlab::chsh(model, sa, sa2, sb, sb2, cfg.samples, RandomStream(cfg.seed), {cfg.workers});

    auto analytic_s = [&](const spinlab::PairModel& m) {
        return spinlab::analytic_correlation(m, sa, sb) - spinlab::analytic_correlation(m, sa, sb2) +
               spinlab::analytic_correlation(m, sa2, sb) + spinlab::analytic_correlation(m, sa2, sb2);
    };
    spinlab::PreassignedDefinite p2;
    p2.rule = cfg.rule == "probabilistic" ? spinlab::DefiniteRule::ProbabilisticCosine
                                          : spinlab::DefiniteRule::DeterministicSign;
    const double s_p1 = analytic_s(spinlab::QuantumEntangled{});
    const double s_p2 = analytic_s(p2);

    static const char* names[4] = {"E(a,b)", "E(a,b2)", "E(a2,b)", "E(a2,b2)"};
    Artifact a;
    ordered_json terms = ordered_json::array();
    std::ostringstream csv;
    csv << "term,samples,correlation,std_error\n";
    for (std::size_t t = 0; t < 4; ++t) {
        terms.push_back({{"term", names[t]},
                         {"samples", r.terms[t].samples},
                         {"correlation", r.terms[t].value},
                         {"std_error", r.terms[t].std_error()}});
        csv << names[t] << ',' << r.terms[t].samples << ',' << num(r.terms[t].value) << ','
            << num(r.terms[t].std_error()) << '\n';
    }
    csv << "S," << cfg.samples << ',' << num(r.S) << ',' << num(r.std_error) << '\n';
    a.results["terms"] = terms;
    a.results["S"] = r.S;
    a.results["abs_S"] = std::abs(r.S);
    a.results["std_error"] = r.std_error;
    a.statistics = {
        {"local_bound", 2.0},
        {"exceeds_local_bound", std::abs(r.S) > 2.0 + 5.0 * r.std_error},
        {"tsirelson_bound", 2.0 * std::sqrt(2.0)},
        {"analytic_S_p1", s_p1},
        {"analytic_S_p2", s_p2},
        // the two source models predict different S at these settings
        {"models_distinguishable", std::abs(std::abs(s_p1) - std::abs(s_p2)) > 5.0 * r.std_error},
    };
    a.csv = csv.str();
    return a;
}

spinlab::SwitchMode switch_mode(const std::string& s)
{
    return s == "mechanistic" ? spinlab::SwitchMode::Mechanistic : spinlab::SwitchMode::PaperPrediction;
}

Artifact run_switch(const ExperimentConfig& cfg)
{
    const auto model = make_model(cfg);
    const auto rep = spinlab::switch_protocol(model, cfg.samples, switch_mode(cfg.mode), RandomStream(cfg.seed),
                                              {cfg.workers});
    const auto table = spinlab::switch_paper_table(model);
    const double tol = 4.0 / std::sqrt(static_cast<double>(cfg.samples));
    const bool diverges = std::abs(rep.p_electron_up - table[0]) > tol || std::abs(rep.p_positron_down - table[1]) > tol;

    Artifact a;
    a.results = {{"n_pairs", rep.n_pairs},
                 {"p_electron_up", rep.p_electron_up},
                 {"p_positron_down", rep.p_positron_down},
                 {"mode", spinlab::mode_name(rep.mode)}};
    a.statistics = {{"paper_p_electron_up", table[0]},
                    {"paper_p_positron_down", table[1]},
                    {"tolerance", tol},
                    {"diverges_from_paper_prediction", diverges}};
    std::ostringstream csv;
    csv << "model,mode,n_pairs,p_electron_up,p_positron_down,paper_p_electron_up,paper_p_positron_down,diverges\n";
    csv << cfg.model << ',' << spinlab::mode_name(rep.mode) << ',' << rep.n_pairs << ',' << num(rep.p_electron_up)
        << ',' << num(rep.p_positron_down) << ',' << num(table[0]) << ',' << num(table[1]) << ','
        << (diverges ? "true" : "false") << '\n';
    a.csv = csv.str();
    return a;
}

Artifact run_untangle(const ExperimentConfig& cfg)
{
    const auto psi = spinlab::singlet();
    RandomStream rng(cfg.seed);
    const auto z = spinlab::AnalyzerSetting::from_degrees(0.0, 0.0);
    std::uint64_t up_down = 0;
    std::size_t max_rank = 0;
    std::int64_t product_sum = 0;
    for (std::uint64_t i = 0; i < cfg.samples; ++i) {
        const auto product = spinlab::untangle(psi, rng);
        up_down += std::abs(product.amplitudes()(0, 1)) > 0.5 ? 1u : 0u;
        max_rank = std::max(max_rank, qcore::schmidt_rank(product));
        const auto o = spinlab::measure_product_pair(product, z, z, spinlab::DefiniteRule::DeterministicSign, rng);
        product_sum += o.electron * o.positron;
    }
    const double frac = static_cast<double>(up_down) / static_cast<double>(cfg.samples);
    const double corr = static_cast<double>(product_sum) / static_cast<double>(cfg.samples);

    Artifact a;
    a.results = {{"samples", cfg.samples},
                 {"fraction_up_down", frac},
                 {"fraction_down_up", 1.0 - frac},
                 {"max_schmidt_rank", max_rank},
                 {"parallel_z_correlation", corr}};
    a.statistics = {{"tolerance", 4.0 / std::sqrt(static_cast<double>(cfg.samples))}};
    std::ostringstream csv;
    csv << "samples,fraction_up_down,fraction_down_up,max_schmidt_rank,parallel_z_correlation\n";
    csv << cfg.samples << ',' << num(frac) << ',' << num(1.0 - frac) << ',' << max_rank << ',' << num(corr) << '\n';
    a.csv = csv.str();
    return a;
}

void write_output(const ExperimentConfig& cfg, const std::string& text, std::ostream& out)
{
    std::string path = cfg.output;
    if (path.empty()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
            path = (std::filesystem::path(dir) / (cfg.subcommand + "." + cfg.format)).string();
        }
    }
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw OutputError("cannot open output file '" + path + "'");
    }
    f << text;
    f.flush();
    if (!f) {
        throw OutputError("failed writing output file '" + path + "'");
    }
}

}  // namespace

std::vector<std::pair<double, double>> parse_angles(const std::string& text)
{
    std::vector<std::pair<double, double>> out;
    if (text.empty()) {
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
            std::size_t used = 0;
            if (colon == std::string::npos) {
                const double polar = std::stod(item, &used);
                if (used != item.size()) {
                    throw std::invalid_argument(item);
                }
                out.emplace_back(polar, 0.0);
            } else {
                const std::string a = item.substr(0, colon);
                const std::string b = item.substr(colon + 1);
                std::size_t used_b = 0;
                const double polar = std::stod(a, &used);
                const double azimuth = std::stod(b, &used_b);
                if (used != a.size() || used_b != b.size()) {
                    throw std::invalid_argument(item);
                }
                out.emplace_back(polar, azimuth);
            }
        } catch (const std::exception&) {
            throw ValidationError("malformed angle '" + item + "'");
        }
    }
    return out;
}

void validate(const ExperimentConfig& cfg)
{
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), cfg.subcommand) == names.end()) {
        throw ValidationError("unknown subcommand '" + cfg.subcommand + "'");
    }
    if (cfg.samples < 1) {
        throw ValidationError("--samples must be at least 1");
    }
    if (cfg.model != "p1" && cfg.model != "p2") {
        throw ValidationError("--model must be p1 or p2");
    }
    if (cfg.rule != "deterministic" && cfg.rule != "probabilistic") {
        throw ValidationError("--rule must be deterministic or probabilistic");
    }
    if (cfg.mode != "paper-prediction" && cfg.mode != "mechanistic") {
        throw ValidationError("--mode must be paper-prediction or mechanistic");
    }
    if (cfg.format != "json" && cfg.format != "csv") {
        throw ValidationError("--format must be json or csv");
    }
    if (cfg.distribution != "position" && cfg.distribution != "momentum") {
        throw ValidationError("--distribution must be position or momentum");
    }
    if (cfg.r_max && !(*cfg.r_max > 0.0)) {
        throw ValidationError("--r-max must be positive");
    }
    if (cfg.points && *cfg.points < 16) {
        throw ValidationError("--points must be at least 16");
    }
    if (cfg.n_max < 1 || cfg.n_max > 12) {
        throw ValidationError("--n-max must be in [1, 12]");
    }
    if (cfg.extent && !(*cfg.extent > 0.0)) {
        throw ValidationError("--extent must be positive");
    }
    if (!(cfg.sigma > 0.0)) {
        throw ValidationError("--sigma must be positive");
    }
    if (cfg.subcommand == "chsh" && cfg.angles.size() != 4) {
        throw ValidationError("chsh needs --angles with four settings: a, a2, b, b2");
    }
    if (cfg.subcommand == "singlet-correlation" && (cfg.angles.size() < 2 || cfg.angles.size() % 2 != 0)) {
        throw ValidationError("singlet-correlation needs --angles with an even number of settings (a1,b1,...)");
    }
}

std::string execute(const ExperimentConfig& cfg)
{
    validate(cfg);
    try {
        Artifact a;
        if (cfg.subcommand == "hydrogen") {
            a = run_hydrogen(cfg);
        } else if (cfg.subcommand == "commutator-check") {
            a = run_commutator(cfg);
        } else if (cfg.subcommand == "epr") {
            a = run_epr(cfg);
        } else if (cfg.subcommand == "singlet-correlation") {
            a = run_singlet_correlation(cfg);
        } else if (cfg.subcommand == "chsh") {
            a = run_chsh(cfg);
        } else if (cfg.subcommand == "switch") {
            a = run_switch(cfg);
        } else {
            a = run_untangle(cfg);
        }
        return render(cfg, a);
    } catch (const std::invalid_argument& e) {
        // library precondition failures here come from user-supplied ranges
        throw ValidationError(e.what());
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    ExperimentConfig cfg;
    std::vector<std::string> angle_items;
    double r_max = 0.0;
    std::size_t points = 0;
    double extent = 0.0;
    std::size_t grid_points = 0;
    double condition_p = 0.0;

    CLI::App app{"eprlab: seeded experiments on measurement, entanglement and hydrogen expectation values"};
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.require_subcommand(1, 1);

    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--samples", cfg.samples, "pairs (or draws) per estimate");
    app.add_option("--model", cfg.model, "source model: p1 (entangled) or p2 (preassigned)");
    app.add_option("--rule", cfg.rule, "p2 outcome rule off the source axis: deterministic or probabilistic");
    app.add_option("--mode", cfg.mode, "switch mode: paper-prediction or mechanistic");
    app.add_option("--angles", angle_items, "analyzer settings: polar[:azimuth] in degrees, comma separated")
        ->delimiter(',');
    auto* r_max_opt = app.add_option("--r-max", r_max, "hydrogen radial grid extent (a_B)");
    auto* points_opt = app.add_option("--points", points, "hydrogen radial grid points");
    app.add_option("--n-max", cfg.n_max, "largest n in the <r> table");
    auto* extent_opt = app.add_option("--extent", extent, "grid extent L (epr, commutator-check)");
    auto* grid_points_opt = app.add_option("--grid-points", grid_points, "grid points per axis (epr, commutator-check)");
    app.add_option("--sigma", cfg.sigma, "EPR relative-coordinate width");
    app.add_option("--x0", cfg.x0, "EPR offset x0");
    app.add_option("--condition-x", cfg.condition_x, "epr: condition on x_I = value");
    auto* condition_p_opt = app.add_option("--condition-p", condition_p, "epr: condition on p_I = value");
    app.add_option("--distribution", cfg.distribution, "epr CSV content: position or momentum");
    app.add_option("--format", cfg.format, "output format: json or csv");
    app.add_option("--output", cfg.output, "output file ('-' for stdout)");
    app.add_option("--workers", cfg.workers, "sampling threads (0 = all cores); does not change results");

    static const char* descriptions[] = {
        "<r> table, radial-momentum expectation and orthonormality of hydrogen orbitals",
        "residual of [x, p] - i hbar on a Gaussian under grid refinement",
        "conditional position and momentum distributions of the EPR pair",
        "singlet correlation E(a,b) for pairs of analyzer settings",
        "CHSH statistic for settings a, a2, b, b2",
        "spin-switch protocol (paper-prediction or mechanistic)",
        "untangle transformation of the singlet into product pairs",
    };
    for (std::size_t i = 0; i < subcommands().size(); ++i) {
        app.add_subcommand(subcommands()[i], descriptions[i])->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (r_max_opt->count() > 0) {
        cfg.r_max = r_max;
    }
    if (points_opt->count() > 0) {
        cfg.points = points;
    }
    if (extent_opt->count() > 0) {
        cfg.extent = extent;
    }
    if (grid_points_opt->count() > 0) {
        cfg.grid_points = grid_points;
    }
    if (condition_p_opt->count() > 0) {
        cfg.condition_p = condition_p;
    }

    std::string text;
    try {
        std::string joined;
        for (const auto& item : angle_items) {
            joined += (joined.empty() ? "" : ",") + item;
        }
        cfg.angles = parse_angles(joined);
        text = execute(cfg);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 2;
    }
    try {
        write_output(cfg, text, out);
    } catch (const OutputError& e) {
        err << "I/O error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace eprlab::cli
