#include "gvar/experiments/suites.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "gvar/embeddings.hpp"
#include "gvar/gamma_norms.hpp"
#include "gvar/io.hpp"
#include "gvar/stochastic.hpp"

namespace gvar::experiments {

namespace {

std::string pad(std::size_t i, int width = 3)
{
    std::string s = std::to_string(i);
    return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

NormedSpace norm_for(const json& norm, Index dim) { return io::parse_norm(norm, dim); }

VectorMeasure random_measure(Index dim, Index atoms, const RandomStream& stream)
{
    return measure_from_density(random_step_function(dim, atoms, stream));
}

SumEstimate exact(double value) { return {value, 0.0, 0, EstimateMethod::exact_hilbert}; }

const VectorMeasure require_measure(const ExperimentConfig& c, const char* command)
{
    if (!c.partition) throw ConfigError("partition", std::string("is required by ") + command);
    if (!c.space) throw ConfigError("space", std::string("is required by ") + command);
    auto m = c.measure();
    if (!m) throw ConfigError("input", std::string("is required by ") + command);
    return *m;
}

StepFunction require_density(const ExperimentConfig& c, const char* command)
{
    if (!c.partition) throw ConfigError("partition", std::string("is required by ") + command);
    if (!c.space) throw ConfigError("space", std::string("is required by ") + command);
    if (c.measure_values) throw ConfigError("input", std::string(command) + " needs a density, not measure values");
    auto phi = c.density();
    if (!phi) throw ConfigError("input", std::string("a density is required by ") + command);
    return *phi;
}

SuiteReport start(const std::string& name, const ExperimentConfig& c)
{
    SuiteReport r;
    r.suite = name;
    r.config = c.echo;
    return r;
}

CheckRecord exactness_record(std::string name, double value, double expected, double tolerance)
{
    CheckRecord r;
    r.name = std::move(name);
    r.values = {{"value", value}, {"expected", expected}, {"gap", value - expected}};
    r.passed = std::abs(value - expected) <= tolerance;
    if (!r.passed)
        r.detail = r.name + ": value = " + format_number(value) + ", expected = " + format_number(expected) +
                   ", combined std error = 0";
    return r;
}

// --------------------------------------------------------------------------

SuiteReport suite_duality(const ExperimentConfig& c)
{
    auto report = start("thm-2-3", c);
    const auto samples = c.engine.samples;
    std::size_t passed = 0, total = 0;

    auto run_one = [&](const std::string& name, const VectorMeasure& F, const NormedSpace& X,
                       const RandomStream& stream) {
        const auto v = verify_duality(F, X, stream, samples, c.engine.z);
        auto rec = comparison_record(name, "variation_moment", v.variation.estimate, "summing_moment",
                                     v.summing.estimate, v.comparison);
        report.checks.push_back(std::move(rec));
        ++total;
        passed += v.passed;
    };

    if (c.has_input()) {
        const auto F = require_measure(c, "thm-2-3");
        run_one("configured " + c.space->name(), F, *c.space, c.stream());
    } else {
        const auto instances = suite_uint(c, "instances", 100);
        const auto norms = suite_norms(c, "norms", {"l1", "linf"});
        const auto dims = suite_indices(c, "dims", {2, 3});
        const auto atoms = suite_indices(c, "atoms", {2, 3, 4, 5, 6, 7, 8});
        for (std::uint64_t i = 0; i < instances; ++i) {
            const auto& norm = norms[i % norms.size()];
            const Index d = dims[(i / norms.size()) % dims.size()];
            const Index N = atoms[(i / (norms.size() * dims.size())) % atoms.size()];
            const auto X = norm_for(norm, d);
            const auto stream = c.stream().substream(i);
            const auto F = random_measure(d, N, stream.substream(0));
            run_one("instance-" + pad(i) + " " + X.name() + " d=" + std::to_string(d) + " N=" + std::to_string(N),
                    F, X, stream.substream(1));
        }
    }
    report.results = {{"instances", total}, {"consistent", passed}};
    return report;
}

SuiteReport suite_norm_identity(const ExperimentConfig& c)
{
    auto report = start("thm-3-3", c);
    const auto paths = c.engine.paths;
    const auto samples = c.engine.samples;
    json rows = json::array();

    auto run_one = [&](const std::string& name, const StepFunction& phi, const NormedSpace& X,
                       const RandomStream& stream) {
        const auto r = verify_norm_identity(phi, X, paths, samples, stream, c.engine.z, c.engine.search);
        report.checks.push_back(comparison_record(name + " gamma=randomized", "gamma_moment",
                                                  r.gamma_variation.estimate, "randomized_moment",
                                                  r.randomized.estimate, r.gamma_vs_randomized));
        report.checks.push_back(comparison_record(name + " gamma=integral", "gamma_moment",
                                                  r.gamma_variation.estimate, "integral_moment", r.integral,
                                                  r.gamma_vs_integral));
        report.checks.push_back(comparison_record(name + " randomized=integral", "randomized_moment",
                                                  r.randomized.estimate, "integral_moment", r.integral,
                                                  r.randomized_vs_integral));
        rows.push_back({{"name", name},
                        {"gamma_variation", io::to_json(r.gamma_variation)},
                        {"randomized_variation", io::to_json(r.randomized)},
                        {"integral", io::to_json(r.integral)}});
    };

    if (c.has_input()) {
        run_one("configured " + c.space->name(), require_density(c, "thm-3-3"), *c.space, c.stream());
    } else {
        const auto instances = suite_uint(c, "instances", 20);
        const auto norms = suite_norms(c, "norms", {"l1", "l2", "linf", json{{"lp", 3.0}}});
        const auto dims = suite_indices(c, "dims", {2, 3});
        const auto atoms = suite_indices(c, "atoms", {2, 3, 4, 5});
        for (std::uint64_t i = 0; i < instances; ++i) {
            const Index d = dims[(i / norms.size()) % dims.size()];
            const Index N = atoms[(i / (norms.size() * dims.size())) % atoms.size()];
            const auto X = norm_for(norms[i % norms.size()], d);
            const auto stream = c.stream().substream(i);
            const auto phi = random_step_function(d, N, stream.substream(0));
            run_one("instance-" + pad(i) + " " + X.name() + " d=" + std::to_string(d) + " N=" + std::to_string(N),
                    phi, X, stream.substream(1));
        }
    }
    report.results = {{"instances", std::move(rows)}};
    return report;
}

SuiteReport suite_embedding(const ExperimentConfig& c, EmbeddingDirection direction)
{
    const bool type2 = direction == EmbeddingDirection::type2;
    auto report = start(type2 ? "cor-2-5" : "cor-2-6", c);
    const auto trials = suite_uint(c, "trials", 1000);
    const auto trial_samples = suite_uint(c, "trial_samples", 20000);
    const Index dim = static_cast<Index>(suite_uint(c, "dim", 2));
    const Index atoms = static_cast<Index>(suite_uint(c, "atoms", 4));
    const auto norms = type2 ? suite_norms(c, "norms", {"l2", "linf", json{{"lp", 3.0}}})
                             : suite_norms(c, "norms", {"l2", "l1", json{{"lp", 1.5}}});
    json summaries = json::array();

    for (std::size_t k = 0; k < norms.size(); ++k) {
        const auto X = norm_for(norms[k], dim);
        const auto r = run_embedding_trials(direction, X, atoms, trials, c.stream().substream(k), trial_samples);
        summaries.push_back({{"space", X.name()},
                             {"direction", to_string(direction)},
                             {"trials", r.trials.size()},
                             {"worst_ratio", r.worst_ratio},
                             {"worst_std_error", r.worst_std_error},
                             {"worst_trial", r.worst_trial},
                             {"mean_ratio", r.mean_ratio}});
        if (X.is_hilbert()) {
            double deviation = 0.0;
            for (const auto& t : r.trials) deviation = std::max(deviation, std::abs(t.ratio - 1.0));
            CheckRecord rec;
            rec.name = X.name() + " isometry";
            rec.values = {{"max_abs_ratio_minus_one", deviation}, {"trials", static_cast<double>(trials)}};
            rec.passed = deviation <= 1e-9;
            if (!rec.passed)
                rec.detail = rec.name + ": worst ratio deviates from 1 by " + format_number(deviation) +
                             ", combined std error = 0";
            report.checks.push_back(std::move(rec));
        } else if (type2) {
            CheckRecord rec;
            rec.name = X.name() + " empirical type-2 constant";
            rec.values = {{"worst_ratio", r.worst_ratio}, {"mean_ratio", r.mean_ratio}};
            rec.std_errors = {{"worst_ratio", r.worst_std_error}};
            rec.informational = true;
            report.checks.push_back(std::move(rec));
        } else {
            // every trial must satisfy ratio >= 1 - z * sigma
            CheckRecord rec;
            rec.name = X.name() + " cotype-2 lower bound";
            std::size_t violations = 0;
            double worst_margin = INFINITY;
            std::size_t worst = 0;
            for (std::size_t t = 0; t < r.trials.size(); ++t) {
                const auto& tr = r.trials[t];
                const double margin = tr.ratio - (1.0 - c.engine.z * tr.std_error);
                if (margin < 0) ++violations;
                if (margin < worst_margin) {
                    worst_margin = margin;
                    worst = t;
                }
            }
            rec.values = {{"min_ratio", r.worst_ratio},
                          {"mean_ratio", r.mean_ratio},
                          {"violations", static_cast<double>(violations)},
                          {"worst_margin_ratio", r.trials[worst].ratio}};
            rec.std_errors = {{"min_ratio", r.worst_std_error}, {"worst_margin_ratio", r.trials[worst].std_error}};
            rec.passed = violations == 0;
            if (!rec.passed)
                rec.detail = rec.name + ": trial " + std::to_string(worst) + " ratio = " +
                             format_number(r.trials[worst].ratio) + ", bound = 1, combined std error = " +
                             format_number(r.trials[worst].std_error) + " (" + std::to_string(violations) +
                             " of " + std::to_string(trials) + " trials below 1 - z*sigma)";
            report.checks.push_back(std::move(rec));
        }
    }

    // canonical input: uniform weights on two atoms, phi = (e1, e2)
    {
        const auto X = type2 ? NormedSpace::linf(2) : NormedSpace::l1(2);
        const StepFunction phi(AtomPartition::uniform(2), Eigen::MatrixXd::Identity(2, 2));
        const auto t = embedding_ratio(phi, X, c.stream().substream(norms.size()), c.engine.samples);
        auto check = [&](const std::string& label, double expected) {
            CheckRecord rec;
            rec.name = X.name() + " d=2 canonical ratio vs " + label;
            rec.values = {{"ratio", t.ratio}, {"expected", expected}, {"gap", t.ratio - expected}};
            rec.std_errors = {{"ratio", t.std_error}};
            rec.passed = std::abs(t.ratio - expected) <= c.engine.z * t.std_error;
            if (!rec.passed)
                rec.detail = rec.name + ": ratio = " + format_number(t.ratio) + ", expected = " +
                             format_number(expected) + ", combined std error = " + format_number(t.std_error);
            report.checks.push_back(std::move(rec));
        };
        check("sqrt(1+2/pi)", std::sqrt(kMaxOfTwoSquaresMoment));
        // linf: ||sum_n g_n sqrt(w_n) e_n||^2 = max(g_1^2, g_2^2) / 2
        if (type2) check("sqrt((1+2/pi)/2)", std::sqrt(kMaxOfTwoSquaresMoment / 2));
    }

    if (type2) {
        // all norms on R^1 coincide, so the ratio is exactly one
        const auto r = run_embedding_trials(direction, NormedSpace::linf(1), atoms,
                                            std::min<std::uint64_t>(trials, 100),
                                            c.stream().substream(norms.size() + 1), trial_samples);
        double deviation = 0.0;
        for (const auto& t : r.trials) deviation = std::max(deviation, std::abs(t.ratio - 1.0));
        report.checks.push_back(exactness_record("linf d=1 ratio", 1.0 + deviation, 1.0, 1e-12));
    }
    report.results = {{"spaces", std::move(summaries)}};
    return report;
}

SuiteReport suite_unbounded_variation(const ExperimentConfig& c)
{
    auto report = start("example-3-4", c);
    const auto grid = suite_indices(c, "atoms", {4, 16, 64, 100, 10000});
    const auto empirical_max = static_cast<Index>(suite_uint(c, "empirical_max_atoms", 100));
    const auto paths = c.engine.paths;
    json atoms_out = json::array(), tv_out = json::array(), rv_out = json::array(), rv_exact_out = json::array();

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Index N = grid[k];
        std::vector<double> boundaries(static_cast<std::size_t>(N) + 1);
        for (Index n = 0; n <= N; ++n) boundaries[static_cast<std::size_t>(n)] = static_cast<double>(n) / N;
        const auto space = AtomPartition::from_boundaries(boundaries);
        const auto tag = "N=" + std::to_string(N);

        // ||W(A_n)||_{L2(Omega)} = sqrt(mu(A_n))
        const VectorMeasure surrogate(space, space.weights().array().sqrt().matrix().transpose());
        const double tv = total_variation_norm(surrogate, NormedSpace::l2(1));
        report.checks.push_back(exactness_record(tag + " total variation", tv, std::sqrt(static_cast<double>(N)), 1e-9));
        atoms_out.push_back(N);
        tv_out.push_back(tv);

        if (N > empirical_max) {
            rv_out.push_back(nullptr);
            rv_exact_out.push_back(nullptr);
            continue;
        }
        // independent increments: Gram matrix diag(mu)
        const GramValues analytic(Eigen::MatrixXd(space.weights().asDiagonal()));
        const auto exact_rv = randomized_variation_norm(analytic, c.engine.search);
        report.checks.push_back(exactness_record(tag + " randomized variation (analytic)", exact_rv.estimate.value, 1.0, 1e-9));
        rv_exact_out.push_back(exact_rv.norm);

        const StepFunction one(space, Eigen::MatrixXd::Ones(1, N));
        const auto W = sample_brownian(space, paths, c.stream().substream(k));
        const auto G = induced_randomized_measure(one, W, NormedSpace::l2(1));
        const auto rv = empirical_randomized_variation(G, c.engine.search, c.stream().substream(k).substream(1));
        report.checks.push_back(comparison_record(tag + " randomized variation (empirical)", "moment", rv.estimate,
                                                  "expected", exact(1.0),
                                                  compare_estimates(rv.estimate, exact(1.0), c.engine.z)));
        rv_out.push_back(rv.norm);
    }
    report.results = {{"atoms", atoms_out},
                      {"total_variation", tv_out},
                      {"randomized_variation", rv_out},
                      {"randomized_variation_analytic", rv_exact_out}};
    return report;
}

SuiteReport suite_finest_partition(const ExperimentConfig& c)
{
    auto report = start("finest-partition", c);
    const auto measures = suite_uint(c, "measures", 10);
    const Index N = static_cast<Index>(suite_uint(c, "atoms", 6));
    const Index d = static_cast<Index>(suite_uint(c, "dim", 3));
    const auto norms = suite_norms(c, "norms", {"l1", "l2", "linf"});
    const auto groupings = enumerate_groupings(N, GroupingFamily::all, Coverage::covering_only);

    auto run_one = [&](const std::string& name, const VectorMeasure& F, const NormedSpace& X,
                       const RandomStream& stream) {
        const GaussianDraws draws(X.is_hilbert() ? 0 : F.atoms(), X.is_hilbert() ? 0 : c.engine.samples, stream);
        const auto finest = grouping_gaussian_moment(F, Grouping::finest(F.atoms()), X, draws);
        CheckRecord rec;
        rec.name = name;
        std::size_t violations = 0;
        double worst_excess = -INFINITY;
        const Grouping* worst = nullptr;
        SumEstimate worst_estimate;
        Comparison worst_cmp;
        for (const auto& g : groupings) {
            const auto est = grouping_gaussian_moment(F, g, X, draws);
            const auto cmp = dominated_by(est, finest, c.engine.z);
            if (!cmp.consistent) ++violations;
            const double excess = cmp.gap - cmp.tolerance;
            if (excess > worst_excess) {
                worst_excess = excess;
                worst = &g;
                worst_estimate = est;
                worst_cmp = cmp;
            }
        }
        rec.values = {{"finest_moment", finest.value},
                      {"closest_grouping_moment", worst_estimate.value},
                      {"groupings", static_cast<double>(groupings.size())},
                      {"violations", static_cast<double>(violations)}};
        rec.std_errors = {{"finest_moment", finest.std_error}, {"closest_grouping_moment", worst_estimate.std_error}};
        rec.passed = violations == 0;
        if (!rec.passed)
            rec.detail = rec.name + ": grouping " + io::to_json(*worst).dump() + " moment = " +
                         format_number(worst_estimate.value) + ", finest = " + format_number(finest.value) +
                         ", combined std error = " + format_number(worst_cmp.combined_std_error);
        report.checks.push_back(std::move(rec));
    };

    for (std::uint64_t i = 0; i < measures; ++i) {
        const auto stream = c.stream().substream(i);
        const auto F = random_measure(d, N, stream.substream(0));
        for (std::size_t k = 0; k < norms.size(); ++k) {
            const auto X = norm_for(norms[k], d);
            run_one("measure-" + pad(i) + " " + X.name(), F, X, stream.substream(1 + k));
        }
    }
    report.results = {{"groupings_per_measure", groupings.size()}, {"atoms", N}};
    return report;
}

SuiteReport suite_randomisation(const ExperimentConfig& c)
{
    auto report = start("randomisation", c);
    const auto count = suite_uint(c, "densities", 10);
    const Index N = static_cast<Index>(suite_uint(c, "atoms", 8));
    const Index d = static_cast<Index>(suite_uint(c, "dim", 2));
    const Index max_blocks = static_cast<Index>(suite_uint(c, "max_blocks", 8));
    const Index paths = static_cast<Index>(suite_uint(c, "paths", 4096));
    const auto norms = suite_norms(c, "norms", {"l1", "l2", "linf", json{{"lp", 4.0}}});

    std::vector<Grouping> groupings;
    for (auto& g : enumerate_groupings(N, GroupingFamily::all, Coverage::covering_only))
        if (g.size() <= max_blocks) groupings.push_back(std::move(g));

    for (std::uint64_t i = 0; i < count; ++i) {
        const auto stream = c.stream().substream(i);
        const auto X = norm_for(norms[i % norms.size()], d);
        const auto phi = random_step_function(d, N, stream.substream(0));
        const auto W = sample_brownian(phi.space(), paths, stream.substream(1));
        const auto G = induced_randomized_measure(phi, W, X);

        CheckRecord rec;
        rec.name = "density-" + pad(i) + " " + X.name();
        std::size_t violations = 0;
        double worst_ratio = -1.0;
        RandomisationVerdict worst;
        const Grouping* worst_grouping = nullptr;
        for (const auto& g : groupings) {
            const auto v = check_randomisation_identity(G, g, c.engine.z);
            if (!v.passed) ++violations;
            const double ratio = std::abs(v.comparison.gap) / v.comparison.tolerance;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst = v;
                worst_grouping = &g;
            }
        }
        rec.values = {{"randomized_moment", worst.randomized.value},
                      {"plain_moment", worst.plain.value},
                      {"worst_gap_over_tolerance", worst_ratio},
                      {"groupings", static_cast<double>(groupings.size())},
                      {"violations", static_cast<double>(violations)}};
        rec.std_errors = {{"randomized_moment", worst.randomized.std_error}, {"plain_moment", worst.plain.std_error}};
        rec.passed = violations == 0;
        if (!rec.passed)
            rec.detail = rec.name + ": grouping " + io::to_json(*worst_grouping).dump() + " randomized = " +
                         format_number(worst.randomized.value) + ", plain = " + format_number(worst.plain.value) +
                         ", combined std error = " + format_number(worst.comparison.combined_std_error);
        report.checks.push_back(std::move(rec));
    }
    report.results = {{"groupings_per_density", groupings.size()}, {"paths", paths}};
    return report;
}

} // namespace

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"thm-2-3",     "thm-3-3",          "cor-2-5",      "cor-2-6",
                                                "example-3-4", "finest-partition", "randomisation"};
    return names;
}

SuiteReport run_suite(const std::string& name, const ExperimentConfig& config)
{
    if (name == "thm-2-3") return suite_duality(config);
    if (name == "thm-3-3") return suite_norm_identity(config);
    if (name == "cor-2-5") return suite_embedding(config, EmbeddingDirection::type2);
    if (name == "cor-2-6") return suite_embedding(config, EmbeddingDirection::cotype2);
    if (name == "example-3-4") return suite_unbounded_variation(config);
    if (name == "finest-partition") return suite_finest_partition(config);
    if (name == "randomisation") return suite_randomisation(config);
    std::string known;
    for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("suite", "unknown suite '" + name + "' (expected one of " + known + ")");
}

SuiteReport run_norms(const ExperimentConfig& c)
{
    auto report = start("norms", c);
    const auto F = require_measure(c, "norms");
    const auto& X = *c.space;
    const auto stream = c.stream();

    const auto variation = gamma_variation_norm(F, X, stream.substream(0), c.engine.samples, c.engine.search);
    const auto summing = gamma_summing_norm(operator_from_measure(F), X, stream.substream(1), c.engine.samples);
    const PlainValues values(F.values(), X, stream.substream(2), c.engine.samples);
    const auto randomized = randomized_variation_norm(values, c.engine.search);
    const double tv = total_variation_norm(F, X);

    report.results = {{"gamma_variation", io::to_json(variation)},
                      {"gamma_summing", io::to_json(summing)},
                      {"randomized_variation", io::to_json(randomized)},
                      {"total_variation", tv},
                      {"space", X.name()},
                      {"atoms", F.atoms()}};
    if (auto phi = c.density(); phi && !c.measure_values) report.results["l2_bochner"] = l2_bochner_norm(*phi, X);

    report.checks.push_back(comparison_record("gamma variation = gamma summing", "variation_moment", variation.estimate,
                                              "summing_moment", summing.estimate,
                                              compare_estimates(variation.estimate, summing.estimate, c.engine.z)));
    std::vector<Index> all(static_cast<std::size_t>(F.atoms()));
    for (Index n = 0; n < F.atoms(); ++n) all[static_cast<std::size_t>(n)] = n;
    const double total_mass_norm = X.norm(evaluate_measure(F, all));
    CheckRecord dominates;
    dominates.name = "total variation >= ||F(S)||";
    dominates.values = {{"total_variation", tv}, {"total_mass_norm", total_mass_norm}};
    dominates.passed = tv >= total_mass_norm * (1.0 - 1e-12);
    if (!dominates.passed)
        dominates.detail = dominates.name + ": total_variation = " + format_number(tv) + ", ||F(S)|| = " +
                           format_number(total_mass_norm) + ", combined std error = 0";
    report.checks.push_back(std::move(dominates));
    return report;
}

SuiteReport run_integrate(const ExperimentConfig& c, const std::optional<std::string>& dump_path)
{
    auto report = start("integrate", c);
    const auto phi = require_density(c, "integrate");
    const auto& X = *c.space;
    const auto paths = c.engine.paths;
    const auto W = sample_brownian(phi.space(), paths, c.stream().substream(0));

    std::vector<Index> all(static_cast<std::size_t>(phi.atoms()));
    for (Index n = 0; n < phi.atoms(); ++n) all[static_cast<std::size_t>(n)] = n;
    const Eigen::MatrixXd integral = stochastic_integral(phi, W, all);
    const auto moment = monte_carlo_estimate(sample_moments(X.column_squared_norms(integral.transpose())));
    const auto T = operator_from_measure(measure_from_density(phi));
    const auto summing = gamma_summing_norm(T, X, c.stream().substream(1), c.engine.samples);
    report.checks.push_back(comparison_record("isometry: E||int phi dW||^2 = gamma-summing moment", "integral_moment",
                                              moment, "summing_moment", summing.estimate,
                                              compare_estimates(moment, summing.estimate, c.engine.z)));

    const double M = static_cast<double>(W.paths());
    json variances = json::array();
    for (Index n = 0; n < W.atoms(); ++n) {
        const auto col = W.increments().col(n).array();
        const double variance = col.square().mean();
        const double w = phi.space().weight(n);
        const double tolerance = 5.0 * std::sqrt(2.0 / M) * w;
        CheckRecord rec;
        rec.name = "atom-" + pad(static_cast<std::size_t>(n)) + " variance";
        rec.values = {{"empirical_variance", variance}, {"weight", w}, {"tolerance", tolerance}};
        rec.passed = std::abs(variance - w) <= tolerance;
        if (!rec.passed)
            rec.detail = rec.name + ": empirical_variance = " + format_number(variance) + ", weight = " +
                         format_number(w) + ", combined std error = " + format_number(std::sqrt(2.0 / M) * w);
        report.checks.push_back(std::move(rec));
        variances.push_back(variance);
    }

    Eigen::VectorXd mean = integral.colwise().mean().transpose();
    report.results = {{"paths", W.paths()},
                      {"integral_moment", io::to_json(moment)},
                      {"gamma_summing", io::to_json(summing)},
                      {"integral_mean", std::vector<double>(mean.data(), mean.data() + mean.size())},
                      {"atom_variances", variances}};
    if (dump_path) {
        std::ofstream out(*dump_path, std::ios::binary);
        if (!out) throw Error("cannot open dump file '" + *dump_path + "'");
        io::write_ensemble(out, W);
    }
    return report;
}

std::string render_svg(const SuiteReport& report)
{
    if (report.suite != "example-3-4" || !report.results.contains("atoms")) return {};
    std::vector<double> x, tv, rv;
    for (const auto& v : report.results["atoms"]) x.push_back(v.get<double>());
    for (const auto& v : report.results["total_variation"]) tv.push_back(v.get<double>());
    for (const auto& v : report.results["randomized_variation"]) rv.push_back(v.is_null() ? NAN : v.get<double>());
    return render_line_chart("Brownian measure: total vs randomized variation", "atoms N", x,
                             {{"total variation", tv, "#c0392b"}, {"randomized variation", rv, "#2471a3"}});
}

} // namespace gvar::experiments
