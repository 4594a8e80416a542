#include "gvar/gamma_norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gvar/errors.hpp"

namespace gvar {

std::string to_string(SearchMode m)
{
    switch (m) {
    case SearchMode::automatic: return "automatic";
    case SearchMode::fast_path: return "fast_path";
    case SearchMode::exhaustive: return "exhaustive";
    case SearchMode::contiguous: return "contiguous";
    case SearchMode::greedy: return "greedy";
    }
    return "unknown";
}

SearchMode search_mode_from_string(const std::string& s)
{
    for (auto m : {SearchMode::automatic, SearchMode::fast_path, SearchMode::exhaustive,
                   SearchMode::contiguous, SearchMode::greedy})
        if (to_string(m) == s) return m;
    throw ValidationError("unknown search mode '" + s +
                          "' (expected automatic, fast_path, exhaustive, contiguous or greedy)");
}

namespace {

double tie_tolerance(double reference) { return 1e-12 * std::max(1.0, std::abs(reference)); }

void check_space(const VectorMeasure& F, const NormedSpace& X)
{
    if (F.dim() != X.dim())
        throw ValidationError("measure has dimension " + std::to_string(F.dim()) +
                              ", space has dimension " + std::to_string(X.dim()));
}

Grouping merged(const Grouping& g, std::size_t b, std::size_t c)
{
    auto blocks = g.blocks();
    blocks[b].insert(blocks[b].end(), blocks[c].begin(), blocks[c].end());
    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(c));
    return {std::move(blocks), g.atom_count()};
}

} // namespace

Eigen::MatrixXd grouping_gaussian_map(const VectorMeasure& F, const Grouping& grouping)
{
    if (grouping.atom_count() != F.atoms())
        throw ValidationError("grouping and measure have different atom counts");
    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(F.dim(), F.atoms());
    for (const auto& block : grouping.blocks()) {
        const double mass = F.space().mass(block);
        const Eigen::VectorXd value = evaluate_measure(F, block);
        for (Index n : block) map.col(n) = value * (std::sqrt(F.space().weight(n)) / mass);
    }
    return map;
}

SumEstimate grouping_gaussian_moment(const VectorMeasure& F, const Grouping& grouping,
                                     const NormedSpace& X, const GaussianDraws& draws,
                                     bool allow_closed_form)
{
    check_space(F, X);
    if (allow_closed_form && X.is_hilbert()) {
        double total = 0.0;
        for (const auto& block : grouping.blocks())
            total += evaluate_measure(F, block).squaredNorm() / F.space().mass(block);
        return {total, 0.0, 0, EstimateMethod::exact_hilbert};
    }
    return gaussian_moment(grouping_gaussian_map(F, grouping), X, draws, false);
}

namespace detail {

SearchMode resolve_randomized_mode(SearchMode mode, Index atoms)
{
    if (mode != SearchMode::automatic) return mode;
    return atoms <= grouping_cap(GroupingFamily::all, Coverage::covering_only)
               ? SearchMode::exhaustive
               : SearchMode::greedy;
}

namespace {

struct Best {
    std::optional<Grouping> grouping;
    double value = -std::numeric_limits<double>::infinity();

    void offer(const Grouping& g, double v)
    {
        if (!grouping || v > value + tie_tolerance(value) ||
            (std::abs(v - value) <= tie_tolerance(value) && precedes(g, *grouping))) {
            grouping = g;
            value = v;
        }
    }
};

SearchResult greedy_search(Index atoms, const Objective& objective)
{
    Grouping current = Grouping::finest(atoms);
    double value = objective(current);
    std::uint64_t searched = 1;
    while (current.size() > 1) {
        Best best;
        const auto K = static_cast<std::size_t>(current.size());
        for (std::size_t b = 0; b < K; ++b)
            for (std::size_t c = b + 1; c < K; ++c) {
                Grouping candidate = merged(current, b, c);
                best.offer(candidate, objective(candidate));
                ++searched;
            }
        if (!(best.value > value + tie_tolerance(value))) break;
        current = *best.grouping;
        value = best.value;
    }
    return {current, value, searched, SearchMode::greedy};
}

} // namespace

SearchResult search_groupings(Index atoms, const SearchOptions& options, const Objective& objective)
{
    switch (options.mode) {
    case SearchMode::fast_path: {
        Grouping finest = Grouping::finest(atoms);
        const double v = objective(finest);
        return {std::move(finest), v, 1, SearchMode::fast_path};
    }
    case SearchMode::greedy: return greedy_search(atoms, objective);
    case SearchMode::exhaustive:
    case SearchMode::contiguous: {
        const auto family = options.mode == SearchMode::exhaustive ? GroupingFamily::all
                                                                    : GroupingFamily::contiguous;
        const auto coverage = options.include_partial ? Coverage::any : Coverage::covering_only;
        Best best;
        std::uint64_t searched = 0;
        for_each_grouping(atoms, family, coverage, [&](const Grouping& g) {
            best.offer(g, objective(g));
            ++searched;
        });
        return {*best.grouping, best.value, searched, options.mode};
    }
    case SearchMode::automatic: break;
    }
    throw ValidationError("search mode must be resolved before searching");
}

SearchResult greedy_gram_search(const Eigen::MatrixXd& gram)
{
    const Index atoms = gram.rows();
    std::vector<Grouping::Block> blocks;
    for (Index n = 0; n < atoms; ++n) blocks.push_back({n});
    // cross(b, c) = sum over n in b, n' in c of gram(n, n')
    Eigen::MatrixXd cross = gram;
    double value = gram.trace();
    std::uint64_t searched = 1;
    while (blocks.size() > 1) {
        const auto K = static_cast<Index>(blocks.size());
        double best_gain = 0.0;
        Index best_b = -1, best_c = -1;
        for (Index b = 0; b < K; ++b)
            for (Index c = b + 1; c < K; ++c) {
                const double gain = 2.0 * cross(b, c);
                ++searched;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_b = b;
                    best_c = c;
                }
            }
        if (best_b < 0 || !(best_gain > tie_tolerance(value))) break;

        auto& target = blocks[static_cast<std::size_t>(best_b)];
        const auto& source = blocks[static_cast<std::size_t>(best_c)];
        target.insert(target.end(), source.begin(), source.end());
        blocks.erase(blocks.begin() + best_c);

        cross.row(best_b) += cross.row(best_c);
        cross.col(best_b) += cross.col(best_c);
        // drop row/column best_c
        const Index tail = K - best_c - 1;
        cross.block(best_c, 0, tail, K) = cross.block(best_c + 1, 0, tail, K).eval();
        cross.block(0, best_c, K, tail) = cross.block(0, best_c + 1, K, tail).eval();
        cross.conservativeResize(K - 1, K - 1);
        value += best_gain;
    }
    Grouping result(std::move(blocks), atoms);
    return {result, gram_block_moment(gram, result), searched, SearchMode::greedy};
}

} // namespace detail

NormReport gamma_variation_norm(const VectorMeasure& F, const NormedSpace& X,
                                const RandomStream& stream, std::uint64_t samples,
                                SearchOptions search)
{
    check_space(F, X);
    if (search.mode == SearchMode::automatic) search.mode = SearchMode::fast_path;

    std::optional<GaussianDraws> draws;
    if (!X.is_hilbert()) {
        if (samples < 2)
            throw ValidationError("insufficient samples: Monte Carlo needs at least 2 draws, got " +
                                  std::to_string(samples));
        draws.emplace(F.atoms(), samples, stream);
    }
    auto moment = [&](const Grouping& g) {
        return draws ? grouping_gaussian_moment(F, g, X, *draws)
                     : grouping_gaussian_moment(F, g, X, GaussianDraws(0, 0, stream));
    };

    const auto best = detail::search_groupings(F.atoms(), search, [&](const Grouping& g) {
        return moment(g).value;
    });
    NormReport report;
    report.estimate = moment(best.grouping);
    report.norm = report.estimate.root();
    report.grouping = best.grouping;
    report.mode = best.mode;
    report.groupings_searched = best.searched;
    return report;
}

NormReport gamma_summing_norm(const DiscreteOperator& T, const NormedSpace& X,
                              const RandomStream& stream, std::uint64_t samples)
{
    NormReport report;
    report.estimate = gaussian_sum_sq(T.columns(), X, stream, samples);
    report.norm = report.estimate.root();
    report.grouping = Grouping::finest(T.atoms());
    report.mode = SearchMode::fast_path;
    report.groupings_searched = 1;
    return report;
}

DualityVerdict verify_duality(const VectorMeasure& F, const NormedSpace& X,
                              const RandomStream& stream, std::uint64_t samples, double z)
{
    DualityVerdict v;
    v.variation = gamma_variation_norm(F, X, stream.substream(0), samples,
                                       {SearchMode::fast_path, false});
    v.summing = gamma_summing_norm(operator_from_measure(F), X, stream.substream(1), samples);
    v.comparison = compare_estimates(v.variation.estimate, v.summing.estimate, z);
    v.passed = v.comparison.consistent;
    return v;
}

double total_variation_norm(const VectorMeasure& F, const NormedSpace& X)
{
    check_space(F, X);
    double total = 0.0;
    for (Index n = 0; n < F.atoms(); ++n) total += X.norm(F.value(n));
    return total;
}

// ---------------------------------------------------------------------------

PlainValues::PlainValues(Eigen::MatrixXd values, NormedSpace space, RandomStream stream,
                         std::uint64_t samples)
    : values_(std::move(values)), space_(space), stream_(stream), samples_(samples)
{
    if (values_.cols() < 1) throw ValidationError("value family must be nonempty");
    if (values_.rows() != space_.dim())
        throw ValidationError("values have dimension " + std::to_string(values_.rows()) +
                              ", space has dimension " + std::to_string(space_.dim()));
}

Eigen::MatrixXd PlainValues::block_sums(const Grouping& g) const
{
    if (g.atom_count() != atoms()) throw ValidationError("grouping and values differ in atom count");
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(values_.rows(), g.size());
    for (Index b = 0; b < g.size(); ++b)
        for (Index n : g.blocks()[static_cast<std::size_t>(b)]) sums.col(b) += values_.col(n);
    return sums;
}

SumEstimate PlainValues::rademacher_moment(const Grouping& g) const
{
    return rademacher_sum_sq(block_sums(g), space_, stream_, samples_);
}

std::optional<Eigen::MatrixXd> PlainValues::hilbert_gram() const
{
    if (!space_.is_hilbert()) return std::nullopt;
    return Eigen::MatrixXd(values_.transpose() * values_);
}

GramValues::GramValues(Eigen::MatrixXd gram) : gram_(std::move(gram))
{
    if (gram_.rows() < 1 || gram_.rows() != gram_.cols())
        throw ValidationError("Gram matrix must be square and nonempty");
}

SumEstimate GramValues::rademacher_moment(const Grouping& g) const
{
    if (g.atom_count() != atoms()) throw ValidationError("grouping and values differ in atom count");
    return {gram_block_moment(gram_, g), 0.0, 0, EstimateMethod::exact_hilbert};
}

double gram_block_moment(const Eigen::MatrixXd& gram, const Grouping& g)
{
    double total = 0.0;
    for (const auto& block : g.blocks())
        for (Index i : block)
            for (Index j : block) total += gram(i, j);
    return total;
}

} // namespace gvar
