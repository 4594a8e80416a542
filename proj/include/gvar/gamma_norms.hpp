#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "gvar/core/grouping.hpp"
#include "gvar/core/measure.hpp"
#include "gvar/core/normed_space.hpp"
#include "gvar/expectation.hpp"
#include "gvar/random.hpp"

namespace gvar {

enum class SearchMode {
    automatic,  ///< fast_path for gamma-variation; exhaustive (N <= 12) or greedy otherwise
    fast_path,  ///< finest covering grouping only
    exhaustive, ///< every set partition (optionally every partial collection)
    contiguous, ///< interval partitions only
    greedy      ///< pairwise block merging from the finest grouping
};

std::string to_string(SearchMode m);
SearchMode search_mode_from_string(const std::string& s);

struct SearchOptions {
    SearchMode mode = SearchMode::automatic;
    /// Also search collections that leave atoms out (exhaustive/contiguous only).
    bool include_partial = false;
};

/// A variation norm, the second moment attaining it, and where it was attained.
struct NormReport {
    double norm = 0.0;
    SumEstimate estimate;
    Grouping grouping;
    SearchMode mode = SearchMode::fast_path;
    std::uint64_t groupings_searched = 0;
};

/// d x N map whose Gaussian second moment is the grouping's moment:
/// column n = F(B) sqrt(mu(A_n)) / mu(B) for the block B holding atom n, zero if dropped.
/// Applied to the same standard Gaussian draws as the finest grouping, it realizes the
/// block Gaussians gamma_B = sum_{n in B} g_n sqrt(mu(A_n) / mu(B)).
Eigen::MatrixXd grouping_gaussian_map(const VectorMeasure& F, const Grouping& grouping);

/// E||sum_B gamma_B F(B)/sqrt(mu(B))||^2 for one grouping, on shared draws.
SumEstimate grouping_gaussian_moment(const VectorMeasure& F, const Grouping& grouping,
                                     const NormedSpace& X, const GaussianDraws& draws,
                                     bool allow_closed_form = true);

/// ||F||_{V_gamma}: supremum over disjoint collections of the normalized Gaussian sum.
NormReport gamma_variation_norm(const VectorMeasure& F, const NormedSpace& X,
                                const RandomStream& stream, std::uint64_t samples,
                                SearchOptions search = {});

/// ||T||_{gamma_infinity} = (E||T g||^2)^{1/2}, g standard Gaussian on the normalized
/// indicator basis.
NormReport gamma_summing_norm(const DiscreteOperator& T, const NormedSpace& X,
                              const RandomStream& stream, std::uint64_t samples);

struct DualityVerdict {
    NormReport variation;
    NormReport summing;
    Comparison comparison;
    bool passed = false;
};

/// ||F||_{V_gamma} against ||T_F||_{gamma_infinity} on independent substreams 0 and 1.
DualityVerdict verify_duality(const VectorMeasure& F, const NormedSpace& X,
                              const RandomStream& stream, std::uint64_t samples, double z = 3.0);

/// sum_n ||F(A_n)||; the finest partition attains the supremum.
double total_variation_norm(const VectorMeasure& F, const NormedSpace& X);

// ---------------------------------------------------------------------------
// Randomized variation over a generic value space.

/// A value space for randomized variation: atom values live in some normed space V and
/// the space can evaluate E_r||sum_B r_B G(B)||_V^2 for a grouping. Spaces whose V is a
/// Hilbert space expose the Gram matrix of atom values, enabling closed-form search.
template <typename V>
concept RandomizedValueSpace = requires(const V& v, const Grouping& g) {
    { v.atoms() } -> std::convertible_to<Index>;
    { v.rademacher_moment(g) } -> std::same_as<SumEstimate>;
    { v.hilbert_gram() } -> std::same_as<std::optional<Eigen::MatrixXd>>;
};

/// Atom values in R^d (columns of a d x N matrix) with an l_p norm.
class PlainValues {
public:
    PlainValues(Eigen::MatrixXd values, NormedSpace space, RandomStream stream = {},
                std::uint64_t samples = 0);

    Index atoms() const { return values_.cols(); }
    Eigen::MatrixXd block_sums(const Grouping& g) const;
    SumEstimate rademacher_moment(const Grouping& g) const;
    std::optional<Eigen::MatrixXd> hilbert_gram() const;

private:
    Eigen::MatrixXd values_;
    NormedSpace space_;
    RandomStream stream_;
    std::uint64_t samples_;
};

/// Atom values in an abstract Hilbert space, known only through their Gram matrix.
class GramValues {
public:
    explicit GramValues(Eigen::MatrixXd gram);

    Index atoms() const { return gram_.rows(); }
    SumEstimate rademacher_moment(const Grouping& g) const;
    std::optional<Eigen::MatrixXd> hilbert_gram() const { return gram_; }

private:
    Eigen::MatrixXd gram_;
};

/// sum_B ||sum_{n in B} y_n||^2 computed from the Gram matrix of the y_n.
double gram_block_moment(const Eigen::MatrixXd& gram, const Grouping& g);

namespace detail {

struct SearchResult {
    Grouping grouping;
    double value = 0.0;
    std::uint64_t searched = 0;
    SearchMode mode = SearchMode::fast_path;
};

using Objective = std::function<double(const Grouping&)>;

/// Maximizes objective over the groupings selected by options (mode must be resolved).
SearchResult search_groupings(Index atoms, const SearchOptions& options, const Objective& objective);

/// Greedy pairwise merging driven by block cross sums of a Gram matrix.
SearchResult greedy_gram_search(const Eigen::MatrixXd& gram);

SearchMode resolve_randomized_mode(SearchMode mode, Index atoms);

} // namespace detail

/// ||G||_{V^r}: supremum over disjoint collections of (E||sum r_B G(B)||^2)^{1/2}.
///
/// The supremum is located on search_space and its attaining grouping re-evaluated on
/// report_space. Passing the same space twice gives the plain search; passing disjoint
/// halves of an empirical ensemble removes the upward bias of maximizing noisy estimates.
template <RandomizedValueSpace V>
NormReport randomized_variation_norm(const V& search_space, const V& report_space,
                                     SearchOptions options = {})
{
    const Index atoms = search_space.atoms();
    if (report_space.atoms() != atoms)
        throw ValidationError("search and report spaces have different atom counts");
    options.mode = detail::resolve_randomized_mode(options.mode, atoms);

    detail::SearchResult best;
    const auto gram = search_space.hilbert_gram();
    if (gram && options.mode == SearchMode::greedy) {
        best = detail::greedy_gram_search(*gram);
    } else if (gram) {
        best = detail::search_groupings(atoms, options, [&](const Grouping& g) {
            return gram_block_moment(*gram, g);
        });
    } else {
        best = detail::search_groupings(atoms, options, [&](const Grouping& g) {
            return search_space.rademacher_moment(g).value;
        });
    }
    NormReport report;
    report.estimate = report_space.rademacher_moment(best.grouping);
    report.norm = report.estimate.root();
    report.grouping = best.grouping;
    report.mode = best.mode;
    report.groupings_searched = best.searched;
    return report;
}

template <RandomizedValueSpace V>
NormReport randomized_variation_norm(const V& values, SearchOptions options = {})
{
    return randomized_variation_norm(values, values, options);
}

} // namespace gvar
