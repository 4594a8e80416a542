#include "gvar/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "gvar/errors.hpp"
#include "gvar/parallel.hpp"

namespace gvar {

namespace {

using StridedMap = Eigen::Map<const Eigen::MatrixXd, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
using ColumnMap = Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>>;

void check_range(Index begin, Index end, Index paths)
{
    if (begin < 0 || end > paths || begin >= end)
        throw ValidationError("path range [" + std::to_string(begin) + ", " + std::to_string(end) +
                              ") invalid for " + std::to_string(paths) + " paths");
}

void check_atoms(std::span<const Index> atom_set, Index atoms)
{
    std::vector<bool> seen(static_cast<std::size_t>(atoms), false);
    for (Index n : atom_set) {
        if (n < 0 || n >= atoms) throw ValidationError("atom index " + std::to_string(n) + " out of range");
        if (seen[static_cast<std::size_t>(n)])
            throw ValidationError("atom index " + std::to_string(n) + " repeated");
        seen[static_cast<std::size_t>(n)] = true;
    }
}

} // namespace

BrownianEnsemble::BrownianEnsemble(AtomPartition space, Eigen::MatrixXd increments, RandomStream stream)
    : space_(std::move(space)), increments_(std::move(increments)), stream_(stream)
{
    if (increments_.cols() != space_.atoms())
        throw ValidationError("ensemble has " + std::to_string(increments_.cols()) +
                              " atom columns, partition has " + std::to_string(space_.atoms()));
    if (increments_.rows() < 2)
        throw ValidationError("insufficient paths: an ensemble needs at least 2, got " +
                              std::to_string(increments_.rows()));
}

Eigen::VectorXd BrownianEnsemble::evaluate(std::span<const Index> atom_set) const
{
    check_atoms(atom_set, atoms());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(paths());
    for (Index n : atom_set) out += increments_.col(n);
    return out;
}

BrownianEnsemble sample_brownian(const AtomPartition& space, Index paths, const RandomStream& stream)
{
    if (paths < 2)
        throw ValidationError("insufficient paths: an ensemble needs at least 2, got " +
                              std::to_string(paths));
    const Index N = space.atoms();
    const Eigen::RowVectorXd scale = space.weights().array().sqrt().transpose();
    Eigen::MatrixXd increments(paths, N);
    const auto chunks = (static_cast<std::uint64_t>(paths) + kChunkSamples - 1) / kChunkSamples;
    parallel_for(chunks, [&](std::size_t c) {
        RandomEngine engine(stream.substream(c));
        const auto begin = static_cast<Index>(c * kChunkSamples);
        const auto end = std::min<Index>(paths, begin + static_cast<Index>(kChunkSamples));
        for (Index m = begin; m < end; ++m)
            for (Index n = 0; n < N; ++n) increments(m, n) = engine.normal() * scale(n);
    });
    return {space, std::move(increments), stream};
}

Eigen::MatrixXd stochastic_integral(const StepFunction& phi, const BrownianEnsemble& W,
                                    std::span<const Index> atom_set)
{
    if (!(phi.space() == W.space()))
        throw ValidationError("step function and ensemble live on different partitions");
    check_atoms(atom_set, W.atoms());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(W.paths(), phi.dim());
    for (Index n : atom_set) out += W.increments().col(n) * phi.value(n).transpose();
    return out;
}

EmpiricalVectorMeasure::EmpiricalVectorMeasure(AtomPartition space, NormedSpace target, Index paths,
                                               Eigen::MatrixXd contributions)
    : space_(std::move(space)), target_(target), paths_(paths), contributions_(std::move(contributions))
{
    if (paths_ < 2) throw ValidationError("insufficient paths for an empirical measure");
    if (contributions_.rows() != target_.dim() || contributions_.cols() != paths_ * space_.atoms())
        throw ValidationError("contribution tensor has the wrong shape");
}

Eigen::MatrixXd EmpiricalVectorMeasure::block_samples(std::span<const Index> atom_set, Index begin,
                                                      Index end) const
{
    check_range(begin, end, paths_);
    check_atoms(atom_set, atoms());
    const Index d = dim();
    const Index N = atoms();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, end - begin);
    double* dst = out.data();
    for (Index m = begin; m < end; ++m, dst += d) {
        const double* path = contributions_.data() + d * m * N;
        for (Index n : atom_set)
            for (Index i = 0; i < d; ++i) dst[i] += path[d * n + i];
    }
    return out;
}

SumEstimate EmpiricalVectorMeasure::second_moment(std::span<const Index> atom_set) const
{
    return monte_carlo_estimate(sample_moments(target_.column_squared_norms(block_samples(atom_set))));
}

Eigen::MatrixXd EmpiricalVectorMeasure::gram(Index begin, Index end) const
{
    check_range(begin, end, paths_);
    if (!target_.is_hilbert()) throw ValidationError("Gram matrix requires a Hilbert target space");
    const Index d = dim();
    const Index N = atoms();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(N, N);
    for (Index i = 0; i < d; ++i) {
        StridedMap coordinate(contributions_.data() + i + d * begin * N, N, end - begin,
                              Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(d * N, d));
        g.noalias() += coordinate * coordinate.transpose();
    }
    return g / static_cast<double>(end - begin);
}

EmpiricalValues EmpiricalVectorMeasure::view(Index begin, Index end, RandomStream stream) const
{
    return {*this, begin, end, stream};
}

EmpiricalValues EmpiricalVectorMeasure::view(RandomStream stream) const
{
    return {*this, 0, paths_, stream};
}

EmpiricalValues::EmpiricalValues(const EmpiricalVectorMeasure& measure, Index begin, Index end,
                                 RandomStream stream)
    : measure_(&measure), begin_(begin), end_(end), stream_(stream)
{
    check_range(begin, end, measure.paths());
    if (end - begin < 2) throw ValidationError("insufficient paths in empirical view");
}

std::vector<Eigen::MatrixXd> EmpiricalValues::block_samples(const Grouping& g) const
{
    if (g.atom_count() != atoms()) throw ValidationError("grouping and measure differ in atom count");
    const Index d = measure_->dim();
    const Index N = atoms();
    const auto label = g.block_of();
    std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(g.size()), Eigen::MatrixXd::Zero(d, paths()));
    for (Index m = begin_; m < end_; ++m) {
        const double* path = measure_->contributions().data() + d * m * N;
        for (Index n = 0; n < N; ++n) {
            const auto b = label[static_cast<std::size_t>(n)];
            if (b < 0) continue;
            double* dst = blocks[static_cast<std::size_t>(b)].data() + d * (m - begin_);
            for (Index i = 0; i < d; ++i) dst[i] += path[d * n + i];
        }
    }
    return blocks;
}

SumEstimate EmpiricalValues::rademacher_moment(const Grouping& g) const
{
    const auto& X = measure_->target();
    const auto blocks = block_samples(g);
    if (X.is_hilbert()) {
        Eigen::ArrayXd per_path = Eigen::ArrayXd::Zero(paths());
        for (const auto& b : blocks) per_path += b.colwise().squaredNorm().transpose().array();
        return monte_carlo_estimate(sample_moments(per_path));
    }
    if (static_cast<Index>(blocks.size()) <= kMaxEnumerationTerms)
        return monte_carlo_estimate(sample_moments(rademacher_columnwise(blocks, X)));

    // one sign vector per path: unbiased for the sign average, path-level error only
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(X.dim(), paths());
    const auto chunks = (static_cast<std::uint64_t>(paths()) + kChunkSamples - 1) / kChunkSamples;
    parallel_for(chunks, [&](std::size_t c) {
        RandomEngine engine(stream_.substream(c));
        const auto begin = static_cast<Index>(c * kChunkSamples);
        const auto end = std::min<Index>(paths(), begin + static_cast<Index>(kChunkSamples));
        for (Index m = begin; m < end; ++m)
            for (const auto& b : blocks) sum.col(m) += engine.sign() * b.col(m);
    });
    return monte_carlo_estimate(sample_moments(X.column_squared_norms(sum)));
}

SumEstimate EmpiricalValues::plain_moment(const Grouping& g) const
{
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(measure_->dim(), paths());
    for (const auto& b : block_samples(g)) sum += b;
    return monte_carlo_estimate(sample_moments(measure_->target().column_squared_norms(sum)));
}

std::optional<Eigen::MatrixXd> EmpiricalValues::hilbert_gram() const
{
    if (!measure_->target().is_hilbert()) return std::nullopt;
    return measure_->gram(begin_, end_);
}

EmpiricalVectorMeasure induced_randomized_measure(const StepFunction& phi, const BrownianEnsemble& W,
                                                  const NormedSpace& target)
{
    if (!(phi.space() == W.space()))
        throw ValidationError("step function and ensemble live on different partitions");
    if (phi.dim() != target.dim())
        throw ValidationError("step function dimension does not match the target space");
    const Index M = W.paths();
    const Index N = W.atoms();
    Eigen::MatrixXd contributions(phi.dim(), M * N);
    for (Index m = 0; m < M; ++m)
        contributions.middleCols(m * N, N) =
            phi.values().array().rowwise() * W.increments().row(m).array();
    return {W.space(), target, M, std::move(contributions)};
}

NormReport empirical_randomized_variation(const EmpiricalVectorMeasure& G, SearchOptions options,
                                          RandomStream stream)
{
    if (G.paths() < 4) throw ValidationError("insufficient paths: held-out search needs at least 4");
    const Index half = G.paths() / 2;
    const auto search = G.view(0, half, stream.substream(0));
    const auto report = G.view(half, G.paths(), stream.substream(1));
    return randomized_variation_norm(search, report, options);
}

IdentityReport verify_norm_identity(const StepFunction& phi, const NormedSpace& X, Index paths,
                                    std::uint64_t samples, const RandomStream& stream, double z,
                                    SearchOptions search)
{
    IdentityReport r;
    const auto W = sample_brownian(phi.space(), paths, stream.substream(0));
    r.gamma_variation = gamma_variation_norm(measure_from_density(phi), X, stream.substream(1), samples,
                                             {SearchMode::fast_path, false});
    const auto G = induced_randomized_measure(phi, W, X);
    r.randomized = empirical_randomized_variation(G, search, stream.substream(2));
    r.integral = G.view().plain_moment(Grouping::single_block(phi.atoms()));

    r.gamma_vs_randomized = compare_estimates(r.gamma_variation.estimate, r.randomized.estimate, z);
    r.gamma_vs_integral = compare_estimates(r.gamma_variation.estimate, r.integral, z);
    r.randomized_vs_integral = compare_estimates(r.randomized.estimate, r.integral, z);
    r.passed = r.gamma_vs_randomized.consistent && r.gamma_vs_integral.consistent &&
               r.randomized_vs_integral.consistent;
    return r;
}

RandomisationVerdict check_randomisation_identity(const EmpiricalVectorMeasure& G,
                                                  const Grouping& grouping, double z)
{
    if (grouping.size() > kMaxEnumerationTerms)
        throw SizeLimitError("randomisation check enumerates signs over at most " +
                                 std::to_string(kMaxEnumerationTerms) + " blocks; got " +
                                 std::to_string(grouping.size()),
                             static_cast<std::size_t>(kMaxEnumerationTerms));
    const auto values = G.view();
    const auto blocks = values.block_samples(grouping);
    RandomisationVerdict v;
    if (G.target().is_hilbert()) {
        Eigen::ArrayXd per_path = Eigen::ArrayXd::Zero(G.paths());
        for (const auto& b : blocks) per_path += b.colwise().squaredNorm().transpose().array();
        v.randomized = monte_carlo_estimate(sample_moments(per_path));
    } else {
        v.randomized = monte_carlo_estimate(sample_moments(rademacher_columnwise(blocks, G.target())));
    }
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(G.dim(), G.paths());
    for (const auto& b : blocks) sum += b;
    v.plain = monte_carlo_estimate(sample_moments(G.target().column_squared_norms(sum)));
    v.comparison = compare_estimates(v.randomized, v.plain, z);
    v.passed = v.comparison.consistent;
    return v;
}

RandomisationVerdict check_randomisation_identity(const StepFunction& phi, const BrownianEnsemble& W,
                                                  const NormedSpace& X, const Grouping& grouping,
                                                  double z)
{
    return check_randomisation_identity(induced_randomized_measure(phi, W, X), grouping, z);
}

} // namespace gvar
