#include "gvar/expectation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "gvar/errors.hpp"
#include "gvar/parallel.hpp"

namespace gvar {

std::string to_string(EstimateMethod m)
{
    switch (m) {
    case EstimateMethod::exact_hilbert: return "exact_hilbert";
    case EstimateMethod::exact_enumeration: return "exact_enumeration";
    case EstimateMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

double SumEstimate::root() const { return std::sqrt(std::max(0.0, value)); }

void SampleMoments::add(double x)
{
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void SampleMoments::merge(const SampleMoments& other)
{
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double n = n_a + n_b;
    const double delta = other.mean - mean;
    mean += delta * n_b / n;
    m2 += other.m2 + delta * delta * n_a * n_b / n;
    count += other.count;
}

double SampleMoments::variance() const
{
    return count > 1 ? std::max(0.0, m2 / static_cast<double>(count - 1)) : 0.0;
}

double SampleMoments::std_error() const
{
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

SumEstimate monte_carlo_estimate(const SampleMoments& m)
{
    return {std::max(0.0, m.mean), m.std_error(), m.count, EstimateMethod::monte_carlo};
}

namespace {

std::uint64_t chunk_count(std::uint64_t samples)
{
    return (samples + kChunkSamples - 1) / kChunkSamples;
}

void require_samples(std::uint64_t samples)
{
    if (samples < 2)
        throw ValidationError("insufficient samples: Monte Carlo needs at least 2 draws, got " +
                              std::to_string(samples));
}

// Mean of f(sum_k r_k v_k) over sign patterns with r_0 = +1 (||s|| = ||-s|| halves the
// count), visited in Gray-code order so each step flips one term. D > 0 fixes d.
template <int D, class F>
double gray_sign_average(const double* v, double* sum, Eigen::Index K, Eigen::Index dyn_d, F f)
{
    const Eigen::Index d = D > 0 ? D : dyn_d;
    for (Eigen::Index i = 0; i < d; ++i) {
        double s = 0;
        for (Eigen::Index k = 0; k < K; ++k) s += v[k * d + i];
        sum[i] = s;
    }
    const std::uint64_t patterns = std::uint64_t{1} << (K - 1);
    std::uint64_t negated = 0;
    double acc = f(sum, d);
    for (std::uint64_t p = 1; p < patterns; ++p) {
        const int j = std::countr_zero(p) + 1;
        const std::uint64_t bit = std::uint64_t{1} << j;
        const double* vj = v + j * d;
        const double step = (negated & bit) ? 2.0 : -2.0;
        for (Eigen::Index i = 0; i < d; ++i) sum[i] += step * vj[i];
        negated ^= bit;
        acc += f(sum, d);
    }
    return acc / static_cast<double>(patterns);
}

template <class F>
double sign_average(const double* v, double* sum, Eigen::Index K, Eigen::Index d, F f)
{
    switch (d) {
    case 1: return gray_sign_average<1>(v, sum, K, d, f);
    case 2: return gray_sign_average<2>(v, sum, K, d, f);
    case 3: return gray_sign_average<3>(v, sum, K, d, f);
    case 4: return gray_sign_average<4>(v, sum, K, d, f);
    default: return gray_sign_average<0>(v, sum, K, d, f);
    }
}

} // namespace

GaussianDraws::GaussianDraws(Eigen::Index rows, std::uint64_t samples, const RandomStream& stream)
    : draws_(rows, static_cast<Eigen::Index>(samples))
{
    parallel_for(chunk_count(samples), [&](std::size_t c) {
        const auto begin = static_cast<Eigen::Index>(c * kChunkSamples);
        const auto width = std::min<Eigen::Index>(static_cast<Eigen::Index>(kChunkSamples),
                                                  draws_.cols() - begin);
        RandomEngine engine(stream.substream(c));
        auto block = draws_.middleCols(begin, width);
        engine.fill_normal(block);
    });
}

SumEstimate gaussian_moment(const Eigen::MatrixXd& A, const NormedSpace& X,
                            const GaussianDraws& draws, bool allow_closed_form)
{
    if (A.rows() != X.dim())
        throw ValidationError("vectors have dimension " + std::to_string(A.rows()) +
                              ", space has dimension " + std::to_string(X.dim()));
    if (allow_closed_form && X.is_hilbert())
        return {A.squaredNorm(), 0.0, 0, EstimateMethod::exact_hilbert};
    if (draws.rows() != A.cols()) throw ValidationError("draw block does not match family size");
    require_samples(draws.samples());

    const auto chunks = chunk_count(draws.samples());
    std::vector<SampleMoments> partial(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        const auto begin = static_cast<Eigen::Index>(c * kChunkSamples);
        const auto width = std::min<Eigen::Index>(static_cast<Eigen::Index>(kChunkSamples),
                                                  draws.matrix().cols() - begin);
        const Eigen::MatrixXd sums = A * draws.matrix().middleCols(begin, width);
        partial[c] = sample_moments(X.column_squared_norms(sums));
    });
    SampleMoments total;
    for (const auto& p : partial) total.merge(p);
    return monte_carlo_estimate(total);
}

SumEstimate gaussian_sum_sq(const Eigen::MatrixXd& vectors, const NormedSpace& X,
                            const RandomStream& stream, std::uint64_t samples,
                            bool allow_closed_form)
{
    if (vectors.cols() < 1) throw ValidationError("vector family must be nonempty");
    if (vectors.rows() != X.dim())
        throw ValidationError("vectors have dimension " + std::to_string(vectors.rows()) +
                              ", space has dimension " + std::to_string(X.dim()));
    if (allow_closed_form && X.is_hilbert())
        return {vectors.squaredNorm(), 0.0, 0, EstimateMethod::exact_hilbert};
    require_samples(samples);
    return gaussian_moment(vectors, X, GaussianDraws(vectors.cols(), samples, stream), false);
}

Eigen::ArrayXd rademacher_columnwise(std::span<const Eigen::MatrixXd> blocks, const NormedSpace& X)
{
    const auto K = static_cast<Eigen::Index>(blocks.size());
    if (K < 1) throw ValidationError("vector family must be nonempty");
    if (K > kMaxEnumerationTerms)
        throw SizeLimitError("sign enumeration capped at " + std::to_string(kMaxEnumerationTerms) +
                                 " terms; got " + std::to_string(K),
                             static_cast<std::size_t>(kMaxEnumerationTerms));
    const Eigen::Index d = blocks.front().rows();
    const Eigen::Index M = blocks.front().cols();
    for (const auto& b : blocks)
        if (b.rows() != d || b.cols() != M) throw ValidationError("blocks must share one shape");
    if (d != X.dim()) throw ValidationError("block dimension does not match the space");

    Eigen::ArrayXd out(M);
    const auto chunks = chunk_count(static_cast<std::uint64_t>(M));
    auto run = [&](auto squared_norm) {
        parallel_for(chunks, [&](std::size_t c) {
            const auto begin = static_cast<Eigen::Index>(c * kChunkSamples);
            const auto end = std::min<Eigen::Index>(M, begin + static_cast<Eigen::Index>(kChunkSamples));
            std::vector<double> v(static_cast<std::size_t>(K * d)), sum(static_cast<std::size_t>(d));
            for (Eigen::Index m = begin; m < end; ++m) {
                for (Eigen::Index k = 0; k < K; ++k)
                    for (Eigen::Index i = 0; i < d; ++i)
                        v[static_cast<std::size_t>(k * d + i)] = blocks[static_cast<std::size_t>(k)](i, m);
                out(m) = sign_average(v.data(), sum.data(), K, d, squared_norm);
            }
        });
    };
    // dim 1: every norm is |x|, so take the exact square
    switch (X.is_hilbert() ? NormKind::L2 : X.kind()) {
    case NormKind::L2: run([](const double* x, Eigen::Index n) {
        double s = 0;
        for (Eigen::Index i = 0; i < n; ++i) s += x[i] * x[i];
        return s;
    }); break;
    case NormKind::L1: run([](const double* x, Eigen::Index n) {
        double s = 0;
        for (Eigen::Index i = 0; i < n; ++i) s += std::abs(x[i]);
        return s * s;
    }); break;
    case NormKind::Linf: run([](const double* x, Eigen::Index n) {
        double s = 0;
        for (Eigen::Index i = 0; i < n; ++i) s = std::max(s, std::abs(x[i]));
        return s * s;
    }); break;
    case NormKind::Lp: {
        const double p = X.exponent();
        if (p == 4.0) {
            run([](const double* x, Eigen::Index n) {
                double s = 0;
                for (Eigen::Index i = 0; i < n; ++i) s += (x[i] * x[i]) * (x[i] * x[i]);
                return std::sqrt(s);
            });
        } else if (p == 3.0) {
            run([](const double* x, Eigen::Index n) {
                double s = 0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double a = std::abs(x[i]);
                    s += a * a * a;
                }
                const double r = std::cbrt(s);
                return r * r;
            });
        } else {
            run([p](const double* x, Eigen::Index n) {
                double s = 0;
                for (Eigen::Index i = 0; i < n; ++i) s += std::pow(std::abs(x[i]), p);
                return std::pow(s, 2.0 / p);
            });
        }
        break;
    }
    }
    return out;
}

SumEstimate rademacher_sum_sq(const Eigen::MatrixXd& vectors, const NormedSpace& X,
                              const RandomStream& stream, std::uint64_t samples)
{
    const Eigen::Index k = vectors.cols();
    if (k < 1) throw ValidationError("vector family must be nonempty");
    if (vectors.rows() != X.dim())
        throw ValidationError("vectors have dimension " + std::to_string(vectors.rows()) +
                              ", space has dimension " + std::to_string(X.dim()));
    if (k <= kMaxEnumerationTerms) {
        std::vector<Eigen::MatrixXd> blocks;
        blocks.reserve(static_cast<std::size_t>(k));
        for (Eigen::Index n = 0; n < k; ++n) blocks.emplace_back(vectors.col(n));
        const double value = rademacher_columnwise(blocks, X)(0);
        return {value, 0.0, 0, EstimateMethod::exact_enumeration};
    }
    if (X.is_hilbert()) return {vectors.squaredNorm(), 0.0, 0, EstimateMethod::exact_hilbert};
    require_samples(samples);

    const auto chunks = chunk_count(samples);
    std::vector<SampleMoments> partial(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        const auto width = std::min<std::uint64_t>(kChunkSamples, samples - c * kChunkSamples);
        RandomEngine engine(stream.substream(c));
        Eigen::MatrixXd signs(k, static_cast<Eigen::Index>(width));
        for (Eigen::Index j = 0; j < signs.cols(); ++j)
            for (Eigen::Index i = 0; i < k; ++i) signs(i, j) = engine.sign();
        partial[c] = sample_moments(X.column_squared_norms(vectors * signs));
    });
    SampleMoments total;
    for (const auto& p : partial) total.merge(p);
    return monte_carlo_estimate(total);
}

namespace {

Comparison make_comparison(const SumEstimate& a, const SumEstimate& b, double z)
{
    if (!(z > 0.0)) throw ValidationError("confidence multiplier must be positive");
    Comparison c;
    c.gap = a.value - b.value;
    c.combined_std_error = std::hypot(a.std_error, b.std_error);
    const double scale = std::max({1.0, std::abs(a.value), std::abs(b.value)});
    c.tolerance = std::max(z * c.combined_std_error, kExactAgreement * scale);
    return c;
}

} // namespace

Comparison compare_estimates(const SumEstimate& a, const SumEstimate& b, double z)
{
    auto c = make_comparison(a, b, z);
    c.consistent = std::abs(c.gap) <= c.tolerance;
    return c;
}

Comparison dominated_by(const SumEstimate& a, const SumEstimate& b, double z)
{
    auto c = make_comparison(a, b, z);
    c.consistent = c.gap <= c.tolerance;
    return c;
}

} // namespace gvar
