#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gvar/core/normed_space.hpp"
#include "gvar/random.hpp"

namespace gvar {

enum class EstimateMethod { exact_hilbert, exact_enumeration, monte_carlo };

std::string to_string(EstimateMethod m);

/// A second moment E||.||^2 with its standard error (zero for exact methods).
struct SumEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    EstimateMethod method = EstimateMethod::exact_hilbert;

    bool exact() const { return method != EstimateMethod::monte_carlo; }
    double root() const;
};

/// Draws per substream; sampling results depend on this constant, never on threads().
inline constexpr std::uint64_t kChunkSamples = 4096;

/// Largest family size handled by exhaustive sign enumeration.
inline constexpr Eigen::Index kMaxEnumerationTerms = 20;

/// Running mean and sum of squared deviations, mergeable in a fixed order.
struct SampleMoments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const SampleMoments& other);
    double variance() const;
    double std_error() const;
};

template <typename Derived>
SampleMoments sample_moments(const Eigen::DenseBase<Derived>& xs)
{
    SampleMoments m;
    for (Eigen::Index i = 0; i < xs.size(); ++i) m.add(xs.derived().coeff(i));
    return m;
}

SumEstimate monte_carlo_estimate(const SampleMoments& m);

/// A rows x samples block of standard Gaussians, generated chunk by chunk
/// from substreams of one RandomStream. Reusing one block across many linear
/// maps gives paired (common random number) estimates.
class GaussianDraws {
public:
    GaussianDraws(Eigen::Index rows, std::uint64_t samples, const RandomStream& stream);

    const Eigen::MatrixXd& matrix() const { return draws_; }
    Eigen::Index rows() const { return draws_.rows(); }
    std::uint64_t samples() const { return static_cast<std::uint64_t>(draws_.cols()); }

private:
    Eigen::MatrixXd draws_;
};

/// E||A g||^2 for g standard Gaussian in R^{A.cols()}.
///
/// In a Hilbert space this is the squared Frobenius norm of A and no draws are
/// used unless allow_closed_form is false.
SumEstimate gaussian_moment(const Eigen::MatrixXd& A, const NormedSpace& X,
                            const GaussianDraws& draws, bool allow_closed_form = true);

/// E||sum_n gamma_n x_n||^2 over the columns x_n of vectors.
SumEstimate gaussian_sum_sq(const Eigen::MatrixXd& vectors, const NormedSpace& X,
                            const RandomStream& stream, std::uint64_t samples,
                            bool allow_closed_form = true);

/// E||sum_n r_n x_n||^2 over the columns x_n of vectors, with Rademacher r_n.
/// Families of at most kMaxEnumerationTerms vectors are enumerated exactly.
SumEstimate rademacher_sum_sq(const Eigen::MatrixXd& vectors, const NormedSpace& X,
                              const RandomStream& stream, std::uint64_t samples);

/// Exact E_r||sum_b r_b blocks[b].col(m)||^2 for every column m.
/// All blocks are d x M; requires blocks.size() <= kMaxEnumerationTerms.
Eigen::ArrayXd rademacher_columnwise(std::span<const Eigen::MatrixXd> blocks, const NormedSpace& X);

struct Comparison {
    bool consistent = false;
    double gap = 0.0;              ///< a - b
    double combined_std_error = 0.0;
    double tolerance = 0.0;
};

/// Slack granted to exact-vs-exact comparisons, relative to max(1, |a|, |b|).
inline constexpr double kExactAgreement = 1e-9;

/// consistent iff |a - b| <= max(z * sqrt(se_a^2 + se_b^2), kExactAgreement * scale).
Comparison compare_estimates(const SumEstimate& a, const SumEstimate& b, double z);

/// One-sided version: a.value <= b.value + tolerance.
Comparison dominated_by(const SumEstimate& a, const SumEstimate& b, double z);

} // namespace gvar
