#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "gvar/core/grouping.hpp"
#include "gvar/core/measure.hpp"
#include "gvar/core/normed_space.hpp"
#include "gvar/expectation.hpp"
#include "gvar/gamma_norms.hpp"
#include "gvar/random.hpp"

namespace gvar {

/// M sample paths of a Brownian motion indexed by the atoms: increments()(m, n) is
/// W(A_n) on path m, centred Gaussian with variance mu(A_n), independent across atoms.
class BrownianEnsemble {
public:
    BrownianEnsemble(AtomPartition space, Eigen::MatrixXd increments, RandomStream stream = {});

    const AtomPartition& space() const { return space_; }
    const Eigen::MatrixXd& increments() const { return increments_; }
    const RandomStream& stream() const { return stream_; }
    Index paths() const { return increments_.rows(); }
    Index atoms() const { return increments_.cols(); }

    /// W(A) on every path.
    Eigen::VectorXd evaluate(std::span<const Index> atom_set) const;

private:
    AtomPartition space_;
    Eigen::MatrixXd increments_;
    RandomStream stream_;
};

BrownianEnsemble sample_brownian(const AtomPartition& space, Index paths, const RandomStream& stream);

/// Per-path integrals of phi over A: row m = sum_{n in A} phi_n W_m(A_n). Returns M x d.
Eigen::MatrixXd stochastic_integral(const StepFunction& phi, const BrownianEnsemble& W,
                                    std::span<const Index> atom_set);

class EmpiricalValues;

/// The L2(Omega; X)-valued measure G(A) = integral of phi over A against W, stored as
/// per-atom, per-path contributions phi_n W_m(A_n).
class EmpiricalVectorMeasure {
public:
    EmpiricalVectorMeasure(AtomPartition space, NormedSpace target, Index paths,
                           Eigen::MatrixXd contributions);

    const AtomPartition& space() const { return space_; }
    const NormedSpace& target() const { return target_; }
    Index atoms() const { return space_.atoms(); }
    Index paths() const { return paths_; }
    Index dim() const { return target_.dim(); }

    /// d x (M*N); column m*N + n is the contribution of atom n on path m.
    const Eigen::MatrixXd& contributions() const { return contributions_; }

    /// G(A) on paths [begin, end) as a d x (end - begin) matrix.
    Eigen::MatrixXd block_samples(std::span<const Index> atom_set, Index begin, Index end) const;
    Eigen::MatrixXd block_samples(std::span<const Index> atom_set) const
    {
        return block_samples(atom_set, 0, paths_);
    }

    /// ||G(A)||^2 in L2(Omega; X), estimated by the mean over paths.
    SumEstimate second_moment(std::span<const Index> atom_set) const;

    /// Empirical Gram matrix <G(A_i), G(A_j)> over paths [begin, end); X must be Hilbert.
    Eigen::MatrixXd gram(Index begin, Index end) const;

    EmpiricalValues view(Index begin, Index end, RandomStream stream = {}) const;
    EmpiricalValues view(RandomStream stream = {}) const;

private:
    AtomPartition space_;
    NormedSpace target_;
    Index paths_;
    Eigen::MatrixXd contributions_;
};

/// A path range of an EmpiricalVectorMeasure, seen as atom values in L2(Omega; X).
class EmpiricalValues {
public:
    EmpiricalValues(const EmpiricalVectorMeasure& measure, Index begin, Index end,
                    RandomStream stream);

    Index atoms() const { return measure_->atoms(); }
    Index paths() const { return end_ - begin_; }

    /// Block values G(B) on the range, one d x paths() matrix per block.
    std::vector<Eigen::MatrixXd> block_samples(const Grouping& g) const;

    /// mean over paths of E_r||sum_B r_B G(B)_m||^2. Sign patterns are enumerated for
    /// up to 20 blocks; beyond that each path draws its own signs.
    SumEstimate rademacher_moment(const Grouping& g) const;

    /// mean over paths of ||sum_B G(B)_m||^2.
    SumEstimate plain_moment(const Grouping& g) const;

    std::optional<Eigen::MatrixXd> hilbert_gram() const;

private:
    const EmpiricalVectorMeasure* measure_;
    Index begin_;
    Index end_;
    RandomStream stream_;
};

EmpiricalVectorMeasure induced_randomized_measure(const StepFunction& phi, const BrownianEnsemble& W,
                                                  const NormedSpace& target);

/// ||G||_{V^r}: groupings are searched on the first half of the paths and the
/// attaining grouping is evaluated on the second half.
NormReport empirical_randomized_variation(const EmpiricalVectorMeasure& G, SearchOptions options = {},
                                          RandomStream stream = {});

struct IdentityReport {
    NormReport gamma_variation;    ///< ||F||_{V_gamma}, F = measure_from_density(phi)
    NormReport randomized;         ///< ||G||_{V^r(L2(Omega;X))}
    SumEstimate integral;          ///< E||integral over S of phi dW||^2
    Comparison gamma_vs_randomized;
    Comparison gamma_vs_integral;
    Comparison randomized_vs_integral;
    bool passed = false;
};

/// Checks ||F||_{V_gamma} = ||G||_{V^r} = (E||int_S phi dW||^2)^{1/2} on second moments.
/// Substream 0 drives the paths, 1 the Gaussian sums, 2 any sign sampling.
IdentityReport verify_norm_identity(const StepFunction& phi, const NormedSpace& X, Index paths,
                                    std::uint64_t samples, const RandomStream& stream,
                                    double z = 3.0, SearchOptions search = {});

struct RandomisationVerdict {
    SumEstimate randomized; ///< mean over paths of E_r||sum_B r_B G(B)||^2
    SumEstimate plain;      ///< mean over paths of ||sum_B G(B)||^2
    Comparison comparison;
    bool passed = false;
};

/// Symmetry and independence of block integrals: both moments agree (paired, same paths).
RandomisationVerdict check_randomisation_identity(const EmpiricalVectorMeasure& G,
                                                  const Grouping& grouping, double z = 3.0);
RandomisationVerdict check_randomisation_identity(const StepFunction& phi, const BrownianEnsemble& W,
                                                  const NormedSpace& X, const Grouping& grouping,
                                                  double z = 3.0);

} // namespace gvar
