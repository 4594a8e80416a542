#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gvar/errors.hpp"

namespace gvar {

using Index = Eigen::Index;

/// A finite probability space whose sigma-algebra is the power set of N atoms.
///
/// Atom n carries mass weight(n) > 0 and the masses sum to one. When built from
/// boundaries 0 = t_0 < ... < t_N = 1 the atoms are the intervals (t_{n-1}, t_n].
template <typename Scalar>
class BasicAtomPartition {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    static constexpr double kSumTolerance = 1e-12;

    explicit BasicAtomPartition(Vector weights) : weights_(std::move(weights)) { validate(); }

    static BasicAtomPartition from_weights(std::span<const Scalar> weights)
    {
        Vector w(static_cast<Index>(weights.size()));
        for (Index n = 0; n < w.size(); ++n) w(n) = weights[static_cast<std::size_t>(n)];
        return BasicAtomPartition(std::move(w));
    }

    static BasicAtomPartition uniform(Index atoms)
    {
        if (atoms < 1) throw ValidationError("partition needs at least one atom");
        return BasicAtomPartition(Vector::Constant(atoms, Scalar(1) / Scalar(atoms)));
    }

    static BasicAtomPartition from_boundaries(std::span<const Scalar> boundaries)
    {
        if (boundaries.size() < 2) throw ValidationError("boundaries need at least two points");
        if (boundaries.front() != Scalar(0) || boundaries.back() != Scalar(1))
            throw ValidationError("boundaries must start at 0 and end at 1");
        Vector w(static_cast<Index>(boundaries.size() - 1));
        for (Index n = 0; n < w.size(); ++n) {
            const auto i = static_cast<std::size_t>(n);
            if (!(boundaries[i + 1] > boundaries[i]))
                throw ValidationError("boundaries must be strictly increasing");
            w(n) = boundaries[i + 1] - boundaries[i];
        }
        BasicAtomPartition p(std::move(w));
        p.boundaries_ = Vector(static_cast<Index>(boundaries.size()));
        for (Index n = 0; n < p.boundaries_->size(); ++n)
            (*p.boundaries_)(n) = boundaries[static_cast<std::size_t>(n)];
        return p;
    }

    Index atoms() const { return weights_.size(); }
    const Vector& weights() const { return weights_; }
    Scalar weight(Index n) const { return weights_(n); }
    const std::optional<Vector>& boundaries() const { return boundaries_; }

    Scalar mass(std::span<const Index> atom_set) const
    {
        Scalar total(0);
        for (Index n : atom_set) total += weights_(n);
        return total;
    }

    friend bool operator==(const BasicAtomPartition& a, const BasicAtomPartition& b)
    {
        return a.weights_.size() == b.weights_.size() && a.weights_ == b.weights_;
    }

private:
    void validate() const
    {
        if (weights_.size() < 1) throw ValidationError("partition needs at least one atom");
        for (Index n = 0; n < weights_.size(); ++n) {
            if (!(weights_(n) > Scalar(0)) || !std::isfinite(static_cast<double>(weights_(n))))
                throw ValidationError("atom weight " + std::to_string(n) + " must be positive");
        }
        const double sum = static_cast<double>(weights_.sum());
        if (std::abs(sum - 1.0) > kSumTolerance)
            throw ValidationError("atom weights must sum to 1 (got " + std::to_string(sum) + ")");
    }

    Vector weights_;
    std::optional<Vector> boundaries_;
};

using AtomPartition = BasicAtomPartition<double>;

} // namespace gvar
