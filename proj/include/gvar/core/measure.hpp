#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gvar/core/partition.hpp"
#include "gvar/errors.hpp"

namespace gvar {

namespace detail {

// d x N matrix whose column n belongs to atom n.
template <typename Scalar>
class AtomColumns {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Partition = BasicAtomPartition<Scalar>;

    AtomColumns(Partition space, Matrix columns, const char* what)
        : space_(std::move(space)), columns_(std::move(columns))
    {
        if (columns_.cols() != space_.atoms())
            throw ValidationError(std::string(what) + ": expected " +
                                  std::to_string(space_.atoms()) + " atom values, got " +
                                  std::to_string(columns_.cols()));
        if (columns_.rows() < 1)
            throw ValidationError(std::string(what) + ": values must have positive dimension");
        if (!columns_.allFinite())
            throw ValidationError(std::string(what) + ": values must be finite");
    }

    const Partition& space() const { return space_; }
    Index atoms() const { return columns_.cols(); }
    Index dim() const { return columns_.rows(); }

protected:
    Partition space_;
    Matrix columns_;
};

} // namespace detail

/// Vector measure F on the atoms; values().col(n) = F(A_n).
template <typename Scalar>
class BasicVectorMeasure : public detail::AtomColumns<Scalar> {
    using Base = detail::AtomColumns<Scalar>;

public:
    using typename Base::Matrix;
    using typename Base::Partition;
    using typename Base::Vector;

    BasicVectorMeasure(Partition space, Matrix values)
        : Base(std::move(space), std::move(values), "vector measure") {}

    const Matrix& values() const { return this->columns_; }
    auto value(Index n) const { return this->columns_.col(n); }

    BasicVectorMeasure scaled(Scalar c) const { return {this->space_, c * this->columns_}; }
};

/// Step function phi, constant phi_n = values().col(n) on atom A_n.
template <typename Scalar>
class BasicStepFunction : public detail::AtomColumns<Scalar> {
    using Base = detail::AtomColumns<Scalar>;

public:
    using typename Base::Matrix;
    using typename Base::Partition;
    using typename Base::Vector;

    BasicStepFunction(Partition space, Matrix values)
        : Base(std::move(space), std::move(values), "step function") {}

    const Matrix& values() const { return this->columns_; }
    auto value(Index n) const { return this->columns_.col(n); }

    BasicStepFunction scaled(Scalar c) const { return {this->space_, c * this->columns_}; }
};

/// Operator T: L2(mu) -> R^d restricted to step functions.
///
/// columns().col(n) = T(e_n) with e_n = 1_{A_n} / sqrt(mu(A_n)); the e_n are an
/// orthonormal basis of the step functions in L2(mu).
template <typename Scalar>
class BasicDiscreteOperator : public detail::AtomColumns<Scalar> {
    using Base = detail::AtomColumns<Scalar>;

public:
    using typename Base::Matrix;
    using typename Base::Partition;
    using typename Base::Vector;

    BasicDiscreteOperator(Partition space, Matrix columns)
        : Base(std::move(space), std::move(columns), "discrete operator") {}

    const Matrix& columns() const { return this->columns_; }

    /// T applied to the step function f = sum_n coefficients(n) 1_{A_n}.
    template <typename Derived>
    Vector apply(const Eigen::MatrixBase<Derived>& coefficients) const
    {
        if (coefficients.size() != this->atoms())
            throw ValidationError("operator argument has wrong length");
        return this->columns_ *
               (coefficients.array() * this->space_.weights().array().sqrt()).matrix();
    }

    /// T(1_A) for an atom set A.
    Vector apply_indicator(std::span<const Index> atom_set) const
    {
        Vector out = Vector::Zero(this->dim());
        for (Index n : atom_set) {
            if (n < 0 || n >= this->atoms()) throw ValidationError("atom index out of range");
            out += std::sqrt(this->space_.weight(n)) * this->columns_.col(n);
        }
        return out;
    }
};

using VectorMeasure = BasicVectorMeasure<double>;
using StepFunction = BasicStepFunction<double>;
using DiscreteOperator = BasicDiscreteOperator<double>;

/// F(A) = sum of the atom values over A. Duplicate or out-of-range indices are errors.
template <typename Scalar>
typename BasicVectorMeasure<Scalar>::Vector evaluate_measure(const BasicVectorMeasure<Scalar>& F,
                                                             std::span<const Index> atom_set)
{
    std::vector<bool> seen(static_cast<std::size_t>(F.atoms()), false);
    typename BasicVectorMeasure<Scalar>::Vector out =
        BasicVectorMeasure<Scalar>::Vector::Zero(F.dim());
    for (Index n : atom_set) {
        if (n < 0 || n >= F.atoms())
            throw ValidationError("atom index " + std::to_string(n) + " out of range [0, " +
                                  std::to_string(F.atoms()) + ")");
        if (seen[static_cast<std::size_t>(n)])
            throw ValidationError("atom index " + std::to_string(n) + " repeated");
        seen[static_cast<std::size_t>(n)] = true;
        out += F.value(n);
    }
    return out;
}

/// The operator T with T(1_A) = F(A): column n = F(A_n) / sqrt(mu(A_n)).
template <typename Scalar>
BasicDiscreteOperator<Scalar> operator_from_measure(const BasicVectorMeasure<Scalar>& F)
{
    const auto scale = F.space().weights().array().sqrt().inverse().transpose();
    typename BasicDiscreteOperator<Scalar>::Matrix columns =
        F.values().array().rowwise() * scale;
    return {F.space(), std::move(columns)};
}

/// The measure F(A) = T(1_A): value n = sqrt(mu(A_n)) * column n.
template <typename Scalar>
BasicVectorMeasure<Scalar> measure_from_operator(const BasicDiscreteOperator<Scalar>& T)
{
    const auto scale = T.space().weights().array().sqrt().transpose();
    typename BasicVectorMeasure<Scalar>::Matrix values = T.columns().array().rowwise() * scale;
    return {T.space(), std::move(values)};
}

/// F(A) = integral of phi over A against mu: value n = mu(A_n) * phi_n.
template <typename Scalar>
BasicVectorMeasure<Scalar> measure_from_density(const BasicStepFunction<Scalar>& phi)
{
    const auto scale = phi.space().weights().array().transpose();
    typename BasicVectorMeasure<Scalar>::Matrix values = phi.values().array().rowwise() * scale;
    return {phi.space(), std::move(values)};
}

} // namespace gvar
