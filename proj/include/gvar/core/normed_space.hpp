#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "gvar/errors.hpp"

namespace gvar {

enum class NormKind { L1, L2, Lp, Linf };

/// R^d with an l_p norm. Lp(2) is canonicalized to L2.
class NormedSpace {
public:
    NormedSpace(Eigen::Index dim, NormKind kind, double p = 2.0) : dim_(dim), kind_(kind), p_(p)
    {
        if (dim_ < 1) throw ValidationError("space dimension must be positive");
        switch (kind_) {
        case NormKind::L1: p_ = 1.0; break;
        case NormKind::L2: p_ = 2.0; break;
        case NormKind::Linf: p_ = INFINITY; break;
        case NormKind::Lp:
            if (!(p_ > 1.0) || !std::isfinite(p_))
                throw ValidationError("lp exponent must be a finite real > 1");
            if (p_ == 2.0) kind_ = NormKind::L2;
            break;
        }
    }

    static NormedSpace l1(Eigen::Index d) { return {d, NormKind::L1}; }
    static NormedSpace l2(Eigen::Index d) { return {d, NormKind::L2}; }
    static NormedSpace linf(Eigen::Index d) { return {d, NormKind::Linf}; }
    static NormedSpace lp(Eigen::Index d, double p) { return {d, NormKind::Lp, p}; }

    Eigen::Index dim() const { return dim_; }
    NormKind kind() const { return kind_; }
    double exponent() const { return p_; }

    /// Every norm on R^1 is |.|, so one-dimensional spaces are Hilbert too.
    bool is_hilbert() const { return kind_ == NormKind::L2 || dim_ == 1; }

    NormedSpace with_dim(Eigen::Index d) const { return {d, kind_, p_}; }

    std::string name() const
    {
        switch (kind_) {
        case NormKind::L1: return "l1";
        case NormKind::L2: return "l2";
        case NormKind::Linf: return "linf";
        case NormKind::Lp: break;
        }
        std::string s = std::to_string(p_);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return "lp(" + s + ")";
    }

    template <typename Derived>
    typename Derived::Scalar norm(const Eigen::MatrixBase<Derived>& x) const
    {
        using std::abs;
        using std::pow;
        using std::sqrt;
        if (dim_ == 1) return abs(x.coeff(0));
        switch (kind_) {
        case NormKind::L1: return x.template lpNorm<1>();
        case NormKind::L2: return x.norm();
        case NormKind::Linf: return x.template lpNorm<Eigen::Infinity>();
        case NormKind::Lp: break;
        }
        return pow(x.array().abs().pow(p_).sum(), 1.0 / p_);
    }

    template <typename Derived>
    typename Derived::Scalar squared_norm(const Eigen::MatrixBase<Derived>& x) const
    {
        if (kind_ == NormKind::L2 || dim_ == 1) return x.squaredNorm();
        const auto n = norm(x);
        return n * n;
    }

    /// Squared norms of the columns of a d x k matrix.
    template <typename Derived>
    Eigen::Array<typename Derived::Scalar, 1, Eigen::Dynamic>
    column_squared_norms(const Eigen::MatrixBase<Derived>& x) const
    {
        using Row = Eigen::Array<typename Derived::Scalar, 1, Eigen::Dynamic>;
        if (kind_ == NormKind::L2 || dim_ == 1) return x.colwise().squaredNorm().array();
        switch (kind_) {
        case NormKind::L1: {
            Row s = x.cwiseAbs().colwise().sum().array();
            return s.square();
        }
        case NormKind::Linf: {
            Row s = x.cwiseAbs().colwise().maxCoeff().array();
            return s.square();
        }
        default: break;
        }
        Row s = x.array().abs().pow(p_).colwise().sum();
        return s.pow(2.0 / p_);
    }

    friend bool operator==(const NormedSpace&, const NormedSpace&) = default;

private:
    Eigen::Index dim_;
    NormKind kind_;
    double p_;
};

} // namespace gvar
