#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace gvar {

/// Identifies a reproducible sequence of draws.
///
/// The generator is std::mt19937_64 seeded through std::seed_seq with the four
/// 32-bit halves of (seed, stream_id); both algorithms are fixed by the C++
/// standard. Normal variates use the Box-Muller transform on 53-bit uniforms,
/// so identical (seed, stream_id) pairs reproduce identical draws.
struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Child stream number k. Distinct k give statistically independent streams.
    RandomStream substream(std::uint64_t k) const;

    friend bool operator==(const RandomStream&, const RandomStream&) = default;
};

class RandomEngine {
public:
    explicit RandomEngine(const RandomStream& stream);

    /// Uniform on (0, 1].
    double uniform_open();
    /// Uniform on [0, 1).
    double uniform();
    double normal();
    /// Standard exponential, -log(U).
    double exponential();
    /// +1 or -1 with equal probability.
    double sign();

    std::uint64_t bits() { return engine_(); }

    template <typename Derived>
    void fill_normal(Eigen::DenseBase<Derived>& out)
    {
        // column-major fill order is part of the reproducibility contract
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = normal();
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace gvar
