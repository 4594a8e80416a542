#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace oracle {

struct GaussLegendre {
    std::vector<double> nodes, weights; // on [-1, 1]

    explicit GaussLegendre(int n)
    {
        nodes.resize(static_cast<std::size_t>(n));
        weights.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[static_cast<std::size_t>(i)] = x;
            weights[static_cast<std::size_t>(i)] = 2 / ((1 - x * x) * dp * dp);
        }
    }

    // composite rule on [a, b] with `panels` equal panels
    template <class F>
    double integrate(F f, double a, double b, int panels) const
    {
        const double h = (b - a) / panels;
        double s = 0;
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * h;
            for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(mid + 0.5 * h * nodes[i]);
        }
        return 0.5 * h * s;
    }
};

inline double gauss_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }

// E max(g1^2, g2^2) = 1 + E|g2^2 - g1^2| / 2. On the octant 0 <= x <= y the
// integrand y^2 - x^2 is smooth; the eight octants contribute equally.
inline double max_of_two_squares(double cutoff = 12.0)
{
    const GaussLegendre gl(40);
    const double octant = gl.integrate(
        [&](double y) {
            const double inner = gl.integrate([&](double x) { return (y * y - x * x) * gauss_pdf(x); }, 0.0, y, 1);
            return inner * gauss_pdf(y);
        },
        0.0, cutoff, 48);
    return 1.0 + 0.5 * 8.0 * octant;
}

// E(|g1| + |g2|)^2 by quadrature over the positive quadrant.
inline double l1_sum_of_two(double cutoff = 12.0)
{
    const GaussLegendre gl(40);
    const double quadrant = gl.integrate(
        [&](double y) {
            return gl.integrate([&](double x) { return (x + y) * (x + y) * gauss_pdf(x); }, 0.0, cutoff, 48) *
                   gauss_pdf(y);
        },
        0.0, cutoff, 48);
    return 4.0 * quadrant;
}

// E_r||sum_k r_k v_k||^2 over all 2^k sign patterns, no symmetry tricks.
template <class Norm>
double brute_force_signs(const Eigen::MatrixXd& v, Norm norm)
{
    const auto k = v.cols();
    double s = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(v.rows());
        for (Eigen::Index j = 0; j < k; ++j) x += ((mask >> j) & 1 ? -1.0 : 1.0) * v.col(j);
        const double n = norm(x);
        s += n * n;
    }
    return s / static_cast<double>(std::uint64_t{1} << k);
}

inline double lp_norm(const Eigen::VectorXd& x, double p)
{
    double s = 0;
    for (double c : x) s += std::pow(std::abs(c), p);
    return std::pow(s, 1.0 / p);
}

// Bell numbers from the Bell triangle.
inline std::vector<std::uint64_t> bell_numbers(int n_max)
{
    std::vector<std::uint64_t> bell{1};
    std::vector<std::uint64_t> row{1};
    for (int n = 1; n <= n_max; ++n) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto x : row) next.push_back(next.back() + x);
        bell.push_back(next.front());
        row = std::move(next);
    }
    return bell;
}

} // namespace oracle
