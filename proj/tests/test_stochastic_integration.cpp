#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "gvar/embeddings.hpp"
#include "gvar/errors.hpp"
#include "gvar/io.hpp"
#include "gvar/parallel.hpp"
#include "gvar/stochastic.hpp"

using namespace gvar;

TEST_CASE("Brownian increments have variance mu(A_n)")
{
    std::vector<double> w{0.1, 0.2, 0.7};
    const auto space = AtomPartition::from_weights(w);
    const Index M = 100000;
    const auto W = sample_brownian(space, M, {1, 0});
    REQUIRE(W.paths() == M);
    REQUIRE(W.atoms() == 3);
    for (Index n = 0; n < 3; ++n) {
        const auto col = W.increments().col(n).array();
        const double var = col.square().mean();
        CHECK(std::abs(var - w[static_cast<std::size_t>(n)]) <= 4 * std::sqrt(2.0 / M) * w[static_cast<std::size_t>(n)]);
        CHECK(std::abs(col.mean()) <= 4 * std::sqrt(w[static_cast<std::size_t>(n)] / M));
    }
    // independent atoms: the sample covariance is small
    const double cov = (W.increments().col(0).array() * W.increments().col(2).array()).mean();
    CHECK(std::abs(cov) <= 4 * std::sqrt(0.1 * 0.7 / M));

    // additivity: W(A u B) = W(A) + W(B) pathwise
    const Eigen::VectorXd ab = W.evaluate(std::vector<Index>{0, 2});
    CHECK((ab - W.increments().col(0) - W.increments().col(2)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK_THROWS_AS(sample_brownian(space, 1, {}), ValidationError);
}

TEST_CASE("Brownian ensembles are reproducible across thread counts")
{
    const auto space = AtomPartition::uniform(5);
    set_threads(1);
    const auto a = sample_brownian(space, 9000, {3, 1});
    set_threads(3);
    const auto b = sample_brownian(space, 9000, {3, 1});
    set_threads(1);
    CHECK(a.increments() == b.increments());
    const auto c = sample_brownian(space, 9000, {3, 2});
    CHECK_FALSE(a.increments() == c.increments());
}

TEST_CASE("stochastic integral is linear in the set")
{
    const auto phi = random_step_function(3, 6, {4, 0});
    const auto W = sample_brownian(phi.space(), 500, {4, 1});
    const std::vector<Index> a{0, 3}, b{1, 5}, ab{0, 1, 3, 5};
    const Eigen::MatrixXd lhs = stochastic_integral(phi, W, ab);
    const Eigen::MatrixXd rhs = stochastic_integral(phi, W, a) + stochastic_integral(phi, W, b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    // row m is sum_n phi_n W_m(A_n)
    const Eigen::VectorXd row = phi.values().col(0) * W.increments()(7, 0) + phi.values().col(3) * W.increments()(7, 3);
    CHECK((stochastic_integral(phi, W, a).row(7).transpose() - row).norm() < 1e-14);
}

TEST_CASE("Ito isometry in l2")
{
    const auto phi = random_step_function(3, 10, {5, 0});
    const auto W = sample_brownian(phi.space(), 100000, {5, 1});
    std::vector<Index> all(10);
    for (Index n = 0; n < 10; ++n) all[static_cast<std::size_t>(n)] = n;
    const Eigen::MatrixXd I = stochastic_integral(phi, W, all);
    const auto m = monte_carlo_estimate(sample_moments(I.rowwise().squaredNorm()));
    double exact = 0;
    for (Index n = 0; n < 10; ++n) exact += phi.space().weight(n) * phi.values().col(n).squaredNorm();
    CHECK(std::abs(m.value - exact) <= 3 * m.std_error);
}

TEST_CASE("induced measure blocks equal the stochastic integral")
{
    const auto phi = random_step_function(2, 5, {6, 0});
    const auto W = sample_brownian(phi.space(), 300, {6, 1});
    const auto G = induced_randomized_measure(phi, W, NormedSpace::l1(2));
    const std::vector<Index> set{4, 1};
    const Eigen::MatrixXd blocks = G.block_samples(set);
    const Eigen::MatrixXd direct = stochastic_integral(phi, W, set);
    CHECK((blocks - direct.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((G.block_samples(set, 10, 20) - direct.transpose().middleCols(10, 10)).cwiseAbs().maxCoeff() < 1e-14);

    const auto values = G.view();
    const auto bs = values.block_samples(Grouping({{1, 4}, {2}}, 5));
    REQUIRE(bs.size() == 2);
    CHECK((bs[0] - blocks).cwiseAbs().maxCoeff() < 1e-14);

    const auto H = induced_randomized_measure(phi, W, NormedSpace::l2(2));
    const Eigen::MatrixXd gram = H.gram(0, 300);
    const Eigen::MatrixXd b0 = H.block_samples(std::vector<Index>{0});
    const Eigen::MatrixXd b3 = H.block_samples(std::vector<Index>{3});
    CHECK(gram(0, 3) == doctest::Approx((b0.array() * b3.array()).sum() / 300).epsilon(1e-12));
    CHECK_THROWS_AS(G.gram(0, 300), ValidationError);
}

TEST_CASE("randomisation identity on block integrals")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto phi = random_step_function(2, 5, {seed, 10});
        const auto W = sample_brownian(phi.space(), 20000, {seed, 11});
        for (auto X : {NormedSpace::l1(2), NormedSpace::linf(2), NormedSpace::l2(2)}) {
            const auto G = induced_randomized_measure(phi, W, X);
            for (const auto& g : {Grouping::finest(5), Grouping({{0, 2}, {1, 3, 4}}, 5), Grouping({{4}}, 5)}) {
                const auto v = check_randomisation_identity(G, g);
                CHECK(v.passed);
            }
        }
    }
    // a single block: both sides are the same numbers
    const auto phi = random_step_function(2, 3, {1, 12});
    const auto W = sample_brownian(phi.space(), 100, {1, 13});
    const auto v = check_randomisation_identity(phi, W, NormedSpace::l1(2), Grouping::single_block(3));
    CHECK(v.randomized.value == doctest::Approx(v.plain.value).epsilon(1e-14));

    const auto big = random_step_function(1, 21, {1, 14});
    const auto WB = sample_brownian(big.space(), 10, {1, 15});
    CHECK_THROWS_AS(check_randomisation_identity(big, WB, NormedSpace::l1(1), Grouping::finest(21)), SizeLimitError);
}

TEST_CASE("randomized variation of W is one")
{
    for (Index n : {4, 16}) {
        const auto space = AtomPartition::uniform(n);
        const StepFunction one(space, Eigen::MatrixXd::Ones(1, n));
        const auto W = sample_brownian(space, 100000, {2, static_cast<std::uint64_t>(n)});
        const auto G = induced_randomized_measure(one, W, NormedSpace::l2(1));
        const auto r = empirical_randomized_variation(G, {}, {2, 99});
        CHECK(std::abs(r.estimate.value - 1.0) <= 3 * r.estimate.std_error);
        CHECK(r.estimate.samples == 50000);
    }
}

TEST_CASE("norm identity for a constant density")
{
    const StepFunction phi(AtomPartition::uniform(4), Eigen::Vector2d(3, 4).replicate(1, 4));
    const auto r = verify_norm_identity(phi, NormedSpace::l2(2), 100000, 0, {8, 0});
    CHECK(r.passed);
    CHECK(r.gamma_variation.norm == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(std::abs(r.integral.value - 25.0) <= 3 * r.integral.std_error);
    CHECK(std::abs(r.randomized.estimate.value - 25.0) <= 3 * r.randomized.estimate.std_error);

    const auto phi1 = random_step_function(2, 4, {8, 1});
    CHECK(verify_norm_identity(phi1, NormedSpace::l1(2), 40000, 40000, {8, 2}).passed);
}

TEST_CASE("binary ensemble dump round trip")
{
    const auto W = sample_brownian(AtomPartition::uniform(3), 17, {9, 0});
    std::stringstream buf;
    io::write_ensemble(buf, W);
    const auto bytes = buf.str();
    CHECK(bytes.size() == 16 + 17 * 3 * 8);
    CHECK(bytes.substr(0, 4) == "GVLB");
    const auto back = io::read_ensemble_increments(buf);
    CHECK(back == W.increments());

    std::stringstream bad("XXXX0000000000000000");
    CHECK_THROWS(io::read_ensemble_increments(bad));
}
