#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gvar/embeddings.hpp"
#include "gvar/errors.hpp"
#include "oracles.hpp"

using namespace gvar;

TEST_CASE("Bochner norm examples")
{
    const StepFunction c(AtomPartition::uniform(3), Eigen::Vector2d(3, 4).replicate(1, 3));
    CHECK(l2_bochner_norm(c, NormedSpace::l2(2)) == doctest::Approx(5.0));
    CHECK(l2_bochner_norm(c, NormedSpace::l1(2)) == doctest::Approx(7.0));
    Eigen::MatrixXd v(1, 2);
    v << 1, 2;
    CHECK(l2_bochner_norm(StepFunction(AtomPartition::uniform(2), v), NormedSpace::l2(1)) ==
          doctest::Approx(std::sqrt(2.5)));
    CHECK(l2_bochner_norm(StepFunction(AtomPartition::uniform(2), Eigen::MatrixXd::Zero(3, 2)),
                          NormedSpace::linf(3)) == 0.0);
}

TEST_CASE("random step functions")
{
    const auto a = random_step_function(3, 5, {1, 0});
    const auto b = random_step_function(3, 5, {1, 0});
    CHECK(a.values() == b.values());
    CHECK(a.space() == b.space());
    CHECK(a.space().weights().sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.space().weights().minCoeff() > 0.0);
}

TEST_CASE("Hilbert isometry over trials")
{
    for (auto dir : {EmbeddingDirection::type2, EmbeddingDirection::cotype2}) {
        const auto r = run_embedding_trials(dir, NormedSpace::l2(3), 5, 200, {2, 0}, 0);
        REQUIRE(r.trials.size() == 200);
        for (const auto& t : r.trials) CHECK(std::abs(t.ratio - 1.0) <= 1e-9);
    }
}

TEST_CASE("every norm on R^1 is the modulus")
{
    const auto r = run_embedding_trials(EmbeddingDirection::type2, NormedSpace::linf(1), 4, 100, {3, 0}, 1000);
    for (const auto& t : r.trials) CHECK(std::abs(t.ratio - 1.0) <= 1e-12);
}

TEST_CASE("canonical two-atom ratios")
{
    const StepFunction phi(AtomPartition::uniform(2), Eigen::MatrixXd::Identity(2, 2));
    // l1: ||sum g_n sqrt(1/2) e_n||_1^2 = (|g1| + |g2|)^2 / 2
    const auto l1 = embedding_ratio(phi, NormedSpace::l1(2), {4, 0}, 100000);
    CHECK(l1.bochner_norm == doctest::Approx(1.0));
    CHECK(std::abs(l1.ratio - std::sqrt(oracle::l1_sum_of_two() / 2)) <= 3 * l1.std_error);
    // linf: max(g1^2, g2^2) / 2
    const auto linf = embedding_ratio(phi, NormedSpace::linf(2), {4, 1}, 100000);
    CHECK(std::abs(linf.ratio - std::sqrt(oracle::max_of_two_squares() / 2)) <= 3 * linf.std_error);
}

TEST_CASE("worst trial bookkeeping")
{
    const auto r = run_embedding_trials(EmbeddingDirection::cotype2, NormedSpace::l1(2), 3, 30, {5, 0}, 5000);
    double lo = 1e300, mean = 0;
    for (const auto& t : r.trials) {
        lo = std::min(lo, t.ratio);
        mean += t.ratio / 30;
        CHECK(t.ratio == doctest::Approx(t.gamma_norm / t.bochner_norm));
    }
    CHECK(r.worst_ratio == lo);
    CHECK(r.trials[r.worst_trial].ratio == lo);
    CHECK(r.mean_ratio == doctest::Approx(mean));

    const auto t2 = run_embedding_trials(EmbeddingDirection::type2, NormedSpace::lp(2, 3), 3, 30, {5, 1}, 5000);
    double hi = 0;
    for (const auto& t : t2.trials) hi = std::max(hi, t.ratio);
    CHECK(t2.worst_ratio == hi);
}

TEST_CASE("direction must match the space")
{
    CHECK_THROWS_AS(run_embedding_trials(EmbeddingDirection::type2, NormedSpace::l1(2), 3, 2, {}, 100), ValidationError);
    CHECK_THROWS_AS(run_embedding_trials(EmbeddingDirection::cotype2, NormedSpace::linf(2), 3, 2, {}, 100),
                    ValidationError);
    CHECK_THROWS_AS(run_embedding_trials(EmbeddingDirection::cotype2, NormedSpace::lp(2, 3), 3, 2, {}, 100),
                    ValidationError);
    CHECK(embedding_direction_from_string(to_string(EmbeddingDirection::cotype2)) == EmbeddingDirection::cotype2);
}
