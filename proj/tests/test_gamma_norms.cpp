#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gvar/embeddings.hpp"
#include "gvar/errors.hpp"
#include "gvar/gamma_norms.hpp"
#include "oracles.hpp"

using namespace gvar;

namespace {

VectorMeasure random_measure(Index d, Index n, std::uint64_t seed)
{
    return measure_from_density(random_step_function(d, n, {seed, 0}));
}

double hilbert_closed_form(const VectorMeasure& F)
{
    double s = 0;
    for (Index n = 0; n < F.atoms(); ++n) s += F.value(n).squaredNorm() / F.space().weight(n);
    return std::sqrt(s);
}

} // namespace

TEST_CASE("constant density in l2")
{
    std::vector<double> w{0.1, 0.6, 0.3};
    const StepFunction phi(AtomPartition::from_weights(w), Eigen::Vector2d(3, 4).replicate(1, 3));
    const auto r = gamma_variation_norm(measure_from_density(phi), NormedSpace::l2(2), {}, 0);
    CHECK(r.norm == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(r.estimate.method == EstimateMethod::exact_hilbert);
    CHECK(r.mode == SearchMode::fast_path);
    CHECK(r.grouping == Grouping::finest(3));
}

TEST_CASE("scalar measures have the one-dimensional closed form")
{
    std::vector<double> w{0.2, 0.3, 0.5};
    Eigen::MatrixXd v(1, 3);
    v << 1.0, -2.0, 0.5;
    const VectorMeasure F(AtomPartition::from_weights(w), v);
    const double expected = std::sqrt(1 / 0.2 + 4 / 0.3 + 0.25 / 0.5);
    for (auto X : {NormedSpace::l1(1), NormedSpace::linf(1), NormedSpace::lp(1, 3)}) {
        for (auto mode : {SearchMode::fast_path, SearchMode::exhaustive, SearchMode::contiguous}) {
            const auto r = gamma_variation_norm(F, X, {}, 0, {mode});
            CHECK(r.norm == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("two atoms into linf give sqrt(1 + 2/pi)")
{
    Eigen::MatrixXd v(2, 2);
    v << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    const VectorMeasure F(AtomPartition::uniform(2), v);
    const auto r = gamma_variation_norm(F, NormedSpace::linf(2), {4, 0}, 100000);
    CHECK(std::abs(r.estimate.value - oracle::max_of_two_squares()) <= 3 * r.estimate.std_error);

    const DiscreteOperator T(AtomPartition::uniform(2), Eigen::MatrixXd::Identity(2, 2));
    const auto s = gamma_summing_norm(T, NormedSpace::linf(2), {4, 1}, 100000);
    CHECK(std::abs(s.estimate.value - oracle::max_of_two_squares()) <= 3 * s.estimate.std_error);
}

TEST_CASE("gamma-summing norm examples")
{
    Eigen::MatrixXd c(2, 2);
    c << 3, 0, 0, 4;
    CHECK(gamma_summing_norm(DiscreteOperator(AtomPartition::uniform(2), c), NormedSpace::l2(2), {}, 0).norm == 5.0);
    const DiscreteOperator zero(AtomPartition::uniform(3), Eigen::MatrixXd::Zero(2, 3));
    CHECK(gamma_summing_norm(zero, NormedSpace::l1(2), {}, 1000).norm == 0.0);
    CHECK(gamma_variation_norm(measure_from_operator(zero), NormedSpace::linf(2), {}, 1000).norm == 0.0);
}

TEST_CASE("Hilbert exactness over random measures")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Index d = 1 + static_cast<Index>(seed % 4);
        const Index n = 1 + static_cast<Index>(seed % 8);
        const auto F = random_measure(d, n, seed);
        const auto X = NormedSpace::l2(d);
        const auto v = gamma_variation_norm(F, X, {}, 0);
        const auto s = gamma_summing_norm(operator_from_measure(F), X, {}, 0);
        CHECK(std::abs(v.norm - hilbert_closed_form(F)) <= 1e-12 * std::max(1.0, v.norm));
        CHECK(std::abs(v.norm - s.norm) <= 1e-9 * std::max(1.0, v.norm));
    }
}

TEST_CASE("the finest grouping attains the supremum")
{
    // l2: exact, every mode agrees with the fast path
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto F = random_measure(3, 6, 100 + seed);
        const auto X = NormedSpace::l2(3);
        const auto fast = gamma_variation_norm(F, X, {}, 0);
        const auto full = gamma_variation_norm(F, X, {}, 0, {SearchMode::exhaustive, true});
        CHECK(full.groupings_searched == grouping_count(6, GroupingFamily::all, Coverage::any));
        CHECK(full.norm == doctest::Approx(fast.norm).epsilon(1e-12));
        CHECK(full.grouping == Grouping::finest(6));
    }
    // off Hilbert: no grouping beats the finest by more than 3 sigma on shared draws
    const auto F = random_measure(2, 5, 7);
    for (auto X : {NormedSpace::l1(2), NormedSpace::linf(2)}) {
        const GaussianDraws draws(5, 20000, {8, 0});
        const auto finest = grouping_gaussian_moment(F, Grouping::finest(5), X, draws);
        for_each_grouping(5, GroupingFamily::all, Coverage::any, [&](const Grouping& g) {
            CHECK(dominated_by(grouping_gaussian_moment(F, g, X, draws), finest, 3.0).consistent);
        });
    }
}

TEST_CASE("grouping Gaussian map")
{
    std::vector<double> w{0.25, 0.25, 0.5};
    Eigen::MatrixXd v(1, 3);
    v << 1, 2, 3;
    const VectorMeasure F(AtomPartition::from_weights(w), v);
    const auto A = grouping_gaussian_map(F, Grouping({{0, 1}}, 3));
    // block {0,1}: F(B) = 3, mu(B) = 1/2; column n = F(B) sqrt(w_n) / mu(B)
    CHECK(A(0, 0) == doctest::Approx(3 * 0.5 / 0.5));
    CHECK(A(0, 1) == doctest::Approx(3 * 0.5 / 0.5));
    CHECK(A(0, 2) == 0.0);
    // E(sum gamma_n A_n)^2 = F(B)^2 / mu(B)
    CHECK(A.squaredNorm() == doctest::Approx(9 / 0.5));
}

TEST_CASE("exhaustive search is capped")
{
    const auto F = random_measure(2, 13, 1);
    CHECK_THROWS_AS(gamma_variation_norm(F, NormedSpace::l1(2), {}, 100, {SearchMode::exhaustive}), SizeLimitError);
    CHECK_NOTHROW(gamma_variation_norm(F, NormedSpace::l1(2), {}, 100, {SearchMode::contiguous}));
}

TEST_CASE("duality off Hilbert")
{
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto F = random_measure(3, 4, 200 + seed);
        for (auto X : {NormedSpace::l1(3), NormedSpace::linf(3)}) {
            const auto v = verify_duality(F, X, {seed, 9}, 50000);
            CHECK(v.passed);
        }
    }
    const auto F = random_measure(2, 3, 5);
    const auto h = verify_duality(F, NormedSpace::l2(2), {}, 0);
    CHECK(h.passed);
    CHECK(h.comparison.gap == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("total variation")
{
    Eigen::MatrixXd v(2, 3);
    v << 3, 1, 0, 4, 0, -2;
    const VectorMeasure F(AtomPartition::uniform(3), v);
    CHECK(total_variation_norm(F, NormedSpace::l2(2)) == doctest::Approx(5 + 1 + 2));
    CHECK(total_variation_norm(F, NormedSpace::l1(2)) == doctest::Approx(7 + 1 + 2));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto G = random_measure(3, 6, 300 + seed);
        const auto X = NormedSpace::lp(3, 1.5);
        const double tv = total_variation_norm(G, X);
        for_each_grouping(6, GroupingFamily::contiguous, Coverage::any, [&](const Grouping& g) {
            double s = 0;
            for (const auto& b : g.blocks()) s += X.norm(evaluate_measure(G, b));
            CHECK(s <= tv + 1e-12);
        });
    }
}

TEST_CASE("randomized variation over Gram values")
{
    // independent unit-variance blocks: every covering grouping gives the same moment
    const Eigen::VectorXd w = AtomPartition::uniform(7).weights();
    const GramValues diag(Eigen::MatrixXd(w.asDiagonal()));
    const auto r = randomized_variation_norm(diag);
    CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));

    // greedy never exceeds the exhaustive maximum
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomEngine rng({seed, 77});
        Eigen::MatrixXd b(4, 8);
        rng.fill_normal(b);
        const GramValues gram(b.transpose() * b);
        const auto ex = randomized_variation_norm(gram, {SearchMode::exhaustive});
        const auto gr = randomized_variation_norm(gram, {SearchMode::greedy});
        CHECK(gr.norm <= ex.norm + 1e-12);
        CHECK(ex.norm >= std::sqrt(b.squaredNorm()) - 1e-12); // finest grouping is a candidate
    }
}

TEST_CASE("randomized variation of plain vectors")
{
    Eigen::MatrixXd v(2, 3);
    v << 1, 1, -1, 0, 0, 1;
    // l2: sup over groupings of sum_B ||F(B)||^2; merging the parallel pair wins
    const PlainValues l2(v, NormedSpace::l2(2));
    const auto r = randomized_variation_norm(l2);
    CHECK(r.estimate.value == doctest::Approx(6.0));
    CHECK(r.grouping == Grouping({{0, 1}, {2}}, 3));
    const PlainValues l1(v, NormedSpace::l1(2));
    CHECK(randomized_variation_norm(l1).estimate.value >= 6.0 - 1e-12);
}

TEST_CASE("search mode names round trip")
{
    for (auto m : {SearchMode::automatic, SearchMode::fast_path, SearchMode::exhaustive, SearchMode::contiguous,
                   SearchMode::greedy})
        CHECK(search_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(search_mode_from_string("fastest"), ValidationError);
}
