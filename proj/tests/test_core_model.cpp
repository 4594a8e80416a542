#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "gvar/core/grouping.hpp"
#include "gvar/core/measure.hpp"
#include "gvar/core/normed_space.hpp"
#include "gvar/errors.hpp"
#include "gvar/random.hpp"
#include "oracles.hpp"

using namespace gvar;

TEST_CASE("partition construction and validation")
{
    const auto u = AtomPartition::uniform(4);
    CHECK(u.atoms() == 4);
    CHECK(u.weight(2) == doctest::Approx(0.25));

    const std::vector<double> b{0.0, 0.1, 0.5, 1.0};
    const auto p = AtomPartition::from_boundaries(b);
    CHECK(p.weight(0) == doctest::Approx(0.1));
    CHECK(p.weight(2) == doctest::Approx(0.5));
    const std::vector<Index> set{0, 2};
    CHECK(p.mass(set) == doctest::Approx(0.6));

    const std::vector<double> negative{0.5, -0.1, 0.6};
    CHECK_THROWS_AS(AtomPartition::from_weights(negative), ValidationError);
    const std::vector<double> short_sum{0.5, 0.4};
    CHECK_THROWS_AS(AtomPartition::from_weights(short_sum), ValidationError);
    const std::vector<double> zero{0.5, 0.0, 0.5};
    CHECK_THROWS_AS(AtomPartition::from_weights(zero), ValidationError);
    const std::vector<double> unsorted{0.0, 0.6, 0.4, 1.0};
    CHECK_THROWS_AS(AtomPartition::from_boundaries(unsorted), ValidationError);
    CHECK_THROWS_AS(AtomPartition::uniform(0), ValidationError);
}

TEST_CASE("lp norms on R^2")
{
    Eigen::Vector2d x(3, -4);
    CHECK(NormedSpace::l1(2).norm(x) == 7.0);
    CHECK(NormedSpace::l2(2).norm(x) == 5.0);
    CHECK(NormedSpace::linf(2).norm(x) == 4.0);
    CHECK(NormedSpace::lp(2, 3).norm(x) == doctest::Approx(std::cbrt(91.0)).epsilon(1e-14));

    CHECK(NormedSpace::lp(3, 2.0).kind() == NormKind::L2);
    CHECK(NormedSpace::lp(3, 2.0) == NormedSpace::l2(3));
    CHECK(NormedSpace::linf(1).is_hilbert());
    CHECK_FALSE(NormedSpace::l1(2).is_hilbert());
    CHECK(NormedSpace::lp(2, 1.5).name() == "lp(1.5)");
    CHECK_THROWS_AS(NormedSpace::lp(2, 1.0), ValidationError);
    CHECK_THROWS_AS(NormedSpace::l2(0), ValidationError);

    Eigen::Matrix<double, 2, 3> cols;
    cols << 3, 1, 0, -4, 1, 0;
    const auto sq = NormedSpace::l1(2).column_squared_norms(cols);
    CHECK(sq(0) == 49.0);
    CHECK(sq(1) == 4.0);
    CHECK(sq(2) == 0.0);
}

TEST_CASE("norm axioms on random vectors")
{
    RandomEngine rng({11, 0});
    for (const auto& X : {NormedSpace::l1(3), NormedSpace::l2(3), NormedSpace::linf(3), NormedSpace::lp(3, 1.5),
                          NormedSpace::lp(3, 4)}) {
        for (int t = 0; t < 200; ++t) {
            Eigen::Vector3d x, y;
            rng.fill_normal(x);
            rng.fill_normal(y);
            const double a = rng.normal();
            CHECK(X.norm(x + y) <= X.norm(x) + X.norm(y) + 1e-12);
            CHECK(X.norm(a * x) == doctest::Approx(std::abs(a) * X.norm(x)).epsilon(1e-12));
            CHECK(X.squared_norm(x) == doctest::Approx(X.norm(x) * X.norm(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("measure evaluation is additive over disjoint sets")
{
    RandomEngine rng({5, 1});
    const auto space = AtomPartition::uniform(6);
    Eigen::MatrixXd values(3, 6);
    rng.fill_normal(values);
    const VectorMeasure F(space, values);

    const std::vector<Index> a{0, 4}, b{1, 5, 2}, ab{4, 1, 0, 5, 2};
    const Eigen::VectorXd lhs = evaluate_measure(F, ab);
    const Eigen::VectorXd rhs = evaluate_measure(F, a) + evaluate_measure(F, b);
    CHECK((lhs - rhs).norm() < 1e-14);
    CHECK(evaluate_measure(F, std::vector<Index>{}).norm() == 0.0);

    CHECK_THROWS_AS(evaluate_measure(F, std::vector<Index>{1, 1}), ValidationError);
    CHECK_THROWS_AS(evaluate_measure(F, std::vector<Index>{6}), ValidationError);
    CHECK_THROWS_AS(evaluate_measure(F, std::vector<Index>{-1}), ValidationError);
    CHECK_THROWS_AS(VectorMeasure(space, Eigen::MatrixXd::Zero(3, 5)), ValidationError);
    Eigen::MatrixXd bad = values;
    bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(VectorMeasure(space, bad), ValidationError);
}

TEST_CASE("operator and measure round trip")
{
    RandomEngine rng({9, 2});
    std::vector<double> w{0.1, 0.2, 0.3, 0.4};
    const auto space = AtomPartition::from_weights(w);
    Eigen::MatrixXd values(2, 4);
    rng.fill_normal(values);
    const VectorMeasure F(space, values);
    const auto T = operator_from_measure(F);
    // T(1_A)/sqrt(mu(A)) on atoms: column n = F(A_n)/sqrt(w_n)
    CHECK(T.columns()(1, 2) == doctest::Approx(values(1, 2) / std::sqrt(0.3)));
    const auto back = measure_from_operator(T);
    CHECK((back.values() - values).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::VectorXd coeffs(4);
    coeffs << 1.0, 0.0, 1.0, 0.0; // indicator of {0, 2}
    const Eigen::VectorXd t = T.apply(coeffs);
    CHECK((t - evaluate_measure(F, std::vector<Index>{0, 2})).norm() < 1e-12);
    CHECK((T.apply_indicator(std::vector<Index>{0, 2}) - evaluate_measure(F, std::vector<Index>{0, 2})).norm() <
          1e-12);
}

TEST_CASE("measure of a density")
{
    std::vector<double> w{0.25, 0.75};
    Eigen::MatrixXd phi(2, 2);
    phi << 3, 1, 4, -2;
    const StepFunction f(AtomPartition::from_weights(w), phi);
    const auto F = measure_from_density(f);
    CHECK(F.value(0)(0) == doctest::Approx(0.75));
    CHECK(F.value(1)(1) == doctest::Approx(-1.5));
    // constant density: F(S) is the constant
    const StepFunction c(AtomPartition::uniform(5), Eigen::Vector2d(3, 4).replicate(1, 5));
    const Eigen::VectorXd total = evaluate_measure(measure_from_density(c), std::vector<Index>{0, 1, 2, 3, 4});
    CHECK((total - Eigen::Vector2d(3, 4)).norm() < 1e-14);
}

TEST_CASE("grouping canonical form and validation")
{
    const Grouping g({{3, 1}, {0}}, 4);
    REQUIRE(g.size() == 2);
    CHECK(g.blocks()[0] == Grouping::Block{0});
    CHECK(g.blocks()[1] == Grouping::Block{1, 3});
    CHECK_FALSE(g.covering());
    CHECK(g.block_of() == std::vector<Index>{0, 1, -1, 1});
    CHECK(Grouping::finest(3).size() == 3);
    CHECK(Grouping::single_block(3).covering());
    CHECK(g.block_weight(AtomPartition::uniform(4), 1) == doctest::Approx(0.5));

    CHECK_THROWS_AS(Grouping({{0, 1}, {1}}, 3), ValidationError);
    CHECK_THROWS_AS(Grouping({{0, 3}}, 3), ValidationError);
    CHECK_THROWS_AS(Grouping({{0}, {}}, 3), ValidationError);

    CHECK(precedes(Grouping({{0, 1}}, 2), Grouping::finest(2)));
    CHECK(precedes(Grouping({{0}, {1, 2}}, 3), Grouping({{0, 1}, {2}}, 3)));
}

namespace {

using BlockSet = std::set<std::vector<Index>>;

BlockSet as_set(const Grouping& g) { return {g.blocks().begin(), g.blocks().end()}; }

// Every label vector in {-1, 0, .., N-1}^N, deduplicated as a set of blocks.
std::set<BlockSet> brute_force_groupings(Index n, bool contiguous, bool partial)
{
    std::set<BlockSet> out;
    std::vector<int> label(static_cast<std::size_t>(n), partial ? -1 : 0);
    for (;;) {
        std::vector<std::vector<Index>> blocks(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i)
            if (label[static_cast<std::size_t>(i)] >= 0)
                blocks[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])].push_back(i);
        BlockSet s;
        bool ok = true;
        for (auto& b : blocks) {
            if (b.empty()) continue;
            if (contiguous && b.back() - b.front() + 1 != static_cast<Index>(b.size())) ok = false;
            s.insert(b);
        }
        if (ok && !s.empty()) out.insert(s);
        std::size_t k = 0;
        while (k < label.size() && ++label[k] == static_cast<int>(n)) label[k++] = partial ? -1 : 0;
        if (k == label.size()) break;
    }
    return out;
}

} // namespace

TEST_CASE("enumerator matches brute force for every family")
{
    for (Index n = 1; n <= 6; ++n) {
        for (auto family : {GroupingFamily::all, GroupingFamily::contiguous}) {
            for (auto coverage : {Coverage::covering_only, Coverage::any}) {
                const bool contiguous = family == GroupingFamily::contiguous;
                const auto expected = brute_force_groupings(n, contiguous, coverage == Coverage::any);
                std::set<BlockSet> seen;
                std::size_t count = 0;
                for_each_grouping(n, family, coverage, [&](const Grouping& g) {
                    ++count;
                    seen.insert(as_set(g));
                    CHECK(g.covering() == (coverage == Coverage::covering_only ? true : g.covering()));
                });
                CAPTURE(n);
                CHECK(count == seen.size()); // no duplicates
                CHECK(seen == expected);
                CHECK(grouping_count(n, family, coverage) == expected.size());
            }
        }
    }
}

TEST_CASE("grouping counts follow the Bell recurrence")
{
    const auto bell = oracle::bell_numbers(13);
    for (Index n = 1; n <= 12; ++n) {
        CHECK(grouping_count(n, GroupingFamily::all, Coverage::covering_only) == bell[static_cast<std::size_t>(n)]);
        // a partial collection is a partition of the atoms plus one "dropped" block
        CHECK(grouping_count(n, GroupingFamily::all, Coverage::any) == bell[static_cast<std::size_t>(n + 1)] - 1);
        CHECK(grouping_count(n, GroupingFamily::contiguous, Coverage::covering_only) == (std::uint64_t{1} << (n - 1)));
    }
    CHECK(grouping_count(6, GroupingFamily::all, Coverage::covering_only) == 203);

    std::size_t n8 = 0;
    for_each_grouping(8, GroupingFamily::all, Coverage::covering_only, [&](const Grouping&) { ++n8; });
    CHECK(n8 == 4140);
}

TEST_CASE("enumeration size caps")
{
    CHECK(grouping_cap(GroupingFamily::all, Coverage::covering_only) == 12);
    CHECK_THROWS_AS(GroupingEnumerator(13, GroupingFamily::all, Coverage::covering_only), SizeLimitError);
    CHECK_THROWS_AS(GroupingEnumerator(12, GroupingFamily::all, Coverage::any), SizeLimitError);
    CHECK_THROWS_AS(GroupingEnumerator(21, GroupingFamily::contiguous, Coverage::covering_only), SizeLimitError);
    CHECK_NOTHROW(GroupingEnumerator(20, GroupingFamily::contiguous, Coverage::covering_only));
    try {
        GroupingEnumerator(13, GroupingFamily::all, Coverage::covering_only);
    } catch (const SizeLimitError& e) {
        CHECK(std::string(e.what()).find("Bell(12)") != std::string::npos);
        CHECK(e.cap() == 12);
    }
}
