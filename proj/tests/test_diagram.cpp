#include <catch2/catch_amalgamated.hpp>

#include "coends/diagram.hpp"

using namespace coends;

namespace {

FiniteSpace word_space(const GroupModel& g, int radius, const std::string& id) {
    return FiniteSpace::from_ball(
        std::make_shared<CayleyBall>(build_cayley_ball(g, radius)), id);
}

}  // namespace

TEST_CASE("verdict rendering", "[diagram]") {
    REQUIRE(Verdict{Verdict::Kind::Empty, 0}.str() == "empty");
    REQUIRE(Verdict{Verdict::Kind::Exact, 2}.str() == "exact(2)");
    REQUIRE(Verdict{Verdict::Kind::AtLeast, 64}.str() == "at_least(64)");
    REQUIRE(Verdict{Verdict::Kind::Inconclusive, 0}.str() == "inconclusive");
    REQUIRE(Verdict{Verdict::Kind::AtLeast, 64}.kind_str() == "at_least");
}

TEST_CASE("plane pair: grid complement of a line has two ends", "[diagram]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 30, "z2-r30");
    std::vector<int> axis = X.indices_where(
        [&](int i) { return X.ball->points[i].vec[1] == 0; });

    EndsOptions opts;
    opts.sigma_grid = {0.5, 1, 2, 3};
    opts.mu_grid = {0, 3, 6, 9, 12, 15};
    EndsDiagram dg = filtered_ends(X, axis, opts);

    REQUIRE(dg.columns.size() == 4);
    REQUIRE(dg.column(0.5).verdict == Verdict{Verdict::Kind::Empty, 0});
    for (double sigma : {1.0, 2.0, 3.0}) {
        const SigmaColumn& col = dg.column(sigma);
        REQUIRE(col.verdict == Verdict{Verdict::Kind::Exact, 2});
        REQUIRE(col.window_start == 3);  // certified over mu = 9, 12, 15
    }
    REQUIRE(dg.final == Verdict{Verdict::Kind::Exact, 2});
    REQUIRE(dg.cross_sigma_consistent);

    const SigmaColumn& one = dg.column(1.0);
    REQUIRE(one.cells[0].alive_count == 1861);
    REQUIRE(one.cells[0].component_count == 1);
    REQUIRE(one.cells[0].unbounded_count == 1);
    REQUIRE(one.cells[1].alive_count == 1568);  // strip |y| <= 2 removed: 2 * 28^2
    REQUIRE(one.cells[1].component_count == 2);
    REQUIRE(one.cells[1].unbounded_count == 2);
    for (const CellResult& c : one.cells) REQUIRE(c.trusted);

    REQUIRE_THROWS_AS(dg.column(7.0), ScaleOrderError);
}

TEST_CASE("tree pair: branching away from an axis overflows the cap", "[diagram]") {
    GroupModel f2 = GroupModel::free_group(2);
    FiniteSpace X = word_space(f2, 8, "f2-r8");
    Subgroup a = Subgroup::cyclic_word(f2, "a");
    std::vector<int> C = trace_indices(*X.ball, a);
    REQUIRE(C.size() == 17);

    EndsOptions opts;
    opts.sigma_grid = {1};
    opts.mu_grid = {0, 1, 2, 3, 4};
    EndsDiagram dg = filtered_ends(X, C, opts);

    const SigmaColumn& col = dg.columns[0];
    const int alive[] = {13121, 13104, 13074, 12996, 12798};
    const int comps[] = {1, 30, 78, 198, 486};
    const int unb[] = {1, 26, 66, 162, 378};
    for (int k = 0; k < 5; ++k) {
        REQUIRE(col.cells[k].trusted);
        REQUIRE(col.cells[k].alive_count == alive[k]);
        REQUIRE(col.cells[k].component_count == comps[k]);
        REQUIRE(col.cells[k].unbounded_count == unb[k]);
    }
    REQUIRE(dg.final == Verdict{Verdict::Kind::AtLeast, 64});
}

TEST_CASE("comb pair: scale changes the end count", "[diagram]") {
    FiniteSpace X = FiniteSpace::comb(3, 1.0, 30.0, "comb30");

    EndsOptions opts;
    opts.sigma_grid = {0.5, 2, 3};
    opts.mu_grid = {0};
    opts.window = 1;
    EndsDiagram dg = filtered_ends(X, {X.basepoint}, opts);

    REQUIRE(dg.column(0.5).verdict == Verdict{Verdict::Kind::Empty, 0});
    // base row is one unbounded component; each tooth with >= 2 points is another
    REQUIRE(dg.column(2.0).verdict == Verdict{Verdict::Kind::Exact, 54});
    // teeth reattach to the base once sigma reaches the tooth offset
    REQUIRE(dg.column(3.0).verdict == Verdict{Verdict::Kind::Exact, 1});
    REQUIRE(dg.cross_sigma_consistent);
}

TEST_CASE("classical end counts of the standard models", "[diagram]") {
    GroupModel z = GroupModel::free_abelian(1);
    EndsDiagram lines = classical_ends(word_space(z, 30, "z-r30"));
    REQUIRE(lines.final == Verdict{Verdict::Kind::Exact, 2});

    GroupModel z2 = GroupModel::free_abelian(2);
    EndsDiagram plane = classical_ends(word_space(z2, 30, "z2-r30"));
    REQUIRE(plane.final == Verdict{Verdict::Kind::Exact, 1});

    GroupModel f2 = GroupModel::free_group(2);
    EndsDiagram tree = classical_ends(word_space(f2, 9, "f2-r9"));
    REQUIRE(tree.final == Verdict{Verdict::Kind::AtLeast, 64});
    const SigmaColumn& col = tree.columns[0];
    const int comps[] = {1, 4, 12, 36, 108};
    for (int k = 0; k < 5; ++k) REQUIRE(col.cells[k].component_count == comps[k]);
}

TEST_CASE("grid validation and empty filters are rejected", "[diagram]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 6, "z2-r6");

    EndsOptions opts;
    opts.sigma_grid = {};
    opts.mu_grid = {0, 1};
    REQUIRE_THROWS_AS(filtered_ends(X, {0}, opts), ScaleOrderError);

    opts.sigma_grid = {2, 1};
    REQUIRE_THROWS_AS(filtered_ends(X, {0}, opts), ScaleOrderError);

    opts.sigma_grid = {-1, 1};
    REQUIRE_THROWS_AS(filtered_ends(X, {0}, opts), ScaleOrderError);

    opts.sigma_grid = {1};
    opts.mu_grid = {3, 1};
    REQUIRE_THROWS_AS(filtered_ends(X, {0}, opts), ScaleOrderError);

    opts.mu_grid = {0, 1};
    REQUIRE_THROWS_AS(filtered_ends(X, {}, opts), UnsupportedError);
}

TEST_CASE("deep cells outside the horizon are untrusted", "[diagram]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 10, "z2-r10");
    std::vector<int> axis = X.indices_where(
        [&](int i) { return X.ball->points[i].vec[1] == 0; });

    EndsOptions opts;
    opts.sigma_grid = {1};
    opts.mu_grid = {0, 1, 2, 3, 4, 6, 8};  // 6 and 8 exceed radius/2 = 5
    EndsDiagram dg = filtered_ends(X, axis, opts);
    const SigmaColumn& col = dg.columns[0];
    REQUIRE(col.cells[4].trusted);
    REQUIRE_FALSE(col.cells[5].trusted);
    REQUIRE_FALSE(col.cells[6].trusted);
    // verdict certified on the trusted prefix alone
    REQUIRE(dg.final == Verdict{Verdict::Kind::Exact, 2});
}

TEST_CASE("ray witnesses reach the horizon along alive chains", "[diagram]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 30, "z2-r30");
    std::vector<int> axis = X.indices_where(
        [&](int i) { return X.ball->points[i].vec[1] == 0; });

    EndsOptions opts;
    opts.sigma_grid = {1, 3};
    opts.mu_grid = {0, 3, 6, 9, 12, 15};
    EndsDiagram dg = filtered_ends(X, axis, opts);

    std::vector<RayWitness> ws = ray_witnesses(X, dg);
    REQUIRE(ws.size() == 2);
    for (const RayWitness& w : ws) {
        REQUIRE(w.valid);
        REQUIRE(w.sigma == 3.0);
        REQUIRE(w.mu == 15.0);
        REQUIRE_FALSE(w.path.empty());
    }
}
