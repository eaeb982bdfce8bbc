#include <catch2/catch_amalgamated.hpp>

#include "coends/qimap.hpp"

using namespace coends;

namespace {

FiniteSpace word_space(const GroupModel& g, int radius, const std::string& id) {
    return FiniteSpace::from_ball(
        std::make_shared<CayleyBall>(build_cayley_ball(g, radius)), id);
}

}  // namespace

TEST_CASE("identity between equal generating sets is an isometry", "[qimap]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 12, "std-a");
    FiniteSpace Y = word_space(z2, 12, "std-b");
    QISample q = qi_identity_elements(X, Y);
    QIConstants k = measure_qi(q, 6.0);
    REQUIRE(k.L == 1.0);
    REQUIRE(k.C == 0.0);
    REQUIRE(k.displacement == 0.0);
    REQUIRE(k.codensity == 0.0);
    REQUIRE(k.all_exact);
}

TEST_CASE("adding the diagonal generator halves some distances", "[qimap]") {
    GroupModel std2 = GroupModel::free_abelian(2);
    GroupModel diag = GroupModel::free_abelian(2, {{1, 0}, {0, 1}, {1, 1}});
    FiniteSpace X = word_space(std2, 12, "std");
    FiniteSpace Y = word_space(diag, 12, "diag");
    QISample q = qi_identity_elements(X, Y);
    QIConstants k = measure_qi(q, 6.0);
    REQUIRE(k.L == 2.0);  // d_std((0,0),(n,n)) = 2n, d_diag = n
    REQUIRE(k.C == 0.0);
    REQUIRE(k.displacement == 0.0);
    REQUIRE(k.codensity == 0.0);
    REQUIRE(k.all_exact);
}

TEST_CASE("translation is a basepoint-moving isometry", "[qimap]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 12, "z2");
    Element g;
    g.vec = {0, 3};
    QISample q = qi_translation(X, g);
    QIConstants k = measure_qi(q, 5.0);
    REQUIRE(k.L == 1.0);
    REQUIRE(k.displacement == 0.0);
    // within the window every point is an image: (x - g) stays visible
    REQUIRE(k.codensity == 0.0);
}

TEST_CASE("unsupported map constructions are rejected", "[qimap]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    GroupModel f2 = GroupModel::free_group(2);
    FiniteSpace W = word_space(z2, 4, "w");
    FiniteSpace F = word_space(f2, 4, "f");
    FiniteSpace E = FiniteSpace::explicit_matrix({0, 1, 1, 0}, 2, "e");
    REQUIRE_THROWS_AS(qi_identity_elements(W, E), UnsupportedError);
    REQUIRE_THROWS_AS(qi_transpose(F, F), UnsupportedError);
    Element g;
    g.vec = {1, 0};
    REQUIRE_THROWS_AS(qi_translation(E, g), UnsupportedError);
}

TEST_CASE("the induced end map between generating sets is a bijection", "[qimap]") {
    GroupModel std2 = GroupModel::free_abelian(2);
    GroupModel diag = GroupModel::free_abelian(2, {{1, 0}, {0, 1}, {1, 1}});
    FiniteSpace X = word_space(std2, 30, "std");
    FiniteSpace Y = word_space(diag, 30, "diag");
    std::vector<int> CX = X.indices_where(
        [&](int i) { return X.ball->points[i].vec[1] == 0; });
    std::vector<int> CY = Y.indices_where(
        [&](int i) { return Y.ball->points[i].vec[1] == 0; });

    EndsOptions opts;
    opts.sigma_grid = {1, 2};
    opts.mu_grid = {0, 3, 6, 9, 12, 15};
    EndsDiagram dgX = filtered_ends(X, CX, opts);
    EndsDiagram dgY = filtered_ends(Y, CY, opts);
    REQUIRE(dgX.final == Verdict{Verdict::Kind::Exact, 2});
    REQUIRE(dgY.final == Verdict{Verdict::Kind::Exact, 2});

    QISample q = qi_identity_elements(X, Y);
    InducedEndMap m = induced_end_map(X, CX, dgX, Y, CY, dgY, q, 2.0, 0.0);
    REQUIRE(m.valid);
    REQUIRE(m.r == 0.0);
    REQUIRE(m.source_sigma == 1.0);
    REQUIRE(m.source_mu == 15.0);
    REQUIRE(m.target_sigma == 2.0);
    REQUIRE(m.target_mu == 6.0);
    REQUIRE(m.well_defined);
    REQUIRE(m.injective);
    REQUIRE(m.surjective);
    REQUIRE(m.end_map.size() == 2);
}

TEST_CASE("the transpose map swaps the two axes of the plane", "[qimap]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 30, "plane-a");
    FiniteSpace Y = word_space(z2, 30, "plane-b");
    std::vector<int> CX = X.indices_where(
        [&](int i) { return X.ball->points[i].vec[1] == 0; });
    std::vector<int> CY = Y.indices_where(
        [&](int i) { return Y.ball->points[i].vec[0] == 0; });

    EndsOptions opts;
    opts.sigma_grid = {1, 3};
    opts.mu_grid = {0, 3, 6, 9, 12, 15};
    EndsDiagram dgX = filtered_ends(X, CX, opts);
    EndsDiagram dgY = filtered_ends(Y, CY, opts);

    QISample q = qi_transpose(X, Y);
    QIConstants k = measure_qi(q, 15.0);
    REQUIRE(k.L == 1.0);
    REQUIRE(k.all_exact);

    InducedEndMap m = induced_end_map(X, CX, dgX, Y, CY, dgY, q, 1.0, 0.0);
    REQUIRE(m.valid);
    REQUIRE(m.r == 0.0);
    REQUIRE(m.source_sigma == 3.0);
    REQUIRE(m.source_mu == 15.0);
    REQUIRE(m.target_sigma == 3.0);
    REQUIRE(m.target_mu == 15.0);
    REQUIRE(m.well_defined);
    REQUIRE(m.injective);
    REQUIRE(m.surjective);
}
