#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "coends/pairs.hpp"

using namespace coends;

namespace {

FiniteSpace word_space(const GroupModel& g, int radius, const std::string& id) {
    return FiniteSpace::from_ball(
        std::make_shared<CayleyBall>(build_cayley_ball(g, radius)), id);
}

}  // namespace

TEST_CASE("subgroup generating sets walk the subgroup", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    Subgroup lat = Subgroup::lattice(z2, {{2, 4}, {0, 6}});
    REQUIRE(subgroup_generating_set(z2, lat).size() == 4);

    GroupModel f2 = GroupModel::free_group(2);
    Subgroup cyc = Subgroup::cyclic_word(f2, "ab");
    auto gens = subgroup_generating_set(f2, cyc);
    REQUIRE(gens.size() == 2);
    REQUIRE(gens[0] == f2.parse_word("ab"));
    REQUIRE(gens[1] == f2.parse_word("BA"));

    REQUIRE(subgroup_generating_set(z2, Subgroup::trivial(z2)).empty());
}

TEST_CASE("visible cosets of an axis in the free group", "[pairs]") {
    GroupModel f2 = GroupModel::free_group(2);
    FiniteSpace X = word_space(f2, 2, "f2-r2");
    Subgroup a = Subgroup::cyclic_word(f2, "a");
    PairFamily fam = enumerate_cosets(X, {&a});

    REQUIRE(fam.families.size() == 1);
    const CosetFamily& f = fam.families[0];
    REQUIRE(f.traces.size() == 9);
    REQUIRE(fam.coset_count() == 9);
    // the subgroup's own coset is discovered first, at the identity
    REQUIRE(f.rep[0] == 0);
    REQUIRE(f.traces[0].size() == 5);  // e, a, A, aa, AA

    std::vector<int> sizes;
    for (const auto& t : f.traces) sizes.push_back(static_cast<int>(t.size()));
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    REQUIRE(sizes == std::vector<int>{5, 3, 3, 1, 1, 1, 1, 1, 1});

    // every ball point appears in exactly one trace
    std::size_t total = 0;
    for (const auto& t : f.traces) total += t.size();
    REQUIRE(total == X.size());
}

TEST_CASE("matching a family against itself is diagonal", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 12, "z2-r12");
    Subgroup axis = Subgroup::lattice(z2, {{1, 0}});
    PairFamily fam = enumerate_cosets(X, {&axis});

    QISample q = qi_identity_elements(X, X);
    PairCheckReport rep = pair_qi_check(q, fam, fam, {0.5, 1.0, 2.0});

    REQUIRE(rep.source_cosets.size() == 13);  // rows |k| <= 6
    REQUIRE(rep.target_cosets.size() == 13);
    REQUIRE(rep.matched);
    REQUIRE(rep.M == 0.5);
    REQUIRE(rep.matched_at == std::vector<char>{1, 1, 1});
    for (std::size_t a = 0; a < rep.match_lists.size(); ++a)
        REQUIRE(rep.match_lists[a] == std::vector<int>{static_cast<int>(a)});
    REQUIRE(rep.constants.L == 1.0);
    REQUIRE(rep.constants.displacement == 0.0);
}

TEST_CASE("a translation shifts rows past the window until M covers it", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 12, "z2-r12");
    Subgroup axis = Subgroup::lattice(z2, {{1, 0}});
    PairFamily fam = enumerate_cosets(X, {&axis});

    Element g;
    g.vec = {0, 3};
    QISample q = qi_translation(X, g);
    PairCheckReport rep = pair_qi_check(q, fam, fam, {0.25, 0.5});

    REQUIRE_FALSE(rep.matched);
    REQUIRE(rep.matched_at == std::vector<char>{0, 0});
    // rows k = 4, 5, 6 land beyond the trusted window; rows m = -4, -5, -6 unhit
    REQUIRE(rep.unmatched_source == std::vector<int>{8, 10, 12});
    REQUIRE(rep.unmatched_target == std::vector<int>{7, 9, 11});
}

TEST_CASE("approximate stabilizer of the plane axis", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 20, "z2-r20");
    std::vector<int> A = X.indices_where(
        [&](int i) { return X.ball->points[i].vec[1] == 0; });
    QISample q = qi_identity_elements(X, X);

    StabilizerResult res = approx_stabilizer(q, A, 3.0, 5.0);
    REQUIRE_FALSE(res.inconclusive);
    REQUIRE(res.delta == 0.0);
    REQUIRE(res.candidates.size() == 61);  // the whole radius-5 ball
    for (std::size_t i = 0; i < res.candidates.size(); ++i) {
        long long g2 = X.ball->points[res.candidates[i]].vec[1];
        REQUIRE(res.h[i] == static_cast<double>(std::llabs(g2)));
        REQUIRE(res.h_exact[i] == 1);
        REQUIRE(res.member[i] == (std::llabs(g2) <= 3 ? 1 : 0));
    }
    REQUIRE(res.members().size() == 53);
}

TEST_CASE("approximate stabilizer of the free-group axis is the axis", "[pairs]") {
    GroupModel f2 = GroupModel::free_group(2);
    FiniteSpace X = word_space(f2, 10, "f2-r10");
    Subgroup a = Subgroup::cyclic_word(f2, "a");
    std::vector<int> A = trace_indices(*X.ball, a);
    QISample q = qi_identity_elements(X, X);

    StabilizerResult res = approx_stabilizer(q, A, 2.0);  // gmax defaults to 2
    REQUIRE(res.gmax == 2.0);
    REQUIRE(res.candidates.size() == 17);  // the radius-2 ball of the tree

    std::set<std::string> got;
    for (int gi : res.members()) got.insert(f2.key(X.ball->points[gi]));
    std::set<std::string> want;
    for (const char* w : {"", "a", "A", "aa", "AA"}) want.insert(f2.key(f2.parse_word(w)));
    REQUIRE(got == want);
}

TEST_CASE("commensuration probes separate powers from escapers", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    Subgroup axis = Subgroup::lattice(z2, {{1, 0}});
    Element g;
    g.vec = {0, 3};
    CommensuratorProbe p = commensurator_probe(z2, axis, g, {4, 8, 12});
    REQUIRE(p.h == std::vector<double>{4, 3, 3});  // R=4 still feels the cut
    REQUIRE(p.verdict == CommensuratorProbe::Verdict::Bounded);
    REQUIRE(p.bound == 3.0);
    REQUIRE(p.verdict_str() == "bounded");

    GroupModel f2 = GroupModel::free_group(2);
    Subgroup a = Subgroup::cyclic_word(f2, "a");
    CommensuratorProbe pow =
        commensurator_probe(f2, a, f2.parse_word("aa"), {4, 6, 8});
    REQUIRE(pow.verdict == CommensuratorProbe::Verdict::Bounded);
    REQUIRE(pow.bound == 0.0);

    CommensuratorProbe esc =
        commensurator_probe(f2, a, f2.parse_word("b"), {4, 6, 8, 10});
    REQUIRE(esc.h == std::vector<double>{3, 4, 5, 6});
    REQUIRE(esc.verdict == CommensuratorProbe::Verdict::Diverging);
    REQUIRE(esc.trend_slope == 0.5);
    REQUIRE(esc.verdict_str() == "diverging");

    REQUIRE_THROWS_AS(commensurator_probe(f2, a, f2.parse_word("b"), {8, 4}),
                      ScaleOrderError);
    REQUIRE_THROWS_AS(commensurator_probe(f2, a, f2.parse_word("b"), {}),
                      ScaleOrderError);
}

TEST_CASE("coarse connectedness scale of subgroup traces", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 8, "z2-r8");

    Subgroup sparse = Subgroup::lattice(z2, {{2, 0}});
    ConnectednessScale s = coarse_connectedness_scale(X, trace_indices(*X.ball, sparse));
    REQUIRE(s.certified);
    REQUIRE(s.sigma == 2.0);

    Subgroup axis = Subgroup::lattice(z2, {{1, 0}});
    ConnectednessScale t = coarse_connectedness_scale(X, trace_indices(*X.ball, axis));
    REQUIRE(t.certified);
    REQUIRE(t.sigma == 1.0);

    GroupModel f2 = GroupModel::free_group(2);
    FiniteSpace F = word_space(f2, 4, "f2-r4");
    Subgroup a = Subgroup::cyclic_word(f2, "a");
    ConnectednessScale u = coarse_connectedness_scale(F, trace_indices(*F.ball, a));
    REQUIRE(u.certified);
    REQUIRE(u.sigma == 1.0);

    ConnectednessScale v = coarse_connectedness_scale(X, {0});
    REQUIRE(v.certified);
    REQUIRE(v.sigma == 0.0);

    REQUIRE_THROWS_AS(coarse_connectedness_scale(X, {}), UnsupportedError);
}

TEST_CASE("perpendicularity bounds scale with the probe depth", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 12, "z2-r12");
    Subgroup axis = Subgroup::lattice(z2, {{1, 0}});
    Subgroup yaxis = Subgroup::lattice(z2, {{0, 1}});
    Subgroup diag = Subgroup::lattice(z2, {{1, 1}});

    PerpendicularityBound p1 = perpendicularity_bound(X, axis, yaxis, 1.0, {8, 12});
    REQUIRE(p1.M == std::vector<double>{1, 1});
    REQUIRE(p1.exact == std::vector<char>{1, 1});

    PerpendicularityBound p3 = perpendicularity_bound(X, axis, yaxis, 3.0, {8, 12});
    REQUIRE(p3.M == std::vector<double>{3, 3});

    // the diagonal meets the axis at twice the approach rate
    PerpendicularityBound pd = perpendicularity_bound(X, diag, axis, 3.0, {12});
    REQUIRE(pd.M == std::vector<double>{6});
    PerpendicularityBound pd1 = perpendicularity_bound(X, diag, axis, 1.0, {12});
    REQUIRE(pd1.M == std::vector<double>{2});  // monotone in the probe depth

    GroupModel f2 = GroupModel::free_group(2);
    FiniteSpace F = word_space(f2, 8, "f2-r8");
    Subgroup a = Subgroup::cyclic_word(f2, "a");
    Subgroup b = Subgroup::cyclic_word(f2, "b");
    PerpendicularityBound pf = perpendicularity_bound(F, a, b, 1.0, {8});
    REQUIRE(pf.M == std::vector<double>{1});
}

TEST_CASE("induction to an index-two subgroup keeps one orbit", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 12, "z2-r12");
    Subgroup H = Subgroup::lattice(z2, {{2, 0}, {0, 1}});
    Subgroup axis = Subgroup::lattice(z2, {{1, 0}});

    InducedCollection col = induce_finite_index_collection(X, H, {&axis});
    REQUIRE(col.index == 2);
    REQUIRE(col.orbits.size() == 1);
    const InducedOrbit& orb = col.orbits[0];
    REQUIRE(orb.coset_ids.size() == 13);  // all trusted rows, one orbit
    REQUIRE(orb.rep == z2.identity());
    // Q = even points of the axis; the axis row is its 1-neighborhood
    for (int i : orb.Q_trace) {
        REQUIRE(X.ball->points[i].vec[1] == 0);
        REQUIRE(X.ball->points[i].vec[0] % 2 == 0);
    }
    REQUIRE(orb.witness == 1.0);
    REQUIRE(orb.witness_exact);
}

TEST_CASE("induction against the trivial collection splits into cosets", "[pairs]") {
    GroupModel z = GroupModel::free_abelian(1);
    FiniteSpace X = word_space(z, 6, "z-r6");
    Subgroup H = Subgroup::lattice(z, {{3}});
    Subgroup P = Subgroup::trivial(z);

    InducedCollection col = induce_finite_index_collection(X, H, {&P});
    REQUIRE(col.index == 3);
    REQUIRE(col.orbits.size() == 3);
    REQUIRE(col.orbits[0].rep == z.identity());
    Element minus1, plus1;
    minus1.vec = {-1};
    plus1.vec = {1};
    REQUIRE(col.orbits[1].rep == minus1);
    REQUIRE(col.orbits[2].rep == plus1);
    REQUIRE(col.orbits[0].witness == 0.0);
    REQUIRE(col.orbits[1].witness == 1.0);
    REQUIRE(col.orbits[2].witness == 1.0);
    // Q is trivial in every orbit: conjugates must land in the trivial group
    for (const auto& orb : col.orbits) REQUIRE(orb.Q_trace == std::vector<int>{0});
}

TEST_CASE("induction edge cases: full group, infinite index, small ball", "[pairs]") {
    GroupModel z2 = GroupModel::free_abelian(2);
    FiniteSpace X = word_space(z2, 6, "z2-r6");
    Subgroup full = Subgroup::lattice(z2, {{1, 0}, {0, 1}});
    Subgroup axis = Subgroup::lattice(z2, {{1, 0}});

    InducedCollection same = induce_finite_index_collection(X, full, {&axis});
    REQUIRE(same.index == 1);
    REQUIRE(same.orbits.size() == 1);
    REQUIRE(same.orbits[0].witness == 0.0);

    REQUIRE_THROWS_AS(induce_finite_index_collection(X, axis, {&axis}),
                      UnsupportedError);  // infinite index

    GroupModel z = GroupModel::free_abelian(1);
    FiniteSpace S = word_space(z, 6, "z-r6");
    Subgroup wide = Subgroup::lattice(z, {{20}});
    Subgroup triv = Subgroup::trivial(z);
    REQUIRE_THROWS_AS(induce_finite_index_collection(S, wide, {&triv}),
                      UnsupportedError);  // 13 points cannot show 20 cosets
}
