#pragma once
/// Pair geometry on truncated Cayley graphs: visible coset families, matching
/// of two families under a sampled quasi-isometry, approximate coarse
/// stabilizers, commensuration probes, coarse connectedness scales,
/// perpendicularity estimates, and induction of a subgroup collection to a
/// finite-index subgroup.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coends/ball.hpp"
#include "coends/common.hpp"
#include "coends/hausdorff.hpp"
#include "coends/qimap.hpp"
#include "coends/space.hpp"
#include "coends/subgroup.hpp"

namespace coends {

/// A generating set (symmetrized) of the subgroup, as elements of the ambient
/// group. Used to walk orbits of the subgroup without enumerating it.
inline std::vector<Element> subgroup_generating_set(const GroupModel& G,
                                                    const Subgroup& S) {
    std::vector<Element> out;
    switch (S.kind) {
        case SubgroupKind::Trivial: break;
        case SubgroupKind::Lattice: {
            for (const auto& row : S.hnf) {
                Element e;
                e.vec = row;
                out.push_back(e);
                out.push_back(G.inverse(e));
            }
            break;
        }
        case SubgroupKind::CyclicWord: {
            out.push_back(S.root);
            out.push_back(G.inverse(S.root));
            break;
        }
        case SubgroupKind::Componentwise: {
            for (std::size_t i = 0; i < S.components.size(); ++i) {
                for (const Element& g :
                     subgroup_generating_set(G.factors[i], S.components[i])) {
                    Element e = G.identity();
                    e.parts[i] = g;
                    out.push_back(e);
                }
            }
            break;
        }
        case SubgroupKind::SingleFactor: {
            for (const Element& g : subgroup_generating_set(
                     G.factors[S.factor_index], S.factor_subgroup[0])) {
                Element e;
                e.syllables.push_back({S.factor_index, g});
                out.push_back(e);
            }
            break;
        }
    }
    return out;
}

/// The visible left cosets of one subgroup: every ball point assigned to
/// exactly one coset, cosets ordered by their minimal member (ball order), the
/// minimal member serving as canonical representative.
struct CosetFamily {
    const Subgroup* P = nullptr;
    std::vector<std::string> keys;
    std::vector<int> rep;                    ///< per coset: minimal ball index
    std::vector<std::vector<int>> traces;    ///< per coset: member indices, ascending
};

/// Families for a list of subgroups over one word space.
struct PairFamily {
    const FiniteSpace* X = nullptr;
    std::vector<CosetFamily> families;

    /// Total number of visible cosets across all families.
    std::size_t coset_count() const {
        std::size_t n = 0;
        for (const auto& f : families) n += f.traces.size();
        return n;
    }
};

inline PairFamily enumerate_cosets(const FiniteSpace& X,
                                   const std::vector<const Subgroup*>& Ps) {
    if (X.metric != SpaceMetric::Word)
        throw UnsupportedError("coset enumeration needs a word-metric space");
    PairFamily fam;
    fam.X = &X;
    const CayleyBall& B = *X.ball;
    for (const Subgroup* P : Ps) {
        CosetFamily f;
        f.P = P;
        std::map<std::string, int> ids;  // key -> coset id in discovery order
        for (std::size_t i = 0; i < B.size(); ++i) {
            std::string k = P->coset_key(B.points[i]);
            auto [it, fresh] = ids.emplace(std::move(k), static_cast<int>(f.traces.size()));
            if (fresh) {
                f.keys.push_back(it->first);
                f.rep.push_back(static_cast<int>(i));
                f.traces.emplace_back();
            }
            f.traces[it->second].push_back(static_cast<int>(i));
        }
        // discovery order == order of minimal member == ball order: canonical
        fam.families.push_back(std::move(f));
    }
    return fam;
}

// ---------------------------------------------------------------------------
// Matching two coset families under a sampled quasi-isometry

struct PairCheckReport {
    bool matched = false;
    double M = 0.0;               ///< least grid value that matched (if any)
    std::vector<double> grid;
    std::vector<char> matched_at;  ///< per grid value: relation surjective both ways
    QIConstants constants;
    /// Flattened trusted coset lists, as (family, coset) pairs, both sides.
    std::vector<std::pair<int, int>> source_cosets, target_cosets;
    /// Per trusted source coset: indices into target_cosets matched at M.
    std::vector<std::vector<int>> match_lists;
    /// Trusted cosets with no partner at the largest grid value (diagnostic).
    std::vector<int> unmatched_source, unmatched_target;
};

/// Evaluates the relation {(A, B) : Hdist(q(A), B) < M} on trusted cosets
/// (canonical representative within half the horizon) for each grid value in
/// ascending order, and reports the least M making both projections
/// surjective. Distances are windowed Hausdorff distances in the target space.
inline PairCheckReport pair_qi_check(const QISample& q, const PairFamily& src,
                                     const PairFamily& tgt,
                                     std::vector<double> M_grid) {
    PairCheckReport rep;
    std::sort(M_grid.begin(), M_grid.end());
    rep.grid = M_grid;
    rep.constants = measure_qi(q, q.X->radius / 2);

    const FiniteSpace& Y = *tgt.X;
    auto trusted = [](const PairFamily& fam, int f, int c) {
        const FiniteSpace& S = *fam.X;
        return S.distance(S.basepoint, fam.families[f].rep[c]).value <=
               S.radius / 2 + 1e-9;
    };
    for (std::size_t f = 0; f < src.families.size(); ++f)
        for (std::size_t c = 0; c < src.families[f].traces.size(); ++c)
            if (trusted(src, static_cast<int>(f), static_cast<int>(c)))
                rep.source_cosets.emplace_back(static_cast<int>(f), static_cast<int>(c));
    for (std::size_t f = 0; f < tgt.families.size(); ++f)
        for (std::size_t c = 0; c < tgt.families[f].traces.size(); ++c)
            if (trusted(tgt, static_cast<int>(f), static_cast<int>(c)))
                rep.target_cosets.emplace_back(static_cast<int>(f), static_cast<int>(c));

    // distance table: Hdist(q(A), B) for every trusted pair
    const std::size_t ns = rep.source_cosets.size(), nt = rep.target_cosets.size();
    std::vector<double> hd(ns * nt, std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < ns; ++a) {
        auto [fa, ca] = rep.source_cosets[a];
        std::vector<int> image;
        for (int i : src.families[fa].traces[ca])
            if (q.fwd[i] >= 0) image.push_back(q.fwd[i]);
        if (image.empty()) continue;
        for (std::size_t b = 0; b < nt; ++b) {
            auto [fb, cb] = rep.target_cosets[b];
            TruncatedDist d =
                truncated_hausdorff(Y, image, tgt.families[fb].traces[cb], Y.radius / 2);
            if (d.exact) hd[a * nt + b] = d.value;
        }
    }

    for (double M : M_grid) {
        std::vector<std::vector<int>> lists(ns);
        std::vector<char> hit_t(nt, 0);
        bool src_ok = ns > 0;
        for (std::size_t a = 0; a < ns; ++a) {
            for (std::size_t b = 0; b < nt; ++b)
                if (hd[a * nt + b] < M - 1e-9) {
                    lists[a].push_back(static_cast<int>(b));
                    hit_t[b] = 1;
                }
            if (lists[a].empty()) src_ok = false;
        }
        bool tgt_ok = nt > 0;
        for (std::size_t b = 0; b < nt; ++b)
            if (!hit_t[b]) tgt_ok = false;
        const bool ok = src_ok && tgt_ok;
        rep.matched_at.push_back(static_cast<char>(ok));
        if (ok && !rep.matched) {
            rep.matched = true;
            rep.M = M;
            rep.match_lists = std::move(lists);
        } else if (M == M_grid.back() && !ok) {
            for (std::size_t a = 0; a < ns; ++a)
                if (lists[a].empty()) rep.unmatched_source.push_back(static_cast<int>(a));
            for (std::size_t b = 0; b < nt; ++b)
                if (!hit_t[b]) rep.unmatched_target.push_back(static_cast<int>(b));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Approximate coarse stabilizer

struct StabilizerResult {
    double M = 0.0;
    double gmax = 0.0;
    double delta = 0.0;  ///< measured round-trip displacement of the map sample
    std::vector<int> candidates;  ///< indices (into the group ball) of eligible g
    std::vector<double> h;        ///< per candidate: measured Hausdorff displacement
    std::vector<char> h_exact;
    std::vector<char> member;     ///< per candidate: h <= M
    bool inconclusive = false;    ///< the trusted region vanished

    std::vector<int> members() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (member[i]) out.push_back(candidates[i]);
        return out;
    }
};

/// {g : Hdist(q_g(A ∩ trusted region), A) <= M} where q_g = q ∘ (left
/// translation by g) ∘ q̄. The trusted region shrinks twice: translates of
/// A ∩ B(R') must stay visible (R' = R − |g| − delta), and comparison sources
/// are windowed at R'' = R' − |g| − delta so the partner of any windowed point
/// is itself inside the translated visible piece.
inline StabilizerResult approx_stabilizer(const QISample& q, const std::vector<int>& A,
                                          double M, double gmax = -1.0) {
    const FiniteSpace& G = *q.X;  // group side (word space)
    const FiniteSpace& Y = *q.Y;  // target side
    if (G.metric != SpaceMetric::Word)
        throw UnsupportedError("approx_stabilizer needs a word-metric domain");

    StabilizerResult res;
    res.M = M;
    res.gmax = gmax > 0 ? gmax : std::floor(G.radius / 4);

    // round-trip displacement on the target side: d(y, fwd(bwd(y)))
    for (std::size_t y = 0; y < Y.size(); ++y) {
        if (Y.distance(Y.basepoint, static_cast<int>(y)).value > Y.radius / 2 + 1e-9)
            continue;
        int x = q.bwd[y];
        if (x < 0) continue;
        int back = q.fwd[x];
        if (back < 0) continue;
        TruncatedDist d = Y.distance(static_cast<int>(y), back);
        if (d.exact) res.delta = std::max(res.delta, d.value);
    }

    const CayleyBall& B = *G.ball;
    for (std::size_t gi = 0; gi < B.size(); ++gi) {
        const double glen = B.norms[gi];
        if (glen > res.gmax + 1e-9) break;  // ball is sorted by norm
        const double Rp = G.radius - glen - res.delta;
        const double Rpp = Rp - glen - res.delta;
        if (Rpp <= 0) continue;

        std::vector<int> S;
        bool all_defined_exact = true;
        for (int a : A) {
            if (Y.distance(Y.basepoint, a).value > Rp + 1e-9) continue;
            int x = q.bwd[a];
            if (x < 0) {
                all_defined_exact = false;
                continue;
            }
            auto tx = B.translate(B.points[gi], x);
            if (!tx) {
                all_defined_exact = false;
                continue;
            }
            int yimg = q.fwd[*tx];
            if (yimg < 0) {
                all_defined_exact = false;
                continue;
            }
            S.push_back(yimg);
        }
        if (S.empty()) continue;
        std::sort(S.begin(), S.end());
        S.erase(std::unique(S.begin(), S.end()), S.end());

        TruncatedDist hd = truncated_hausdorff(Y, S, A, Rpp);
        res.candidates.push_back(static_cast<int>(gi));
        res.h.push_back(hd.value);
        res.h_exact.push_back(static_cast<char>(hd.exact && all_defined_exact));
        res.member.push_back(static_cast<char>(hd.value <= M + 1e-9));
    }
    if (res.candidates.empty()) res.inconclusive = true;
    return res;
}

// ---------------------------------------------------------------------------
// Commensuration probe

struct CommensuratorProbe {
    std::vector<double> R_list;
    std::vector<double> h;       ///< windowed Hdist(P ∩ B_R, gP ∩ B_R) per R
    std::vector<char> exact;
    enum class Verdict { Bounded, Diverging, Inconclusive } verdict =
        Verdict::Inconclusive;
    double bound = 0.0;        ///< for Bounded: the eventual constant
    double trend_slope = 0.0;  ///< for Diverging: fitted linear growth rate

    std::string verdict_str() const {
        switch (verdict) {
            case Verdict::Bounded: return "bounded";
            case Verdict::Diverging: return "diverging";
            case Verdict::Inconclusive: return "inconclusive";
        }
        return "inconclusive";
    }
};

/// Watches Hdist(P, gP) across growing truncations. Eventually-constant
/// sequences give "bounded"; sequences that keep climbing through the last
/// three radii and exceed R/2 at the largest give "diverging"; anything else
/// stays "inconclusive" — a finite computation cannot certify infinity.
inline CommensuratorProbe commensurator_probe(const GroupModel& G, const Subgroup& P,
                                              const Element& g,
                                              const std::vector<double>& R_list,
                                              const FiniteSpace* prebuilt = nullptr,
                                              long long cap = Defaults::point_cap) {
    if (R_list.empty()) throw ScaleOrderError("R list is empty");
    for (std::size_t i = 1; i < R_list.size(); ++i)
        if (R_list[i] <= R_list[i - 1])
            throw ScaleOrderError("R list is not strictly ascending");

    FiniteSpace local;
    const FiniteSpace* X = prebuilt;
    if (!X) {
        auto ball = std::make_shared<CayleyBall>(build_cayley_ball(
            G, static_cast<int>(std::ceil(R_list.back())), static_cast<std::size_t>(cap)));
        local = FiniteSpace::from_ball(std::move(ball), "probe");
        X = &local;
    }
    if (X->metric != SpaceMetric::Word || X->radius < R_list.back() - 1e-9)
        throw UnsupportedError("probe needs a word space covering the largest radius");

    const CayleyBall& B = *X->ball;
    std::vector<int> traceP = trace_indices(B, P);
    std::vector<int> traceGP = coset_trace_indices(B, P, g);

    CommensuratorProbe probe;
    probe.R_list = R_list;
    for (double R : R_list) {
        std::vector<int> pr, gr;
        for (int i : traceP)
            if (B.norms[i] <= R + 1e-9) pr.push_back(i);
        for (int i : traceGP)
            if (B.norms[i] <= R + 1e-9) gr.push_back(i);
        TruncatedDist d = truncated_hausdorff(*X, pr, gr, R / 2);
        probe.h.push_back(d.value);
        probe.exact.push_back(static_cast<char>(d.exact));
    }

    const std::size_t n = probe.h.size();
    if (n >= 2 && probe.exact[n - 1] && probe.exact[n - 2] &&
        std::abs(probe.h[n - 1] - probe.h[n - 2]) <= 1e-9) {
        probe.verdict = CommensuratorProbe::Verdict::Bounded;
        probe.bound = probe.h[n - 1];
    } else if (n >= 3 && probe.h[n - 3] < probe.h[n - 2] - 1e-9 &&
               probe.h[n - 2] < probe.h[n - 1] - 1e-9 &&
               probe.h[n - 1] > R_list.back() / 2) {
        probe.verdict = CommensuratorProbe::Verdict::Diverging;
        probe.trend_slope =
            (probe.h[n - 1] - probe.h[0]) / (R_list.back() - R_list.front());
    }
    return probe;
}

// ---------------------------------------------------------------------------
// Coarse connectedness and perpendicularity

struct ConnectednessScale {
    double sigma = 0.0;
    bool certified = false;  ///< S became one component at this scale
};

/// The least value of the (sampled) metric at which S forms a single
/// sigma-component as a subspace — chains must stay inside S.
inline ConnectednessScale coarse_connectedness_scale(const FiniteSpace& X,
                                                     const std::vector<int>& S) {
    if (S.empty()) throw UnsupportedError("connectedness scale of an empty set");
    ConnectednessScale out;
    if (S.size() == 1) {
        out.certified = true;
        return out;
    }
    struct Edge {
        double d;
        int a, b;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = i + 1; j < S.size(); ++j) {
            TruncatedDist d = X.distance(S[i], S[j]);
            if (d.exact) edges.push_back({d.value, static_cast<int>(i), static_cast<int>(j)});
        }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.d < b.d;
    });
    UnionFind uf(S.size());
    std::size_t merged = 1;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (uf.find(edges[e].a) != uf.find(edges[e].b)) {
            uf.merge(edges[e].a, edges[e].b);
            ++merged;
        }
        // close out the current distance value before testing connectedness
        if (e + 1 < edges.size() && edges[e + 1].d <= edges[e].d + 1e-9) continue;
        if (merged == S.size()) {
            out.sigma = edges[e].d;
            out.certified = true;
            return out;
        }
    }
    out.sigma = X.radius + 1;  // not connected by any visible scale
    return out;
}

struct PerpendicularityBound {
    std::vector<double> R_list;
    std::vector<double> M;  ///< least M per R (windowed sources)
    std::vector<char> exact;
};

/// Least M such that every windowed point of B within distance k of C lies
/// within M of B ∩ C, reported per truncation radius to expose stability.
/// The identity always lies in B ∩ C, so the reference set is never empty.
inline PerpendicularityBound perpendicularity_bound(const FiniteSpace& X,
                                                    const Subgroup& Bsub,
                                                    const Subgroup& Csub, double k,
                                                    const std::vector<double>& R_list) {
    if (X.metric != SpaceMetric::Word)
        throw UnsupportedError("perpendicularity bound needs a word-metric space");
    const CayleyBall& ball = *X.ball;
    std::vector<int> traceB = trace_indices(ball, Bsub);
    std::vector<int> traceC = trace_indices(ball, Csub);
    std::vector<int> traceBC;
    for (int i : traceB)
        if (Csub.contains(ball.points[i])) traceBC.push_back(i);

    PerpendicularityBound out;
    out.R_list = R_list;
    for (double R : R_list) {
        std::vector<int> cr, bcr;
        for (int i : traceC)
            if (ball.norms[i] <= R + 1e-9) cr.push_back(i);
        for (int i : traceBC)
            if (ball.norms[i] <= R + 1e-9) bcr.push_back(i);
        double m = 0.0;
        bool exact = true;
        for (int b : traceB) {
            if (ball.norms[b] > R / 2 + 1e-9) continue;
            TruncatedDist dc = distance_to_subset(X, b, cr);
            if (!dc.exact) {
                exact = false;
                continue;
            }
            if (dc.value > k + 1e-9) continue;
            TruncatedDist dbc = distance_to_subset(X, b, bcr);
            if (!dbc.exact) {
                exact = false;
                continue;
            }
            m = std::max(m, dbc.value);
        }
        out.M.push_back(m);
        out.exact.push_back(static_cast<char>(exact));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-index induction

struct InducedOrbit {
    int family = 0;                 ///< index into the P list
    std::vector<int> coset_ids;     ///< trusted visible cosets in this orbit
    Element rep;                    ///< canonical representative g of the orbit
    std::vector<int> Q_trace;       ///< ball indices of Q = {x in H : g⁻¹xg in P}
    double witness = 0.0;           ///< windowed Hdist(Q, gP)
    bool witness_exact = true;
};

struct InducedCollection {
    long long index = 0;  ///< [G : H]
    std::vector<InducedOrbit> orbits;
};

/// Orbits of H on the visible cosets of each P, with the induced subgroups
/// Q = gPg⁻¹ ∩ H (as traces; membership is x ∈ H and g⁻¹xg ∈ P) and the
/// measured Hausdorff witness between Q and the orbit's coset.
inline InducedCollection induce_finite_index_collection(
    const FiniteSpace& X, const Subgroup& H, const std::vector<const Subgroup*>& Ps) {
    if (X.metric != SpaceMetric::Word)
        throw UnsupportedError("finite-index induction needs a word-metric space");
    auto idx = H.index();
    if (!idx)
        throw UnsupportedError(
            "finite-index induction needs a subgroup with a finite coset table");
    const CayleyBall& ball = *X.ball;
    const GroupModel& G = *ball.group;

    // coset table completeness: the ball must show all [G:H] cosets of H
    {
        std::map<std::string, int> seen;
        for (std::size_t i = 0; i < ball.size(); ++i)
            seen.emplace(H.coset_key(ball.points[i]), 1);
        if (static_cast<long long>(seen.size()) != *idx)
            throw UnsupportedError(
                "ball too small: it does not exhibit the full coset table of H");
    }

    InducedCollection out;
    out.index = *idx;
    const std::vector<Element> hgens = subgroup_generating_set(G, H);
    PairFamily fam = enumerate_cosets(X, Ps);

    for (std::size_t f = 0; f < fam.families.size(); ++f) {
        const CosetFamily& cf = fam.families[f];
        const Subgroup& P = *cf.P;

        std::vector<int> trusted;  // coset ids with representative in the window
        std::map<std::string, int> key_to_pos;
        for (std::size_t c = 0; c < cf.traces.size(); ++c) {
            if (ball.norms[cf.rep[c]] <= ball.radius / 2.0 + 1e-9) {
                key_to_pos.emplace(cf.keys[c], static_cast<int>(trusted.size()));
                trusted.push_back(static_cast<int>(c));
            }
        }
        UnionFind uf(trusted.size());
        for (std::size_t t = 0; t < trusted.size(); ++t) {
            const Element& g = ball.points[cf.rep[trusted[t]]];
            for (const Element& h : hgens) {
                auto it = key_to_pos.find(P.coset_key(G.multiply(h, g)));
                if (it != key_to_pos.end()) uf.merge(static_cast<int>(t), it->second);
            }
        }
        std::map<int, std::vector<int>> orbits;  // root -> positions
        for (std::size_t t = 0; t < trusted.size(); ++t)
            orbits[uf.find(static_cast<int>(t))].push_back(static_cast<int>(t));

        // deterministic order: by the minimal coset id inside each orbit
        std::vector<std::vector<int>> orbit_list;
        for (auto& [root, members] : orbits) orbit_list.push_back(members);
        std::sort(orbit_list.begin(), orbit_list.end(),
                  [&](const std::vector<int>& a, const std::vector<int>& b) {
                      return trusted[a.front()] < trusted[b.front()];
                  });

        for (const auto& members : orbit_list) {
            InducedOrbit orb;
            orb.family = static_cast<int>(f);
            int best_rep = -1;
            for (int t : members) {
                orb.coset_ids.push_back(trusted[t]);
                int r = cf.rep[trusted[t]];
                if (best_rep < 0 || r < best_rep) best_rep = r;
            }
            std::sort(orb.coset_ids.begin(), orb.coset_ids.end());
            orb.rep = ball.points[best_rep];
            const Element ginv = G.inverse(orb.rep);
            for (std::size_t i = 0; i < ball.size(); ++i) {
                if (!H.contains(ball.points[i])) continue;
                Element conj = G.multiply(ginv, G.multiply(ball.points[i], orb.rep));
                if (P.contains(conj)) orb.Q_trace.push_back(static_cast<int>(i));
            }
            // the orbit's own coset trace, for the witness distance
            int coset_of_rep = -1;
            for (std::size_t c = 0; c < cf.traces.size(); ++c)
                if (cf.rep[c] == best_rep) coset_of_rep = static_cast<int>(c);
            TruncatedDist w = truncated_hausdorff(X, orb.Q_trace,
                                                  cf.traces[coset_of_rep], X.radius / 2);
            orb.witness = w.value;
            orb.witness_exact = w.exact;
            out.orbits.push_back(std::move(orb));
        }
    }
    return out;
}

}  // namespace coends
