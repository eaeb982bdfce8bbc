#pragma once
/// Sampled quasi-isometries between truncated spaces, measurement of their
/// constants, and the end maps they induce between connectivity diagrams.
///
/// A map sample stores, for every visible domain point, the index of its image
/// point (or -1 where the image falls outside the codomain truncation), plus
/// an optional coarse-inverse sample in the other direction. Constants are
/// measured on all point pairs within a window around the basepoints, where
/// truncated distances cannot contaminate the estimates.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "coends/diagram.hpp"
#include "coends/hausdorff.hpp"
#include "coends/space.hpp"

namespace coends {

struct QISample {
    const FiniteSpace* X = nullptr;
    const FiniteSpace* Y = nullptr;
    std::vector<int> fwd;  ///< per X point: Y index or -1
    std::vector<int> bwd;  ///< per Y point: X index or -1 (coarse inverse)
    std::string name;
};

/// Word spaces over the same group: the map that keeps the underlying element.
/// This is the natural comparison map between balls w.r.t. two generating sets.
inline QISample qi_identity_elements(const FiniteSpace& X, const FiniteSpace& Y) {
    if (X.metric != SpaceMetric::Word || Y.metric != SpaceMetric::Word)
        throw UnsupportedError("identity-elements map needs two word-metric spaces");
    QISample q;
    q.X = &X;
    q.Y = &Y;
    q.name = "identity-elements";
    q.fwd.assign(X.size(), -1);
    q.bwd.assign(Y.size(), -1);
    for (std::size_t i = 0; i < X.size(); ++i)
        q.fwd[i] = Y.ball->find(X.ball->points[i]);
    for (std::size_t j = 0; j < Y.size(); ++j)
        q.bwd[j] = X.ball->find(Y.ball->points[j]);
    return q;
}

/// Coordinate swap (a, b) -> (b, a) between rank-2 free-abelian word spaces.
inline QISample qi_transpose(const FiniteSpace& X, const FiniteSpace& Y) {
    if (X.metric != SpaceMetric::Word || Y.metric != SpaceMetric::Word ||
        X.ball->group->kind != GroupKind::FreeAbelian || X.ball->group->rank != 2 ||
        Y.ball->group->kind != GroupKind::FreeAbelian || Y.ball->group->rank != 2)
        throw UnsupportedError("transpose map needs two rank-2 free-abelian word spaces");
    auto swap_map = [](const FiniteSpace& A, const FiniteSpace& B) {
        std::vector<int> m(A.size(), -1);
        for (std::size_t i = 0; i < A.size(); ++i) {
            Element e = A.ball->points[i];
            std::swap(e.vec[0], e.vec[1]);
            m[i] = B.ball->find(e);
        }
        return m;
    };
    QISample q;
    q.X = &X;
    q.Y = &Y;
    q.name = "transpose";
    q.fwd = swap_map(X, Y);
    q.bwd = swap_map(Y, X);
    return q;
}

/// Left translation by g on one word space (an isometry where visible).
inline QISample qi_translation(const FiniteSpace& X, const Element& g) {
    if (X.metric != SpaceMetric::Word)
        throw UnsupportedError("translation map needs a word-metric space");
    QISample q;
    q.X = &X;
    q.Y = &X;
    q.name = "translation";
    q.fwd.assign(X.size(), -1);
    q.bwd.assign(X.size(), -1);
    const GroupModel& G = *X.ball->group;
    const Element gi = G.inverse(g);
    for (std::size_t i = 0; i < X.size(); ++i) {
        auto j = X.ball->translate(g, static_cast<int>(i));
        if (j) q.fwd[i] = *j;
        auto k = X.ball->translate(gi, static_cast<int>(i));
        if (k) q.bwd[i] = *k;
    }
    return q;
}

/// Constants measured on the sample: the smallest multiplicative constant L
/// with d_Y <= L*d_X and d_X <= L*d_Y on all windowed pairs (additive constant
/// zero on samples — every sampled pair of distinct points has positive
/// distance), the round-trip displacement of the coarse inverse, and how
/// densely the image meets the windowed codomain.
struct QIConstants {
    double L = 1.0;
    double C = 0.0;
    double displacement = 0.0;  ///< max d_X(x, bwd(fwd(x))) over the window
    double codensity = 0.0;     ///< max d_Y(y, image) over the windowed codomain
    bool all_exact = true;      ///< no truncated distance interfered
};

inline QIConstants measure_qi(const QISample& q, double window) {
    QIConstants k;
    const FiniteSpace& X = *q.X;
    const FiniteSpace& Y = *q.Y;

    std::vector<int> dom;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (q.fwd[i] < 0) continue;
        if (X.distance(X.basepoint, static_cast<int>(i)).value <= window + 1e-9)
            dom.push_back(static_cast<int>(i));
    }
    for (std::size_t a = 0; a < dom.size(); ++a) {
        for (std::size_t b = a + 1; b < dom.size(); ++b) {
            TruncatedDist dx = X.distance(dom[a], dom[b]);
            TruncatedDist dy = Y.distance(q.fwd[dom[a]], q.fwd[dom[b]]);
            if (!dx.exact || !dy.exact) {
                k.all_exact = false;
                continue;
            }
            if (dx.value > 1e-12 && dy.value > 1e-12)
                k.L = std::max({k.L, dy.value / dx.value, dx.value / dy.value});
        }
    }
    if (!q.bwd.empty()) {
        for (int i : dom) {
            int j = q.fwd[i];
            if (j < 0 || q.bwd[j] < 0) continue;
            TruncatedDist d = X.distance(i, q.bwd[j]);
            if (!d.exact) {
                k.all_exact = false;
                continue;
            }
            k.displacement = std::max(k.displacement, d.value);
        }
    }
    std::vector<int> image;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (q.fwd[i] >= 0) image.push_back(q.fwd[i]);
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    for (std::size_t j = 0; j < Y.size(); ++j) {
        if (Y.distance(Y.basepoint, static_cast<int>(j)).value > window + 1e-9) continue;
        TruncatedDist d = distance_to_subset(Y, static_cast<int>(j), image);
        if (!d.exact) {
            k.all_exact = false;
            continue;
        }
        k.codensity = std::max(k.codensity, d.value);
    }
    return k;
}

/// The end map induced by a sampled quasi-isometry of pairs. The source cell
/// is taken as deep as possible subject to its image cell (sigma scaled by L
/// and shifted by C, depth contracted by L and shifted by C and the subset
/// mismatch r) landing on a trusted cell of the codomain diagram.
struct InducedEndMap {
    bool valid = false;  ///< a usable source/target cell pair existed
    double source_sigma = 0.0, source_mu = 0.0;
    double target_sigma = 0.0, target_mu = 0.0;
    double L = 1.0, C = 0.0, r = 0.0;
    std::vector<std::pair<int, int>> end_map;  ///< (source comp id, target comp id)
    bool well_defined = false;
    bool injective = false;
    bool surjective = false;
    std::string note;
};

inline InducedEndMap induced_end_map(const FiniteSpace& X, const std::vector<int>& CX,
                                     const EndsDiagram& dgX, const FiniteSpace& Y,
                                     const std::vector<int>& CY, const EndsDiagram& dgY,
                                     const QISample& q, double L, double C) {
    InducedEndMap m;
    m.L = L;
    m.C = C;

    std::vector<int> imageC;
    for (int c : CX)
        if (q.fwd[c] >= 0) imageC.push_back(q.fwd[c]);
    TruncatedDist rdist = truncated_hausdorff(Y, imageC, CY, Y.radius / 2);
    m.r = rdist.value;
    if (!rdist.exact) {
        m.note = "subset mismatch not measurable within the truncation";
        return m;
    }

    // choose source column (largest sigma whose image scale fits a trusted
    // column of the codomain), then the deepest workable source depth
    int sx = -1, kx = -1, sy = -1, ky = -1;
    for (int s = static_cast<int>(dgX.columns.size()) - 1; s >= 0 && sx < 0; --s) {
        const double sig = dgX.sigma_grid[s];
        const double need = L * sig + C;
        int ty = -1;
        for (std::size_t t = 0; t < dgY.sigma_grid.size(); ++t) {
            if (dgY.sigma_grid[t] >= need - 1e-9 &&
                cell_trusted(Y, dgY.sigma_grid[t], 0.0)) {
                ty = static_cast<int>(t);
                break;
            }
        }
        if (ty < 0) continue;
        for (int k = static_cast<int>(dgX.mu_grid.size()) - 1; k >= 0; --k) {
            if (!dgX.columns[s].cells[k].trusted) continue;
            const double mu_img = dgX.mu_grid[k] / L - C - m.r;
            int kt = -1;
            for (int t = static_cast<int>(dgY.mu_grid.size()) - 1; t >= 0; --t) {
                if (dgY.mu_grid[t] <= mu_img + 1e-9 &&
                    cell_trusted(Y, dgY.sigma_grid[ty], dgY.mu_grid[t])) {
                    kt = t;
                    break;
                }
            }
            if (kt < 0) continue;
            sx = s;
            kx = k;
            sy = ty;
            ky = kt;
            break;
        }
    }
    if (sx < 0) {
        m.note = "no source cell maps into a trusted target cell";
        return m;
    }
    m.valid = true;
    m.source_sigma = dgX.sigma_grid[sx];
    m.source_mu = dgX.mu_grid[kx];
    m.target_sigma = dgY.sigma_grid[sy];
    m.target_mu = dgY.mu_grid[ky];

    const ComponentPartition& px = dgX.columns[sx].parts[kx];
    const ComponentPartition& py = dgY.columns[sy].parts[ky];

    m.well_defined = true;
    std::vector<int> hit(py.count, 0);
    for (int c = 0; c < px.count; ++c) {
        if (!px.unbounded[c]) continue;
        int target = -2;  // -2: nothing mapped yet
        for (std::size_t i = 0; i < X.size() && m.well_defined; ++i) {
            if (px.comp[static_cast<int>(i)] != c) continue;
            int j = q.fwd[i];
            if (j < 0) continue;  // image beyond the codomain truncation
            int t = py.comp[j];
            if (t < 0) {
                m.well_defined = false;  // image died below the target depth
                break;
            }
            if (target == -2) target = t;
            else if (target != t) m.well_defined = false;
        }
        if (target < 0) {
            m.well_defined = false;
            m.note = "a source end has no visible image";
            break;
        }
        if (!py.unbounded[target]) {
            m.well_defined = false;
            m.note = "a source end maps into a bounded target component";
            break;
        }
        m.end_map.emplace_back(c, target);
        ++hit[target];
    }
    if (m.well_defined) {
        m.injective = true;
        m.surjective = true;
        for (int t = 0; t < py.count; ++t) {
            if (hit[t] > 1) m.injective = false;
            if (py.unbounded[t] && hit[t] == 0) m.surjective = false;
        }
    }
    return m;
}

}  // namespace coends
