#pragma once
/// Scale-dependent connectivity on finite metric spaces.
///
/// Two points are sigma-close when their distance is at most sigma; the
/// sigma-components of a point set are the equivalence classes of the
/// transitive closure of that relation. On a truncation, a component is
/// flagged "unbounded" when it plausibly continues past the horizon: it has at
/// least two points and reaches within `margin` of the horizon. Singletons are
/// never flagged — a genuine escape route has consecutive points at most sigma
/// apart, so the far tail of one always shows up as a component of size >= 2.

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "coends/common.hpp"
#include "coends/space.hpp"

namespace coends {

/// All unordered pairs {i, j} with d(i, j) <= sigma, each listed once as
/// (i, j) with i < j, sorted. Dispatches to a strategy suited to the metric.
inline std::vector<std::pair<int, int>> proximity_pairs(const FiniteSpace& X,
                                                        double sigma) {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(X.size());
    const double tol = 1e-9;

    switch (X.metric) {
        case SpaceMetric::Word: {
            // Offsets of norm in [1, sigma]; ball points are sorted by norm, so
            // these form a prefix. The offset set is inverse-closed, hence every
            // unordered pair is produced in both orders and i < j deduplicates.
            const CayleyBall& B = *X.ball;
            const int smax = static_cast<int>(std::floor(sigma + tol));
            std::vector<int> offsets;
            for (std::size_t k = 1; k < B.size() && B.norms[k] <= smax; ++k)
                offsets.push_back(static_cast<int>(k));
            for (int i = 0; i < n; ++i) {
                for (int k : offsets) {
                    Element q = B.group->multiply(B.points[i], B.points[k]);
                    int j = B.find(q);
                    if (j > i) out.emplace_back(i, j);
                }
            }
            break;
        }
        case SpaceMetric::Euclidean:
        case SpaceMetric::Manhattan: {
            // Uniform-grid buckets of width sigma; candidates live in the 3x3
            // neighborhood of a point's cell.
            std::map<std::pair<long long, long long>, std::vector<int>> cells;
            auto cell_of = [&](int i) {
                return std::make_pair(
                    static_cast<long long>(std::floor(X.pts[i][0] / sigma)),
                    static_cast<long long>(std::floor(X.pts[i][1] / sigma)));
            };
            for (int i = 0; i < n; ++i) cells[cell_of(i)].push_back(i);
            for (int i = 0; i < n; ++i) {
                auto [cx, cy] = cell_of(i);
                for (long long dx = -1; dx <= 1; ++dx)
                    for (long long dy = -1; dy <= 1; ++dy) {
                        auto it = cells.find({cx + dx, cy + dy});
                        if (it == cells.end()) continue;
                        for (int j : it->second)
                            if (j > i && X.distance(i, j).value <= sigma + tol)
                                out.emplace_back(i, j);
                    }
            }
            break;
        }
        case SpaceMetric::Comb: {
            // Same tooth: window scan over levels. Across teeth: a pair needs
            // level_i + level_j + |alpha_i - alpha_j| <= sigma, so only points
            // with level <= sigma can participate; a two-pointer sweep over
            // those (sorted by alpha) finds all of them.
            std::map<double, std::vector<int>> teeth;  // alpha -> indices
            for (int i = 0; i < n; ++i) teeth[X.pts[i][0]].push_back(i);
            for (auto& [alpha, idx] : teeth) {
                std::sort(idx.begin(), idx.end(),
                          [&](int a, int b) { return X.pts[a][1] < X.pts[b][1]; });
                for (std::size_t a = 0; a < idx.size(); ++a)
                    for (std::size_t b = a + 1; b < idx.size(); ++b) {
                        if (X.pts[idx[b]][1] - X.pts[idx[a]][1] > sigma + tol) break;
                        out.emplace_back(std::min(idx[a], idx[b]),
                                         std::max(idx[a], idx[b]));
                    }
            }
            std::vector<int> low;
            for (int i = 0; i < n; ++i)
                if (X.pts[i][1] <= sigma + tol) low.push_back(i);
            std::sort(low.begin(), low.end(),
                      [&](int a, int b) { return X.pts[a][0] < X.pts[b][0]; });
            for (std::size_t a = 0; a < low.size(); ++a)
                for (std::size_t b = a + 1; b < low.size(); ++b) {
                    int i = low[a], j = low[b];
                    double dalpha = X.pts[j][0] - X.pts[i][0];
                    if (dalpha > sigma + tol) break;
                    if (X.pts[i][0] == X.pts[j][0]) continue;  // same tooth handled
                    if (dalpha + X.pts[i][1] + X.pts[j][1] <= sigma + tol)
                        out.emplace_back(std::min(i, j), std::max(i, j));
                }
            break;
        }
        case SpaceMetric::Explicit: {
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (X.distance(i, j).value <= sigma + tol) out.emplace_back(i, j);
            break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// The sigma-components of one alive set, with component metadata. Component
/// ids are assigned in increasing order of each component's smallest point
/// index, so the labeling is canonical.
struct ComponentPartition {
    double sigma = 0.0;
    double mu = 0.0;
    std::vector<int> comp;        ///< per point: component id, or -1 if dead
    int count = 0;                ///< number of components
    std::vector<int> rep;         ///< per component: smallest member index
    std::vector<int> csize;       ///< per component: number of points
    std::vector<char> unbounded;  ///< per component: reaches the horizon?
    int alive_count = 0;
    int unbounded_count = 0;
};

inline ComponentPartition sigma_components(const FiniteSpace& X,
                                           const std::vector<char>& alive,
                                           double sigma,
                                           const std::vector<std::pair<int, int>>& pairs,
                                           double margin) {
    const int n = static_cast<int>(X.size());
    ComponentPartition part;
    part.sigma = sigma;
    part.comp.assign(n, -1);

    UnionFind uf(n);
    for (auto [i, j] : pairs)
        if (alive[i] && alive[j]) uf.merge(i, j);

    // canonical relabeling: roots in order of smallest member index
    std::vector<int> root_to_id(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        ++part.alive_count;
        int r = uf.find(i);
        if (root_to_id[r] < 0) {
            root_to_id[r] = part.count++;
            part.rep.push_back(i);
            part.csize.push_back(0);
        }
        part.comp[i] = root_to_id[r];
        ++part.csize[part.comp[i]];
    }

    std::vector<double> far(part.count, 0.0);
    for (int i = 0; i < n; ++i) {
        if (part.comp[i] < 0) continue;
        double d = X.distance(X.basepoint, i).value;
        far[part.comp[i]] = std::max(far[part.comp[i]], d);
    }
    part.unbounded.assign(part.count, 0);
    for (int c = 0; c < part.count; ++c) {
        if (part.csize[c] >= 2 && far[c] >= X.radius - margin - 1e-9) {
            part.unbounded[c] = 1;
            ++part.unbounded_count;
        }
    }
    return part;
}

/// The map induced by inclusion of alive sets: every component of `fine` is
/// contained in a unique component of `coarse` (requires alive(fine) to be a
/// subset of alive(coarse), which holds when fine has the deeper mu or the
/// smaller sigma at equal mu). Returns, per fine component id, the id of the
/// coarse component containing it, or -1 if the fine component's points are
/// dead in coarse (which indicates a misuse).
inline std::vector<int> transition_map(const ComponentPartition& fine,
                                       const ComponentPartition& coarse) {
    std::vector<int> m(fine.count, -1);
    for (int c = 0; c < fine.count; ++c) m[c] = coarse.comp[fine.rep[c]];
    return m;
}

/// Adjacency lists over alive points for one proximity-pair set; used for
/// breadth-first walks inside a component (e.g. building ray witnesses).
inline std::vector<std::vector<int>> alive_adjacency(
    std::size_t n, const std::vector<char>& alive,
    const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::vector<int>> adj(n);
    for (auto [i, j] : pairs) {
        if (!alive[i] || !alive[j]) continue;
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

/// Distances from every point to the subset C, with truncated values clamped
/// to radius + 1 (still correct for any alive-threshold below the horizon).
inline std::vector<double> subset_distances(const FiniteSpace& X,
                                            const std::vector<int>& C) {
    const int n = static_cast<int>(X.size());
    std::vector<double> d(n, 0.0);
    for (int i = 0; i < n; ++i) d[i] = distance_to_subset(X, i, C).value;
    return d;
}

}  // namespace coends
