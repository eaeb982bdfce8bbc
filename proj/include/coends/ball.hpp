#pragma once
/// Finite truncations of Cayley graphs: the ball of a given radius around the
/// identity, built layer by layer in a canonical order, together with the word
/// norms of all its points.
///
/// Distances derived from the norm table are exact wherever they are defined:
/// d(p, q) equals the word norm of p^{-1} q, which is a property of the group,
/// so if that element lies inside the ball the distance is the true global
/// distance. If it does not, the distance is certifiably greater than the
/// radius and is reported as truncated.

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coends/common.hpp"
#include "coends/group.hpp"
#include "coends/subgroup.hpp"

namespace coends {

/// A distance measurement on a truncated space. When `exact` is false the true
/// value is known only to exceed `value` (which is then radius + 1).
struct TruncatedDist {
    double value = 0.0;
    bool exact = true;
};

/// The radius-R ball of a Cayley graph. Points are ordered by (norm, key), so
/// two builds of the same ball agree element-for-element.
struct CayleyBall {
    const GroupModel* group = nullptr;
    int radius = 0;
    std::vector<Element> points;  ///< points[0] is the identity
    std::vector<int> norms;       ///< norms[i] = word norm of points[i]
    std::unordered_map<std::string, int> index;

    /// Index of e in the ball, or -1 if |e| > radius.
    int find(const Element& e) const {
        auto it = index.find(group->key(e));
        return it == index.end() ? -1 : it->second;
    }

    std::size_t size() const { return points.size(); }

    /// Word norm of an arbitrary element, if it lies within the ball.
    std::optional<int> norm_of(const Element& e) const {
        int i = find(e);
        if (i < 0) return std::nullopt;
        return norms[i];
    }

    /// Exact global distance between two ball points whenever p^{-1} q is
    /// itself visible; otherwise the distance certifiably exceeds the radius.
    TruncatedDist distance(int i, int j) const {
        Element x = group->multiply(group->inverse(points[i]), points[j]);
        auto n = norm_of(x);
        if (n) return {static_cast<double>(*n), true};
        return {static_cast<double>(radius + 1), false};
    }

    /// Index of g * points[i], or std::nullopt if the translate leaves the ball.
    std::optional<int> translate(const Element& g, int i) const {
        int j = find(group->multiply(g, points[i]));
        if (j < 0) return std::nullopt;
        return j;
    }
};

/// Breadth-first construction of the ball. Each layer is sorted by canonical
/// key before being appended, so the point order is the total order
/// (norm, key) and is independent of hash-map iteration order.
inline CayleyBall build_cayley_ball(const GroupModel& g, int radius,
                                    std::size_t cap = Defaults::point_cap) {
    CayleyBall ball;
    ball.group = &g;
    ball.radius = radius;

    Element id = g.identity();
    ball.points.push_back(id);
    ball.norms.push_back(0);
    ball.index.emplace(g.key(id), 0);

    std::vector<int> frontier = {0};
    for (int layer = 1; layer <= radius && !frontier.empty(); ++layer) {
        std::vector<std::pair<std::string, Element>> next;
        std::unordered_map<std::string, bool> seen_here;
        for (int i : frontier) {
            for (const auto& s : g.generators) {
                Element q = g.multiply(ball.points[i], s);
                std::string k = g.key(q);
                if (ball.index.count(k) || seen_here.count(k)) continue;
                seen_here.emplace(k, true);
                next.emplace_back(std::move(k), std::move(q));
            }
        }
        std::sort(next.begin(), next.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        frontier.clear();
        for (auto& [k, q] : next) {
            if (ball.points.size() >= cap)
                throw CapacityError(ball.points.size() + 1, cap);
            int id_new = static_cast<int>(ball.points.size());
            ball.points.push_back(std::move(q));
            ball.norms.push_back(layer);
            ball.index.emplace(std::move(k), id_new);
            frontier.push_back(id_new);
        }
    }
    return ball;
}

/// Indices of the ball points lying in the subgroup P.
inline std::vector<int> trace_indices(const CayleyBall& ball, const Subgroup& P) {
    std::vector<int> out;
    for (std::size_t i = 0; i < ball.points.size(); ++i)
        if (P.contains(ball.points[i])) out.push_back(static_cast<int>(i));
    return out;
}

/// Indices of the ball points lying in the left coset gP.
inline std::vector<int> coset_trace_indices(const CayleyBall& ball, const Subgroup& P,
                                            const Element& g) {
    const std::string want = P.coset_key(g);
    std::vector<int> out;
    for (std::size_t i = 0; i < ball.points.size(); ++i)
        if (P.coset_key(ball.points[i]) == want) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace coends
