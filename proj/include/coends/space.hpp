#pragma once
/// Finite metric spaces: truncated Cayley graphs, sampled unions of line
/// segments, sampled comb spaces, and explicitly tabulated metrics.
///
/// A FiniteSpace knows its points, a basepoint, its visible horizon (the
/// largest distance from the basepoint), and the sampling step (the smallest
/// positive distance scale the construction can resolve). Coordinates are
/// generated by integer-index arithmetic so that shared points of crossing
/// segments coincide bit-for-bit and deduplication is exact.

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "coends/ball.hpp"
#include "coends/common.hpp"

namespace coends {

enum class SpaceMetric { Word, Euclidean, Manhattan, Comb, Explicit };

class FiniteSpace {
public:
    std::string id;
    SpaceMetric metric = SpaceMetric::Explicit;

    std::shared_ptr<CayleyBall> ball;             ///< Word metric payload
    std::vector<std::array<double, 2>> pts;       ///< coordinate payloads
    std::vector<double> dmat;                     ///< Explicit payload, row-major
    int basepoint = 0;
    double radius = 0.0;  ///< max distance from the basepoint (visible horizon)
    double step = 1.0;    ///< smallest positive distance scale of the sampling

    std::size_t size() const {
        if (metric == SpaceMetric::Word) return ball->size();
        if (metric == SpaceMetric::Explicit) return explicit_n_;
        return pts.size();
    }

    /// Distance between two points. Exact except on Word spaces, where a pair
    /// whose separation exceeds the ball radius is reported as truncated.
    TruncatedDist distance(int i, int j) const {
        switch (metric) {
            case SpaceMetric::Word: return ball->distance(i, j);
            case SpaceMetric::Euclidean: {
                double dx = pts[i][0] - pts[j][0];
                double dy = pts[i][1] - pts[j][1];
                return {std::sqrt(dx * dx + dy * dy), true};
            }
            case SpaceMetric::Manhattan: {
                return {std::abs(pts[i][0] - pts[j][0]) + std::abs(pts[i][1] - pts[j][1]),
                        true};
            }
            case SpaceMetric::Comb: {
                // Points are (alpha, level). Same tooth: vertical distance.
                // Different teeth: through the base row.
                if (pts[i][0] == pts[j][0])
                    return {std::abs(pts[i][1] - pts[j][1]), true};
                return {std::abs(pts[i][0] - pts[j][0]) + pts[i][1] + pts[j][1], true};
            }
            case SpaceMetric::Explicit:
                return {dmat[static_cast<std::size_t>(i) * explicit_n_ + j], true};
        }
        return {0.0, true};
    }

    // ---- builders -----------------------------------------------------------

    static FiniteSpace from_ball(std::shared_ptr<CayleyBall> b, std::string id) {
        FiniteSpace s;
        s.id = std::move(id);
        s.metric = SpaceMetric::Word;
        s.radius = b->radius;
        s.step = 1.0;
        s.basepoint = 0;  // identity is always point 0
        s.ball = std::move(b);
        return s;
    }

    /// An axis-parallel segment sampled at integer multiples of the step.
    struct Segment {
        bool vertical = false;
        double offset = 0.0;  ///< x for vertical segments, y for horizontal ones
        double lo = 0.0;
        double hi = 0.0;
    };

    /// Union of sampled segments under the chosen plane metric. Crossing
    /// segments share their intersection samples exactly. The basepoint is the
    /// sample nearest the origin.
    static FiniteSpace sampled_lines(const std::vector<Segment>& segs, double step,
                                     SpaceMetric metric, std::string id) {
        if (metric != SpaceMetric::Euclidean && metric != SpaceMetric::Manhattan)
            throw UnsupportedError("sampled_lines supports plane metrics only");
        FiniteSpace s;
        s.id = std::move(id);
        s.metric = metric;
        s.step = step;
        std::map<std::pair<double, double>, int> seen;
        for (const auto& seg : segs) {
            long long klo = static_cast<long long>(std::ceil(seg.lo / step - 1e-9));
            long long khi = static_cast<long long>(std::floor(seg.hi / step + 1e-9));
            for (long long k = klo; k <= khi; ++k) {
                double t = static_cast<double>(k) * step;
                std::array<double, 2> p =
                    seg.vertical ? std::array<double, 2>{seg.offset, t}
                                 : std::array<double, 2>{t, seg.offset};
                if (seen.emplace(std::make_pair(p[0], p[1]),
                                 static_cast<int>(s.pts.size()))
                        .second)
                    s.pts.push_back(p);
            }
        }
        s.finish_coordinate_space();
        return s;
    }

    /// Comb space sample: base row {(alpha, 0)} plus teeth {(alpha, n) : n >= m},
    /// truncated to the metric ball |alpha| + n <= radius around the origin.
    /// Vertical distance within a tooth, base-row routing between teeth.
    static FiniteSpace comb(int m, double alpha_step, double radius, std::string id) {
        FiniteSpace s;
        s.id = std::move(id);
        s.metric = SpaceMetric::Comb;
        s.step = std::min(alpha_step, 1.0);
        long long kmax = static_cast<long long>(std::floor(radius / alpha_step + 1e-9));
        for (long long k = -kmax; k <= kmax; ++k) {
            double alpha = static_cast<double>(k) * alpha_step;
            double room = radius - std::abs(alpha);
            s.pts.push_back({alpha, 0.0});
            for (int n = m; n <= static_cast<int>(std::floor(room + 1e-9)); ++n)
                s.pts.push_back({alpha, static_cast<double>(n)});
        }
        s.finish_coordinate_space();
        return s;
    }

    /// Small space with an explicitly tabulated metric (row-major n*n matrix).
    static FiniteSpace explicit_matrix(std::vector<double> d, std::size_t n,
                                       std::string id) {
        FiniteSpace s;
        s.id = std::move(id);
        s.metric = SpaceMetric::Explicit;
        s.explicit_n_ = n;
        s.dmat = std::move(d);
        s.basepoint = 0;
        double mx = 0.0, mn = 0.0;
        bool have_mn = false;
        for (std::size_t i = 0; i < n; ++i) {
            mx = std::max(mx, s.dmat[i]);  // row 0 = distances from basepoint
            for (std::size_t j = 0; j < n; ++j) {
                double v = s.dmat[i * n + j];
                if (v > 0 && (!have_mn || v < mn)) {
                    mn = v;
                    have_mn = true;
                }
            }
        }
        s.radius = mx;
        s.step = have_mn ? mn : 1.0;
        return s;
    }

    /// Indices of all points satisfying a predicate on their ids.
    template <class Pred>
    std::vector<int> indices_where(Pred&& pred) const {
        std::vector<int> out;
        const int n = static_cast<int>(size());
        for (int i = 0; i < n; ++i)
            if (pred(i)) out.push_back(i);
        return out;
    }

private:
    std::size_t explicit_n_ = 0;

    void finish_coordinate_space() {
        // basepoint: sample nearest the origin (ties broken by index order)
        int best = 0;
        double bestd = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double d = std::abs(pts[i][0]) + std::abs(pts[i][1]);
            if (i == 0 || d < bestd) {
                best = static_cast<int>(i);
                bestd = d;
            }
        }
        basepoint = best;
        double mx = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            mx = std::max(mx, distance(basepoint, static_cast<int>(i)).value);
        radius = mx;
    }
};

/// d(x, C) for one point: the least distance to any member of C. On Word
/// spaces the value is truncated (and useless) only if every member of C is
/// beyond the horizon from x.
inline TruncatedDist distance_to_subset(const FiniteSpace& X, int x,
                                        const std::vector<int>& C) {
    TruncatedDist best{std::numeric_limits<double>::infinity(), false};
    for (int c : C) {
        TruncatedDist d = X.distance(x, c);
        if (d.exact && (!best.exact || d.value < best.value)) best = d;
    }
    if (!best.exact) best.value = X.radius + 1;
    return best;
}

/// The set {x : d(x, C) <= r}, the closed r-thickening of C.
inline std::vector<int> thicken(const FiniteSpace& X, const std::vector<int>& C,
                                double r) {
    std::vector<int> out;
    const int n = static_cast<int>(X.size());
    for (int i = 0; i < n; ++i) {
        TruncatedDist d = distance_to_subset(X, i, C);
        if (d.exact && d.value <= r + 1e-9) out.push_back(i);
    }
    return out;
}

}  // namespace coends
