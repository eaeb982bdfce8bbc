#pragma once
/// Hausdorff-type distances on truncated spaces.
///
/// On a truncation, the literal two-sided sup is polluted by boundary effects:
/// a source point near the horizon may have its true nearest partner beyond
/// the horizon, inflating the sup with an artifact of the cut. The windowed
/// variant therefore takes sources only from within a window around the
/// basepoint (default: half the horizon) while keeping the full visible trace
/// as target set, in both directions. Values are exact when every source's
/// nearest-partner distance was exact.

#include <algorithm>
#include <vector>

#include "coends/space.hpp"

namespace coends {

/// One direction: sup over sources a in A with d(base, a) <= source_window of
/// d(a, B). Vacuously zero when no source qualifies.
inline TruncatedDist directed_hausdorff(const FiniteSpace& X, const std::vector<int>& A,
                                        const std::vector<int>& B,
                                        double source_window) {
    TruncatedDist out{0.0, true};
    if (B.empty()) {
        // nothing to be near: any qualifying source pushes the sup past the horizon
        for (int a : A)
            if (X.distance(X.basepoint, a).value <= source_window + 1e-9)
                return {X.radius + 1, false};
        return out;
    }
    for (int a : A) {
        if (X.distance(X.basepoint, a).value > source_window + 1e-9) continue;
        TruncatedDist d = distance_to_subset(X, a, B);
        if (!d.exact) out.exact = false;
        out.value = std::max(out.value, d.value);
    }
    return out;
}

/// Windowed Hausdorff distance between two subsets: the max of the two
/// directed distances, sources restricted to the window on each side.
inline TruncatedDist truncated_hausdorff(const FiniteSpace& X, const std::vector<int>& A,
                                         const std::vector<int>& B,
                                         double source_window) {
    TruncatedDist ab = directed_hausdorff(X, A, B, source_window);
    TruncatedDist ba = directed_hausdorff(X, B, A, source_window);
    TruncatedDist out;
    out.value = std::max(ab.value, ba.value);
    out.exact = ab.exact && ba.exact;
    return out;
}

}  // namespace coends
