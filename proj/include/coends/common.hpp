#pragma once
/// Shared basics: error types, numeric formatting, defaults, union-find.

#include <cstdint>
#include <cstdio>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

namespace coends {

/// Library-wide defaults. All of them are overridable per run/description.
struct Defaults {
    static constexpr long long point_cap = 2'000'000;  ///< max points in a ball/space
    static constexpr int stable_window = 3;            ///< levels required for an exact verdict
    static constexpr int component_cap = 64;           ///< counts above this report "at_least"
};

/// A computation was asked to build more points than the configured cap allows.
class CapacityError : public std::runtime_error {
public:
    CapacityError(long long needed, long long cap)
        : std::runtime_error("point capacity exceeded: needs more than " + std::to_string(cap) +
                             " points (request reached " + std::to_string(needed) +
                             "); raise --cap to proceed"),
          needed_(needed), cap_(cap) {}
    long long needed() const { return needed_; }
    long long cap() const { return cap_; }

private:
    long long needed_, cap_;
};

/// A description file failed schema validation. `pointer` is a JSON pointer to the bad key.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string pointer, const std::string& what)
        : std::runtime_error("schema error at '" + pointer + "': " + what),
          pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

/// A metric oracle violated symmetry or the triangle inequality on a sampled triple.
class MetricError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation was called with scale pairs that are not comparable in the required order.
class ScaleOrderError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A structural inconsistency was detected mid-computation (names the offending cell).
class ConsistencyError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An input is outside the supported model families.
class UnsupportedError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic, locale-independent number rendering for reports.
/// Integers print without a decimal point; other values use %.6g.
inline std::string format_number(double x) {
    long long r = static_cast<long long>(x >= 0 ? x + 0.5 : x - 0.5);
    if (x == static_cast<double>(r)) return std::to_string(r);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::string(buf);
}

/// Classic disjoint-set structure with path compression and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<int32_t>(i);
    }

    int32_t find(int32_t p) {
        int32_t root = p;
        while (root != parent_[root]) root = parent_[root];
        while (p != root) {
            int32_t next = parent_[p];
            parent_[p] = root;
            p = next;
        }
        return root;
    }

    void merge(int32_t a, int32_t b) {
        int32_t ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (size_[ra] < size_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        size_[ra] += size_[rb];
    }

    bool connected(int32_t a, int32_t b) { return find(a) == find(b); }

private:
    std::vector<int32_t> parent_;
    std::vector<int64_t> size_;
};

}  // namespace coends
