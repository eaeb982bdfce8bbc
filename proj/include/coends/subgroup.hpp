#pragma once
/// Finitely generated subgroups with exact membership tests and coset keys.
///
/// Families supported (matching the group models):
///   * sublattices of Z^n            — Hermite-normal-form arithmetic;
///   * cyclic subgroups <w> of F_k   — bounded power scans;
///   * componentwise products in direct products;
///   * single-factor subgroups in free products.
///
/// Coset keys are canonical strings: two elements get the same key iff they lie
/// in the same left coset gP.

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coends/common.hpp"
#include "coends/group.hpp"

namespace coends {

namespace detail {

/// Row-style Hermite normal form of an integer matrix (rows are generators).
/// Returns the reduced nonzero rows; pivots are positive, entries above a
/// pivot are reduced into [0, pivot).
inline std::vector<std::vector<long long>> hermite_rows(
    std::vector<std::vector<long long>> rows, int n) {
    std::vector<std::vector<long long>> basis = std::move(rows);
    int row = 0;
    for (int col = 0; col < n; ++col) {
        // find a row with nonzero entry in this column at or below `row`
        int pivot = -1;
        for (std::size_t r = row; r < basis.size(); ++r)
            if (basis[r][col] != 0) { pivot = static_cast<int>(r); break; }
        if (pivot < 0) continue;
        std::swap(basis[row], basis[pivot]);
        // eliminate the column below via gcd combinations
        for (std::size_t r = row + 1; r < basis.size(); ++r) {
            while (basis[r][col] != 0) {
                long long q = basis[row][col] / basis[r][col];
                for (int i = 0; i < n; ++i) basis[row][i] -= q * basis[r][i];
                std::swap(basis[row], basis[r]);
            }
        }
        if (basis[row][col] < 0)
            for (int i = 0; i < n; ++i) basis[row][i] = -basis[row][i];
        ++row;
    }
    basis.resize(row);
    // reduce entries above each pivot into [0, pivot)
    for (int r = row - 1; r >= 0; --r) {
        int p = 0;
        while (p < n && basis[r][p] == 0) ++p;
        if (p == n) continue;
        for (int r2 = 0; r2 < r; ++r2) {
            long long q = basis[r2][p] / basis[r][p];
            if (basis[r2][p] < 0 && basis[r2][p] % basis[r][p] != 0) --q;
            if (q != 0)
                for (int i = 0; i < n; ++i) basis[r2][i] -= q * basis[r][i];
        }
    }
    return basis;
}

}  // namespace detail

enum class SubgroupKind { Lattice, CyclicWord, Componentwise, SingleFactor, Trivial };

/// A subgroup P of a GroupModel, with O(normal form) membership and coset keys.
class Subgroup {
public:
    SubgroupKind kind = SubgroupKind::Trivial;
    const GroupModel* group = nullptr;
    std::string name;

    // Lattice payload
    std::vector<std::vector<long long>> hnf;  ///< HNF basis rows
    // CyclicWord payload
    Element root;  ///< the reduced generator word w
    // Componentwise payload
    std::vector<Subgroup> components;
    // SingleFactor payload
    int factor_index = -1;
    std::vector<Subgroup> factor_subgroup;  ///< singleton; subgroup of that factor

    // ---- construction -----------------------------------------------------

    static Subgroup trivial(const GroupModel& g) {
        Subgroup s;
        s.kind = SubgroupKind::Trivial;
        s.group = &g;
        s.name = "1";
        return s;
    }

    static Subgroup lattice(const GroupModel& g, std::vector<std::vector<long long>> gens) {
        if (g.kind != GroupKind::FreeAbelian)
            throw UnsupportedError("lattice subgroup needs a free-abelian group");
        for (const auto& v : gens)
            if (static_cast<int>(v.size()) != g.rank)
                throw UnsupportedError("lattice generator arity mismatch");
        Subgroup s;
        s.kind = SubgroupKind::Lattice;
        s.group = &g;
        s.hnf = detail::hermite_rows(std::move(gens), g.rank);
        s.name = "lattice(rank " + std::to_string(s.hnf.size()) + ")";
        if (s.hnf.empty()) s.kind = SubgroupKind::Trivial;
        return s;
    }

    static Subgroup cyclic_word(const GroupModel& g, const std::string& w) {
        if (g.kind != GroupKind::Free)
            throw UnsupportedError("cyclic word subgroup needs a free group");
        Subgroup s;
        s.kind = SubgroupKind::CyclicWord;
        s.group = &g;
        Element e = g.parse_word(w);
        if (e.word.empty()) return trivial(g);
        // keep the word as given: replacing it by a primitive root would
        // enlarge the subgroup (<a^2> is a proper subgroup of <a>)
        s.root = e;
        s.name = "<" + w + ">";
        return s;
    }

    static Subgroup componentwise(const GroupModel& g, std::vector<Subgroup> comps) {
        if (g.kind != GroupKind::DirectProduct)
            throw UnsupportedError("componentwise subgroup needs a direct product");
        if (comps.size() != g.factors.size())
            throw UnsupportedError("componentwise subgroup arity mismatch");
        Subgroup s;
        s.kind = SubgroupKind::Componentwise;
        s.group = &g;
        s.components = std::move(comps);
        s.name = "(";
        for (std::size_t i = 0; i < s.components.size(); ++i)
            s.name += (i ? " x " : "") + s.components[i].name;
        s.name += ")";
        return s;
    }

    static Subgroup single_factor(const GroupModel& g, int index, Subgroup inner) {
        if (g.kind != GroupKind::FreeProduct)
            throw UnsupportedError("single-factor subgroup needs a free product");
        if (index < 0 || index >= static_cast<int>(g.factors.size()))
            throw UnsupportedError("factor index out of range");
        Subgroup s;
        s.kind = SubgroupKind::SingleFactor;
        s.group = &g;
        s.factor_index = index;
        s.factor_subgroup.push_back(std::move(inner));
        s.name = "factor" + std::to_string(index) + ":" + s.factor_subgroup[0].name;
        return s;
    }

    static Subgroup from_json(const GroupModel& g, const nlohmann::json& j,
                              const std::string& ptr);

    // ---- queries ------------------------------------------------------------

    bool contains(const Element& a) const {
        switch (kind) {
            case SubgroupKind::Trivial: return group->is_identity(a);
            case SubgroupKind::Lattice: return lattice_contains(a.vec);
            case SubgroupKind::CyclicWord: return cyclic_contains(a);
            case SubgroupKind::Componentwise: {
                for (std::size_t i = 0; i < components.size(); ++i)
                    if (!components[i].contains(a.parts[i])) return false;
                return true;
            }
            case SubgroupKind::SingleFactor: {
                if (a.syllables.empty()) return true;
                if (a.syllables.size() != 1) return false;
                if (a.syllables[0].first != factor_index) return false;
                return factor_subgroup[0].contains(a.syllables[0].second);
            }
        }
        return false;
    }

    /// Canonical key of the left coset aP. Equal keys <=> same coset.
    std::string coset_key(const Element& a) const {
        switch (kind) {
            case SubgroupKind::Trivial: return group->key(a);
            case SubgroupKind::Lattice: {
                auto res = lattice_residue(a.vec);
                std::string s = "r";
                for (long long c : res) {
                    s += std::to_string(c);
                    s += ',';
                }
                return s;
            }
            case SubgroupKind::CyclicWord: return cyclic_coset_key(a);
            case SubgroupKind::Componentwise: {
                std::string s;
                for (std::size_t i = 0; i < components.size(); ++i) {
                    s += '(';
                    s += components[i].coset_key(a.parts[i]);
                    s += ')';
                }
                return s;
            }
            case SubgroupKind::SingleFactor: {
                // aP determined by a with a trailing factor_index-syllable reduced
                // modulo the inner subgroup.
                Element b = a;
                std::string tail = "|";
                if (!b.syllables.empty() && b.syllables.back().first == factor_index) {
                    tail += factor_subgroup[0].coset_key(b.syllables.back().second);
                    b.syllables.pop_back();
                } else {
                    tail += factor_subgroup[0].coset_key(
                        group->factors[factor_index].identity());
                }
                return group->key(b) + tail;
            }
        }
        return {};
    }

    /// Index [G : P] if finite, std::nullopt otherwise.
    std::optional<long long> index() const {
        switch (kind) {
            case SubgroupKind::Trivial: return std::nullopt;
            case SubgroupKind::Lattice: {
                if (static_cast<int>(hnf.size()) < group->rank) return std::nullopt;
                long long det = 1;
                for (int i = 0; i < group->rank; ++i) det *= hnf[i][i];
                return std::llabs(det);
            }
            case SubgroupKind::CyclicWord: return std::nullopt;
            case SubgroupKind::Componentwise: {
                long long prod = 1;
                for (const auto& c : components) {
                    auto ci = c.index();
                    if (!ci) {
                        // a trivial component of a finite factor would still be finite,
                        // but our models have no finite factors; treat as infinite.
                        return std::nullopt;
                    }
                    prod *= *ci;
                }
                return prod;
            }
            case SubgroupKind::SingleFactor: return std::nullopt;
        }
        return std::nullopt;
    }

private:
    bool lattice_contains(const std::vector<long long>& v) const {
        auto r = lattice_residue(v);
        return std::all_of(r.begin(), r.end(), [](long long c) { return c == 0; });
    }

    /// Reduce v modulo the HNF basis; the result is a canonical coset residue.
    std::vector<long long> lattice_residue(std::vector<long long> v) const {
        const int n = group->rank;
        for (const auto& b : hnf) {
            int p = 0;
            while (p < n && b[p] == 0) ++p;
            if (p == n) continue;
            // floor division keeps the residue coordinate in [0, pivot)
            long long q = v[p] / b[p];
            if (v[p] % b[p] != 0 && (v[p] < 0) != (b[p] < 0)) --q;
            for (int i = 0; i < n; ++i) v[i] -= q * b[i];
        }
        return v;
    }

    bool cyclic_contains(const Element& a) const {
        if (a.word.empty()) return true;
        // a in <root> iff a == root^k for some k != 0. Powers of a conjugate
        // root u v u^{-1} have length 2|u| + |k||v|, strictly increasing in |k|,
        // so scanning both directions until the power outgrows |a| is complete.
        const Element rinv = group->inverse(root);
        for (const Element* step : {&root, &rinv}) {
            Element acc = *step;
            while (acc.word.size() <= a.word.size()) {
                if (acc == a) return true;
                std::size_t before = acc.word.size();
                acc = group->multiply(acc, *step);
                if (acc.word.size() <= before) break;  // safety; cannot happen
            }
        }
        return false;
    }

    /// For P = <r> in a free group the coset aP is {a r^k : k}. Word length is
    /// unimodal in k (slope |v| beyond a plateau of width <= 2, where r = u v
    /// u^{-1} with v cyclically reduced), so greedy descent reaches the global
    /// minimum; a possible two-way tie is broken lexicographically on the key.
    std::string cyclic_coset_key(const Element& a) const {
        const Element rinv = group->inverse(root);
        Element b = a;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Element* s : {&root, &rinv}) {
                Element cand = group->multiply(b, *s);
                if (cand.word.size() < b.word.size()) {
                    b = cand;
                    changed = true;
                }
            }
        }
        std::string best = group->key(b);
        for (const Element* s : {&root, &rinv}) {
            Element cand = group->multiply(b, *s);
            if (cand.word.size() == b.word.size()) best = std::min(best, group->key(cand));
        }
        return best;
    }

};

inline Subgroup Subgroup::from_json(const GroupModel& g, const nlohmann::json& j,
                                    const std::string& ptr) {
    if (!j.is_object()) throw SchemaError(ptr, "subgroup must be an object");
    for (auto& [k, v] : j.items()) {
        if (k != "kind" && k != "generators" && k != "word" && k != "components" &&
            k != "factor" && k != "inner")
            throw SchemaError(ptr + "/" + k, "unknown key");
    }
    if (!j.contains("kind")) throw SchemaError(ptr + "/kind", "missing");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "trivial") return trivial(g);
    if (kind == "lattice") {
        if (!j.contains("generators")) throw SchemaError(ptr + "/generators", "missing");
        return lattice(g, j.at("generators").get<std::vector<std::vector<long long>>>());
    }
    if (kind == "cyclic-word") {
        if (!j.contains("word")) throw SchemaError(ptr + "/word", "missing");
        return cyclic_word(g, j.at("word").get<std::string>());
    }
    if (kind == "componentwise") {
        if (!j.contains("components") || !j.at("components").is_array())
            throw SchemaError(ptr + "/components", "array required");
        if (g.kind != GroupKind::DirectProduct)
            throw SchemaError(ptr + "/kind", "componentwise needs a direct product");
        if (j.at("components").size() != g.factors.size())
            throw SchemaError(ptr + "/components", "one component per factor required");
        std::vector<Subgroup> comps;
        int i = 0;
        for (const auto& c : j.at("components")) {
            comps.push_back(
                from_json(g.factors[i], c, ptr + "/components/" + std::to_string(i)));
            ++i;
        }
        return componentwise(g, std::move(comps));
    }
    if (kind == "single-factor") {
        if (!j.contains("factor")) throw SchemaError(ptr + "/factor", "missing");
        int idx = j.at("factor").get<int>();
        if (g.kind != GroupKind::FreeProduct)
            throw SchemaError(ptr + "/kind", "single-factor needs a free product");
        if (idx < 0 || idx >= static_cast<int>(g.factors.size()))
            throw SchemaError(ptr + "/factor", "factor index out of range");
        if (!j.contains("inner")) throw SchemaError(ptr + "/inner", "missing");
        return single_factor(g, idx,
                             from_json(g.factors[idx], j.at("inner"), ptr + "/inner"));
    }
    throw SchemaError(ptr + "/kind", "unknown subgroup kind '" + kind + "'");
}

}  // namespace coends
