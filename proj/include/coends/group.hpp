#pragma once
/// Group models with exact normal forms.
///
/// Supported families:
///   * free-abelian groups Z^n          — elements are integer vectors;
///   * free groups F_k                  — elements are reduced words;
///   * direct products of models        — elements are component tuples;
///   * free products of models          — elements are alternating syllable lists.
///
/// Every element has one canonical representation, so equality is structural
/// and membership/coset questions reduce to normal-form arithmetic.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coends/common.hpp"

namespace coends {

enum class GroupKind { FreeAbelian, Free, DirectProduct, FreeProduct };

/// One group element. The payload that applies is determined by the model's kind;
/// the other members stay empty. Elements are small value types.
struct Element {
    std::vector<long long> vec;  ///< FreeAbelian: coordinates
    std::vector<int> word;       ///< Free: reduced word, letters +i / -i (1-based)
    std::vector<Element> parts;  ///< DirectProduct: one entry per factor
    std::vector<std::pair<int, Element>> syllables;  ///< FreeProduct: (factor, element)

    bool operator==(const Element& o) const = default;
};

/// A finitely generated group with normal-form arithmetic and a chosen,
/// automatically symmetrized generating set.
class GroupModel {
public:
    GroupKind kind = GroupKind::FreeAbelian;
    int rank = 1;                     ///< FreeAbelian: n;  Free: number of letters
    std::vector<GroupModel> factors;  ///< products only
    std::vector<Element> generators;  ///< symmetrized, deduplicated, identity-free
    bool symmetrization_added = false;  ///< true if inverses had to be added
    std::string name;

    // ---- construction -----------------------------------------------------

    static GroupModel free_abelian(int n, std::vector<std::vector<long long>> gens = {}) {
        GroupModel g;
        g.kind = GroupKind::FreeAbelian;
        g.rank = n;
        g.name = "Z^" + std::to_string(n);
        std::vector<Element> raw;
        if (gens.empty()) {
            for (int i = 0; i < n; ++i) {
                Element e;
                e.vec.assign(n, 0);
                e.vec[i] = 1;
                raw.push_back(e);
            }
        } else {
            for (auto& v : gens) {
                if (static_cast<int>(v.size()) != n)
                    throw UnsupportedError("generator arity does not match rank");
                Element e;
                e.vec = v;
                raw.push_back(e);
            }
        }
        g.finish_generators(raw);
        return g;
    }

    static GroupModel free_group(int k, std::vector<std::string> gen_words = {}) {
        GroupModel g;
        g.kind = GroupKind::Free;
        g.rank = k;
        g.name = "F_" + std::to_string(k);
        std::vector<Element> raw;
        if (gen_words.empty()) {
            for (int i = 1; i <= k; ++i) {
                Element e;
                e.word = {i};
                raw.push_back(e);
            }
        } else {
            for (auto& w : gen_words) raw.push_back(g.parse_word(w));
        }
        g.finish_generators(raw);
        return g;
    }

    static GroupModel direct_product(std::vector<GroupModel> fs) {
        GroupModel g;
        g.kind = GroupKind::DirectProduct;
        g.factors = std::move(fs);
        g.name = "(";
        for (std::size_t i = 0; i < g.factors.size(); ++i)
            g.name += (i ? " x " : "") + g.factors[i].name;
        g.name += ")";
        std::vector<Element> raw;
        for (std::size_t i = 0; i < g.factors.size(); ++i)
            for (const auto& s : g.factors[i].generators) {
                Element e = g.identity();
                e.parts[i] = s;
                raw.push_back(e);
            }
        g.finish_generators(raw);
        return g;
    }

    static GroupModel free_product(std::vector<GroupModel> fs) {
        GroupModel g;
        g.kind = GroupKind::FreeProduct;
        g.factors = std::move(fs);
        g.name = "(";
        for (std::size_t i = 0; i < g.factors.size(); ++i)
            g.name += (i ? " * " : "") + g.factors[i].name;
        g.name += ")";
        std::vector<Element> raw;
        for (std::size_t i = 0; i < g.factors.size(); ++i)
            for (const auto& s : g.factors[i].generators) {
                Element e;
                e.syllables.push_back({static_cast<int>(i), s});
                raw.push_back(e);
            }
        g.finish_generators(raw);
        return g;
    }

    /// Parse a model description, e.g.
    ///   {"kind":"zn","rank":2}  {"kind":"zn","rank":1,"generators":[[2],[3]]}
    ///   {"kind":"free","rank":2}  {"kind":"direct-product","factors":[...]}
    static GroupModel from_json(const nlohmann::json& j, const std::string& ptr);

    // ---- arithmetic --------------------------------------------------------

    Element identity() const {
        Element e;
        switch (kind) {
            case GroupKind::FreeAbelian: e.vec.assign(rank, 0); break;
            case GroupKind::Free: break;
            case GroupKind::DirectProduct:
                for (const auto& f : factors) e.parts.push_back(f.identity());
                break;
            case GroupKind::FreeProduct: break;
        }
        return e;
    }

    bool is_identity(const Element& a) const {
        switch (kind) {
            case GroupKind::FreeAbelian:
                return std::all_of(a.vec.begin(), a.vec.end(), [](long long c) { return c == 0; });
            case GroupKind::Free: return a.word.empty();
            case GroupKind::DirectProduct:
                for (std::size_t i = 0; i < factors.size(); ++i)
                    if (!factors[i].is_identity(a.parts[i])) return false;
                return true;
            case GroupKind::FreeProduct: return a.syllables.empty();
        }
        return false;
    }

    Element multiply(const Element& a, const Element& b) const {
        Element r;
        switch (kind) {
            case GroupKind::FreeAbelian: {
                r.vec.resize(rank);
                for (int i = 0; i < rank; ++i) r.vec[i] = a.vec[i] + b.vec[i];
                break;
            }
            case GroupKind::Free: {
                r.word = a.word;
                for (int letter : b.word) {
                    if (!r.word.empty() && r.word.back() == -letter)
                        r.word.pop_back();
                    else
                        r.word.push_back(letter);
                }
                break;
            }
            case GroupKind::DirectProduct: {
                r.parts.resize(factors.size());
                for (std::size_t i = 0; i < factors.size(); ++i)
                    r.parts[i] = factors[i].multiply(a.parts[i], b.parts[i]);
                break;
            }
            case GroupKind::FreeProduct: {
                r.syllables = a.syllables;
                for (const auto& syl : b.syllables) push_syllable(r, syl);
                break;
            }
        }
        return r;
    }

    Element inverse(const Element& a) const {
        Element r;
        switch (kind) {
            case GroupKind::FreeAbelian: {
                r.vec.resize(rank);
                for (int i = 0; i < rank; ++i) r.vec[i] = -a.vec[i];
                break;
            }
            case GroupKind::Free: {
                r.word.reserve(a.word.size());
                for (auto it = a.word.rbegin(); it != a.word.rend(); ++it) r.word.push_back(-*it);
                break;
            }
            case GroupKind::DirectProduct: {
                r.parts.resize(factors.size());
                for (std::size_t i = 0; i < factors.size(); ++i)
                    r.parts[i] = factors[i].inverse(a.parts[i]);
                break;
            }
            case GroupKind::FreeProduct: {
                for (auto it = a.syllables.rbegin(); it != a.syllables.rend(); ++it)
                    r.syllables.push_back({it->first, factors[it->first].inverse(it->second)});
                break;
            }
        }
        return r;
    }

    // ---- canonical encoding ------------------------------------------------

    /// Injective, deterministic string encoding; used for dedup and for the
    /// (length, key) total order on ball points.
    std::string key(const Element& a) const {
        std::string s;
        append_key(a, s);
        return s;
    }

    /// Human-readable rendering ("(2,-1)", "a b^-1 a", ...).
    std::string display(const Element& a) const {
        switch (kind) {
            case GroupKind::FreeAbelian: {
                std::string s = "(";
                for (int i = 0; i < rank; ++i) s += (i ? "," : "") + std::to_string(a.vec[i]);
                return s + ")";
            }
            case GroupKind::Free: {
                if (a.word.empty()) return "e";
                std::string s;
                for (int letter : a.word) {
                    if (!s.empty()) s += ' ';
                    char c = static_cast<char>('a' + std::abs(letter) - 1);
                    s += c;
                    if (letter < 0) s += "^-1";
                }
                return s;
            }
            case GroupKind::DirectProduct: {
                std::string s = "(";
                for (std::size_t i = 0; i < factors.size(); ++i)
                    s += (i ? ", " : "") + factors[i].display(a.parts[i]);
                return s + ")";
            }
            case GroupKind::FreeProduct: {
                if (a.syllables.empty()) return "e";
                std::string s;
                for (const auto& [f, e] : a.syllables) {
                    if (!s.empty()) s += " . ";
                    s += std::to_string(f) + ":" + factors[f].display(e);
                }
                return s;
            }
        }
        return {};
    }

    /// Parse a free-group word such as "abA" (capital = inverse letter).
    Element parse_word(const std::string& w) const {
        if (kind != GroupKind::Free) throw UnsupportedError("word literals need a free group");
        Element e;
        Element acc;
        for (char c : w) {
            int letter = 0;
            if (c >= 'a' && c <= 'z') letter = c - 'a' + 1;
            else if (c >= 'A' && c <= 'Z') letter = -(c - 'A' + 1);
            else if (c == ' ') continue;
            else throw UnsupportedError(std::string("bad letter '") + c + "' in word literal");
            if (std::abs(letter) > rank) throw UnsupportedError("letter outside the free rank");
            Element step;
            step.word = {letter};
            acc = multiply(acc, step);
        }
        e = acc;
        return e;
    }

private:
    void append_key(const Element& a, std::string& s) const {
        switch (kind) {
            case GroupKind::FreeAbelian:
                s += 'z';
                for (long long c : a.vec) {
                    s += std::to_string(c);
                    s += ',';
                }
                break;
            case GroupKind::Free:
                s += 'w';
                for (int letter : a.word) {
                    s += std::to_string(letter);
                    s += ',';
                }
                break;
            case GroupKind::DirectProduct:
                s += 't';
                for (std::size_t i = 0; i < factors.size(); ++i) {
                    s += '(';
                    factors[i].append_key(a.parts[i], s);
                    s += ')';
                }
                break;
            case GroupKind::FreeProduct:
                s += 's';
                for (const auto& [f, e] : a.syllables) {
                    s += '(';
                    s += std::to_string(f);
                    s += ':';
                    factors[f].append_key(e, s);
                    s += ')';
                }
                break;
        }
    }

    void push_syllable(Element& r, const std::pair<int, Element>& syl) const {
        if (factors[syl.first].is_identity(syl.second)) return;
        if (!r.syllables.empty() && r.syllables.back().first == syl.first) {
            Element merged =
                factors[syl.first].multiply(r.syllables.back().second, syl.second);
            r.syllables.pop_back();
            if (!factors[syl.first].is_identity(merged))
                push_syllable(r, {syl.first, merged});
            return;
        }
        r.syllables.push_back(syl);
    }

    /// Deduplicate, drop identities, and close under inverses (recording whether
    /// closure actually added anything, so callers can surface a warning).
    void finish_generators(const std::vector<Element>& raw) {
        std::map<std::string, Element> seen;
        for (const auto& e : raw) {
            if (is_identity(e)) continue;
            seen.emplace(key(e), e);
        }
        bool added = false;
        for (auto snapshot = seen; const auto& [k, e] : snapshot) {
            Element inv = inverse(e);
            if (seen.emplace(key(inv), inv).second) added = true;
        }
        symmetrization_added = added;
        generators.clear();
        for (auto& [k, e] : seen) generators.push_back(e);
    }
};

inline GroupModel GroupModel::from_json(const nlohmann::json& j, const std::string& ptr) {
    if (!j.is_object()) throw SchemaError(ptr, "group must be an object");
    for (auto& [k, v] : j.items()) {
        if (k != "kind" && k != "rank" && k != "generators" && k != "factors")
            throw SchemaError(ptr + "/" + k, "unknown key");
    }
    if (!j.contains("kind")) throw SchemaError(ptr + "/kind", "missing");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zn") {
        int n = j.value("rank", 0);
        if (n < 1 || n > 8) throw SchemaError(ptr + "/rank", "rank must be in [1,8]");
        std::vector<std::vector<long long>> gens;
        if (j.contains("generators"))
            gens = j.at("generators").get<std::vector<std::vector<long long>>>();
        return free_abelian(n, std::move(gens));
    }
    if (kind == "free") {
        int k = j.value("rank", 0);
        if (k < 1 || k > 8) throw SchemaError(ptr + "/rank", "rank must be in [1,8]");
        std::vector<std::string> gens;
        if (j.contains("generators")) gens = j.at("generators").get<std::vector<std::string>>();
        return free_group(k, std::move(gens));
    }
    if (kind == "direct-product" || kind == "free-product") {
        if (!j.contains("factors") || !j.at("factors").is_array() || j.at("factors").empty())
            throw SchemaError(ptr + "/factors", "non-empty array required");
        std::vector<GroupModel> fs;
        int i = 0;
        for (const auto& f : j.at("factors"))
            fs.push_back(from_json(f, ptr + "/factors/" + std::to_string(i++)));
        return kind == "direct-product" ? direct_product(std::move(fs))
                                        : free_product(std::move(fs));
    }
    throw SchemaError(ptr + "/kind", "unknown group kind '" + kind + "'");
}

}  // namespace coends
