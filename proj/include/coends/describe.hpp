#pragma once
/// Description files: a JSON schema naming a computation (command, space,
/// subsets, map, grids), with strict validation — unknown keys are rejected
/// with a JSON pointer — plus construction of the described objects.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coends/ball.hpp"
#include "coends/common.hpp"
#include "coends/group.hpp"
#include "coends/space.hpp"
#include "coends/subgroup.hpp"

namespace coends {

using nlohmann::json;

namespace detail {
inline void reject_unknown(const json& j, const std::string& ptr,
                           std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw SchemaError(ptr, "object required");
    for (auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (k == a) ok = true;
        if (!ok) throw SchemaError(ptr + "/" + k, "unknown key");
    }
}

inline std::vector<double> number_list(const json& j, const std::string& ptr) {
    if (!j.is_array()) throw SchemaError(ptr, "array of numbers required");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw SchemaError(ptr, "array of numbers required");
        out.push_back(v.get<double>());
    }
    return out;
}
}  // namespace detail

// ---------------------------------------------------------------------------

struct GridSpec {
    std::vector<double> sigma, mu, M, R;
    int window = Defaults::stable_window;
    int cap = Defaults::component_cap;
    double margin = -1.0;   ///< unboundedness margin; -1 = per-sigma default
    double k = -1.0;        ///< neighbourhood depth (perpendicularity probes)
    double gmax = -1.0;     ///< candidate norm bound (stabilizer)
    double hwindow = -1.0;  ///< Hausdorff source window; -1 = half the horizon

    static GridSpec parse(const json& j, const std::string& ptr) {
        GridSpec g;
        detail::reject_unknown(j, ptr,
                               {"sigma", "mu", "M", "R", "window", "cap", "margin",
                                "k", "gmax", "hwindow"});
        if (j.contains("sigma")) g.sigma = detail::number_list(j.at("sigma"), ptr + "/sigma");
        if (j.contains("mu")) g.mu = detail::number_list(j.at("mu"), ptr + "/mu");
        if (j.contains("M")) g.M = detail::number_list(j.at("M"), ptr + "/M");
        if (j.contains("R")) g.R = detail::number_list(j.at("R"), ptr + "/R");
        if (j.contains("window")) g.window = j.at("window").get<int>();
        if (j.contains("cap")) g.cap = j.at("cap").get<int>();
        if (j.contains("margin")) g.margin = j.at("margin").get<double>();
        if (j.contains("k")) g.k = j.at("k").get<double>();
        if (j.contains("gmax")) g.gmax = j.at("gmax").get<double>();
        if (j.contains("hwindow")) g.hwindow = j.at("hwindow").get<double>();
        if (g.window < 1) throw SchemaError(ptr + "/window", "window must be >= 1");
        if (g.cap < 1) throw SchemaError(ptr + "/cap", "cap must be >= 1");
        return g;
    }

    json to_json() const {
        json j = json::object();
        if (!sigma.empty()) j["sigma"] = sigma;
        if (!mu.empty()) j["mu"] = mu;
        if (!M.empty()) j["M"] = M;
        if (!R.empty()) j["R"] = R;
        j["window"] = window;
        j["cap"] = cap;
        if (margin >= 0) j["margin"] = margin;
        if (k >= 0) j["k"] = k;
        if (gmax >= 0) j["gmax"] = gmax;
        if (hwindow >= 0) j["hwindow"] = hwindow;
        return j;
    }
};

// ---------------------------------------------------------------------------

struct SpaceSpec {
    enum class Type { Cayley, SampledLines, ProductRow, Explicit };
    Type type = Type::Cayley;
    json group = json::object();  ///< Cayley: group description
    double radius = 0;            ///< Cayley / ProductRow horizon
    double step = 0;              ///< SampledLines / ProductRow spacing
    std::string metric = "euclidean";
    std::vector<FiniteSpace::Segment> segments;
    int m = 0;  ///< ProductRow: first nonzero level
    std::vector<std::vector<double>> matrix;

    static SpaceSpec parse(const json& j, const std::string& ptr) {
        SpaceSpec s;
        if (!j.is_object()) throw SchemaError(ptr, "object required");
        if (!j.contains("type")) throw SchemaError(ptr + "/type", "missing");
        const std::string type = j.at("type").get<std::string>();
        if (type == "cayley") {
            s.type = Type::Cayley;
            detail::reject_unknown(j, ptr, {"type", "group", "radius"});
            if (!j.contains("group")) throw SchemaError(ptr + "/group", "missing");
            if (!j.contains("radius")) throw SchemaError(ptr + "/radius", "missing");
            GroupModel::from_json(j.at("group"), ptr + "/group");  // validate now
            s.group = j.at("group");
            s.radius = j.at("radius").get<double>();
            if (s.radius < 1) throw SchemaError(ptr + "/radius", "radius must be >= 1");
        } else if (type == "sampled-lines") {
            s.type = Type::SampledLines;
            detail::reject_unknown(j, ptr, {"type", "step", "metric", "segments"});
            if (!j.contains("step")) throw SchemaError(ptr + "/step", "missing");
            s.step = j.at("step").get<double>();
            if (s.step <= 0) throw SchemaError(ptr + "/step", "step must be positive");
            if (j.contains("metric")) s.metric = j.at("metric").get<std::string>();
            if (s.metric != "euclidean" && s.metric != "manhattan")
                throw SchemaError(ptr + "/metric", "metric must be euclidean or manhattan");
            if (!j.contains("segments") || !j.at("segments").is_array() ||
                j.at("segments").empty())
                throw SchemaError(ptr + "/segments", "non-empty array required");
            int i = 0;
            for (const auto& seg : j.at("segments")) {
                const std::string p = ptr + "/segments/" + std::to_string(i++);
                detail::reject_unknown(seg, p, {"vertical", "offset", "lo", "hi"});
                FiniteSpace::Segment sg;
                if (seg.contains("vertical")) sg.vertical = seg.at("vertical").get<bool>();
                if (!seg.contains("lo") || !seg.contains("hi"))
                    throw SchemaError(p, "lo and hi required");
                sg.offset = seg.value("offset", 0.0);
                sg.lo = seg.at("lo").get<double>();
                sg.hi = seg.at("hi").get<double>();
                if (sg.hi < sg.lo) throw SchemaError(p + "/hi", "hi must be >= lo");
                s.segments.push_back(sg);
            }
        } else if (type == "product-row") {
            s.type = Type::ProductRow;
            detail::reject_unknown(j, ptr, {"type", "m", "step", "radius"});
            if (!j.contains("m")) throw SchemaError(ptr + "/m", "missing");
            if (!j.contains("step")) throw SchemaError(ptr + "/step", "missing");
            if (!j.contains("radius")) throw SchemaError(ptr + "/radius", "missing");
            s.m = j.at("m").get<int>();
            s.step = j.at("step").get<double>();
            s.radius = j.at("radius").get<double>();
            if (s.m < 1) throw SchemaError(ptr + "/m", "m must be >= 1");
            if (s.step <= 0) throw SchemaError(ptr + "/step", "step must be positive");
            if (s.radius <= s.m) throw SchemaError(ptr + "/radius", "radius must exceed m");
        } else if (type == "explicit") {
            s.type = Type::Explicit;
            detail::reject_unknown(j, ptr, {"type", "matrix"});
            if (!j.contains("matrix") || !j.at("matrix").is_array())
                throw SchemaError(ptr + "/matrix", "matrix required");
            for (const auto& row : j.at("matrix"))
                s.matrix.push_back(detail::number_list(row, ptr + "/matrix"));
            const std::size_t n = s.matrix.size();
            if (n == 0) throw SchemaError(ptr + "/matrix", "matrix must be non-empty");
            for (const auto& row : s.matrix)
                if (row.size() != n)
                    throw SchemaError(ptr + "/matrix", "matrix must be square");
        } else {
            throw SchemaError(ptr + "/type", "unknown space type '" + type + "'");
        }
        return s;
    }

    json to_json() const {
        json j = json::object();
        switch (type) {
            case Type::Cayley:
                j["type"] = "cayley";
                j["group"] = group;
                j["radius"] = radius;
                break;
            case Type::SampledLines: {
                j["type"] = "sampled-lines";
                j["step"] = step;
                j["metric"] = metric;
                json segs = json::array();
                for (const auto& s : segments)
                    segs.push_back({{"vertical", s.vertical},
                                    {"offset", s.offset},
                                    {"lo", s.lo},
                                    {"hi", s.hi}});
                j["segments"] = segs;
                break;
            }
            case Type::ProductRow:
                j["type"] = "product-row";
                j["m"] = m;
                j["step"] = step;
                j["radius"] = radius;
                break;
            case Type::Explicit:
                j["type"] = "explicit";
                j["matrix"] = matrix;
                break;
        }
        return j;
    }
};

/// A space together with the group model that keeps its ball's pointers alive.
struct BuiltSpace {
    std::shared_ptr<GroupModel> group;  ///< null for sampled spaces
    FiniteSpace space;
};

inline BuiltSpace build_space(const SpaceSpec& s, const std::string& id,
                              long long cap = Defaults::point_cap) {
    BuiltSpace out;
    switch (s.type) {
        case SpaceSpec::Type::Cayley: {
            out.group = std::make_shared<GroupModel>(
                GroupModel::from_json(s.group, "/space/group"));
            auto ball = std::make_shared<CayleyBall>(build_cayley_ball(
                *out.group, static_cast<int>(std::llround(s.radius)),
                static_cast<std::size_t>(cap)));
            out.space = FiniteSpace::from_ball(std::move(ball), id);
            break;
        }
        case SpaceSpec::Type::SampledLines: {
            SpaceMetric m = s.metric == "manhattan" ? SpaceMetric::Manhattan
                                                    : SpaceMetric::Euclidean;
            out.space = FiniteSpace::sampled_lines(s.segments, s.step, m, id);
            break;
        }
        case SpaceSpec::Type::ProductRow:
            out.space = FiniteSpace::comb(s.m, s.step, s.radius, id);
            break;
        case SpaceSpec::Type::Explicit: {
            const std::size_t n = s.matrix.size();
            // metric axioms: zero diagonal, non-negativity, symmetry, and the
            // triangle inequality (all triples for small n, a deterministic
            // sample otherwise)
            for (std::size_t i = 0; i < n; ++i) {
                if (std::abs(s.matrix[i][i]) > 1e-9)
                    throw MetricError("explicit metric: nonzero diagonal at index " +
                                      std::to_string(i));
                for (std::size_t j = 0; j < n; ++j) {
                    if (s.matrix[i][j] < -1e-9)
                        throw MetricError("explicit metric: negative entry at (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
                    if (std::abs(s.matrix[i][j] - s.matrix[j][i]) > 1e-9)
                        throw MetricError("explicit metric: asymmetric at (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
            auto check_triangle = [&](std::size_t i, std::size_t j, std::size_t k) {
                if (s.matrix[i][j] > s.matrix[i][k] + s.matrix[k][j] + 1e-9)
                    throw MetricError("explicit metric: triangle inequality fails on (" +
                                      std::to_string(i) + "," + std::to_string(j) + "," +
                                      std::to_string(k) + ")");
            };
            if (n <= 64) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t k = 0; k < n; ++k) check_triangle(i, j, k);
            } else {
                std::uint64_t state = 0x9e3779b97f4a7c15ULL;
                auto next = [&state, n]() {
                    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
                    return static_cast<std::size_t>((state >> 33) % n);
                };
                for (int t = 0; t < 20000; ++t) check_triangle(next(), next(), next());
            }
            std::vector<double> flat;
            flat.reserve(n * n);
            for (const auto& row : s.matrix)
                flat.insert(flat.end(), row.begin(), row.end());
            out.space = FiniteSpace::explicit_matrix(std::move(flat), n, id);
            break;
        }
    }
    if (static_cast<long long>(out.space.size()) > cap)
        throw CapacityError(static_cast<long long>(out.space.size()), cap);
    return out;
}

// ---------------------------------------------------------------------------

struct SubsetSpec {
    enum class Type { Subgroup, Basepoint, Point, Line, Indices };
    Type type = Type::Basepoint;
    json subgroup = json::object();
    double x = 0, y = 0;         ///< Point
    bool vertical = false;       ///< Line
    double offset = 0;           ///< Line
    std::vector<int> indices;    ///< Indices
    double thicken_r = 0;        ///< optional thickening radius

    static SubsetSpec parse(const json& j, const std::string& ptr) {
        SubsetSpec s;
        if (!j.is_object()) throw SchemaError(ptr, "object required");
        if (!j.contains("type")) throw SchemaError(ptr + "/type", "missing");
        const std::string type = j.at("type").get<std::string>();
        if (type == "subgroup") {
            s.type = Type::Subgroup;
            detail::reject_unknown(j, ptr, {"type", "subgroup", "thicken"});
            if (!j.contains("subgroup")) throw SchemaError(ptr + "/subgroup", "missing");
            s.subgroup = j.at("subgroup");
        } else if (type == "basepoint") {
            s.type = Type::Basepoint;
            detail::reject_unknown(j, ptr, {"type", "thicken"});
        } else if (type == "point") {
            s.type = Type::Point;
            detail::reject_unknown(j, ptr, {"type", "at", "thicken"});
            if (!j.contains("at") || !j.at("at").is_array() || j.at("at").size() != 2)
                throw SchemaError(ptr + "/at", "coordinate pair required");
            s.x = j.at("at")[0].get<double>();
            s.y = j.at("at")[1].get<double>();
        } else if (type == "line") {
            s.type = Type::Line;
            detail::reject_unknown(j, ptr, {"type", "vertical", "offset", "thicken"});
            if (j.contains("vertical")) s.vertical = j.at("vertical").get<bool>();
            s.offset = j.value("offset", 0.0);
        } else if (type == "indices") {
            s.type = Type::Indices;
            detail::reject_unknown(j, ptr, {"type", "indices", "thicken"});
            if (!j.contains("indices") || !j.at("indices").is_array())
                throw SchemaError(ptr + "/indices", "array required");
            for (const auto& v : j.at("indices")) s.indices.push_back(v.get<int>());
        } else {
            throw SchemaError(ptr + "/type", "unknown subset type '" + type + "'");
        }
        if (j.contains("thicken")) {
            s.thicken_r = j.at("thicken").get<double>();
            if (s.thicken_r < 0) throw SchemaError(ptr + "/thicken", "must be >= 0");
        }
        return s;
    }

    json to_json() const {
        json j = json::object();
        switch (type) {
            case Type::Subgroup:
                j["type"] = "subgroup";
                j["subgroup"] = subgroup;
                break;
            case Type::Basepoint: j["type"] = "basepoint"; break;
            case Type::Point:
                j["type"] = "point";
                j["at"] = {x, y};
                break;
            case Type::Line:
                j["type"] = "line";
                j["vertical"] = vertical;
                j["offset"] = offset;
                break;
            case Type::Indices:
                j["type"] = "indices";
                j["indices"] = indices;
                break;
        }
        if (thicken_r > 0) j["thicken"] = thicken_r;
        return j;
    }
};

struct ResolvedSubset {
    std::vector<int> indices;
    std::optional<Subgroup> subgroup;
};

inline ResolvedSubset resolve_subset(const BuiltSpace& b, const SubsetSpec& s,
                                     const std::string& ptr) {
    ResolvedSubset out;
    const FiniteSpace& X = b.space;
    switch (s.type) {
        case SubsetSpec::Type::Subgroup: {
            if (!b.group || X.metric != SpaceMetric::Word)
                throw SchemaError(ptr, "subgroup subset needs a Cayley space");
            out.subgroup = Subgroup::from_json(*b.group, s.subgroup, ptr + "/subgroup");
            out.indices = trace_indices(*X.ball, *out.subgroup);
            break;
        }
        case SubsetSpec::Type::Basepoint:
            out.indices.push_back(X.basepoint);
            break;
        case SubsetSpec::Type::Point: {
            for (std::size_t i = 0; i < X.size(); ++i)
                if (std::abs(X.pts[i][0] - s.x) <= 1e-9 &&
                    std::abs(X.pts[i][1] - s.y) <= 1e-9)
                    out.indices.push_back(static_cast<int>(i));
            if (out.indices.empty())
                throw SchemaError(ptr + "/at", "no sample at the given point");
            break;
        }
        case SubsetSpec::Type::Line: {
            if (X.metric != SpaceMetric::Euclidean && X.metric != SpaceMetric::Manhattan)
                throw SchemaError(ptr, "line subset needs a sampled planar space");
            const int c = s.vertical ? 0 : 1;
            for (std::size_t i = 0; i < X.size(); ++i)
                if (std::abs(X.pts[i][c] - s.offset) <= 1e-9)
                    out.indices.push_back(static_cast<int>(i));
            if (out.indices.empty())
                throw SchemaError(ptr + "/offset", "no sample on the given line");
            break;
        }
        case SubsetSpec::Type::Indices: {
            for (int i : s.indices) {
                if (i < 0 || i >= static_cast<int>(X.size()))
                    throw SchemaError(ptr + "/indices", "index out of range");
                out.indices.push_back(i);
            }
            break;
        }
    }
    if (s.thicken_r > 0) out.indices = thicken(X, out.indices, s.thicken_r);
    return out;
}

// ---------------------------------------------------------------------------

struct MapSpec {
    std::string type = "identity-elements";  ///< identity-elements | transpose | translation
    std::string g;                            ///< translation word (free groups)
    std::vector<long long> gvec;              ///< translation vector (abelian)

    static MapSpec parse(const json& j, const std::string& ptr) {
        MapSpec m;
        detail::reject_unknown(j, ptr, {"type", "g"});
        if (j.contains("type")) m.type = j.at("type").get<std::string>();
        if (m.type != "identity-elements" && m.type != "transpose" &&
            m.type != "translation")
            throw SchemaError(ptr + "/type", "unknown map type '" + m.type + "'");
        if (j.contains("g")) {
            if (j.at("g").is_string())
                m.g = j.at("g").get<std::string>();
            else if (j.at("g").is_array())
                m.gvec = j.at("g").get<std::vector<long long>>();
            else
                throw SchemaError(ptr + "/g", "word string or integer vector required");
        }
        if (m.type == "translation" && m.g.empty() && m.gvec.empty())
            throw SchemaError(ptr + "/g", "translation needs an element");
        return m;
    }

    json to_json() const {
        json j = json::object();
        j["type"] = type;
        if (!g.empty()) j["g"] = g;
        if (!gvec.empty()) j["g"] = gvec;
        return j;
    }
};

/// Parses an element given as a word string (free-type groups) or an integer
/// vector (free-abelian groups).
inline Element parse_element(const GroupModel& G, const json& j, const std::string& ptr) {
    if (j.is_string()) {
        if (G.kind != GroupKind::Free)
            throw SchemaError(ptr, "word strings need a free group");
        return G.parse_word(j.get<std::string>());
    }
    if (j.is_array()) {
        if (G.kind != GroupKind::FreeAbelian)
            throw SchemaError(ptr, "integer vectors need a free-abelian group");
        auto v = j.get<std::vector<long long>>();
        if (static_cast<int>(v.size()) != G.rank)
            throw SchemaError(ptr, "vector arity mismatch");
        Element e;
        e.vec = std::move(v);
        return e;
    }
    throw SchemaError(ptr, "word string or integer vector required");
}

// ---------------------------------------------------------------------------

struct Description {
    std::string command;  ///< filtered-ends | ends | pair-check | stabilizer |
                          ///< hausdorff | commensurator
    std::string id;
    SpaceSpec space;
    std::optional<SubsetSpec> subset, subset2;
    std::optional<SpaceSpec> target_space;
    std::vector<json> subgroups, target_subgroups;
    std::optional<MapSpec> map;
    json element;  ///< commensurator / translation element
    GridSpec grids;

    static Description parse(const json& j) {
        Description d;
        detail::reject_unknown(j, "", {"command", "id", "space", "subset", "subset2",
                                       "target", "subgroups", "map", "element",
                                       "grids"});
        if (!j.contains("command")) throw SchemaError("/command", "missing");
        d.command = j.at("command").get<std::string>();
        const bool known = d.command == "filtered-ends" || d.command == "ends" ||
                           d.command == "pair-check" || d.command == "stabilizer" ||
                           d.command == "hausdorff" || d.command == "commensurator";
        if (!known)
            throw SchemaError("/command", "unknown command '" + d.command + "'");
        if (!j.contains("id")) throw SchemaError("/id", "missing");
        d.id = j.at("id").get<std::string>();
        if (d.id.empty()) throw SchemaError("/id", "id must be non-empty");
        if (!j.contains("space")) throw SchemaError("/space", "missing");
        d.space = SpaceSpec::parse(j.at("space"), "/space");
        if (j.contains("subset"))
            d.subset = SubsetSpec::parse(j.at("subset"), "/subset");
        if (j.contains("subset2"))
            d.subset2 = SubsetSpec::parse(j.at("subset2"), "/subset2");
        if (j.contains("target")) {
            const json& t = j.at("target");
            detail::reject_unknown(t, "/target", {"space", "subgroups"});
            if (!t.contains("space")) throw SchemaError("/target/space", "missing");
            d.target_space = SpaceSpec::parse(t.at("space"), "/target/space");
            if (t.contains("subgroups")) {
                if (!t.at("subgroups").is_array())
                    throw SchemaError("/target/subgroups", "array required");
                for (const auto& s : t.at("subgroups")) d.target_subgroups.push_back(s);
            }
        }
        if (j.contains("subgroups")) {
            if (!j.at("subgroups").is_array())
                throw SchemaError("/subgroups", "array required");
            for (const auto& s : j.at("subgroups")) d.subgroups.push_back(s);
        }
        if (j.contains("map")) d.map = MapSpec::parse(j.at("map"), "/map");
        if (j.contains("element")) d.element = j.at("element");
        if (j.contains("grids")) d.grids = GridSpec::parse(j.at("grids"), "/grids");

        // per-command requirements
        if (d.command == "filtered-ends" && !d.subset)
            throw SchemaError("/subset", "filtered-ends needs a subset");
        if (d.command == "hausdorff" && (!d.subset || !d.subset2))
            throw SchemaError("/subset2", "hausdorff needs two subsets");
        if (d.command == "commensurator") {
            if (d.subgroups.empty())
                throw SchemaError("/subgroups", "commensurator needs a subgroup");
            if (d.element.is_null()) throw SchemaError("/element", "missing");
            if (d.grids.R.empty())
                throw SchemaError("/grids/R", "commensurator needs an R list");
        }
        if (d.command == "pair-check") {
            if (d.subgroups.empty())
                throw SchemaError("/subgroups", "pair-check needs source subgroups");
            const bool self_map = d.map && d.map->type == "translation";
            if (!d.target_space && !self_map)
                throw SchemaError("/target", "pair-check needs a target side");
        }
        if (d.command == "stabilizer" && !d.subset)
            throw SchemaError("/subset", "stabilizer needs a subset");
        return d;
    }

    json to_json() const {
        json j = json::object();
        j["command"] = command;
        j["id"] = id;
        j["space"] = space.to_json();
        if (subset) j["subset"] = subset->to_json();
        if (subset2) j["subset2"] = subset2->to_json();
        if (target_space) {
            json t = json::object();
            t["space"] = target_space->to_json();
            if (!target_subgroups.empty()) t["subgroups"] = target_subgroups;
            j["target"] = t;
        }
        if (!subgroups.empty()) j["subgroups"] = subgroups;
        if (map) j["map"] = map->to_json();
        if (!element.is_null()) j["element"] = element;
        j["grids"] = grids.to_json();
        return j;
    }
};

}  // namespace coends
