#pragma once
/// Catalog of bundled example computations, keyed by stable ids. Every entry
/// is an ordinary description document: it can be written to a file, parsed
/// back, and rerun with identical output.

#include <string>
#include <vector>

#include "coends/describe.hpp"

namespace coends {

inline const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids = {
        "z2-axis",      "z2-axis-subcritical",
        "hash-lines",   "euclid-strip",
        "product-row",  "z-basepoint",
        "z2-basepoint", "f2-basepoint",
        "f2-axis",      "z2-two-gensets",
        "z2-finite-index",
    };
    return ids;
}

namespace detail {

inline json z2_group() {
    return json{{"kind", "zn"}, {"rank", 2}};
}

inline json cayley_space(const json& group, double radius) {
    return json{{"type", "cayley"}, {"group", group}, {"radius", radius}};
}

inline json lattice_axis() {
    return json{{"type", "subgroup"},
                {"subgroup", {{"kind", "lattice"}, {"generators", {{1, 0}}}}}};
}

}  // namespace detail

/// The description document for one catalog id.
inline json catalog_entry(const std::string& id) {
    using nlohmann::json;
    if (id == "z2-axis") {
        json j;
        j["command"] = "filtered-ends";
        j["id"] = id;
        j["space"] = detail::cayley_space(detail::z2_group(), 30);
        j["subset"] = detail::lattice_axis();
        j["grids"] = {{"sigma", {1, 2, 3}},
                      {"mu", {0, 3, 6, 9, 12, 15}},
                      {"window", 3},
                      {"cap", 64}};
        return j;
    }
    if (id == "z2-axis-subcritical") {
        json j;
        j["command"] = "filtered-ends";
        j["id"] = id;
        j["space"] = detail::cayley_space(detail::z2_group(), 30);
        j["subset"] = detail::lattice_axis();
        j["grids"] = {{"sigma", {0.5}},
                      {"mu", {0, 3, 6, 9, 12, 15}},
                      {"window", 3},
                      {"cap", 64}};
        return j;
    }
    if (id == "hash-lines") {
        json segs = json::array();
        segs.push_back({{"vertical", true}, {"offset", -1.0}, {"lo", -50.0}, {"hi", 50.0}});
        segs.push_back({{"vertical", true}, {"offset", 1.0}, {"lo", -50.0}, {"hi", 50.0}});
        segs.push_back(
            {{"vertical", false}, {"offset", -0.5}, {"lo", -50.0}, {"hi", 50.0}});
        segs.push_back(
            {{"vertical", false}, {"offset", 0.5}, {"lo", -50.0}, {"hi", 50.0}});
        json j;
        j["command"] = "filtered-ends";
        j["id"] = id;
        j["space"] = {{"type", "sampled-lines"},
                      {"step", 0.25},
                      {"metric", "euclidean"},
                      {"segments", segs}};
        j["subset"] = {{"type", "point"}, {"at", {1.0, 0.5}}};
        j["grids"] = {{"sigma", {0.5, 1.5, 2.5}},
                      {"mu", {0, 1, 2, 3, 4, 6, 8, 10, 12}},
                      {"window", 3},
                      {"cap", 64},
                      {"margin", 2}};
        return j;
    }
    if (id == "euclid-strip") {
        json segs = json::array();
        for (int k = -32; k <= 32; ++k)
            segs.push_back({{"vertical", false},
                            {"offset", k * 0.25},
                            {"lo", -50.0},
                            {"hi", 50.0}});
        json j;
        j["command"] = "filtered-ends";
        j["id"] = id;
        j["space"] = {{"type", "sampled-lines"},
                      {"step", 0.25},
                      {"metric", "euclidean"},
                      {"segments", segs}};
        j["subset"] = {{"type", "line"}, {"vertical", false}, {"offset", 0.0}};
        j["grids"] = {{"sigma", {0.25, 0.5, 1}},
                      {"mu", {0, 1, 2, 3}},
                      {"window", 3},
                      {"cap", 64}};
        return j;
    }
    if (id == "product-row") {
        json j;
        j["command"] = "filtered-ends";
        j["id"] = id;
        j["space"] = {{"type", "product-row"}, {"m", 3}, {"step", 0.25}, {"radius", 50}};
        j["subset"] = {{"type", "basepoint"}};
        j["grids"] = {
            {"sigma", {0.5, 2, 3}}, {"mu", {0}}, {"window", 1}, {"cap", 64}};
        return j;
    }
    if (id == "z-basepoint") {
        json j;
        j["command"] = "ends";
        j["id"] = id;
        j["space"] = detail::cayley_space({{"kind", "zn"}, {"rank", 1}}, 30);
        j["grids"] = {{"window", 3}, {"cap", 64}};
        return j;
    }
    if (id == "z2-basepoint") {
        json j;
        j["command"] = "ends";
        j["id"] = id;
        j["space"] = detail::cayley_space(detail::z2_group(), 30);
        j["grids"] = {{"window", 3}, {"cap", 64}};
        return j;
    }
    if (id == "f2-basepoint") {
        json j;
        j["command"] = "ends";
        j["id"] = id;
        j["space"] = detail::cayley_space({{"kind", "free"}, {"rank", 2}}, 9);
        j["grids"] = {{"window", 3}, {"cap", 64}};
        return j;
    }
    if (id == "f2-axis") {
        json j;
        j["command"] = "filtered-ends";
        j["id"] = id;
        j["space"] = detail::cayley_space({{"kind", "free"}, {"rank", 2}}, 8);
        j["subset"] = {{"type", "subgroup"},
                       {"subgroup", {{"kind", "cyclic-word"}, {"word", "a"}}}};
        j["grids"] = {
            {"sigma", {1}}, {"mu", {0, 1, 2, 3, 4}}, {"window", 3}, {"cap", 64}};
        return j;
    }
    if (id == "z2-two-gensets") {
        json j;
        j["command"] = "pair-check";
        j["id"] = id;
        j["space"] = detail::cayley_space(detail::z2_group(), 30);
        j["target"] = {{"space", detail::cayley_space({{"kind", "zn"},
                                                       {"rank", 2},
                                                       {"generators",
                                                        {{1, 0}, {0, 1}, {1, 1}}}},
                                                      30)}};
        j["subgroups"] = {{{"kind", "lattice"}, {"generators", {{1, 0}}}}};
        j["map"] = {{"type", "identity-elements"}};
        j["grids"] = {{"M", {1, 2, 3, 4, 5, 6, 7, 8}}};
        return j;
    }
    if (id == "z2-finite-index") {
        json j;
        j["command"] = "pair-check";
        j["id"] = id;
        j["space"] = detail::cayley_space(
            {{"kind", "zn"}, {"rank", 2}, {"generators", {{2, 0}, {0, 1}}}}, 30);
        j["target"] = {{"space", detail::cayley_space(detail::z2_group(), 30)},
                       {"subgroups", {{{"kind", "lattice"}, {"generators", {{1, 0}}}}}}};
        j["subgroups"] = {{{"kind", "lattice"}, {"generators", {{2, 0}}}}};
        j["map"] = {{"type", "identity-elements"}};
        j["grids"] = {{"M", {1, 2, 3, 4, 5, 6, 7, 8}}};
        return j;
    }
    throw SchemaError("/id", "unknown catalog id '" + id + "'");
}

inline Description catalog_description(const std::string& id) {
    return Description::parse(catalog_entry(id));
}

}  // namespace coends
