#pragma once
/// Report rows: one flat record per computed cell/probe, rendered to CSV (the
/// canonical, byte-stable format) or JSON. Row order is part of the contract:
/// rows sort by (sigma, mu, R), blank scales first, original order breaking
/// ties, so reruns and different worker counts produce identical bytes.

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coends/common.hpp"

namespace coends {

struct ReportRow {
    std::string command;
    std::string space_id;
    std::optional<double> sigma, mu, R;
    std::optional<long long> alive_count, component_count, unbounded_count;
    std::optional<int> trusted;  ///< 0/1
    std::string verdict;
    std::string value;  ///< preformatted numeric payload (may be empty)
};

namespace detail {
inline std::string opt_num(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}
inline std::string opt_int(const std::optional<long long>& v) {
    return v ? std::to_string(*v) : std::string();
}
inline double sort_key(const std::optional<double>& v) {
    return v ? *v : -std::numeric_limits<double>::infinity();
}
}  // namespace detail

/// Stable sort by (sigma, mu, R); missing scales order first.
inline void sort_rows(std::vector<ReportRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ReportRow& a, const ReportRow& b) {
                         const double as = detail::sort_key(a.sigma),
                                      bs = detail::sort_key(b.sigma);
                         if (as != bs) return as < bs;
                         const double am = detail::sort_key(a.mu),
                                      bm = detail::sort_key(b.mu);
                         if (am != bm) return am < bm;
                         return detail::sort_key(a.R) < detail::sort_key(b.R);
                     });
}

inline const char* report_header() {
    return "command,space-id,sigma,mu,R,alive_count,component_count,"
           "unbounded_count,trusted,verdict,value";
}

inline std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << report_header() << '\n';
    for (const ReportRow& r : rows) {
        out << r.command << ',' << r.space_id << ',' << detail::opt_num(r.sigma)
            << ',' << detail::opt_num(r.mu) << ',' << detail::opt_num(r.R) << ','
            << detail::opt_int(r.alive_count) << ','
            << detail::opt_int(r.component_count) << ','
            << detail::opt_int(r.unbounded_count) << ','
            << (r.trusted ? std::to_string(*r.trusted) : std::string()) << ','
            << r.verdict << ',' << r.value << '\n';
    }
    return out.str();
}

inline nlohmann::json rows_to_json(const std::vector<ReportRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ReportRow& r : rows) {
        nlohmann::json j = nlohmann::json::object();
        j["command"] = r.command;
        j["space-id"] = r.space_id;
        if (r.sigma) j["sigma"] = *r.sigma;
        if (r.mu) j["mu"] = *r.mu;
        if (r.R) j["R"] = *r.R;
        if (r.alive_count) j["alive_count"] = *r.alive_count;
        if (r.component_count) j["component_count"] = *r.component_count;
        if (r.unbounded_count) j["unbounded_count"] = *r.unbounded_count;
        if (r.trusted) j["trusted"] = *r.trusted;
        if (!r.verdict.empty()) j["verdict"] = r.verdict;
        if (!r.value.empty()) j["value"] = r.value;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace coends
