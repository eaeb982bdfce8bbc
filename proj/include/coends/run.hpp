#pragma once
/// Executes a parsed description: builds the spaces and subsets, runs the
/// requested computation, and renders the result as report rows plus a JSON
/// summary. Row content and order are deterministic for a fixed description,
/// independent of the worker count.

#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "coends/describe.hpp"
#include "coends/diagram.hpp"
#include "coends/hausdorff.hpp"
#include "coends/pairs.hpp"
#include "coends/qimap.hpp"
#include "coends/report.hpp"

namespace coends {

struct RunOptions {
    int threads = 1;
    long long cap = Defaults::point_cap;
};

struct RunResult {
    std::vector<ReportRow> rows;  ///< sorted by (sigma, mu, R)
    json summary;
};

namespace detail {

inline std::vector<double> default_sigma_grid() { return {1.0, 2.0, 3.0}; }

inline std::vector<double> default_mu_grid(double radius) {
    const double step = std::max(1.0, std::floor(radius / 10));
    std::vector<double> mu;
    for (double v = 0; v <= radius / 2 + 1e-9; v += step) mu.push_back(v);
    return mu;
}

inline void append_diagram_rows(std::vector<ReportRow>& rows, const std::string& cmd,
                                const EndsDiagram& dg) {
    for (const SigmaColumn& col : dg.columns) {
        for (const CellResult& c : col.cells) {
            ReportRow r;
            r.command = cmd;
            r.space_id = dg.space_id;
            r.sigma = col.sigma;
            r.mu = c.mu;
            r.R = dg.radius;
            r.alive_count = c.alive_count;
            r.component_count = c.component_count;
            r.unbounded_count = c.unbounded_count;
            r.trusted = c.trusted ? 1 : 0;
            r.verdict = col.verdict.kind_str();
            if (col.verdict.kind == Verdict::Kind::Exact ||
                col.verdict.kind == Verdict::Kind::AtLeast)
                r.value = std::to_string(col.verdict.value);
            rows.push_back(std::move(r));
        }
    }
}

inline json diagram_summary(const FiniteSpace& X, const EndsDiagram& dg) {
    json verdicts = json::array();
    for (const SigmaColumn& col : dg.columns) {
        json v = json::object();
        v["sigma"] = col.sigma;
        v["verdict"] = col.verdict.str();
        v["window_start"] = col.window_start;
        verdicts.push_back(std::move(v));
    }
    json s = json::object();
    s["space-id"] = dg.space_id;
    s["radius"] = dg.radius;
    s["points"] = X.size();
    s["verdicts"] = std::move(verdicts);
    s["final"] = dg.final.str();
    s["cross_sigma_consistent"] = dg.cross_sigma_consistent;
    const auto witnesses = ray_witnesses(X, dg);
    s["witness_count"] = witnesses.size();
    bool all_valid = true;
    for (const auto& w : witnesses) all_valid = all_valid && w.valid;
    s["witnesses_valid"] = all_valid;
    return s;
}

inline RunResult run_ends_like(const Description& d, const RunOptions& opt,
                               bool classical) {
    BuiltSpace b = build_space(d.space, d.id, opt.cap);
    std::vector<int> C;
    if (classical) {
        C.push_back(b.space.basepoint);
    } else {
        C = resolve_subset(b, *d.subset, "/subset").indices;
    }
    EndsOptions eo;
    eo.sigma_grid = d.grids.sigma.empty()
                        ? (classical ? std::vector<double>{1.0} : default_sigma_grid())
                        : d.grids.sigma;
    if (d.grids.mu.empty()) {
        if (classical) {
            for (int mu = 0; mu <= static_cast<int>(std::floor(b.space.radius / 2 + 1e-9));
                 ++mu)
                eo.mu_grid.push_back(mu);
        } else {
            eo.mu_grid = default_mu_grid(b.space.radius);
        }
    } else {
        eo.mu_grid = d.grids.mu;
    }
    eo.window = d.grids.window;
    eo.cap = d.grids.cap;
    eo.margin = d.grids.margin;
    eo.threads = opt.threads;

    EndsDiagram dg = filtered_ends(b.space, C, eo);
    RunResult res;
    append_diagram_rows(res.rows, d.command, dg);
    sort_rows(res.rows);
    res.summary = diagram_summary(b.space, dg);
    res.summary["subset_size"] = C.size();
    return res;
}

inline RunResult run_hausdorff(const Description& d, const RunOptions& opt) {
    BuiltSpace b = build_space(d.space, d.id, opt.cap);
    std::vector<int> A = resolve_subset(b, *d.subset, "/subset").indices;
    std::vector<int> B = resolve_subset(b, *d.subset2, "/subset2").indices;
    const double window =
        d.grids.hwindow >= 0 ? d.grids.hwindow : b.space.radius / 2;
    TruncatedDist dist = truncated_hausdorff(b.space, A, B, window);

    RunResult res;
    ReportRow r;
    r.command = d.command;
    r.space_id = d.id;
    r.R = b.space.radius;
    r.alive_count = static_cast<long long>(A.size());
    r.component_count = static_cast<long long>(B.size());
    r.trusted = dist.exact ? 1 : 0;
    r.verdict = dist.exact ? "exact" : "truncated";
    r.value = format_number(dist.value);
    res.rows.push_back(std::move(r));
    res.summary = json::object();
    res.summary["space-id"] = d.id;
    res.summary["value"] = dist.value;
    res.summary["exact"] = dist.exact;
    res.summary["window"] = window;
    return res;
}

inline RunResult run_commensurator(const Description& d, const RunOptions& opt) {
    BuiltSpace b = build_space(d.space, d.id, opt.cap);
    if (!b.group) throw SchemaError("/space", "commensurator needs a Cayley space");
    Subgroup P = Subgroup::from_json(*b.group, d.subgroups[0], "/subgroups/0");
    Element g = parse_element(*b.group, d.element, "/element");
    CommensuratorProbe probe =
        commensurator_probe(*b.group, P, g, d.grids.R, &b.space, opt.cap);

    RunResult res;
    for (std::size_t k = 0; k < probe.R_list.size(); ++k) {
        ReportRow r;
        r.command = d.command;
        r.space_id = d.id;
        r.R = probe.R_list[k];
        r.trusted = probe.exact[k] ? 1 : 0;
        r.verdict = probe.verdict_str();
        r.value = format_number(probe.h[k]);
        res.rows.push_back(std::move(r));
    }
    sort_rows(res.rows);
    res.summary = json::object();
    res.summary["space-id"] = d.id;
    res.summary["element"] = b.group->display(g);
    res.summary["verdict"] = probe.verdict_str();
    if (probe.verdict == CommensuratorProbe::Verdict::Bounded)
        res.summary["bound"] = probe.bound;
    if (probe.verdict == CommensuratorProbe::Verdict::Diverging)
        res.summary["trend_slope"] = probe.trend_slope;
    res.summary["h"] = probe.h;
    return res;
}

inline RunResult run_stabilizer(const Description& d, const RunOptions& opt) {
    BuiltSpace b = build_space(d.space, d.id, opt.cap);
    if (!b.group) throw SchemaError("/space", "stabilizer needs a Cayley space");
    std::vector<int> A = resolve_subset(b, *d.subset, "/subset").indices;
    const double M = d.grids.M.empty() ? 1.0 : d.grids.M.front();
    QISample q = qi_identity_elements(b.space, b.space);
    StabilizerResult st = approx_stabilizer(q, A, M, d.grids.gmax);

    RunResult res;
    for (std::size_t i = 0; i < st.candidates.size(); ++i) {
        ReportRow r;
        r.command = d.command;
        r.space_id = d.id;
        r.R = b.space.ball->norms[st.candidates[i]];
        r.trusted = st.h_exact[i] ? 1 : 0;
        r.verdict = st.member[i] ? "member" : "outside";
        r.value = format_number(st.h[i]);
        res.rows.push_back(std::move(r));
    }
    sort_rows(res.rows);
    res.summary = json::object();
    res.summary["space-id"] = d.id;
    res.summary["M"] = st.M;
    res.summary["gmax"] = st.gmax;
    res.summary["delta"] = st.delta;
    res.summary["inconclusive"] = st.inconclusive;
    json members = json::array();
    for (int gi : st.members())
        members.push_back(b.group->display(b.space.ball->points[gi]));
    res.summary["member_count"] = members.size();
    res.summary["members"] = std::move(members);
    return res;
}

inline RunResult run_pair_check(const Description& d, const RunOptions& opt) {
    BuiltSpace src = build_space(d.space, d.id, opt.cap);
    if (!src.group) throw SchemaError("/space", "pair-check needs Cayley spaces");
    const std::string map_type = d.map ? d.map->type : "identity-elements";

    std::optional<BuiltSpace> tgt_store;
    const BuiltSpace* tgt = &src;
    if (map_type != "translation") {
        tgt_store = build_space(*d.target_space, d.id + "-target", opt.cap);
        if (!tgt_store->group)
            throw SchemaError("/target/space", "pair-check needs Cayley spaces");
        tgt = &*tgt_store;
    }

    std::vector<Subgroup> src_subs, tgt_subs;
    for (std::size_t i = 0; i < d.subgroups.size(); ++i)
        src_subs.push_back(Subgroup::from_json(*src.group, d.subgroups[i],
                                               "/subgroups/" + std::to_string(i)));
    const std::vector<json>& tspecs =
        d.target_subgroups.empty() ? d.subgroups : d.target_subgroups;
    for (std::size_t i = 0; i < tspecs.size(); ++i)
        tgt_subs.push_back(Subgroup::from_json(*tgt->group, tspecs[i],
                                               "/target/subgroups/" + std::to_string(i)));
    std::vector<const Subgroup*> sp, tp;
    for (const auto& s : src_subs) sp.push_back(&s);
    for (const auto& s : tgt_subs) tp.push_back(&s);

    QISample q;
    if (map_type == "identity-elements") {
        q = qi_identity_elements(src.space, tgt->space);
    } else if (map_type == "transpose") {
        q = qi_transpose(src.space, tgt->space);
    } else {
        const json gj = d.map->g.empty() ? json(d.map->gvec) : json(d.map->g);
        q = qi_translation(src.space, parse_element(*src.group, gj, "/map/g"));
    }

    PairFamily fsrc = enumerate_cosets(src.space, sp);
    PairFamily ftgt = enumerate_cosets(tgt->space, tp);
    std::vector<double> grid = d.grids.M;
    if (grid.empty()) {
        grid.push_back(0.5);
        for (double m = 1; m <= src.space.radius / 2 + 1e-9; m += 1) grid.push_back(m);
    }
    PairCheckReport rep = pair_qi_check(q, fsrc, ftgt, grid);

    RunResult res;
    for (std::size_t k = 0; k < rep.grid.size(); ++k) {
        ReportRow r;
        r.command = d.command;
        r.space_id = d.id;
        r.sigma = rep.grid[k];  // the matching scale
        r.R = src.space.radius;
        r.trusted = 1;
        r.verdict = rep.matched_at[k] ? "matched" : "unmatched";
        r.value = format_number(rep.grid[k]);
        res.rows.push_back(std::move(r));
    }
    sort_rows(res.rows);
    res.summary = json::object();
    res.summary["space-id"] = d.id;
    res.summary["map"] = q.name;
    res.summary["matched"] = rep.matched;
    if (rep.matched) res.summary["M"] = rep.M;
    res.summary["source_cosets"] = rep.source_cosets.size();
    res.summary["target_cosets"] = rep.target_cosets.size();
    res.summary["L"] = rep.constants.L;
    res.summary["C"] = rep.constants.C;
    res.summary["displacement"] = rep.constants.displacement;
    res.summary["codensity"] = rep.constants.codensity;
    res.summary["unmatched_source"] = rep.unmatched_source.size();
    res.summary["unmatched_target"] = rep.unmatched_target.size();
    return res;
}

}  // namespace detail

inline RunResult run_description(const Description& d, const RunOptions& opt) {
    if (d.command == "filtered-ends") return detail::run_ends_like(d, opt, false);
    if (d.command == "ends") return detail::run_ends_like(d, opt, true);
    if (d.command == "hausdorff") return detail::run_hausdorff(d, opt);
    if (d.command == "commensurator") return detail::run_commensurator(d, opt);
    if (d.command == "stabilizer") return detail::run_stabilizer(d, opt);
    if (d.command == "pair-check") return detail::run_pair_check(d, opt);
    throw SchemaError("/command", "unknown command '" + d.command + "'");
}

/// Runs several descriptions, fanning entries across workers; the result
/// keeps the input order, so the concatenated report does not depend on the
/// worker count.
inline std::vector<RunResult> run_many(const std::vector<Description>& ds,
                                       const RunOptions& opt) {
    std::vector<RunResult> out(ds.size());
    const int workers =
        std::max(1, std::min<int>(opt.threads, static_cast<int>(ds.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < ds.size(); ++i)
            out[i] = run_description(ds[i], opt);
        return out;
    }
    RunOptions inner = opt;
    inner.threads = 1;  // one worker per entry; no nested fan-out
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= ds.size()) return;
                try {
                    out[i] = run_description(ds[i], inner);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace coends
