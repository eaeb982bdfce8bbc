// Command-line driver: runs computations from description files or the
// built-in catalog and writes a CSV report plus a JSON summary per entry.
//
// Exit codes: 0 = computed (verdicts may be inconclusive); 2 = usage, schema,
// or configuration error; 3 = capacity exceeded; 4 = inconsistent scales or
// metric data; 1 = unexpected failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coends/coends.hpp"

namespace fs = std::filesystem;
using namespace coends;

namespace {

struct OutputConfig {
    std::string dir = ".";
    std::string format = "csv";  // csv | json
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

std::string one_line(const json& summary) {
    if (summary.contains("final")) return summary.at("final").get<std::string>();
    if (summary.contains("matched"))
        return summary.at("matched").get<bool>()
                   ? "matched (M=" + format_number(summary.value("M", 0.0)) + ")"
                   : "no match";
    if (summary.contains("verdict")) return summary.at("verdict").get<std::string>();
    if (summary.contains("member_count"))
        return std::to_string(summary.at("member_count").get<std::size_t>()) +
               " members";
    if (summary.contains("value")) return format_number(summary.at("value").get<double>());
    return "done";
}

void emit_result(const std::string& id, const RunResult& rr, const OutputConfig& out) {
    fs::create_directories(out.dir);
    if (out.format == "json") {
        json doc = json::object();
        doc["rows"] = rows_to_json(rr.rows);
        doc["summary"] = rr.summary;
        write_file(fs::path(out.dir) / (id + ".json"), doc.dump(2) + "\n");
    } else {
        write_file(fs::path(out.dir) / (id + ".csv"), rows_to_csv(rr.rows));
    }
    write_file(fs::path(out.dir) / (id + ".summary.json"), rr.summary.dump(2) + "\n");
    std::cout << id << ": " << one_line(rr.summary) << "\n";
}

Description load_description(const std::string& path, const std::string& expect_command) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("", "cannot open description file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    Description d = Description::parse(j);
    if (!expect_command.empty() && d.command != expect_command)
        throw SchemaError("/command", "description has command '" + d.command +
                                          "' but the '" + expect_command +
                                          "' subcommand was invoked");
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "coends: filtered ends and coarse pair geometry on finite truncations"};
    app.require_subcommand(1);

    RunOptions ropt;
    OutputConfig out;
    if (const char* env = std::getenv("COENDS_OUT")) out.dir = env;
    app.add_option("--threads", ropt.threads, "worker threads")
        ->check(CLI::Range(1, 256));
    app.add_option("--cap", ropt.cap, "maximum number of points per space");
    app.add_option("--out", out.dir, "output directory (overrides COENDS_OUT)");
    app.add_option("--format", out.format, "report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string desc_path;
    std::vector<CLI::App*> desc_cmds;
    for (const char* name : {"filtered-ends", "ends", "pair-check", "stabilizer",
                             "hausdorff", "commensurator"}) {
        CLI::App* sub = app.add_subcommand(
            name, std::string("run a '") + name + "' description file");
        sub->add_option("description", desc_path, "description JSON file")
            ->required();
        desc_cmds.push_back(sub);
    }

    CLI::App* cat = app.add_subcommand("catalog", "bundled example computations");
    std::string cat_id;
    bool cat_all = false, cat_list = false, cat_emit = false;
    cat->add_option("--id", cat_id, "catalog entry id");
    cat->add_flag("--run-all", cat_all, "run every catalog entry");
    cat->add_flag("--list", cat_list, "list catalog ids");
    cat->add_flag("--emit", cat_emit, "write the entry's description file (needs --id)");

    CLI11_PARSE(app, argc, argv);

    try {
        for (CLI::App* sub : desc_cmds) {
            if (sub->parsed()) {
                Description d = load_description(desc_path, sub->get_name());
                RunResult rr = run_description(d, ropt);
                emit_result(d.id, rr, out);
                return 0;
            }
        }
        // catalog
        if (cat_list || (!cat_all && cat_id.empty() && !cat_emit)) {
            for (const std::string& id : catalog_ids())
                std::cout << id << "  (" << catalog_description(id).command << ")\n";
            return 0;
        }
        if (cat_emit) {
            if (cat_id.empty()) throw SchemaError("/id", "--emit needs --id");
            fs::create_directories(out.dir);
            write_file(fs::path(out.dir) / (cat_id + ".description.json"),
                       catalog_entry(cat_id).dump(2) + "\n");
            std::cout << cat_id << ": description written\n";
            return 0;
        }
        if (cat_all) {
            std::vector<Description> ds;
            for (const std::string& id : catalog_ids())
                ds.push_back(catalog_description(id));
            std::vector<RunResult> results = run_many(ds, ropt);
            std::vector<ReportRow> rows;
            json summaries = json::array();
            for (std::size_t i = 0; i < results.size(); ++i) {
                rows.insert(rows.end(), results[i].rows.begin(), results[i].rows.end());
                summaries.push_back(results[i].summary);
                std::cout << ds[i].id << ": " << one_line(results[i].summary) << "\n";
            }
            fs::create_directories(out.dir);
            if (out.format == "json") {
                json doc = json::object();
                doc["rows"] = rows_to_json(rows);
                doc["summary"] = summaries;
                write_file(fs::path(out.dir) / "catalog.json", doc.dump(2) + "\n");
            } else {
                write_file(fs::path(out.dir) / "catalog.csv", rows_to_csv(rows));
            }
            write_file(fs::path(out.dir) / "catalog.summary.json",
                       summaries.dump(2) + "\n");
            return 0;
        }
        // single entry
        RunResult rr = run_description(catalog_description(cat_id), ropt);
        emit_result(cat_id, rr, out);
        return 0;
    } catch (const SchemaError& e) {
        std::cerr << "schema error at '" << e.pointer() << "': " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: needs " << e.needed() << " points, cap is "
                  << e.cap() << "\n";
        return 3;
    } catch (const ScaleOrderError& e) {
        std::cerr << "scale error: " << e.what() << "\n";
        return 4;
    } catch (const MetricError& e) {
        std::cerr << "metric error: " << e.what() << "\n";
        return 4;
    } catch (const ConsistencyError& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
