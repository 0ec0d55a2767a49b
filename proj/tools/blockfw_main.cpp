// Command-line front end: solve one instance (inner/outer/both/exact/
// membership/region), sweep partitions, or regenerate the fixture corpus.

#include "CLI11.hpp"
#include "json.hpp"

#include "blockfw/fw_cone.hpp"
#include "blockfw/generators.hpp"
#include "blockfw/ipm.hpp"
#include "blockfw/iterative.hpp"
#include "blockfw/sdp_model.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

using json = nlohmann::ordered_json;
using namespace blockfw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFirstInfeasible = 3;
constexpr int kExitSolverFailure = 4;

int log_level() {
    const char* env = std::getenv("BLOCKFW_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug" || v == "2") return 2;
    if (v == "info" || v == "1") return 1;
    return 0;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Generator specs: pencil:n=10,seed=42 | theta:n=30,p=0.2,seed=7 (er: alias)
// | bqo:n=40,seed=1. Omitted seeds fall back to --seed.
SdpProblem problem_from_spec(const std::string& spec, std::uint64_t default_seed) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error("generator spec needs the form kind:key=value,...: " + spec);
    const std::string kind = spec.substr(0, colon);

    std::map<std::string, std::string> kv;
    std::string rest = spec.substr(colon + 1);
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("bad generator parameter: " + item);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    auto geti = [&](const std::string& key, long long fallback, bool required) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (required) throw Error("generator spec is missing " + key + ": " + spec);
            return fallback;
        }
        return std::stoll(it->second);
    };
    auto getd = [&](const std::string& key, double fallback, bool required) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (required) throw Error("generator spec is missing " + key + ": " + spec);
            return fallback;
        }
        return std::stod(it->second);
    };

    const long long n = geti("n", 0, true);
    const auto seed = static_cast<std::uint64_t>(
        geti("seed", static_cast<long long>(default_seed), false));

    if (kind == "pencil") return gen_pencil_sdp(static_cast<int>(n), seed);
    if (kind == "theta" || kind == "er") {
        const double p = getd("p", 0.0, true);
        Graph g = gen_erdos_renyi(static_cast<int>(n), p, seed);
        SdpProblem prob = lovasz_theta_sdp(g);
        prob.name = kind + ":n=" + std::to_string(n) + ",p=" + g17(p) +
                    ",seed=" + std::to_string(seed);
        return prob;
    }
    if (kind == "bqo") {
        SdpProblem prob = bqo_relax_sdp(gen_bqo_cost(static_cast<int>(n), seed));
        prob.name = "bqo:n=" + std::to_string(n) + ",seed=" + std::to_string(seed);
        return prob;
    }
    throw Error("unknown generator kind: " + kind);
}

struct CliConfig {
    std::string input;
    std::string gen_spec;
    std::string mode = "both";
    std::vector<std::string> partition_specs;
    int max_iter = 10;
    double tol = 1e-8;
    std::string trace_path;
    std::string summary_path;
    std::uint64_t seed = 0;
    int jobs = 1;
};

SdpProblem load_problem(const CliConfig& cfg) {
    if (!cfg.input.empty() && !cfg.gen_spec.empty())
        throw Error("--input and --gen are mutually exclusive");
    if (!cfg.input.empty()) return parse_sdpa_file(cfg.input);
    if (!cfg.gen_spec.empty()) return problem_from_spec(cfg.gen_spec, cfg.seed);
    throw Error("one of --input or --gen is required");
}

std::vector<Partition> load_partitions(const CliConfig& cfg, int n, bool dedupe_warn) {
    std::vector<Partition> parts;
    for (const std::string& spec : cfg.partition_specs) {
        Partition p = Partition::parse(spec, n);
        bool dup = false;
        for (const Partition& q : parts) dup = dup || q == p;
        if (dup) {
            if (dedupe_warn) std::cerr << "warning: duplicate partition " << spec << " ignored\n";
            continue;
        }
        parts.push_back(std::move(p));
    }
    return parts;
}

RunConfig make_run_config(const CliConfig& cfg, const Partition& part) {
    RunConfig rc{part, cfg.max_iter, 1e-9, {}};
    rc.ipm.gap_tol = cfg.tol;
    rc.ipm.feas_tol = cfg.tol;
    rc.ipm.verbosity = log_level() >= 2 ? 1 : 0;
    return rc;
}

json trace_json(const IterationTrace& tr) {
    json arr = json::array();
    for (const IterationRecord& r : tr.records) arr.push_back(r.bound);
    return arr;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

void emit_summary(const CliConfig& cfg, const json& summary) {
    const std::string text = summary.dump(2) + "\n";
    if (!cfg.summary_path.empty())
        write_text(cfg.summary_path, text);
    else
        std::cout << text;
}

void emit_trace_csv(const CliConfig& cfg, const std::string& csv) {
    if (!cfg.trace_path.empty())
        write_text(cfg.trace_path, csv);
    else if (cfg.summary_path.empty())
        std::cout << csv;
}

int run_solve(const CliConfig& cfg) {
    const SdpProblem prob = load_problem(cfg);

    json summary;
    summary["problem"] = prob.name;
    summary["mode"] = cfg.mode;
    const auto t0 = std::chrono::steady_clock::now();
    auto total_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    if (cfg.mode == "exact") {
        IpmSettings set;
        set.gap_tol = cfg.tol;
        set.feas_tol = cfg.tol;
        const SolveReport rep = solve_full(prob, set);
        if (rep.status != SolveStatus::Optimal &&
            rep.status != SolveStatus::Infeasible &&
            rep.status != SolveStatus::Unbounded) {
            std::cerr << "solver failed: " << to_string(rep.status) << "\n";
            return kExitSolverFailure;
        }
        summary["status"] = to_string(rep.status);
        if (rep.status == SolveStatus::Optimal) {
            summary["p_star"] = rep.primal_value;
            if (prob.objective_flipped) summary["source_objective"] = -rep.primal_value;
        }
        summary["iterations"] = rep.iterations;
        summary["timings"] = {{"total_ms", total_ms()}};
        emit_summary(cfg, summary);
        return kExitOk;
    }

    if (cfg.mode == "membership") {
        const std::vector<Partition> parts = load_partitions(cfg, prob.n, true);
        if (parts.empty()) throw Error("membership mode needs at least one --partition");
        json results = json::array();
        for (const Partition& part : parts) {
            IpmSettings set;
            set.gap_tol = cfg.tol;
            set.feas_tol = cfg.tol;
            const FwMembership r = membership_fw(prob.C, part, set);
            std::cout << "partition " << part.to_string() << ": "
                      << (r.inside ? "In" : "Out") << " margin=" << g17(r.margin) << "\n";
            results.push_back(
                {{"partition", part.to_string()}, {"inside", r.inside}, {"margin", r.margin}});
        }
        summary["membership"] = results;
        summary["timings"] = {{"total_ms", total_ms()}};
        emit_summary(cfg, summary);
        return kExitOk;
    }

    if (cfg.mode == "region") {
        if (prob.m < 2) throw Error("region mode needs a pencil-style problem with m >= 2");
        const std::vector<Partition> parts = load_partitions(cfg, prob.n, true);
        if (parts.empty()) throw Error("region mode needs at least one --partition");
        // pencil data: A = -A_1, B = -A_2
        const SymMatrix a = -1.0 * prob.A[0];
        const SymMatrix b = -1.0 * prob.A[1];
        RegionOptions opts;
        opts.ipm.gap_tol = cfg.tol;
        opts.ipm.feas_tol = cfg.tol;
        const auto rows = sample_region_boundary(a, b, parts, opts);
        std::ostringstream csv;
        write_region_csv(csv, rows, parts);
        emit_trace_csv(cfg, csv.str());
        summary["angles"] = static_cast<int>(rows.size());
        summary["timings"] = {{"total_ms", total_ms()}};
        if (!cfg.summary_path.empty()) emit_summary(cfg, summary);
        return kExitOk;
    }

    // inner / outer / both
    const std::vector<Partition> parts = load_partitions(cfg, prob.n, true);
    if (parts.empty()) throw Error("this mode needs a --partition");
    const Partition& part = parts.front();
    if (parts.size() > 1)
        std::cerr << "warning: solve uses the first partition only; see sweep\n";
    summary["partition"] = part.to_string();

    std::optional<InnerRun> inner;
    std::optional<OuterRun> outer;
    if (cfg.mode == "inner" || cfg.mode == "both")
        inner = run_inner(prob, make_run_config(cfg, part));
    else if (cfg.mode != "outer")
        throw Error("unknown mode: " + cfg.mode);
    if (cfg.mode == "outer" || cfg.mode == "both")
        outer = run_outer(prob, make_run_config(cfg, part));

    std::ostringstream csv;
    if (inner && outer) {
        // single file: stacked traces tagged by side
        std::ostringstream ic, oc;
        inner->trace.write_csv(ic);
        outer->trace.write_csv(oc);
        const std::string ih = ic.str(), oh = oc.str();
        csv << "side," << ih.substr(0, ih.find('\n')) << "\n";
        auto append = [&](const std::string& tag, const std::string& body) {
            std::istringstream lines(body);
            std::string line;
            std::getline(lines, line);  // drop header
            while (std::getline(lines, line)) csv << tag << "," << line << "\n";
        };
        append("inner", ih);
        append("outer", oh);
    } else if (inner) {
        inner->trace.write_csv(csv);
    } else if (outer) {
        outer->trace.write_csv(csv);
    }
    emit_trace_csv(cfg, csv.str());

    if (inner) summary["upper_trace"] = trace_json(inner->trace);
    if (outer) summary["lower_trace"] = trace_json(outer->trace);
    if (inner && outer) {
        double min_upper = inner->trace.records.front().bound;
        for (const auto& r : inner->trace.records) min_upper = std::min(min_upper, r.bound);
        double max_lower = outer->trace.records.front().bound;
        for (const auto& r : outer->trace.records) max_lower = std::max(max_lower, r.bound);
        summary["final_gap"] = min_upper - max_lower;
    }
    summary["timings"] = {{"total_ms", total_ms()}};
    emit_summary(cfg, summary);
    return kExitOk;
}

struct SweepRow {
    std::string partition;
    std::string mode;
    std::string status = "ok";
    std::vector<double> bounds;
};

int run_sweep(const CliConfig& cfg) {
    const SdpProblem prob = load_problem(cfg);
    const std::vector<Partition> parts = load_partitions(cfg, prob.n, true);
    if (parts.empty()) throw Error("sweep needs at least one --partition");

    std::vector<std::string> modes;
    if (cfg.mode == "both") {
        modes = {"inner", "outer"};
    } else if (cfg.mode == "inner" || cfg.mode == "outer") {
        modes = {cfg.mode};
    } else {
        throw Error("sweep supports modes inner, outer, both");
    }

    struct Task {
        Partition part;
        std::string mode;
    };
    std::vector<Task> tasks;
    for (const Partition& p : parts)
        for (const std::string& m : modes) tasks.push_back({p, m});

    std::vector<SweepRow> rows(tasks.size());
    auto worker = [&](std::size_t idx) {
        const Task& task = tasks[idx];
        SweepRow& row = rows[idx];
        row.partition = task.part.to_string();
        row.mode = task.mode;
        try {
            const RunConfig rc = make_run_config(cfg, task.part);
            IterationTrace tr =
                task.mode == "inner" ? run_inner(prob, rc).trace : run_outer(prob, rc).trace;
            if (tr.exact_solve) row.status = "exact";
            double last = 0.0;
            std::size_t ri = 0;
            for (int t = 1; t <= cfg.max_iter; ++t) {
                if (ri < tr.records.size() && tr.records[ri].t == t) last = tr.records[ri++].bound;
                row.bounds.push_back(last);
            }
        } catch (const FirstIterationInfeasible&) {
            row.status = "infeasible";
            row.bounds.clear();
        } catch (const Error& e) {
            row.status = "failed";
            row.bounds.clear();
            if (log_level() >= 1) std::cerr << "sweep row failed: " << e.what() << "\n";
        }
    };

    const int jobs = std::max(1, cfg.jobs);
    for (std::size_t base = 0; base < tasks.size(); base += jobs) {
        std::vector<std::thread> pool;
        for (std::size_t k = base; k < std::min(tasks.size(), base + static_cast<std::size_t>(jobs));
             ++k)
            pool.emplace_back(worker, k);
        for (std::thread& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "partition,mode,status";
    for (int t = 1; t <= cfg.max_iter; ++t) csv << ",bound_t" << t;
    csv << "\n";
    for (const SweepRow& row : rows) {
        std::string label = row.partition;
        for (char& c : label)
            if (c == ',') c = '+';
        csv << label << "," << row.mode << "," << row.status;
        for (std::size_t t = 0; t < static_cast<std::size_t>(cfg.max_iter); ++t)
            csv << "," << (t < row.bounds.size() ? g17(row.bounds[t]) : "");
        csv << "\n";
    }
    emit_trace_csv(cfg, csv.str());

    json summary;
    summary["problem"] = prob.name;
    summary["mode"] = "sweep:" + cfg.mode;
    json jrows = json::array();
    for (const SweepRow& row : rows) {
        json jr;
        jr["partition"] = row.partition;
        jr["mode"] = row.mode;
        jr["status"] = row.status;
        jr["bounds"] = row.bounds;
        jrows.push_back(jr);
    }
    summary["rows"] = jrows;
    if (!cfg.summary_path.empty()) emit_summary(cfg, summary);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Fixture corpus generation (shipped .dat-s files plus manifest.json).

struct FixtureSpec {
    std::string family;  // pencil | theta | bqo
    int n;
    std::uint64_t seed;
    double p_edge;  // theta only
    std::string partition;
    int t_inner;
    int t_outer;
};

int run_fixtures(const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::vector<FixtureSpec> specs;
    for (std::uint64_t seed : {42ull, 7ull, 9ull}) {
        specs.push_back({"pencil", 10, seed, 0, "uniform:2", 11, 11});
        specs.push_back({"pencil", 20, seed, 0, "uniform:2", 6, 6});
    }
    specs.push_back({"pencil", 40, 42, 0, "uniform:10", 4, 3});
    specs.push_back({"pencil", 40, 7, 0, "uniform:10", 4, 3});

    const double ps[12] = {0.3, 0.5, 0.3, 0.4, 0.2, 0.4, 0.4, 0.5, 0.3, 0.5, 0.2, 0.3};
    const int ns[12] = {10, 10, 15, 15, 20, 20, 12, 18, 25, 25, 30, 30};
    for (int i = 0; i < 12; ++i)
        specs.push_back({"theta", ns[i], 101ull + static_cast<std::uint64_t>(i), ps[i],
                         ns[i] % 5 == 0 ? "uniform:5" : "uniform:2", 5, ns[i] >= 25 ? 4 : 6});

    for (int n : {8, 12, 16, 20}) {
        for (std::uint64_t seed : {201ull, 202ull}) {
            specs.push_back({"bqo", n, seed + static_cast<std::uint64_t>(n), 0,
                             n % 4 == 0 ? "uniform:4" : "uniform:2", 6, 5});
        }
    }
    specs.push_back({"bqo", 10, 203, 0, "uniform:2", 6, 5});
    specs.push_back({"bqo", 14, 204, 0, "uniform:2", 6, 5});

    json manifest;
    manifest["format"] = 1;
    json instances = json::array();

    for (const FixtureSpec& s : specs) {
        SdpProblem prob;
        json meta;
        const std::string file =
            s.family + "_n" + std::to_string(s.n) + "_s" + std::to_string(s.seed) + ".dat-s";
        if (s.family == "pencil") {
            prob = gen_pencil_sdp(s.n, s.seed);
        } else if (s.family == "theta") {
            const Graph g = gen_erdos_renyi(s.n, s.p_edge, s.seed);
            prob = lovasz_theta_sdp(g);
            meta["p_edge"] = s.p_edge;
            meta["edges"] = static_cast<int>(g.edges.size());
            meta["alpha_stable"] = stable_set_brute(g);
        } else {
            const SymMatrix q = gen_bqo_cost(s.n, s.seed);
            prob = bqo_relax_sdp(q);
            meta["bqo_brute"] = bqo_brute(q);
        }
        prob.name = file;

        const SolveReport exact = solve_full(prob);
        if (exact.status != SolveStatus::Optimal)
            throw Error("fixture " + file + " failed the exact solve: " + to_string(exact.status));

        emit_sdpa_file(prob, out_dir + "/" + file);

        json inst;
        inst["file"] = file;
        inst["family"] = s.family;
        inst["n"] = s.n;
        inst["seed"] = s.seed;
        inst["partition"] = s.partition;
        inst["t_inner"] = s.t_inner;
        inst["t_outer"] = s.t_outer;
        inst["p_star"] = exact.primal_value;
        inst["gap_tol"] = 1e-8;
        inst["feas_tol"] = 1e-8;
        for (auto& [k, v] : meta.items()) inst[k] = v;
        instances.push_back(inst);
        std::cerr << "fixture " << file << " p*=" << g17(exact.primal_value) << "\n";
    }
    manifest["instances"] = instances;
    write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << instances.size() << " instances to " << out_dir << "\n";
    return kExitOk;
}

void add_common_options(CLI::App* app, CliConfig& cfg) {
    app->add_option("--input", cfg.input, "SDPA sparse (.dat-s) input file");
    app->add_option("--gen", cfg.gen_spec,
                    "generator spec: pencil:n=10,seed=42 | theta:n=30,p=0.2,seed=7 | "
                    "er:... | bqo:n=40,seed=1");
    app->add_option("--mode", cfg.mode, "inner | outer | both | exact | membership | region");
    app->add_option("--partition", cfg.partition_specs,
                    "partition spec, repeatable: uniform:K or 2,2,2,2,2");
    app->add_option("--max-iter", cfg.max_iter, "iteration budget t_max");
    app->add_option("--tol", cfg.tol, "solver gap/feasibility tolerance");
    app->add_option("--trace", cfg.trace_path, "trace CSV output path");
    app->add_option("--summary", cfg.summary_path, "summary JSON output path");
    app->add_option("--seed", cfg.seed, "default seed for generator specs");
    app->add_option("--jobs", cfg.jobs, "sweep concurrency");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"block factor-width-two SDP bounds"};
    app.require_subcommand(1);

    CliConfig solve_cfg;
    CLI::App* solve_cmd = app.add_subcommand("solve", "run one instance");
    add_common_options(solve_cmd, solve_cfg);

    CliConfig sweep_cfg;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "bounds per partition per mode");
    add_common_options(sweep_cmd, sweep_cfg);

    std::string fixtures_dir = "fixtures";
    CLI::App* fixtures_cmd =
        app.add_subcommand("fixtures", "regenerate the shipped instance corpus");
    fixtures_cmd->add_option("--out", fixtures_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(solve_cfg);
        if (sweep_cmd->parsed()) return run_sweep(sweep_cfg);
        if (fixtures_cmd->parsed()) return run_fixtures(fixtures_dir);
        return kExitUsage;
    } catch (const FirstIterationInfeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFirstInfeasible;
    } catch (const SolverFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const NumericalTrouble& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
