#include "tiermem/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "tiermem/evaluation.hpp"

namespace tiermem {

namespace {

namespace fs = std::filesystem;

constexpr const char* kAllModes = "full,oracle_unbounded,no_ce,no_gate,lru";

struct SweepOptions {
    std::size_t n = 15000;
    std::size_t l1 = 500;
    std::size_t l2 = 5000;
    std::size_t dim = 64;
    std::size_t final_k = 10;
    double prob = 0.25;
    double scale = 1.0;
    std::string seeds_text = "42-46";
    std::string modes_text = kAllModes;
    std::size_t jobs = 0;  // 0: one per selected mode
    std::string out = ".";
};

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void apply_scale(SweepOptions& o) {
    if (o.scale == 1.0) return;
    auto scaled = [&](std::size_t v) {
        auto s = static_cast<std::size_t>(std::llround(static_cast<double>(v) * o.scale));
        return std::max<std::size_t>(1, s);
    };
    o.n = scaled(o.n);
    o.l1 = scaled(o.l1);
    o.l2 = scaled(o.l2);
}

SystemConfig make_config(const SweepOptions& o, Mode mode, std::uint64_t seed) {
    SystemConfig cfg;
    cfg.l1_capacity = o.l1;
    cfg.l2_capacity = o.l2;
    cfg.dimension = o.dim;
    cfg.final_k = o.final_k;
    cfg.mode = mode;
    cfg.seed = seed;
    return cfg;
}

Scenario make_scenario(const SweepOptions& o, std::uint64_t seed) {
    Scenario scn;
    scn.n_facts = o.n;
    scn.l1_capacity = o.l1;
    scn.l2_capacity = o.l2;
    scn.seed = seed;
    scn.essential_keyword_prob = o.prob;
    return scn;
}

using KvList = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const fs::path& path, const KvList& kv) {
    std::ofstream out(path);
    if (!out) throw FileUnreadable("cannot write manifest: " + path.string());
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

KvList manifest_entries(const std::string& command, const SweepOptions& o,
                        const SystemConfig& cfg, const std::string& outputs) {
    Scenario defaults;
    std::string keywords;
    for (const auto& k : defaults.keywords) {
        if (!keywords.empty()) keywords += ',';
        keywords += k;
    }
    KvList kv;
    kv.emplace_back("tool_version", kVersion);
    kv.emplace_back("command", command);
    kv.emplace_back("started_at", utc_timestamp());
    kv.emplace_back("n_facts", std::to_string(o.n));
    kv.emplace_back("l1_capacity", std::to_string(cfg.l1_capacity));
    kv.emplace_back("l2_capacity", std::to_string(cfg.l2_capacity));
    kv.emplace_back("evict_fraction", format_fixed(cfg.evict_fraction));
    kv.emplace_back("alpha", format_fixed(cfg.alpha));
    kv.emplace_back("beta", format_fixed(cfg.beta));
    kv.emplace_back("lambda", format_fixed(cfg.lambda));
    kv.emplace_back("gamma", format_fixed(cfg.gamma));
    kv.emplace_back("sim_threshold", format_fixed(cfg.sim_threshold));
    kv.emplace_back("essential_threshold", format_fixed(cfg.essential_threshold));
    kv.emplace_back("k1", std::to_string(cfg.k1));
    kv.emplace_back("k2", std::to_string(cfg.k2));
    kv.emplace_back("rerank_top", std::to_string(cfg.rerank_top));
    kv.emplace_back("final_k", std::to_string(cfg.final_k));
    kv.emplace_back("dimension", std::to_string(cfg.dimension));
    kv.emplace_back("essential_keyword_prob", format_fixed(o.prob));
    kv.emplace_back("keywords", keywords);
    kv.emplace_back("seeds", o.seeds_text);
    kv.emplace_back("modes", o.modes_text);
    kv.emplace_back("scale", format_fixed(o.scale));
    kv.emplace_back("outputs", outputs);
    return kv;
}

int mode_rank(Mode m) { return static_cast<int>(m); }

int cmd_gen(std::size_t n, std::uint64_t seed, double prob, const std::string& out_dir) {
    fs::create_directories(out_dir);
    Scenario scn;
    scn.n_facts = n;
    scn.seed = seed;
    scn.essential_keyword_prob = prob;
    Dataset ds = generate_synthetic(scn);
    write_facts_tsv((fs::path(out_dir) / "facts.tsv").string(), ds.facts);
    write_queries_tsv((fs::path(out_dir) / "queries.tsv").string(), ds.queries);
    std::cout << "wrote " << ds.facts.size() << " facts and " << ds.queries.size()
              << " queries to " << out_dir << "\n";
    return 0;
}

struct RunCmdOptions {
    SweepOptions sweep;
    std::string mode_text = "full";
    std::uint64_t seed = 42;
    std::string facts_path;
    std::string queries_path;
    std::string embeddings_path;
    std::string rerank_scores_path;
    std::string ledger_path;
};

int cmd_run(RunCmdOptions o, Mode mode) {
    apply_scale(o.sweep);
    SystemConfig cfg = make_config(o.sweep, mode, o.seed);

    std::vector<Fact> facts;
    std::vector<Query> queries;
    if (!o.facts_path.empty()) {
        facts = read_facts_tsv(o.facts_path);
        if (!o.queries_path.empty()) queries = read_queries_tsv(o.queries_path, facts);
    } else {
        Dataset ds = generate_synthetic(make_scenario(o.sweep, o.seed));
        facts = std::move(ds.facts);
        queries = std::move(ds.queries);
    }

    fs::create_directories(o.sweep.out);
    fs::path out_dir(o.sweep.out);
    o.sweep.seeds_text = std::to_string(o.seed);
    o.sweep.modes_text = to_string(mode);
    o.sweep.n = facts.size();
    write_manifest(out_dir / "manifest.txt",
                   manifest_entries("run", o.sweep, cfg, "results.csv"));

    std::unique_ptr<EmbeddingProvider> provider;
    if (!o.embeddings_path.empty()) {
        provider = std::make_unique<PrecomputedEmbeddingProvider>(o.embeddings_path,
                                                                  cfg.dimension);
    }
    std::unique_ptr<Reranker> reranker;
    if (!o.rerank_scores_path.empty()) {
        reranker = std::make_unique<FileReranker>(o.rerank_scores_path);
    }

    LossLedger ledger;
    RunMetrics m = run_dataset(cfg, facts, queries, provider.get(), reranker.get(), nullptr,
                               o.ledger_path.empty() ? nullptr : &ledger);

    std::ofstream rcsv(out_dir / "results.csv");
    if (!rcsv) throw FileUnreadable("cannot write results.csv under " + o.sweep.out);
    write_results_csv(rcsv, {m});
    if (!o.ledger_path.empty()) {
        std::ofstream lf(o.ledger_path);
        if (!lf) throw FileUnreadable("cannot write ledger: " + o.ledger_path);
        ledger.write_csv(lf);
    }

    std::cout << to_string(m.mode) << " seed " << m.seed << ": mrr_active "
              << format_fixed(m.mrr_active, 3) << ", mrr_history "
              << format_fixed(m.mrr_history, 3) << ", pruned " << m.pruned_total
              << ", essential_lost " << m.essential_lost << "\n";
    return 0;
}

int cmd_ablate(SweepOptions o, const std::vector<Mode>& modes,
               const std::vector<std::uint64_t>& seeds) {
    apply_scale(o);
    fs::create_directories(o.out);
    fs::path out_dir(o.out);
    SystemConfig cfg0 = make_config(o, modes.front(), seeds.front());
    write_manifest(out_dir / "manifest.txt",
                   manifest_entries("ablate", o, cfg0,
                                    "results.csv,aggregate.csv,pareto.csv"));

    struct Task {
        Mode mode;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (Mode m : modes) {
        for (std::uint64_t s : seeds) tasks.push_back({m, s});
    }

    std::size_t jobs = o.jobs ? o.jobs : modes.size();
    jobs = std::max<std::size_t>(1, std::min(jobs, tasks.size()));

    std::vector<RunMetrics> done;
    std::vector<std::string> errors;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        while (!failed.load()) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const Task& t = tasks[i];
            try {
                RunMetrics m =
                    run_scenario(make_config(o, t.mode, t.seed), make_scenario(o, t.seed));
                std::lock_guard<std::mutex> lock(mu);
                done.push_back(m);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                errors.push_back(std::string(to_string(t.mode)) + " seed " +
                                 std::to_string(t.seed) + ": " + e.what());
                failed.store(true);
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::sort(done.begin(), done.end(), [](const RunMetrics& a, const RunMetrics& b) {
        if (a.mode != b.mode) return mode_rank(a.mode) < mode_rank(b.mode);
        return a.seed < b.seed;
    });
    {
        std::ofstream rcsv(out_dir / "results.csv");
        if (!rcsv) throw FileUnreadable("cannot write results.csv under " + o.out);
        write_results_csv(rcsv, done);
    }
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "run failed: " << e << "\n";
        std::cerr << done.size() << " completed rows kept in results.csv\n";
        return 1;
    }

    auto agg = aggregate(done, seeds);
    {
        std::ofstream acsv(out_dir / "aggregate.csv");
        if (!acsv) throw FileUnreadable("cannot write aggregate.csv under " + o.out);
        write_aggregate_csv(acsv, agg);
    }
    {
        std::ofstream pcsv(out_dir / "pareto.csv");
        if (!pcsv) throw FileUnreadable("cannot write pareto.csv under " + o.out);
        write_pareto_csv(pcsv, pareto_points(agg));
    }
    std::cout << done.size() << " runs written to " << o.out << "\n";
    return 0;
}

struct BglCmdOptions {
    SweepOptions sweep;
    std::string log_path;
    std::size_t limit = 2000;
    std::uint64_t seed = 42;
};

int cmd_bgl(BglCmdOptions o, const std::vector<Mode>& modes) {
    apply_scale(o.sweep);
    BglParseResult parsed = parse_bgl(o.log_path, o.limit);
    if (parsed.malformed_lines > 0) {
        std::cerr << "warning: skipped " << parsed.malformed_lines << " malformed lines\n";
    }
    std::vector<Query> queries = make_bgl_queries(parsed.facts);

    fs::create_directories(o.sweep.out);
    fs::path out_dir(o.sweep.out);
    o.sweep.n = parsed.facts.size();
    o.sweep.seeds_text = std::to_string(o.seed);
    SystemConfig cfg0 = make_config(o.sweep, modes.front(), o.seed);
    write_manifest(out_dir / "manifest.txt",
                   manifest_entries("bgl", o.sweep, cfg0, "bgl_results.csv"));

    std::ofstream out(out_dir / "bgl_results.csv");
    if (!out) throw FileUnreadable("cannot write bgl_results.csv under " + o.sweep.out);
    out << "mode,mrr,latency_mean_ms,essential_lost\n";
    for (Mode mode : modes) {
        SystemConfig cfg = make_config(o.sweep, mode, o.seed);
        RunMetrics m = run_dataset(cfg, parsed.facts, queries);
        out << to_string(mode) << ',' << format_fixed(m.mrr_overall) << ','
            << format_fixed(m.latency_mean_ms) << ',' << m.essential_lost << '\n';
        std::cout << to_string(mode) << ": mrr " << format_fixed(m.mrr_overall, 3)
                  << ", essential_lost " << m.essential_lost << "\n";
    }
    std::cout << parsed.facts.size() << " facts, " << queries.size() << " queries from "
              << o.log_path << "\n";
    return 0;
}

std::string pm(double mean, double std_dev, int digits) {
    return format_fixed(mean, digits) + " +- " + format_fixed(std_dev, digits);
}

double agg_value(const std::vector<AggregateRow>& rows, Mode mode, const std::string& metric,
                 bool std_dev) {
    for (const auto& r : rows) {
        if (r.mode == mode && r.metric == metric) return std_dev ? r.std_dev : r.mean;
    }
    throw MissingRun("no aggregate value for " + std::string(to_string(mode)) + "/" + metric);
}

int cmd_report(const std::string& results_path, const std::string& out_dir,
               const std::string& format, const std::string& seeds_text) {
    if (!fs::exists(results_path)) throw MissingInput("no results file at " + results_path);
    auto runs = read_results_csv(results_path);
    if (runs.empty()) throw MissingInput("results file has no rows: " + results_path);

    std::vector<std::uint64_t> seeds;
    if (!seeds_text.empty()) {
        seeds = parse_seed_list(seeds_text);
    } else {
        for (const auto& r : runs) {
            if (std::find(seeds.begin(), seeds.end(), r.seed) == seeds.end())
                seeds.push_back(r.seed);
        }
        std::sort(seeds.begin(), seeds.end());
    }

    auto agg = aggregate(runs, seeds);
    auto points = pareto_points(agg);

    fs::create_directories(out_dir);
    {
        std::ofstream pcsv(fs::path(out_dir) / "pareto.csv");
        if (!pcsv) throw FileUnreadable("cannot write pareto.csv under " + out_dir);
        write_pareto_csv(pcsv, points);
    }

    if (format == "csv") {
        write_aggregate_csv(std::cout, agg);
        write_pareto_csv(std::cout, points);
        return 0;
    }

    std::vector<Mode> modes;
    for (const auto& r : agg) {
        if (std::find(modes.begin(), modes.end(), r.mode) == modes.end()) modes.push_back(r.mode);
    }

    char line[160];
    std::printf("retrieval quality, mean +- std over %zu seeds\n", seeds.size());
    std::printf("%-18s %-22s %-22s\n", "mode", "mrr_active", "mrr_history");
    for (Mode m : modes) {
        std::snprintf(line, sizeof(line), "%-18s %-22s %-22s", to_string(m),
                      pm(agg_value(agg, m, "mrr_active", false),
                         agg_value(agg, m, "mrr_active", true), 3)
                          .c_str(),
                      pm(agg_value(agg, m, "mrr_history", false),
                         agg_value(agg, m, "mrr_history", true), 3)
                          .c_str());
        std::printf("%s\n", line);
    }
    std::printf("\nrobustness\n");
    std::printf("%-18s %-22s %-22s %-22s %-22s\n", "mode", "latency_ms", "essential_lost",
                "pruned_total", "l2_fallback_rate");
    for (Mode m : modes) {
        std::snprintf(
            line, sizeof(line), "%-18s %-22s %-22s %-22s %-22s", to_string(m),
            pm(agg_value(agg, m, "latency_mean_ms", false),
               agg_value(agg, m, "latency_mean_ms", true), 2)
                .c_str(),
            pm(agg_value(agg, m, "essential_lost", false),
               agg_value(agg, m, "essential_lost", true), 1)
                .c_str(),
            pm(agg_value(agg, m, "pruned_total", false), agg_value(agg, m, "pruned_total", true),
               1)
                .c_str(),
            pm(agg_value(agg, m, "l2_fallback_rate", false),
               agg_value(agg, m, "l2_fallback_rate", true), 3)
                .c_str());
        std::printf("%s\n", line);
    }
    std::printf("\npareto, failure zone: active MRR below 0.6\n");
    std::printf("%-18s %-18s %-18s %s\n", "mode", "latency_mean_ms", "mrr_active", "failure_zone");
    for (const auto& p : points) {
        std::printf("%-18s %-18s %-18s %s\n", to_string(p.mode),
                    format_fixed(p.latency_mean_ms, 3).c_str(),
                    format_fixed(p.mrr_active_mean, 3).c_str(),
                    p.failure_zone ? "true" : "false");
    }
    return 0;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    if (text.empty()) throw InvalidConfig("empty seed list");
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        std::string piece =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (piece.empty()) throw InvalidConfig("empty seed entry in: " + text);
        try {
            auto dash = piece.find('-', 1);
            if (dash != std::string::npos) {
                std::uint64_t lo = std::stoull(piece.substr(0, dash));
                std::uint64_t hi = std::stoull(piece.substr(dash + 1));
                if (hi < lo) throw InvalidConfig("descending seed range: " + piece);
                for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
            } else {
                seeds.push_back(std::stoull(piece));
            }
        } catch (const InvalidConfig&) {
            throw;
        } catch (const std::exception&) {
            throw InvalidConfig("bad seed entry: " + piece);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        for (std::size_t j = i + 1; j < seeds.size(); ++j) {
            if (seeds[i] == seeds[j])
                throw InvalidConfig("duplicate seed " + std::to_string(seeds[i]));
        }
    }
    return seeds;
}

std::vector<Mode> parse_mode_list(const std::string& text) {
    std::vector<Mode> modes;
    if (text.empty()) throw InvalidConfig("empty mode list");
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        std::string piece =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (piece.empty()) throw InvalidConfig("empty mode entry in: " + text);
        Mode m = parse_mode(piece);
        if (std::find(modes.begin(), modes.end(), m) != modes.end()) {
            throw InvalidConfig("duplicate mode " + piece);
        }
        modes.push_back(m);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return modes;
}

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"bounded two-tier semantic memory: datasets, runs, sweeps, reports"};
    app.require_subcommand(1);

    std::size_t gen_n = 15000;
    std::uint64_t gen_seed = 42;
    double gen_prob = 0.25;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "generate a synthetic fact/query dataset");
    gen->add_option("--n", gen_n, "fact count")->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--prob", gen_prob, "essential keyword probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_option("--out", gen_out, "output directory")->required();

    RunCmdOptions run_opt;
    auto* run = app.add_subcommand("run", "one (mode, seed) experiment");
    run->add_option("--mode", run_opt.mode_text, "system mode")->capture_default_str();
    run->add_option("--seed", run_opt.seed, "scenario seed")->capture_default_str();
    run->add_option("--n", run_opt.sweep.n, "fact count")->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--l1", run_opt.sweep.l1, "L1 capacity")->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--l2", run_opt.sweep.l2, "L2 capacity")->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--dim", run_opt.sweep.dim, "embedding dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--final-k", run_opt.sweep.final_k, "returned list length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--prob", run_opt.sweep.prob, "essential keyword probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    run->add_option("--scale", run_opt.sweep.scale, "scales n and both capacities")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--out", run_opt.sweep.out, "output directory")->capture_default_str();
    run->add_option("--facts", run_opt.facts_path, "ingest facts from TSV instead of generating");
    run->add_option("--queries", run_opt.queries_path, "query TSV (needs --facts)")
        ->needs(run->get_option("--facts"));
    run->add_option("--embeddings", run_opt.embeddings_path,
                    "precomputed vector file, hashing fallback for missing ids");
    run->add_option("--rerank-scores", run_opt.rerank_scores_path,
                    "external reranker scores, lexical fallback for missing pairs");
    run->add_option("--ledger", run_opt.ledger_path, "write the loss ledger CSV here");

    SweepOptions ablate_opt;
    auto* ablate = app.add_subcommand("ablate", "mode x seed sweep with aggregates");
    ablate->add_option("--n", ablate_opt.n, "fact count")->check(CLI::PositiveNumber)
        ->capture_default_str();
    ablate->add_option("--l1", ablate_opt.l1, "L1 capacity")->check(CLI::PositiveNumber)
        ->capture_default_str();
    ablate->add_option("--l2", ablate_opt.l2, "L2 capacity")->check(CLI::PositiveNumber)
        ->capture_default_str();
    ablate->add_option("--dim", ablate_opt.dim, "embedding dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ablate->add_option("--final-k", ablate_opt.final_k, "returned list length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ablate->add_option("--prob", ablate_opt.prob, "essential keyword probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    ablate->add_option("--seeds", ablate_opt.seeds_text, "seed list, e.g. 42-46 or 42,44")
        ->capture_default_str();
    ablate->add_option("--modes", ablate_opt.modes_text, "comma-separated mode list")
        ->capture_default_str();
    ablate->add_option("--scale", ablate_opt.scale, "scales n and both capacities")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ablate->add_option("--jobs", ablate_opt.jobs, "parallel workers, default one per mode");
    ablate->add_option("--out", ablate_opt.out, "output directory")->required();

    BglCmdOptions bgl_opt;
    bgl_opt.sweep.modes_text = "full,oracle_unbounded,lru";
    auto* bgl = app.add_subcommand("bgl", "replay a BGL-format log through selected modes");
    bgl->add_option("--log", bgl_opt.log_path, "BGL-format log file")->required();
    bgl->add_option("--limit", bgl_opt.limit, "max lines to ingest")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bgl->add_option("--modes", bgl_opt.sweep.modes_text, "comma-separated mode list")
        ->capture_default_str();
    bgl->add_option("--seed", bgl_opt.seed, "config seed for bookkeeping")
        ->capture_default_str();
    bgl->add_option("--l1", bgl_opt.sweep.l1, "L1 capacity")->check(CLI::PositiveNumber)
        ->capture_default_str();
    bgl->add_option("--l2", bgl_opt.sweep.l2, "L2 capacity")->check(CLI::PositiveNumber)
        ->capture_default_str();
    bgl->add_option("--dim", bgl_opt.sweep.dim, "embedding dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bgl->add_option("--final-k", bgl_opt.sweep.final_k, "returned list length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bgl->add_option("--scale", bgl_opt.sweep.scale, "scales both capacities")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bgl->add_option("--out", bgl_opt.sweep.out, "output directory")->capture_default_str();

    std::string report_results;
    std::string report_out = ".";
    std::string report_format = "text";
    std::string report_seeds;
    auto* report = app.add_subcommand("report", "render tables from a results CSV");
    report->add_option("--results", report_results, "results.csv from run/ablate")->required();
    report->add_option("--out", report_out, "directory for pareto.csv")->capture_default_str();
    report->add_option("--format", report_format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();
    report->add_option("--seeds", report_seeds, "seed list override, default: seeds found");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("tiermem");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_n, gen_seed, gen_prob, gen_out);
        if (run->parsed()) {
            Mode mode;
            try {
                mode = parse_mode(run_opt.mode_text);
                make_config(run_opt.sweep, mode, run_opt.seed).validate();
            } catch (const InvalidConfig& e) {
                std::cerr << "usage error: " << e.what() << "\n";
                return 2;
            }
            return cmd_run(run_opt, mode);
        }
        if (ablate->parsed()) {
            std::vector<Mode> modes;
            std::vector<std::uint64_t> seeds;
            try {
                modes = parse_mode_list(ablate_opt.modes_text);
                seeds = parse_seed_list(ablate_opt.seeds_text);
                make_config(ablate_opt, modes.front(), seeds.front()).validate();
            } catch (const InvalidConfig& e) {
                std::cerr << "usage error: " << e.what() << "\n";
                return 2;
            }
            return cmd_ablate(ablate_opt, modes, seeds);
        }
        if (bgl->parsed()) {
            std::vector<Mode> modes;
            try {
                modes = parse_mode_list(bgl_opt.sweep.modes_text);
                make_config(bgl_opt.sweep, modes.front(), bgl_opt.seed).validate();
            } catch (const InvalidConfig& e) {
                std::cerr << "usage error: " << e.what() << "\n";
                return 2;
            }
            return cmd_bgl(bgl_opt, modes);
        }
        if (report->parsed()) {
            if (!report_seeds.empty()) {
                try {
                    parse_seed_list(report_seeds);
                } catch (const InvalidConfig& e) {
                    std::cerr << "usage error: " << e.what() << "\n";
                    return 2;
                }
            }
            return cmd_report(report_results, report_out, report_format, report_seeds);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace tiermem
