#include "tiermem/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace tiermem {

namespace {

constexpr const char* kResultsHeader =
    "mode,seed,mrr_active,mrr_history,latency_mean_ms,latency_std_ms,essential_lost,"
    "pruned_total,l2_fallback_rate";

constexpr const char* kMetricNames[] = {
    "mrr_active",    "mrr_history",  "latency_mean_ms", "latency_std_ms",
    "essential_lost", "pruned_total", "l2_fallback_rate",
};

double metric_value(const RunMetrics& r, const std::string& name) {
    if (name == "mrr_active") return r.mrr_active;
    if (name == "mrr_history") return r.mrr_history;
    if (name == "latency_mean_ms") return r.latency_mean_ms;
    if (name == "latency_std_ms") return r.latency_std_ms;
    if (name == "essential_lost") return static_cast<double>(r.essential_lost);
    if (name == "pruned_total") return static_cast<double>(r.pruned_total);
    return r.l2_fallback_rate;
}

struct MeanStd {
    double mean = 0.0;
    double std_dev = 0.0;
};

MeanStd mean_and_population_std(const std::vector<double>& xs) {
    MeanStd ms;
    if (xs.empty()) return ms;
    double sum = 0.0;
    for (double x : xs) sum += x;
    ms.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - ms.mean) * (x - ms.mean);
    ms.std_dev = std::sqrt(ss / static_cast<double>(xs.size()));
    return ms;
}

constexpr Mode kModeOrder[] = {Mode::Full, Mode::OracleUnbounded, Mode::NoCe, Mode::NoGate,
                               Mode::Lru};

}  // namespace

double reciprocal_rank(const RetrievalResult& result, const FactId& gold) {
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
        if (result.ranked[i].first == gold) return 1.0 / static_cast<double>(i + 1);
    }
    return 0.0;
}

double mrr(const std::vector<RetrievalResult>& results, const std::vector<FactId>& golds) {
    if (results.empty() || results.size() != golds.size()) {
        throw EmptyCohort("mrr needs aligned, non-empty result/gold lists");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) sum += reciprocal_rank(results[i], golds[i]);
    return sum / static_cast<double>(results.size());
}

RunMetrics run_dataset(const SystemConfig& cfg, const std::vector<Fact>& facts,
                       const std::vector<Query>& queries, const EmbeddingProvider* provider,
                       const Reranker* reranker, EngineStats* stats_out,
                       LossLedger* ledger_out) {
    cfg.validate();
    std::unique_ptr<HashingEmbeddingProvider> owned;
    if (!provider) {
        owned = std::make_unique<HashingEmbeddingProvider>(cfg.dimension);
        provider = owned.get();
    }

    MemoryStore store(cfg, *provider);
    RetrievalEngine engine(store, *provider, reranker);

    std::vector<const Fact*> fact_order;
    fact_order.reserve(facts.size());
    for (const auto& f : facts) fact_order.push_back(&f);
    std::sort(fact_order.begin(), fact_order.end(),
              [](const Fact* a, const Fact* b) { return a->seq < b->seq; });
    for (const Fact* f : fact_order) store.insert_fact(*f);

    std::vector<const Query*> query_order;
    query_order.reserve(queries.size());
    for (const auto& q : queries) query_order.push_back(&q);
    std::sort(query_order.begin(), query_order.end(),
              [](const Query* a, const Query* b) { return a->seq < b->seq; });

    std::vector<double> latencies;
    latencies.reserve(queries.size());
    double active_sum = 0.0;
    double history_sum = 0.0;
    double overall_sum = 0.0;
    std::size_t active_n = 0;
    std::size_t history_n = 0;
    for (const Query* q : query_order) {
        RetrievalResult r = engine.retrieve(*q);
        latencies.push_back(r.latency_ms);
        double rr = reciprocal_rank(r, q->gold_id);
        overall_sum += rr;
        if (q->cohort == Cohort::Active) {
            active_sum += rr;
            ++active_n;
        } else if (q->cohort == Cohort::History) {
            history_sum += rr;
            ++history_n;
        }
    }

    RunMetrics m;
    m.mode = cfg.mode;
    m.seed = cfg.seed;
    m.mrr_active = active_n ? active_sum / static_cast<double>(active_n) : 0.0;
    m.mrr_history = history_n ? history_sum / static_cast<double>(history_n) : 0.0;
    m.mrr_overall =
        queries.empty() ? 0.0 : overall_sum / static_cast<double>(queries.size());
    auto lat = mean_and_population_std(latencies);
    m.latency_mean_ms = lat.mean;
    m.latency_std_ms = lat.std_dev;
    m.essential_lost = store.ledger().essential_lost();
    m.pruned_total = store.ledger().pruned_total();
    const EngineStats& st = engine.stats();
    std::uint64_t gated = st.gate_pass + st.gate_fail;
    m.l2_fallback_rate = gated ? static_cast<double>(st.gate_fail) / static_cast<double>(gated)
                               : 0.0;
    if (stats_out) *stats_out = st;
    if (ledger_out) *ledger_out = store.ledger();
    return m;
}

RunMetrics run_scenario(const SystemConfig& cfg, const Scenario& scn) {
    if (cfg.mode != Mode::OracleUnbounded &&
        (cfg.l1_capacity != scn.l1_capacity || cfg.l2_capacity != scn.l2_capacity)) {
        throw InvalidConfig("scenario capacities disagree with config");
    }
    Dataset ds = generate_synthetic(scn);
    RunMetrics m = run_dataset(cfg, ds.facts, ds.queries);
    m.seed = scn.seed;
    return m;
}

std::vector<AggregateRow> aggregate(const std::vector<RunMetrics>& runs,
                                    const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw MissingRun("empty seed list");
    std::vector<AggregateRow> rows;
    for (Mode mode : kModeOrder) {
        bool mode_present = std::any_of(runs.begin(), runs.end(),
                                        [&](const RunMetrics& r) { return r.mode == mode; });
        if (!mode_present) continue;
        std::vector<const RunMetrics*> per_seed;
        for (std::uint64_t seed : seeds) {
            const RunMetrics* found = nullptr;
            for (const auto& r : runs) {
                if (r.mode != mode || r.seed != seed) continue;
                if (found) {
                    throw MissingRun(std::string("duplicate run for ") + to_string(mode) +
                                     " seed " + std::to_string(seed));
                }
                found = &r;
            }
            if (!found) {
                throw MissingRun(std::string("no run for ") + to_string(mode) + " seed " +
                                 std::to_string(seed));
            }
            per_seed.push_back(found);
        }
        for (const char* metric : kMetricNames) {
            std::vector<double> xs;
            xs.reserve(per_seed.size());
            for (const RunMetrics* r : per_seed) xs.push_back(metric_value(*r, metric));
            auto ms = mean_and_population_std(xs);
            rows.push_back({mode, metric, ms.mean, ms.std_dev});
        }
    }
    return rows;
}

std::vector<ParetoPoint> pareto_points(const std::vector<AggregateRow>& rows) {
    std::vector<ParetoPoint> points;
    for (Mode mode : kModeOrder) {
        const AggregateRow* latency = nullptr;
        const AggregateRow* active = nullptr;
        for (const auto& row : rows) {
            if (row.mode != mode) continue;
            if (row.metric == "latency_mean_ms") latency = &row;
            if (row.metric == "mrr_active") active = &row;
        }
        if (!latency || !active) continue;
        points.push_back(
            {mode, latency->mean, active->mean, active->mean < 0.6});
    }
    return points;
}

void write_results_csv(std::ostream& out, const std::vector<RunMetrics>& runs) {
    out << kResultsHeader << '\n';
    for (const auto& r : runs) {
        out << to_string(r.mode) << ',' << r.seed << ',' << format_fixed(r.mrr_active) << ','
            << format_fixed(r.mrr_history) << ',' << format_fixed(r.latency_mean_ms) << ','
            << format_fixed(r.latency_std_ms) << ',' << r.essential_lost << ','
            << r.pruned_total << ',' << format_fixed(r.l2_fallback_rate) << '\n';
    }
}

std::vector<RunMetrics> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable("cannot open results file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw MalformedFile(path + ": empty file");
    // tolerate a manifest-free header line only
    if (line != kResultsHeader) throw MalformedFile(path + ": unexpected header: " + line);

    std::vector<RunMetrics> runs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 9) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": expected 9 columns");
        }
        RunMetrics r;
        try {
            r.mode = parse_mode(fields[0]);
            r.seed = std::stoull(fields[1]);
            r.mrr_active = std::stod(fields[2]);
            r.mrr_history = std::stod(fields[3]);
            r.latency_mean_ms = std::stod(fields[4]);
            r.latency_std_ms = std::stod(fields[5]);
            r.essential_lost = std::stoull(fields[6]);
            r.pruned_total = std::stoull(fields[7]);
            r.l2_fallback_rate = std::stod(fields[8]);
        } catch (const InvalidConfig&) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": bad mode " + fields[0]);
        } catch (const std::exception&) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": bad numeric field");
        }
        runs.push_back(r);
    }
    return runs;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << "mode,metric,mean,std\n";
    for (const auto& row : rows) {
        out << to_string(row.mode) << ',' << row.metric << ',' << format_fixed(row.mean) << ','
            << format_fixed(row.std_dev) << '\n';
    }
}

void write_pareto_csv(std::ostream& out, const std::vector<ParetoPoint>& points) {
    out << "mode,latency_mean_ms,mrr_active_mean,failure_zone\n";
    for (const auto& p : points) {
        out << to_string(p.mode) << ',' << format_fixed(p.latency_mean_ms) << ','
            << format_fixed(p.mrr_active_mean) << ',' << (p.failure_zone ? "true" : "false")
            << '\n';
    }
}

}  // namespace tiermem
