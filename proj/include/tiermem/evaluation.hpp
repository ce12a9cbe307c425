#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tiermem/workload.hpp"

namespace tiermem {

struct RunMetrics {
    Mode mode = Mode::Full;
    std::uint64_t seed = 42;
    double mrr_active = 0.0;
    double mrr_history = 0.0;
    double mrr_overall = 0.0;  // all queries; log runs report this single figure
    double latency_mean_ms = 0.0;
    double latency_std_ms = 0.0;
    std::size_t essential_lost = 0;
    std::size_t pruned_total = 0;
    double l2_fallback_rate = 0.0;  // share of gated queries that searched L2
};

struct AggregateRow {
    Mode mode = Mode::Full;
    std::string metric;
    double mean = 0.0;
    double std_dev = 0.0;  // population std over the seed list
};

struct ParetoPoint {
    Mode mode = Mode::Full;
    double latency_mean_ms = 0.0;
    double mrr_active_mean = 0.0;
    bool failure_zone = false;  // active MRR below 0.6
};

/// Mean reciprocal rank of each gold id in its aligned result list; a gold
/// absent from the list contributes 0. Throws EmptyCohort on empty input.
double mrr(const std::vector<RetrievalResult>& results, const std::vector<FactId>& golds);

double reciprocal_rank(const RetrievalResult& result, const FactId& gold);

/// Ingests every fact in seq order, then runs every query in seq order, and
/// measures the two 100-query cohorts. `stats_out`, when given, receives the
/// engine counters for routing assertions.
RunMetrics run_dataset(const SystemConfig& cfg, const std::vector<Fact>& facts,
                       const std::vector<Query>& queries,
                       const EmbeddingProvider* provider = nullptr,
                       const Reranker* reranker = nullptr, EngineStats* stats_out = nullptr,
                       LossLedger* ledger_out = nullptr);

/// generate_synthetic + run_dataset with cfg/scn cross-checked.
RunMetrics run_scenario(const SystemConfig& cfg, const Scenario& scn);

/// Per mode and metric, mean and population std across exactly `seeds`.
/// Throws MissingRun when a (mode, seed) pair is absent or duplicated.
std::vector<AggregateRow> aggregate(const std::vector<RunMetrics>& runs,
                                    const std::vector<std::uint64_t>& seeds);

std::vector<ParetoPoint> pareto_points(const std::vector<AggregateRow>& rows);

void write_results_csv(std::ostream& out, const std::vector<RunMetrics>& runs);
std::vector<RunMetrics> read_results_csv(const std::string& path);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
void write_pareto_csv(std::ostream& out, const std::vector<ParetoPoint>& points);

}  // namespace tiermem
