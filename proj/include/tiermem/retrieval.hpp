#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tiermem/memory_tiers.hpp"

namespace tiermem {

enum class Cohort { Active, History, Other };

struct Query {
    FactId id;
    std::string text;
    std::set<std::string> entities;
    FactId gold_id;
    Cohort cohort = Cohort::Other;
    std::uint64_t seq = 0;
};

enum class Route { L1Only, L1PlusL2, Flat };

const char* to_string(Route route);

struct RetrievalResult {
    std::vector<std::pair<FactId, double>> ranked;  // best first
    Route route = Route::L1Only;
    double latency_ms = 0.0;
    double gate_sim = 0.0;      // top-1 L1 similarity seen, 0 when L1 unused/empty
    bool gate_covered = false;  // entity coverage of the L1 top-1
};

/// Fast-path check: serve from L1 alone when its best hit is both close
/// enough and mentions every entity the query asks about.
bool gate(const Query& query, const std::vector<SearchHit>& l1_hits, const MemoryStore& store,
          const SystemConfig& cfg);

/// sim^3 + lambda * entity_overlap + gamma * importance.
double score_candidate(double sim, std::size_t entity_overlap, double importance,
                       const SystemConfig& cfg);

class Reranker {
public:
    virtual ~Reranker() = default;
    virtual double score(const Query& query, const MemoryItem& item) const = 0;
};

/// Token Jaccard plus 1.0 for each query entity the item mentions.
class LexicalReranker final : public Reranker {
public:
    double score(const Query& query, const MemoryItem& item) const override;
};

/// Scores from a `<query_id>\t<fact_id>\t<score>` file; pairs the file does
/// not cover fall back to the lexical score.
class FileReranker final : public Reranker {
public:
    explicit FileReranker(const std::string& path);
    double score(const Query& query, const MemoryItem& item) const override;
    std::size_t loaded_count() const { return scores_.size(); }

private:
    std::unordered_map<std::string, double> scores_;
    LexicalReranker fallback_;
};

struct EngineStats {
    std::uint64_t queries = 0;
    std::uint64_t gate_pass = 0;
    std::uint64_t gate_fail = 0;
    std::uint64_t l2_searches = 0;
};

struct RetrievalDebug {
    std::vector<SearchHit> l1_hits;
    std::vector<SearchHit> l2_hits;
    std::vector<std::pair<FactId, double>> pipeline;  // pre-rerank order, rerank_top long
};

/// Mode-aware query path: route, score, rerank, truncate. Bumps usage of
/// every returned item so retrieval feeds back into eviction decisions.
class RetrievalEngine {
public:
    RetrievalEngine(MemoryStore& store, const EmbeddingProvider& provider,
                    const Reranker* reranker = nullptr);

    RetrievalResult retrieve(const Query& query, RetrievalDebug* debug = nullptr);

    const EngineStats& stats() const { return stats_; }

    /// Swaps ANN search for a full scan of the tier. Slow; only meant for
    /// equivalence checking.
    void set_exhaustive_scan(bool on) { exhaustive_ = on; }

private:
    std::vector<SearchHit> tier_search(Tier tier, const Embedding& qv, std::size_t k) const;

    MemoryStore& store_;
    const EmbeddingProvider& provider_;
    const Reranker* reranker_;
    LexicalReranker default_reranker_;
    EngineStats stats_;
    std::uint64_t next_access_;
    bool exhaustive_ = false;
};

}  // namespace tiermem
