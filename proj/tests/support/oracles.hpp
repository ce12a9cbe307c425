#pragma once

// Independent reference implementations used to check the real system.
// Everything here is deliberately brute-force and shares no code with the
// library's search/scoring paths.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "tiermem/ann_index.hpp"
#include "tiermem/retrieval.hpp"

namespace tiermem::testing {

struct ScanEntry {
    FactId id;
    Embedding vec;
    std::uint64_t seq;
};

/// Exact top-k by inner product, descending, ties by earlier seq.
std::vector<SearchHit> linear_top_k(const std::vector<ScanEntry>& entries, const Embedding& query,
                                    std::size_t k);

/// Fraction of exact top-k ids that the candidate list also contains,
/// averaged over queries.
double recall_at_k(const std::vector<std::vector<SearchHit>>& got,
                   const std::vector<std::vector<SearchHit>>& expected, std::size_t k);

struct CascadeCounts {
    std::size_t l1_live = 0;
    std::size_t l2_live = 0;
    std::size_t pruned = 0;
    std::size_t l1_batches = 0;
    std::size_t l2_batches = 0;
};

/// Pure counter simulation of the two-tier batch cascade: no embeddings, no
/// index, no scores. Mirrors the insert-time overflow rules only.
CascadeCounts simulate_cascade(std::size_t n, std::size_t cap1, std::size_t cap2,
                               double fraction);

struct OracleItem {
    FactId id;
    std::string text;
    std::set<std::string> entities;
    double importance = 0.5;
    std::uint64_t seq = 0;
};

/// Standalone retrieval pipeline: similarity over every item, cubic score
/// with entity and importance bonuses, top-20 cut, lexical rerank, top-10.
/// Formulas are written out inline rather than calling library helpers.
std::vector<std::pair<FactId, double>> oracle_pipeline(const Query& query,
                                                       const std::vector<OracleItem>& items,
                                                       std::size_t dim);

}  // namespace tiermem::testing
