#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tiermem/ann_index.hpp"
#include "tiermem/config.hpp"
#include "tiermem/embedding.hpp"

namespace tiermem {

struct Fact {
    FactId id;
    std::string text;
    std::set<std::string> entities;
    double importance = 0.5;
    std::uint64_t seq = 0;
    Source source = Source::Synthetic;
};

struct MemoryItem {
    Fact fact;
    Embedding embedding;
    std::uint64_t usage = 0;
    std::uint64_t last_access = 0;
    Tier tier = Tier::L1;
    std::vector<std::string> sorted_tokens;  // cached for lexical overlap
};

/// Retention value of an item: alpha * importance + beta * min(usage/10, 1).
double eviction_score(const MemoryItem& item, const SystemConfig& cfg);

struct LedgerEntry {
    FactId id;
    double importance;
    Tier evicted_from;
    std::uint64_t deleted_at_seq;
};

/// Records permanent deletions only (spills from L1 into L2 do not count).
class LossLedger {
public:
    void record(const MemoryItem& item, Tier from, std::uint64_t at_seq, double essential_threshold);

    std::size_t pruned_total() const { return entries_.size(); }
    std::size_t essential_lost() const { return essential_lost_; }
    bool contains(const FactId& id) const { return deleted_.count(id) > 0; }
    const std::vector<LedgerEntry>& entries() const { return entries_; }

    void write_csv(std::ostream& out) const;

private:
    std::vector<LedgerEntry> entries_;
    std::unordered_set<FactId> deleted_;
    std::size_t essential_lost_ = 0;
};

/// Two bounded tiers over one item table. Inserts land in L1; when a tier is
/// full a batch of the lowest-value items moves down (L1) or is deleted for
/// good (L2). In Mode::OracleUnbounded the L1 tier is unbounded and nothing
/// is ever evicted.
class MemoryStore {
public:
    MemoryStore(SystemConfig cfg, const EmbeddingProvider& provider);

    /// Throws DuplicateFact when a fact id was ever ingested before.
    void insert_fact(const Fact& fact);

    /// Removes and returns the eviction batch for `tier`, lowest value first.
    /// The caller decides where the batch goes. Requires the tier to be at
    /// capacity, else throws NotAtCapacity.
    std::vector<MemoryItem> evict_batch(Tier tier);

    /// Bumps usage and last_access. Unknown id throws UnknownId unless the
    /// id was deleted earlier, which is a silent no-op.
    void touch(const FactId& id, std::uint64_t access_seq);

    Residency residency(const FactId& id) const;
    const MemoryItem* find(const FactId& id) const;  // nullptr when not resident

    const HnswIndex& index(Tier tier) const { return tier == Tier::L1 ? *l1_ : *l2_; }
    std::size_t live_count(Tier tier) const { return index(tier).size(); }
    std::size_t live_total() const { return items_.size(); }
    std::size_t ingested_count() const { return ingested_; }
    std::size_t capacity(Tier tier) const {
        return tier == Tier::L1 ? cfg_.l1_capacity : cfg_.l2_capacity;
    }

    const LossLedger& ledger() const { return ledger_; }
    const SystemConfig& config() const { return cfg_; }

    /// Every live item, for exhaustive-scan checks. Order is unspecified.
    std::vector<const MemoryItem*> all_items() const;

private:
    std::size_t batch_size(Tier tier) const;
    void spill_to_l2(std::vector<MemoryItem> batch, std::uint64_t at_seq);

    SystemConfig cfg_;
    const EmbeddingProvider& provider_;
    std::unique_ptr<HnswIndex> l1_;
    std::unique_ptr<HnswIndex> l2_;
    std::unordered_map<FactId, MemoryItem> items_;
    std::unordered_set<FactId> seen_ids_;
    LossLedger ledger_;
    std::size_t ingested_ = 0;
};

}  // namespace tiermem
