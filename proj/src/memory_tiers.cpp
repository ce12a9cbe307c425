#include "tiermem/memory_tiers.hpp"

#include <algorithm>
#include <cmath>

namespace tiermem {

double eviction_score(const MemoryItem& item, const SystemConfig& cfg) {
    double usage_term = std::min(static_cast<double>(item.usage) / 10.0, 1.0);
    return cfg.alpha * item.fact.importance + cfg.beta * usage_term;
}

void LossLedger::record(const MemoryItem& item, Tier from, std::uint64_t at_seq,
                        double essential_threshold) {
    entries_.push_back({item.fact.id, item.fact.importance, from, at_seq});
    deleted_.insert(item.fact.id);
    if (item.fact.importance >= essential_threshold) ++essential_lost_;
}

void LossLedger::write_csv(std::ostream& out) const {
    out << "fact_id,importance,evicted_from,deleted_at_seq\n";
    for (const auto& e : entries_) {
        out << e.id << ',' << format_fixed(e.importance) << ',' << to_string(e.evicted_from)
            << ',' << e.deleted_at_seq << '\n';
    }
}

MemoryStore::MemoryStore(SystemConfig cfg, const EmbeddingProvider& provider)
    : cfg_(cfg), provider_(provider) {
    cfg_.validate();
    if (provider.dimension() != cfg_.dimension) {
        throw DimensionMismatch("provider dim " + std::to_string(provider.dimension()) +
                                " vs config dim " + std::to_string(cfg_.dimension));
    }
    HnswIndex::Params p;
    l1_ = std::make_unique<HnswIndex>(cfg_.dimension, p);
    p.rng_seed = 0x5eed + 1;
    l2_ = std::make_unique<HnswIndex>(cfg_.dimension, p);
}

std::size_t MemoryStore::batch_size(Tier tier) const {
    return static_cast<std::size_t>(
        std::ceil(cfg_.evict_fraction * static_cast<double>(capacity(tier))));
}

void MemoryStore::insert_fact(const Fact& fact) {
    if (seen_ids_.count(fact.id)) throw DuplicateFact("fact ingested twice: " + fact.id);

    MemoryItem item;
    item.fact = fact;
    item.embedding = provider_.embed(fact.id, fact.text);
    item.usage = 0;
    item.last_access = fact.seq;
    item.tier = Tier::L1;
    item.sorted_tokens = tokenize(fact.text);
    std::sort(item.sorted_tokens.begin(), item.sorted_tokens.end());
    item.sorted_tokens.erase(std::unique(item.sorted_tokens.begin(), item.sorted_tokens.end()),
                             item.sorted_tokens.end());

    if (cfg_.mode != Mode::OracleUnbounded && live_count(Tier::L1) == cfg_.l1_capacity) {
        spill_to_l2(evict_batch(Tier::L1), fact.seq);
    }

    l1_->insert(fact.id, item.embedding);
    items_.emplace(fact.id, std::move(item));
    seen_ids_.insert(fact.id);
    ++ingested_;
}

std::vector<MemoryItem> MemoryStore::evict_batch(Tier tier) {
    if (live_count(tier) != capacity(tier)) {
        throw NotAtCapacity(std::string(to_string(tier)) + " holds " +
                            std::to_string(live_count(tier)) + " of " +
                            std::to_string(capacity(tier)));
    }

    struct Ranked {
        double key;
        std::uint64_t seq;
        const FactId* id;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(live_count(tier));
    bool lru = cfg_.mode == Mode::Lru;
    for (const auto& [id, item] : items_) {
        if (item.tier != tier) continue;
        double key = lru ? static_cast<double>(item.last_access) : eviction_score(item, cfg_);
        ranked.push_back({key, item.fact.seq, &id});
    }
    std::size_t batch = std::min(batch_size(tier), ranked.size());
    auto lowest_first = [](const Ranked& a, const Ranked& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.seq < b.seq;
    };
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(batch),
                      ranked.end(), lowest_first);

    std::vector<MemoryItem> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
        auto it = items_.find(*ranked[i].id);
        (tier == Tier::L1 ? l1_ : l2_)->remove(it->first);
        out.push_back(std::move(it->second));
        items_.erase(it);
    }
    return out;
}

void MemoryStore::spill_to_l2(std::vector<MemoryItem> batch, std::uint64_t at_seq) {
    for (auto& item : batch) {
        if (live_count(Tier::L2) == cfg_.l2_capacity) {
            for (const auto& dead : evict_batch(Tier::L2)) {
                ledger_.record(dead, Tier::L2, at_seq, cfg_.essential_threshold);
            }
        }
        item.tier = Tier::L2;
        l2_->insert(item.fact.id, item.embedding);
        items_.emplace(item.fact.id, std::move(item));
    }
}

void MemoryStore::touch(const FactId& id, std::uint64_t access_seq) {
    auto it = items_.find(id);
    if (it == items_.end()) {
        if (ledger_.contains(id)) return;  // deleted items no longer track usage
        throw UnknownId("touch: " + id);
    }
    ++it->second.usage;
    it->second.last_access = access_seq;
}

Residency MemoryStore::residency(const FactId& id) const {
    auto it = items_.find(id);
    if (it != items_.end()) return it->second.tier == Tier::L1 ? Residency::L1 : Residency::L2;
    if (ledger_.contains(id)) return Residency::Deleted;
    return Residency::Unknown;
}

const MemoryItem* MemoryStore::find(const FactId& id) const {
    auto it = items_.find(id);
    return it == items_.end() ? nullptr : &it->second;
}

std::vector<const MemoryItem*> MemoryStore::all_items() const {
    std::vector<const MemoryItem*> out;
    out.reserve(items_.size());
    for (const auto& [id, item] : items_) out.push_back(&item);
    return out;
}

}  // namespace tiermem
