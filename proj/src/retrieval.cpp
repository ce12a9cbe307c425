#include "tiermem/retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tiermem {

namespace {

std::vector<std::string> sorted_unique_tokens(std::string_view text) {
    auto toks = tokenize(text);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    return toks;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        int c = a[i].compare(b[j]);
        if (c == 0) {
            ++inter;
            ++i;
            ++j;
        } else if (c < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::size_t entity_overlap(const std::set<std::string>& query_entities,
                           const std::set<std::string>& fact_entities) {
    std::size_t n = 0;
    for (const auto& e : query_entities) n += fact_entities.count(e);
    return n;
}

}  // namespace

const char* to_string(Route route) {
    switch (route) {
        case Route::L1Only: return "l1_only";
        case Route::L1PlusL2: return "l1_plus_l2";
        case Route::Flat: return "flat";
    }
    return "unknown";
}

bool gate(const Query& query, const std::vector<SearchHit>& l1_hits, const MemoryStore& store,
          const SystemConfig& cfg) {
    if (l1_hits.empty()) return false;
    const SearchHit& top = l1_hits.front();
    if (top.sim < cfg.sim_threshold) return false;
    const MemoryItem* item = store.find(top.id);
    if (!item) return false;
    return entity_overlap(query.entities, item->fact.entities) == query.entities.size();
}

double score_candidate(double sim, std::size_t overlap, double importance,
                       const SystemConfig& cfg) {
    return sim * sim * sim + cfg.lambda * static_cast<double>(overlap) +
           cfg.gamma * importance;
}

double LexicalReranker::score(const Query& query, const MemoryItem& item) const {
    double s = jaccard(sorted_unique_tokens(query.text), item.sorted_tokens);
    for (const auto& e : query.entities) {
        if (item.fact.entities.count(e)) s += 1.0;
    }
    return s;
}

FileReranker::FileReranker(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable("cannot open rerank score file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string qid;
        std::string fid;
        std::string value;
        if (!std::getline(row, qid, '\t') || !std::getline(row, fid, '\t') ||
            !std::getline(row, value, '\t')) {
            throw MalformedFile(path + ":" + std::to_string(lineno) +
                                ": expected <query_id>\\t<fact_id>\\t<score>");
        }
        try {
            scores_[qid + '\t' + fid] = std::stod(value);
        } catch (const std::exception&) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": bad score \"" + value +
                                "\"");
        }
    }
}

double FileReranker::score(const Query& query, const MemoryItem& item) const {
    auto it = scores_.find(query.id + '\t' + item.fact.id);
    if (it != scores_.end()) return it->second;
    return fallback_.score(query, item);
}

RetrievalEngine::RetrievalEngine(MemoryStore& store, const EmbeddingProvider& provider,
                                 const Reranker* reranker)
    : store_(store),
      provider_(provider),
      reranker_(reranker ? reranker : &default_reranker_),
      next_access_(store.ingested_count()) {}

std::vector<SearchHit> RetrievalEngine::tier_search(Tier tier, const Embedding& qv,
                                                    std::size_t k) const {
    if (!exhaustive_) return store_.index(tier).search(qv, k);

    struct Row {
        const MemoryItem* item;
        double sim;
    };
    std::vector<Row> rows;
    for (const MemoryItem* item : store_.all_items()) {
        if (item->tier != tier) continue;
        rows.push_back({item, similarity(qv, item->embedding)});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.item->fact.seq < b.item->fact.seq;
    });
    if (rows.size() > k) rows.resize(k);
    std::vector<SearchHit> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back({r.item->fact.id, r.sim});
    return out;
}

RetrievalResult RetrievalEngine::retrieve(const Query& query, RetrievalDebug* debug) {
    auto t0 = std::chrono::steady_clock::now();
    ++stats_.queries;
    if (next_access_ < store_.ingested_count()) next_access_ = store_.ingested_count();
    std::uint64_t access_seq = next_access_++;

    const SystemConfig& cfg = store_.config();
    Embedding qv = provider_.embed(query.id, query.text);

    RetrievalResult result;
    std::vector<SearchHit> pool;

    if (cfg.mode == Mode::OracleUnbounded) {
        result.route = Route::Flat;
        pool = tier_search(Tier::L1, qv, cfg.k2);
        if (debug) debug->l1_hits = pool;
    } else {
        auto l1_hits = tier_search(Tier::L1, qv, cfg.k1);
        if (debug) debug->l1_hits = l1_hits;
        if (!l1_hits.empty()) {
            result.gate_sim = l1_hits.front().sim;
            if (const MemoryItem* top = store_.find(l1_hits.front().id)) {
                result.gate_covered =
                    entity_overlap(query.entities, top->fact.entities) == query.entities.size();
            }
        }
        if (cfg.mode == Mode::NoGate) {
            result.route = Route::L1Only;
            pool = std::move(l1_hits);
        } else if (gate(query, l1_hits, store_, cfg)) {
            ++stats_.gate_pass;
            result.route = Route::L1Only;
            pool = std::move(l1_hits);
        } else {
            ++stats_.gate_fail;
            ++stats_.l2_searches;
            result.route = Route::L1PlusL2;
            auto l2_hits = tier_search(Tier::L2, qv, cfg.k2);
            if (debug) debug->l2_hits = l2_hits;
            pool = std::move(l1_hits);
            pool.insert(pool.end(), l2_hits.begin(), l2_hits.end());
        }
    }

    struct Scored {
        const MemoryItem* item;
        double score;
    };
    std::vector<Scored> scored;
    scored.reserve(pool.size());
    for (const auto& hit : pool) {
        const MemoryItem* item = store_.find(hit.id);
        if (!item) continue;  // tiers are disjoint, so this only skips stale hits
        std::size_t overlap = entity_overlap(query.entities, item->fact.entities);
        scored.push_back({item, score_candidate(hit.sim, overlap, item->fact.importance, cfg)});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.item->fact.seq < b.item->fact.seq;
    });
    if (scored.size() > cfg.rerank_top) scored.resize(cfg.rerank_top);

    if (debug) {
        debug->pipeline.clear();
        for (const auto& s : scored) debug->pipeline.emplace_back(s.item->fact.id, s.score);
    }

    if (cfg.mode != Mode::NoCe) {
        for (auto& s : scored) s.score = reranker_->score(query, *s.item);
        // stable: rerank ties keep the candidate-score order
        std::stable_sort(scored.begin(), scored.end(),
                         [](const Scored& a, const Scored& b) { return a.score > b.score; });
    }
    if (scored.size() > cfg.final_k) scored.resize(cfg.final_k);

    result.ranked.reserve(scored.size());
    for (const auto& s : scored) {
        result.ranked.emplace_back(s.item->fact.id, s.score);
        store_.touch(s.item->fact.id, access_seq);
    }

    auto t1 = std::chrono::steady_clock::now();
    result.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return result;
}

}  // namespace tiermem
