#include "tiermem/ann_index.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace tiermem {

HnswIndex::HnswIndex(std::size_t dim) : HnswIndex(dim, Params()) {}

HnswIndex::HnswIndex(std::size_t dim, Params params)
    : dim_(dim),
      params_(params),
      level_factor_(1.0 / std::log(static_cast<double>(params.m))),
      rng_(params.rng_seed) {}

double HnswIndex::dot(const Embedding& q, std::uint32_t slot) const {
    const Embedding& v = nodes_[slot].vec;
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += q[i] * v[i];
    return s;
}

int HnswIndex::draw_level() {
    double u = rng_.uniform();
    if (u <= 0.0) u = 0.5;
    int level = static_cast<int>(-std::log(u) * level_factor_);
    return std::min(level, 32);
}

void HnswIndex::insert(const FactId& id, Embedding vec) {
    insert_at(id, std::move(vec), next_seq_++);
}

void HnswIndex::insert_at(const FactId& id, Embedding vec, std::uint64_t seq) {
    if (live_.count(id)) throw DuplicateId("already indexed: " + id);
    if (vec.size() != dim_) {
        throw DimensionMismatch("insert: " + std::to_string(vec.size()) + " vs " +
                                std::to_string(dim_));
    }
    int level = draw_level();
    auto slot = static_cast<std::uint32_t>(nodes_.size());
    Node node;
    node.id = id;
    node.vec = std::move(vec);
    node.seq = seq;
    node.level = level;
    node.links.resize(static_cast<std::size_t>(level) + 1);
    nodes_.push_back(std::move(node));
    indeg0_.push_back(0);
    live_[id] = slot;

    if (entry_ < 0) {
        entry_ = slot;
        return;
    }

    const Embedding& q = nodes_[slot].vec;
    int top = nodes_[static_cast<std::size_t>(entry_)].level;
    auto cur = static_cast<std::uint32_t>(entry_);
    if (top > level) cur = greedy_descend(q, cur, top, level + 1);

    for (int layer = std::min(top, level); layer >= 0; --layer) {
        auto cands = search_layer(q, cur, params_.ef_construction, layer);
        for (const auto& pick : select_diverse(cands, params_.m)) {
            link(slot, pick.slot, layer);
            link(pick.slot, slot, layer);
        }
        cur = cands.front().slot;
    }
    if (level > top) entry_ = slot;
}

std::vector<HnswIndex::Candidate> HnswIndex::select_diverse(const std::vector<Candidate>& ranked,
                                                            std::size_t cap) const {
    std::vector<Candidate> chosen;
    std::vector<Candidate> rejected;
    for (const auto& c : ranked) {
        if (chosen.size() >= cap) break;
        bool shadowed = false;
        for (const auto& s : chosen) {
            const Embedding& cv = nodes_[c.slot].vec;
            const Embedding& sv = nodes_[s.slot].vec;
            double to_pick = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) to_pick += cv[i] * sv[i];
            if (to_pick > c.sim) {
                shadowed = true;
                break;
            }
        }
        if (shadowed) {
            rejected.push_back(c);
        } else {
            chosen.push_back(c);
        }
    }
    for (const auto& c : rejected) {
        if (chosen.size() >= cap) break;
        chosen.push_back(c);
    }
    return chosen;
}

void HnswIndex::link(std::uint32_t from, std::uint32_t to, int layer) {
    auto& edges = nodes_[from].links[static_cast<std::size_t>(layer)];
    edges.push_back(to);
    if (layer == 0) ++indeg0_[to];
    std::size_t cap = max_links(layer);
    if (edges.size() <= cap) return;
    const Embedding& q = nodes_[from].vec;
    std::vector<Candidate> ranked;
    ranked.reserve(edges.size());
    for (auto e : edges) ranked.push_back({dot(q, e), nodes_[e].seq, e});
    std::sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.seq < b.seq;
    });
    auto kept = select_diverse(ranked, cap);

    if (layer == 0) {
        // Dropping a node's only inbound edge would strand it for every
        // future traversal, so such edges are kept even over the cap.
        auto in_kept = [&kept](std::uint32_t slot) {
            for (const auto& k : kept) {
                if (k.slot == slot) return true;
            }
            return false;
        };
        for (const auto& r : ranked) {
            if (!in_kept(r.slot) && indeg0_[r.slot] <= 1) kept.push_back(r);
        }
        while (kept.size() > cap) {
            std::size_t victim = kept.size();
            for (std::size_t i = 0; i < kept.size(); ++i) {
                if (indeg0_[kept[i].slot] <= 1) continue;
                if (victim == kept.size() || kept[i].sim < kept[victim].sim ||
                    (kept[i].sim == kept[victim].sim && kept[i].seq > kept[victim].seq)) {
                    victim = i;
                }
            }
            if (victim == kept.size()) break;
            kept.erase(kept.begin() + victim);
        }
    }

    edges.clear();
    for (const auto& k : kept) edges.push_back(k.slot);
    if (layer == 0) {
        for (const auto& r : ranked) {
            bool still = false;
            for (auto e : edges) {
                if (e == r.slot) {
                    still = true;
                    break;
                }
            }
            if (!still) --indeg0_[r.slot];
        }
    }
}

std::uint32_t HnswIndex::greedy_descend(const Embedding& q, std::uint32_t start, int from_layer,
                                        int to_layer) const {
    std::uint32_t cur = start;
    double cur_sim = dot(q, cur);
    for (int layer = from_layer; layer >= to_layer; --layer) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (auto nb : nodes_[cur].links[static_cast<std::size_t>(layer)]) {
                double s = dot(q, nb);
                if (s > cur_sim) {
                    cur_sim = s;
                    cur = nb;
                    moved = true;
                }
            }
        }
    }
    return cur;
}

std::vector<HnswIndex::Candidate> HnswIndex::search_layer(const Embedding& q, std::uint32_t entry,
                                                          std::size_t ef, int layer) const {
    auto explore_less = [](const Candidate& a, const Candidate& b) {
        if (a.sim != b.sim) return a.sim < b.sim;
        return a.seq > b.seq;
    };
    auto keep_less = [](const Candidate& a, const Candidate& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.seq < b.seq;
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(explore_less)> frontier(
        explore_less);
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(keep_less)> best(keep_less);

    std::vector<char> visited(nodes_.size(), 0);
    visited[entry] = 1;
    Candidate first{dot(q, entry), nodes_[entry].seq, entry};
    frontier.push(first);
    best.push(first);

    while (!frontier.empty()) {
        Candidate c = frontier.top();
        if (best.size() >= ef && c.sim < best.top().sim) break;
        frontier.pop();
        for (auto nb : nodes_[c.slot].links[static_cast<std::size_t>(layer)]) {
            if (visited[nb]) continue;
            visited[nb] = 1;
            Candidate cn{dot(q, nb), nodes_[nb].seq, nb};
            if (best.size() < ef || cn.sim >= best.top().sim) {
                frontier.push(cn);
                best.push(cn);
                if (best.size() > ef) best.pop();
            }
        }
    }

    std::vector<Candidate> out;
    out.reserve(best.size());
    while (!best.empty()) {
        out.push_back(best.top());
        best.pop();
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.seq < b.seq;
    });
    return out;
}

std::vector<SearchHit> HnswIndex::search(const Embedding& query, std::size_t k) const {
    if (query.size() != dim_) {
        throw DimensionMismatch("search: " + std::to_string(query.size()) + " vs " +
                                std::to_string(dim_));
    }
    if (k == 0 || live_.empty()) return {};

    std::size_t ef = std::max(k, params_.ef_search_floor);
    auto cur = static_cast<std::uint32_t>(entry_);
    cur = greedy_descend(query, cur, nodes_[cur].level, 1);

    // Layer-0 beam. Tombstoned nodes are traversed but only live ones are
    // collected, so heavy deletion does not starve the result set.
    auto explore_less = [](const Candidate& a, const Candidate& b) {
        if (a.sim != b.sim) return a.sim < b.sim;
        return a.seq > b.seq;
    };
    auto keep_less = [](const Candidate& a, const Candidate& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.seq < b.seq;
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(explore_less)> frontier(
        explore_less);
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(keep_less)> live_best(
        keep_less);

    std::vector<char> visited(nodes_.size(), 0);
    visited[cur] = 1;
    Candidate c0{dot(query, cur), nodes_[cur].seq, cur};
    frontier.push(c0);
    if (!nodes_[cur].dead) live_best.push(c0);

    while (!frontier.empty()) {
        Candidate c = frontier.top();
        if (live_best.size() >= ef && c.sim < live_best.top().sim) break;
        frontier.pop();
        for (auto nb : nodes_[c.slot].links[0]) {
            if (visited[nb]) continue;
            visited[nb] = 1;
            Candidate cn{dot(query, nb), nodes_[nb].seq, nb};
            if (live_best.size() < ef || cn.sim >= live_best.top().sim) {
                frontier.push(cn);
                if (!nodes_[nb].dead) {
                    live_best.push(cn);
                    if (live_best.size() > ef) live_best.pop();
                }
            }
        }
    }

    std::vector<Candidate> hits;
    hits.reserve(live_best.size());
    while (!live_best.empty()) {
        hits.push_back(live_best.top());
        live_best.pop();
    }
    std::sort(hits.begin(), hits.end(), [](const Candidate& a, const Candidate& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.seq < b.seq;
    });
    if (hits.size() > k) hits.resize(k);

    std::vector<SearchHit> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back({nodes_[h.slot].id, h.sim});
    return out;
}

void HnswIndex::remove(const FactId& id) {
    auto it = live_.find(id);
    if (it == live_.end()) throw UnknownId("not indexed: " + id);
    std::uint32_t slot = it->second;
    nodes_[slot].dead = true;
    live_.erase(it);
    ++dead_;
    if (entry_ == static_cast<std::int64_t>(slot)) promote_entry();
    maybe_rebuild();
}

void HnswIndex::promote_entry() {
    entry_ = -1;
    int best_level = -1;
    std::uint64_t best_seq = 0;
    for (const auto& [id, slot] : live_) {
        const Node& n = nodes_[slot];
        if (n.level > best_level ||
            (n.level == best_level && n.seq < best_seq)) {
            best_level = n.level;
            best_seq = n.seq;
            entry_ = slot;
        }
    }
}

void HnswIndex::maybe_rebuild() {
    if (nodes_.empty()) return;
    double ratio = static_cast<double>(dead_) / static_cast<double>(nodes_.size());
    if (ratio <= params_.rebuild_tombstone_ratio) return;

    std::vector<Node> old;
    old.swap(nodes_);
    live_.clear();
    indeg0_.clear();
    entry_ = -1;
    dead_ = 0;
    ++rebuilds_;

    std::sort(old.begin(), old.end(), [](const Node& a, const Node& b) { return a.seq < b.seq; });
    for (auto& n : old) {
        if (n.dead) continue;
        insert_at(n.id, std::move(n.vec), n.seq);  // original seq keeps tie-breaks stable
    }
}

}  // namespace tiermem
