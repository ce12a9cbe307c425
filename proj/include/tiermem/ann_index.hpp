#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tiermem/common.hpp"
#include "tiermem/embedding.hpp"

namespace tiermem {

struct SearchHit {
    FactId id;
    double sim;
};

/// Hierarchical navigable small world graph over unit vectors, maximizing
/// inner product. Deletions tombstone the node; tombstoned nodes still act
/// as waypoints during traversal but never appear in results. When more
/// than half of the stored nodes are tombstones the graph is rebuilt from
/// the live set.
class HnswIndex {
public:
    struct Params {
        std::size_t m = 16;
        std::size_t ef_construction = 200;
        std::size_t ef_search_floor = 100;     // effective ef = max(k, floor)
        double rebuild_tombstone_ratio = 0.5;  // rebuild when dead/total exceeds this
        std::uint64_t rng_seed = 0x5eedULL;
    };

    explicit HnswIndex(std::size_t dim);
    HnswIndex(std::size_t dim, Params params);

    /// Throws DuplicateId if `id` is already live, DimensionMismatch on a
    /// wrong-sized vector.
    void insert(const FactId& id, Embedding vec);

    /// Tombstones a live node. Throws UnknownId otherwise.
    void remove(const FactId& id);

    /// Top-k live nodes by similarity, descending; ties broken by earlier
    /// insertion. Returns fewer than k when the index holds fewer live nodes.
    std::vector<SearchHit> search(const Embedding& query, std::size_t k) const;

    bool contains(const FactId& id) const { return live_.count(id) > 0; }
    std::size_t size() const { return live_.size(); }
    std::size_t dim() const { return dim_; }
    std::size_t rebuild_count() const { return rebuilds_; }
    std::size_t tombstone_count() const { return dead_; }

private:
    struct Node {
        FactId id;
        Embedding vec;
        std::uint64_t seq = 0;
        int level = 0;
        bool dead = false;
        std::vector<std::vector<std::uint32_t>> links;  // one list per layer 0..level
    };

    struct Candidate {
        double sim;
        std::uint64_t seq;
        std::uint32_t slot;
    };

    double dot(const Embedding& q, std::uint32_t slot) const;
    int draw_level();
    std::size_t max_links(int layer) const { return layer == 0 ? 2 * params_.m : params_.m; }

    /// Beam search within one layer starting from `entry`. Returns up to `ef`
    /// candidates (live and dead alike), best first.
    std::vector<Candidate> search_layer(const Embedding& q, std::uint32_t entry, std::size_t ef,
                                        int layer) const;

    /// Picks up to `cap` neighbours from `ranked` (best first, sims relative
    /// to the node being linked), preferring candidates that are closer to
    /// that node than to anything already picked. This keeps a few links
    /// pointing out of dense clusters, which plain closest-first pruning
    /// would sever. Leftover slots are filled with the nearest rejects.
    std::vector<Candidate> select_diverse(const std::vector<Candidate>& ranked,
                                          std::size_t cap) const;
    std::uint32_t greedy_descend(const Embedding& q, std::uint32_t start, int from_layer,
                                 int to_layer) const;
    void link(std::uint32_t a, std::uint32_t b, int layer);
    void insert_at(const FactId& id, Embedding vec, std::uint64_t seq);
    void promote_entry();
    void maybe_rebuild();

    std::size_t dim_;
    Params params_;
    double level_factor_;
    SeededRng rng_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> indeg0_;  // inbound layer-0 edges per slot
    std::unordered_map<FactId, std::uint32_t> live_;
    std::int64_t entry_ = -1;
    std::size_t dead_ = 0;
    std::size_t rebuilds_ = 0;
    std::uint64_t next_seq_ = 0;
};

}  // namespace tiermem
