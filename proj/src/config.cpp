#include "tiermem/config.hpp"

namespace tiermem {

void SystemConfig::validate() const {
    if (l1_capacity == 0) throw InvalidConfig("l1_capacity must be positive");
    if (l2_capacity == 0) throw InvalidConfig("l2_capacity must be positive");
    if (evict_fraction <= 0.0 || evict_fraction > 1.0)
        throw InvalidConfig("evict_fraction must be in (0, 1]");
    if (alpha < 0.0 || beta < 0.0) throw InvalidConfig("eviction weights must be non-negative");
    if (lambda < 0.0 || gamma < 0.0) throw InvalidConfig("retrieval weights must be non-negative");
    if (sim_threshold < -1.0 || sim_threshold > 1.0)
        throw InvalidConfig("sim_threshold must be in [-1, 1]");
    if (essential_threshold < 0.0 || essential_threshold > 1.0)
        throw InvalidConfig("essential_threshold must be in [0, 1]");
    if (k1 == 0 || k2 == 0) throw InvalidConfig("candidate pool sizes must be positive");
    if (rerank_top == 0) throw InvalidConfig("rerank_top must be positive");
    if (final_k == 0) throw InvalidConfig("final_k must be positive");
    if (final_k > rerank_top) throw InvalidConfig("final_k must not exceed rerank_top");
    if (dimension == 0) throw InvalidConfig("dimension must be positive");
}

}  // namespace tiermem
