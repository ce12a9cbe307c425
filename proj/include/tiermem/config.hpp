#pragma once

#include <cstddef>
#include <cstdint>

#include "tiermem/common.hpp"

namespace tiermem {

/// Knobs shared by the store, the retrieval engine and the evaluation
/// harness. Defaults are the reference operating point.
struct SystemConfig {
    std::size_t l1_capacity = 500;
    std::size_t l2_capacity = 5000;
    double evict_fraction = 0.15;

    // eviction score weights
    double alpha = 0.75;
    double beta = 0.25;

    // retrieval score weights
    double lambda = 0.8;
    double gamma = 0.1;

    double sim_threshold = 0.84;
    double essential_threshold = 0.85;

    std::size_t k1 = 100;
    std::size_t k2 = 200;
    std::size_t rerank_top = 20;
    std::size_t final_k = 10;

    std::size_t dimension = 64;
    Mode mode = Mode::Full;
    std::uint64_t seed = 42;

    void validate() const;  // throws InvalidConfig
};

}  // namespace tiermem
