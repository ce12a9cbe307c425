#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tiermem/common.hpp"

namespace tiermem {

using Embedding = std::vector<double>;

/// Lowercases and splits on anything outside [a-z0-9-_:.], so log tokens
/// like "R02-M1-N0-C:J12-U11" or "core.8" survive as single units.
std::vector<std::string> tokenize(std::string_view text);

/// Stable 64-bit token hash (FNV-1a with an avalanche finisher). Must not
/// change across releases: stored vectors depend on it.
std::uint64_t stable_hash64(std::string_view token);

/// Signed feature hashing into `dim` buckets, L2-normalized.
/// Throws EmptyText when tokenization yields nothing.
Embedding hash_embed(std::string_view text, std::size_t dim);

/// Inner product; callers keep vectors unit-length so this is cosine.
/// Throws DimensionMismatch on length disagreement.
double similarity(const Embedding& a, const Embedding& b);

double l2_norm(const Embedding& v);

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual Embedding embed(const FactId& id, std::string_view text) const = 0;
    virtual std::size_t dimension() const = 0;
};

class HashingEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HashingEmbeddingProvider(std::size_t dim) : dim_(dim) {}
    Embedding embed(const FactId&, std::string_view text) const override {
        return hash_embed(text, dim_);
    }
    std::size_t dimension() const override { return dim_; }

private:
    std::size_t dim_;
};

/// Serves vectors loaded from a `<id>\t<v1>,<v2>,...` file and falls back
/// to hashing for ids the file does not cover.
class PrecomputedEmbeddingProvider final : public EmbeddingProvider {
public:
    PrecomputedEmbeddingProvider(const std::string& path, std::size_t dim);

    Embedding embed(const FactId& id, std::string_view text) const override;
    std::size_t dimension() const override { return dim_; }
    std::size_t loaded_count() const { return vectors_.size(); }

private:
    std::size_t dim_;
    std::unordered_map<std::string, Embedding> vectors_;
    HashingEmbeddingProvider fallback_;
};

}  // namespace tiermem
