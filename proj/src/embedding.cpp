#include "tiermem/embedding.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tiermem {

namespace {

bool keep_char(unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == ':' || c == '.';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (keep_char(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::uint64_t stable_hash64(std::string_view token) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : token) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    // avalanche so that low bits are usable for bucketing
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

Embedding hash_embed(std::string_view text, std::size_t dim) {
    auto tokens = tokenize(text);
    if (tokens.empty()) throw EmptyText("no tokens in: \"" + std::string(text) + "\"");
    Embedding v(dim, 0.0);
    for (const auto& tok : tokens) {
        std::uint64_t h = stable_hash64(tok);
        std::size_t idx = static_cast<std::size_t>(h % dim);
        double sign = (h & 0x8000000000000000ULL) ? -1.0 : 1.0;
        v[idx] += sign;
    }
    double norm = l2_norm(v);
    if (norm == 0.0) {
        // signs cancelled exactly; fall back to a deterministic unit vector
        v[stable_hash64(tokens.front()) % dim] = 1.0;
        norm = 1.0;
    }
    for (auto& x : v) x /= norm;
    return v;
}

double similarity(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("similarity: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
}

double l2_norm(const Embedding& v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss);
}

PrecomputedEmbeddingProvider::PrecomputedEmbeddingProvider(const std::string& path,
                                                           std::size_t dim)
    : dim_(dim), fallback_(dim) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable("cannot open vector file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": expected <id>\\t<values>");
        }
        std::string id = line.substr(0, tab);
        Embedding v;
        v.reserve(dim);
        std::stringstream values(line.substr(tab + 1));
        std::string field;
        while (std::getline(values, field, ',')) {
            try {
                v.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw MalformedFile(path + ":" + std::to_string(lineno) + ": bad value \"" +
                                    field + "\"");
            }
        }
        if (v.size() != dim) {
            throw DimensionMismatch(path + ":" + std::to_string(lineno) + ": got " +
                                    std::to_string(v.size()) + " values, want " +
                                    std::to_string(dim));
        }
        double norm = l2_norm(v);
        if (std::abs(norm - 1.0) > 1e-3) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": vector norm " +
                                std::to_string(norm) + " is not unit length");
        }
        for (auto& x : v) x /= norm;  // exact unit length after the tolerance check
        vectors_[std::move(id)] = std::move(v);
    }
}

Embedding PrecomputedEmbeddingProvider::embed(const FactId& id, std::string_view text) const {
    auto it = vectors_.find(id);
    if (it != vectors_.end()) return it->second;
    return fallback_.embed(id, text);
}

}  // namespace tiermem
