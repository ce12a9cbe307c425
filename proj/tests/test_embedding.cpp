#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "support/tempfile.hpp"
#include "tiermem/embedding.hpp"

using namespace tiermem;

TEST_CASE("tokenize lowercases and splits on separators") {
    auto toks = tokenize("Service REPORTED checkpoint");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0] == "service");
    CHECK(toks[1] == "reported");
    CHECK(toks[2] == "checkpoint");

    CHECK(tokenize("hello,world").size() == 2);
    CHECK(tokenize("a\tb\nc  d").size() == 4);
}

TEST_CASE("tokenize keeps identifier punctuation inside tokens") {
    auto toks = tokenize("R02-M1-N0-C:J12-U11 rebooted core.8");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0] == "r02-m1-n0-c:j12-u11");
    CHECK(toks[1] == "rebooted");
    CHECK(toks[2] == "core.8");

    CHECK(tokenize("snake_case stays")[0] == "snake_case");
}

TEST_CASE("tokenize on blank input yields nothing") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("  \t\n ,,, !!").empty());
}

TEST_CASE("stable_hash64 is deterministic and spreads") {
    CHECK(stable_hash64("alpha") == stable_hash64("alpha"));
    CHECK(stable_hash64("alpha") != stable_hash64("beta"));
    CHECK(stable_hash64("alpha") != stable_hash64("alpha "));
    CHECK(stable_hash64("") != stable_hash64("a"));
}

TEST_CASE("hash_embed yields unit vectors deterministically") {
    const char* texts[] = {"daemon logged heartbeat", "x", "one two three four five six"};
    for (const char* t : texts) {
        auto v = hash_embed(t, 64);
        REQUIRE(v.size() == 64);
        CHECK(std::abs(l2_norm(v) - 1.0) < 1e-9);
        CHECK(v == hash_embed(t, 64));
    }
    CHECK(hash_embed("abc", 16).size() == 16);
}

TEST_CASE("hash_embed rejects text with no tokens") {
    CHECK_THROWS_AS(hash_embed("", 64), EmptyText);
    CHECK_THROWS_AS(hash_embed(" ,, ", 64), EmptyText);
}

TEST_CASE("repeated tokens shift the vector") {
    auto once = hash_embed("alpha beta", 64);
    auto twice = hash_embed("alpha alpha beta", 64);
    CHECK(similarity(once, twice) < 1.0 - 1e-6);
}

TEST_CASE("similarity is the inner product") {
    Embedding a = {0.6, 0.8, 0.0, 0.0};
    Embedding b = {0.8, 0.6, 0.0, 0.0};
    CHECK(similarity(a, b) == doctest::Approx(0.96));
    CHECK(similarity(a, a) == doctest::Approx(1.0));

    Embedding short_vec = {1.0, 0.0};
    CHECK_THROWS_AS(similarity(a, short_vec), DimensionMismatch);
}

TEST_CASE("self similarity of a hashed text is one") {
    auto v = hash_embed("gateway dropped session ent-000123", 64);
    CHECK(similarity(v, v) == doctest::Approx(1.0));
}

TEST_CASE("disjoint token sets land far apart on average") {
    double total = 0.0;
    int pairs = 0;
    for (int i = 0; i < 60; ++i) {
        auto a = hash_embed("left-" + std::to_string(i) + " first second", 64);
        auto b = hash_embed("right-" + std::to_string(i) + " third fourth", 64);
        double s = similarity(a, b);
        CHECK(s < 0.95);
        total += std::abs(s);
        ++pairs;
    }
    CHECK(total / pairs < 0.3);
}

TEST_CASE("precomputed provider serves file vectors and falls back") {
    testing::TempDir dir("emb");
    auto path = dir.path("vecs.tsv");
    testing::write_text(path,
                        "f-1\t0.6,0.8,0.0,0.0\n"
                        "f-2\t0.0,0.0,1.0,0.0\n");
    PrecomputedEmbeddingProvider provider(path, 4);
    CHECK(provider.loaded_count() == 2);
    CHECK(provider.dimension() == 4);

    auto v = provider.embed("f-1", "ignored text");
    CHECK(v[0] == doctest::Approx(0.6));
    CHECK(v[1] == doctest::Approx(0.8));
    CHECK(std::abs(l2_norm(v) - 1.0) < 1e-9);

    auto fallback = provider.embed("f-404", "some words");
    CHECK(fallback == hash_embed("some words", 4));
}

TEST_CASE("precomputed provider renormalizes near-unit vectors") {
    testing::TempDir dir("emb");
    auto path = dir.path("vecs.tsv");
    testing::write_text(path, "f-1\t0.6004,0.8001,0.0,0.0\n");
    PrecomputedEmbeddingProvider provider(path, 4);
    CHECK(std::abs(l2_norm(provider.embed("f-1", "x")) - 1.0) < 1e-12);
}

TEST_CASE("precomputed provider rejects bad files") {
    testing::TempDir dir("emb");

    auto wrong_dim = dir.path("dim.tsv");
    testing::write_text(wrong_dim, "f-1\t1.0,0.0\n");
    CHECK_THROWS_AS(PrecomputedEmbeddingProvider(wrong_dim, 4), DimensionMismatch);

    auto off_norm = dir.path("norm.tsv");
    testing::write_text(off_norm, "f-1\t2.0,0.0,0.0,0.0\n");
    CHECK_THROWS_AS(PrecomputedEmbeddingProvider(off_norm, 4), MalformedFile);

    auto junk = dir.path("junk.tsv");
    testing::write_text(junk, "no tab here\n");
    CHECK_THROWS_AS(PrecomputedEmbeddingProvider(junk, 4), MalformedFile);

    CHECK_THROWS_AS(PrecomputedEmbeddingProvider(dir.path("missing.tsv"), 4), FileUnreadable);
}
