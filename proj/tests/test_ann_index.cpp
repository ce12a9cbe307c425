#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "tiermem/ann_index.hpp"

using namespace tiermem;

namespace {

Embedding random_unit(SeededRng& rng, std::size_t dim) {
    Embedding v(dim);
    double norm = 0.0;
    while (norm == 0.0) {
        for (auto& x : v) x = rng.normal();
        norm = l2_norm(v);
    }
    for (auto& x : v) x /= norm;
    return v;
}

Embedding axis(std::size_t dim, std::size_t i) {
    Embedding v(dim, 0.0);
    v[i] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("search ranks by similarity with insertion-order ties") {
    HnswIndex index(4);
    index.insert("x", axis(4, 0));
    index.insert("y", axis(4, 1));
    index.insert("x-twin", axis(4, 0));

    Embedding q = {0.8, 0.6, 0.0, 0.0};
    auto hits = index.search(q, 3);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].id == "x");  // same sim as x-twin, inserted earlier
    CHECK(hits[0].sim == doctest::Approx(0.8));
    CHECK(hits[1].id == "x-twin");
    CHECK(hits[2].id == "y");
    CHECK(hits[2].sim == doctest::Approx(0.6));
}

TEST_CASE("duplicate and unknown ids are rejected") {
    HnswIndex index(4);
    index.insert("a", axis(4, 0));
    CHECK_THROWS_AS(index.insert("a", axis(4, 1)), DuplicateId);
    CHECK_THROWS_AS(index.insert("b", Embedding{1.0, 0.0}), DimensionMismatch);
    CHECK_THROWS_AS(index.remove("nope"), UnknownId);
    index.remove("a");
    CHECK_THROWS_AS(index.remove("a"), UnknownId);
    index.insert("a", axis(4, 1));  // id is free again once removed
    CHECK(index.contains("a"));
}

TEST_CASE("removed nodes never surface in results") {
    HnswIndex index(8);
    SeededRng rng(7);
    for (int i = 0; i < 40; ++i) index.insert("n" + std::to_string(i), random_unit(rng, 8));
    for (int i = 0; i < 40; i += 3) index.remove("n" + std::to_string(i));

    auto hits = index.search(random_unit(rng, 8), 40);
    CHECK(hits.size() == index.size());
    for (const auto& h : hits) {
        CHECK(index.contains(h.id));
        int num = std::stoi(h.id.substr(1));
        CHECK(num % 3 != 0);
    }
}

TEST_CASE("recall against a linear scan stays high") {
    const std::size_t dim = 16;
    SeededRng rng(123);
    HnswIndex index(dim);
    std::vector<testing::ScanEntry> entries;
    for (int i = 0; i < 300; ++i) {
        auto v = random_unit(rng, dim);
        index.insert("v" + std::to_string(i), v);
        entries.push_back({"v" + std::to_string(i), v, static_cast<std::uint64_t>(i)});
    }

    std::vector<std::vector<SearchHit>> got, expected;
    for (int i = 0; i < 50; ++i) {
        auto q = random_unit(rng, dim);
        got.push_back(index.search(q, 10));
        expected.push_back(testing::linear_top_k(entries, q, 10));
    }
    CHECK(testing::recall_at_k(got, expected, 10) >= 0.95);
}

TEST_CASE("heavy deletion triggers a rebuild and keeps answers exact") {
    const std::size_t dim = 8;
    SeededRng rng(99);
    HnswIndex index(dim);
    std::vector<testing::ScanEntry> entries;
    for (int i = 0; i < 50; ++i) {
        auto v = random_unit(rng, dim);
        index.insert("v" + std::to_string(i), v);
        if (i >= 26) entries.push_back({"v" + std::to_string(i), v, static_cast<std::uint64_t>(i)});
    }
    for (int i = 0; i < 26; ++i) index.remove("v" + std::to_string(i));

    CHECK(index.rebuild_count() >= 1);
    CHECK(index.tombstone_count() == 0);
    CHECK(index.size() == 24);

    std::vector<std::vector<SearchHit>> got, expected;
    for (int i = 0; i < 30; ++i) {
        auto q = random_unit(rng, dim);
        got.push_back(index.search(q, 5));
        expected.push_back(testing::linear_top_k(entries, q, 5));
    }
    CHECK(testing::recall_at_k(got, expected, 5) >= 0.95);
}

TEST_CASE("rebuild threshold is strictly more than half") {
    HnswIndex index(4);
    for (int i = 0; i < 10; ++i) index.insert("n" + std::to_string(i), axis(4, i % 4));
    for (int i = 0; i < 5; ++i) index.remove("n" + std::to_string(i));
    CHECK(index.rebuild_count() == 0);  // 5/10 is not past the ratio
    index.remove("n5");
    CHECK(index.rebuild_count() == 1);
    CHECK(index.tombstone_count() == 0);
    CHECK(index.size() == 4);
}

TEST_CASE("same inputs give the same index answers") {
    const std::size_t dim = 8;
    HnswIndex a(dim), b(dim);
    SeededRng rng(5);
    std::vector<Embedding> vecs;
    for (int i = 0; i < 80; ++i) vecs.push_back(random_unit(rng, dim));
    for (int i = 0; i < 80; ++i) {
        a.insert("n" + std::to_string(i), vecs[i]);
        b.insert("n" + std::to_string(i), vecs[i]);
    }
    for (int i = 0; i < 20; ++i) {
        auto q = random_unit(rng, dim);
        auto ha = a.search(q, 7);
        auto hb = b.search(q, 7);
        REQUIRE(ha.size() == hb.size());
        for (std::size_t j = 0; j < ha.size(); ++j) CHECK(ha[j].id == hb[j].id);
    }
}

TEST_CASE("small and empty indexes behave") {
    HnswIndex index(4);
    CHECK(index.search(axis(4, 0), 5).empty());

    index.insert("only", axis(4, 0));
    auto hits = index.search(axis(4, 0), 10);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].id == "only");

    index.remove("only");
    CHECK(index.search(axis(4, 0), 10).empty());
    CHECK(index.size() == 0);

    index.insert("again", axis(4, 1));
    REQUIRE(index.search(axis(4, 1), 1).size() == 1);
}
