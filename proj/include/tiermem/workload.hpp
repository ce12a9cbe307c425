#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tiermem/memory_tiers.hpp"
#include "tiermem/retrieval.hpp"

namespace tiermem {

struct Scenario {
    std::size_t n_facts = 15000;
    std::size_t l1_capacity = 500;
    std::size_t l2_capacity = 5000;
    std::uint64_t seed = 42;
    double essential_keyword_prob = 0.25;
    std::vector<std::string> keywords = {"panic", "fatal", "critical", "corruption"};
};

struct Dataset {
    std::vector<Fact> facts;
    std::vector<Query> queries;
};

/// Which cohort a query measuring fact `gold_seq` belongs to: the last 100
/// ingested facts are active, the first 100 are history.
Cohort cohort_for(std::uint64_t gold_seq, std::size_t n_facts);

/// Stream of n templated facts, each carrying a unique `ent-%06d` entity, and
/// one query per fact targeting it. Roughly essential_keyword_prob of the
/// facts embed an alarm keyword and get importance 0.95 instead of 0.5.
/// Pure function of the scenario: same seed, same bytes.
Dataset generate_synthetic(const Scenario& scn);  // throws InvalidScenario

/// Tokens that look like identifiers: contain a digit, or an internal '-' or
/// ':' with alphanumerics on both sides. Lowercased.
std::set<std::string> extract_entities(std::string_view text);

struct BglParseResult {
    std::vector<Fact> facts;
    std::size_t malformed_lines = 0;
};

/// Space-separated BGL records: label, epoch, date, node, timestamp, node,
/// type, component, level, free text. Keeps level + component + content as
/// the fact text; entities come from the node id and the content. Lines with
/// fewer than nine fields are skipped and counted.
BglParseResult parse_bgl(const std::string& path, std::size_t limit,
                         const std::vector<std::string>& keywords = {"panic", "fatal", "critical",
                                                                     "corruption"});

/// One query per entity-bearing fact: its entities plus the first few
/// non-entity tokens of the text.
std::vector<Query> make_bgl_queries(const std::vector<Fact>& facts);

void write_facts_tsv(const std::string& path, const std::vector<Fact>& facts);
std::vector<Fact> read_facts_tsv(const std::string& path);
void write_queries_tsv(const std::string& path, const std::vector<Query>& queries);
std::vector<Query> read_queries_tsv(const std::string& path, const std::vector<Fact>& facts);

}  // namespace tiermem
