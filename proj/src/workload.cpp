#include "tiermem/workload.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tiermem {

namespace {

struct Shape {
    const char* lead;
    const char* verb;
    const char* tail;
};

// Four plain words per fact keep the paired query (entity + verb + tail)
// close enough to pass the similarity gate while staying lexically varied.
constexpr Shape kShapes[] = {
    {"service", "reported", "checkpoint"}, {"daemon", "logged", "heartbeat"},
    {"worker", "emitted", "snapshot"},     {"module", "flagged", "rollback"},
    {"monitor", "observed", "latency"},    {"scheduler", "queued", "restart"},
    {"gateway", "dropped", "session"},     {"cache", "refreshed", "segment"},
    {"router", "traced", "packet"},        {"sensor", "measured", "drift"},
};
constexpr std::size_t kShapeCount = sizeof(kShapes) / sizeof(kShapes[0]);

std::string entity_token(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ent-%06zu", i);
    return buf;
}

std::string numbered_id(const char* prefix, std::size_t i) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s-%06zu", prefix, i);
    return buf;
}

std::string sanitize(std::string_view text) {
    std::string out(text);
    std::replace(out.begin(), out.end(), '\t', ' ');
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

}  // namespace

Cohort cohort_for(std::uint64_t gold_seq, std::size_t n_facts) {
    if (gold_seq + 100 >= n_facts) return Cohort::Active;
    if (gold_seq < 100) return Cohort::History;
    return Cohort::Other;
}

Dataset generate_synthetic(const Scenario& scn) {
    if (scn.n_facts == 0) throw InvalidScenario("n_facts must be positive");
    if (scn.keywords.empty()) throw InvalidScenario("keyword list must be non-empty");

    SeededRng rng(scn.seed);
    Dataset ds;
    ds.facts.reserve(scn.n_facts);
    ds.queries.reserve(scn.n_facts);

    for (std::size_t i = 0; i < scn.n_facts; ++i) {
        const Shape& shape = kShapes[rng.below(kShapeCount)];
        bool essential = rng.bernoulli(scn.essential_keyword_prob);
        std::string ent = entity_token(i);

        Fact f;
        f.id = numbered_id("f", i);
        f.seq = i;
        f.source = Source::Synthetic;
        f.importance = essential ? 0.95 : 0.5;
        if (essential) {
            const std::string& kw = scn.keywords[rng.below(scn.keywords.size())];
            f.text = std::string(shape.lead) + ' ' + ent + ' ' + kw + ' ' + shape.verb + ' ' +
                     shape.tail;
        } else {
            f.text = std::string(shape.lead) + ' ' + ent + ' ' + shape.verb + ' ' + shape.tail;
        }
        f.entities = extract_entities(f.text);

        Query q;
        q.id = numbered_id("q", i);
        q.seq = i;
        q.text = ent + ' ' + shape.verb + ' ' + shape.tail;
        q.entities = extract_entities(q.text);
        q.gold_id = f.id;
        q.cohort = cohort_for(i, scn.n_facts);

        ds.facts.push_back(std::move(f));
        ds.queries.push_back(std::move(q));
    }
    return ds;
}

std::set<std::string> extract_entities(std::string_view text) {
    std::set<std::string> out;
    for (const auto& tok : tokenize(text)) {
        bool is_entity = false;
        for (std::size_t i = 0; i < tok.size() && !is_entity; ++i) {
            unsigned char c = static_cast<unsigned char>(tok[i]);
            if (std::isdigit(c)) {
                is_entity = true;
            } else if ((c == '-' || c == ':') && i > 0 && i + 1 < tok.size()) {
                bool left = std::isalnum(static_cast<unsigned char>(tok[i - 1])) != 0;
                bool right = std::isalnum(static_cast<unsigned char>(tok[i + 1])) != 0;
                if (left && right) is_entity = true;
            }
        }
        if (is_entity) out.insert(tok);
    }
    return out;
}

BglParseResult parse_bgl(const std::string& path, std::size_t limit,
                         const std::vector<std::string>& keywords) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable("cannot open log file: " + path);

    std::set<std::string> kwset(keywords.begin(), keywords.end());
    BglParseResult result;
    std::string line;
    while (result.facts.size() < limit && std::getline(in, line)) {
        std::istringstream row(line);
        std::vector<std::string> fields;
        std::string field;
        for (int i = 0; i < 9 && row >> field; ++i) fields.push_back(field);
        if (fields.size() < 9) {
            ++result.malformed_lines;
            continue;
        }
        std::string content;
        std::getline(row, content);
        auto first = content.find_first_not_of(' ');
        content = first == std::string::npos ? std::string() : content.substr(first);

        const std::string& node = fields[3];
        const std::string& component = fields[7];
        const std::string& level = fields[8];

        Fact f;
        f.id = numbered_id("bgl", result.facts.size());
        f.seq = result.facts.size();
        f.source = Source::Bgl;
        f.text = level + ' ' + component;
        if (!content.empty()) f.text += ' ' + content;
        f.entities = extract_entities(node + ' ' + content);

        bool alarm = level == "FATAL" || level == "SEVERE";
        if (!alarm) {
            for (const auto& tok : tokenize(content)) {
                if (kwset.count(tok)) {
                    alarm = true;
                    break;
                }
            }
        }
        f.importance = alarm ? 0.95 : 0.5;
        result.facts.push_back(std::move(f));
    }
    return result;
}

std::vector<Query> make_bgl_queries(const std::vector<Fact>& facts) {
    std::vector<Query> queries;
    for (const auto& f : facts) {
        if (f.entities.empty()) continue;

        // entity tokens plus up to three distinct plain tokens from the text
        std::string text;
        for (const auto& e : f.entities) {
            if (!text.empty()) text += ' ';
            text += e;
        }
        std::vector<std::string> seen;
        for (const auto& tok : tokenize(f.text)) {
            if (seen.size() == 3) break;
            if (f.entities.count(tok)) continue;
            if (std::find(seen.begin(), seen.end(), tok) != seen.end()) continue;
            seen.push_back(tok);
            text += ' ' + tok;
        }

        Query q;
        q.id = numbered_id("bq", queries.size());
        q.seq = queries.size();
        q.text = std::move(text);
        q.entities = extract_entities(q.text);
        q.gold_id = f.id;
        q.cohort = cohort_for(f.seq, facts.size());
        queries.push_back(std::move(q));
    }
    return queries;
}

void write_facts_tsv(const std::string& path, const std::vector<Fact>& facts) {
    std::ofstream out(path);
    if (!out) throw FileUnreadable("cannot write: " + path);
    for (const auto& f : facts) {
        out << f.seq << '\t' << sanitize(f.id) << '\t' << format_fixed(f.importance) << '\t'
            << sanitize(f.text) << '\n';
    }
}

std::vector<Fact> read_facts_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable("cannot open: " + path);
    std::vector<Fact> facts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 4) {
            throw MalformedFile(path + ":" + std::to_string(lineno) +
                                ": expected seq\\tid\\timportance\\ttext");
        }
        Fact f;
        try {
            f.seq = std::stoull(fields[0]);
            f.importance = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": bad numeric field");
        }
        f.id = fields[1];
        f.text = fields[3];
        f.entities = extract_entities(f.text);
        facts.push_back(std::move(f));
    }
    return facts;
}

void write_queries_tsv(const std::string& path, const std::vector<Query>& queries) {
    std::ofstream out(path);
    if (!out) throw FileUnreadable("cannot write: " + path);
    for (const auto& q : queries) {
        out << q.seq << '\t' << sanitize(q.id) << '\t' << sanitize(q.gold_id) << '\t'
            << sanitize(q.text) << '\n';
    }
}

std::vector<Query> read_queries_tsv(const std::string& path, const std::vector<Fact>& facts) {
    std::ifstream in(path);
    if (!in) throw FileUnreadable("cannot open: " + path);

    std::unordered_map<std::string, std::uint64_t> fact_seq;
    for (const auto& f : facts) fact_seq[f.id] = f.seq;

    std::vector<Query> queries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 4) {
            throw MalformedFile(path + ":" + std::to_string(lineno) +
                                ": expected seq\\tid\\tgold_id\\ttext");
        }
        Query q;
        try {
            q.seq = std::stoull(fields[0]);
        } catch (const std::exception&) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": bad seq field");
        }
        q.id = fields[1];
        q.gold_id = fields[2];
        q.text = fields[3];
        q.entities = extract_entities(q.text);
        auto it = fact_seq.find(q.gold_id);
        if (it == fact_seq.end()) {
            throw MalformedFile(path + ":" + std::to_string(lineno) + ": unknown gold id " +
                                q.gold_id);
        }
        q.cohort = cohort_for(it->second, facts.size());
        queries.push_back(std::move(q));
    }
    return queries;
}

}  // namespace tiermem
