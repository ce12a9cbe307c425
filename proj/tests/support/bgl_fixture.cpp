#include "support/bgl_fixture.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace tiermem::testing {

namespace {

constexpr const char* kMemberWords[] = {"alpha",   "bravo", "charlie", "delta", "echo",
                                        "foxtrot", "golf",  "hotel",   "india", "juliet"};

constexpr const char* kPoolA[] = {
    "stream",  "relay",   "buffer",  "window", "channel", "socket",  "beacon",  "ticket",
    "bundle",  "cursor",  "ledger",  "mirror", "anchor",  "binder",  "carrier", "docket",
    "emitter", "fabric",  "gauge",   "hopper", "jitter",  "keeper",  "lantern", "marker",
    "notch",   "outlet",  "pivot",   "quorum", "roster",  "shard",   "tracer",  "uplink",
    "vector",
};

constexpr const char* kPoolB[] = {
    "amber",  "basalt", "cobalt",  "dune",   "ember",   "flint",  "garnet", "hazel", "iris",
    "jasper", "krypton", "lumen",  "marble", "nickel",  "onyx",   "pearl",  "quartz", "raven",
    "sable",  "topaz",  "umber",   "violet", "walnut",  "xenon",  "yarrow", "zephyr", "argon",
    "birch",  "cedar",  "damson",  "elder",  "fennel",  "ginger", "helium",
};

constexpr const char* kIdlePhrases[] = {
    "idle status nominal sweep",
    "periodic health sweep completed",
    "telemetry heartbeat within bounds",
    "routine scan found nothing new",
    "housekeeping pass finished cleanly",
    "background verify made no changes",
    "steady state confirmed by poller",
    "watchdog saw quiet interval",
};

std::string storm_node(std::size_t g) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "R%02zu-M1-N%zu-C:J12-U11", g, g % 8);
    return buf;
}

std::string storm_content(std::size_t g, std::size_t member) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s zone-a%zu rack-b%zu bay-c%zu %s",
                  kMemberWords[member % 10], g, g, g, storm_node(g).c_str());
    return buf;
}

std::string normal_node(std::size_t j) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "RN%04zu-U%02zu", j, j % 32);
    return buf;
}

}  // namespace

std::size_t write_bgl_fixture(const std::string& path, std::size_t lines) {
    if (lines < 200) throw std::invalid_argument("fixture needs at least 200 lines");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write fixture: " + path);

    std::size_t groups = lines / 50;
    std::size_t early_cutoff = lines * 54 / 100;  // early storm members live here
    std::size_t late_start = lines * 17 / 20;
    std::size_t late_stride = (lines - late_start - 1) / groups;
    if (late_stride == 0) late_stride = 1;

    std::size_t early_written = 0;
    std::size_t early_budget = groups * 9;
    std::size_t normal_ordinal = 0;
    std::size_t filler_ordinal = 0;

    for (std::size_t i = 0; i < lines; ++i) {
        long epoch = 1117838570 + static_cast<long>(i);
        bool storm_early =
            i < early_cutoff && i % 3 == 0 && early_written < early_budget;
        bool storm_late = false;
        std::size_t late_group = 0;
        if (i >= late_start && (i - late_start) % late_stride == 0) {
            late_group = (i - late_start) / late_stride;
            storm_late = late_group < groups;
        }

        if (storm_early || storm_late) {
            std::size_t g;
            std::size_t member;
            if (storm_early) {
                g = early_written % groups;
                member = early_written / groups;
                ++early_written;
            } else {
                g = late_group;
                member = 9;  // the late recurrence gets its own word
            }
            std::string node = storm_node(g);
            out << "KERNFATAL " << epoch << " 2005.06.03 " << node
                << " 2005-06-03-15.42.50.363779 " << node << " RAS KERNEL FATAL "
                << storm_content(g, member) << "\n";
            continue;
        }

        ++filler_ordinal;
        if (filler_ordinal % 16 < 5) {
            out << "- " << epoch << " 2005.06.03 UNKNOWN_LOCATION 2005-06-03-15.42.50.363779 "
                << "UNKNOWN_LOCATION RAS MMCS INFO " << kIdlePhrases[filler_ordinal % 8] << "\n";
        } else {
            std::string node = normal_node(normal_ordinal);
            out << "- " << epoch << " 2005.06.03 " << node << " 2005-06-03-15.42.50.363779 "
                << node << " RAS LINKCARD INFO " << node << " probe "
                << kPoolA[normal_ordinal % 33] << ' ' << kPoolB[(normal_ordinal / 33) % 34]
                << "\n";
            ++normal_ordinal;
        }
    }
    return lines;
}

}  // namespace tiermem::testing
