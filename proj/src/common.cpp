#include "tiermem/common.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace tiermem {

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::Full: return "full";
        case Mode::OracleUnbounded: return "oracle_unbounded";
        case Mode::NoCe: return "no_ce";
        case Mode::NoGate: return "no_gate";
        case Mode::Lru: return "lru";
    }
    return "unknown";
}

const char* to_string(Tier tier) {
    return tier == Tier::L1 ? "l1" : "l2";
}

Mode parse_mode(const std::string& name) {
    if (name == "full") return Mode::Full;
    if (name == "oracle_unbounded") return Mode::OracleUnbounded;
    if (name == "no_ce") return Mode::NoCe;
    if (name == "no_gate") return Mode::NoGate;
    if (name == "lru") return Mode::Lru;
    throw InvalidConfig("unknown mode: " + name);
}

std::string format_fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

double SeededRng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace tiermem
