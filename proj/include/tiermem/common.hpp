#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tiermem {

inline constexpr const char* kVersion = "0.1.0";

using FactId = std::string;

enum class Tier { L1, L2 };
enum class Residency { L1, L2, Deleted, Unknown };
enum class Source { Synthetic, Bgl };

enum class Mode { Full, OracleUnbounded, NoCe, NoGate, Lru };

const char* to_string(Mode mode);
const char* to_string(Tier tier);
Mode parse_mode(const std::string& name);  // throws InvalidConfig

/// Fixed-point decimal rendering, the one true float format for CSV output.
std::string format_fixed(double value, int digits = 6);

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyText : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct DuplicateId : Error { using Error::Error; };
struct UnknownId : Error { using Error::Error; };
struct NotAtCapacity : Error { using Error::Error; };
struct DuplicateFact : Error { using Error::Error; };
struct InvalidScenario : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };
struct FileUnreadable : Error { using Error::Error; };
struct MalformedFile : Error { using Error::Error; };
struct EmptyCohort : Error { using Error::Error; };
struct MissingRun : Error { using Error::Error; };
struct MissingInput : Error { using Error::Error; };

/// Seeded generator with hand-rolled draws so that identical seeds give
/// identical streams on every platform and standard library.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform real in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (fresh pair per call, no cache).
    double normal();

private:
    std::uint64_t state_;
};

}  // namespace tiermem
