#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bldet {

// Error taxonomy. Everything user-facing derives from Error so the CLI can
// catch one type and map it to an exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateGeometryError : Error {
    using Error::Error;
};
struct EmptyInputError : Error {
    using Error::Error;
};
struct InvalidMaskError : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct InvalidDocumentError : Error {
    using Error::Error;
};
struct InvalidPlanError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line) : Error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

// splitmix64 finalizer. All randomness in the project goes through this so
// results are identical across platforms and standard libraries.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based noise keyed by an absolute coordinate pair. Stateless:
// overlapping windows querying the same pixel see the same draw.
inline double hash_unit(std::uint64_t seed, std::int64_t x, std::int64_t y) {
    std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(x) ^ 0x51a2b3c4d5e6f708ull));
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(y)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Sequential deterministic stream for generators and tests.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(mix64(seed)) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    // uniform in [0, 1)
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // uniform integer in [lo, hi] inclusive
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(double p) { return unit() < p; }

  private:
    std::uint64_t state_;
};

}  // namespace bldet
