// Shared basics: exact rationals, error types, tolerances, deterministic RNG.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcx {

// Exact rational arithmetic. mpq_class keeps values canonical (gcd-reduced,
// positive denominator), which the interval algebra relies on.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Every double is a dyadic rational; the embedding is exact.
inline Rat rat_from_double(double x) {
    Rat q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }

// Parses "p/q" or a plain integer.
Rat parse_rat(const std::string& text);

// Numeric tolerances used across the toolkit. Exact (rational) paths do not
// consult these; they exist for double-weighted spaces and entropy values.
inline constexpr double kWeightSumTol = 1e-12;   // partition/space mass checks
inline constexpr double kEntropyTol = 1e-9;      // entropy value comparisons
inline constexpr double kRefineTol = 1e-10;      // H(beta|alpha) <= tol defines refinement
inline constexpr double kChainRuleTol = 1e-10;

// Capacity guard: a canonical interval/box list may not exceed this many
// components, and a name table may not exceed this many cells.
inline constexpr std::size_t kMaxComponents = std::size_t{1} << 20;
inline constexpr std::size_t kMaxCells = std::size_t{1} << 20;

// Largest partition size accepted by the matching-distance assignment solver.
inline constexpr int kMaxMatchingAtoms = 64;

struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal construction failed its contract; callers treat this as a bug,
// not as bad input.
struct postcondition_error : std::logic_error {
    explicit postcondition_error(const std::string& what) : std::logic_error(what) {}
};

struct config_error : std::runtime_error {
    std::string field;
    config_error(const std::string& field_, const std::string& what)
        : std::runtime_error(what), field(field_) {}
};

// SplitMix64: tiny, fully portable generator. Sampling code maps its output
// manually so results are identical on every platform and thread count.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., n-1} (n > 0), rejection-free modulo bias is fine at
    // the test scales involved, but use Lemire reduction anyway.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

  private:
    std::uint64_t state_;
};

inline Rat parse_rat(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            Rat q(text, 10);
            q.canonicalize();
            return q;
        }
        Rat q(text.substr(0, slash) + "/" + text.substr(slash + 1), 10);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw config_error("rational", "cannot parse rational literal: " + text);
    }
}

}  // namespace pcx
