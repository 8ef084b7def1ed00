#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace starform {

// Input violates a documented precondition (bad shapes, degenerate tuples, ...).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The field is provably too small for the implemented algorithm variant.
struct field_too_small_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bounded Las Vegas search ran out of budget. Signals a bug or a
// deliberately rejected parameter regime, never a random unlucky run.
struct budget_exceeded_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An invariant that is guaranteed by theory failed to hold.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Single source of randomness. Every randomized routine takes an Rng&
// explicitly; identical seeds give identical runs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
        return d(eng_);
    }

  private:
    std::mt19937_64 eng_;
};

// Retry cap for loops whose success probability is bounded away from zero.
inline constexpr int kRetryFactor = 64;

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw input_error(msg);
}

inline void check_internal(bool cond, const std::string& msg) {
    if (!cond) throw internal_error(msg);
}

}  // namespace starform
