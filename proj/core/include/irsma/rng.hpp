#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include "irsma/types.hpp"

namespace irsma {

/// Counter-based generator (Philox4x32-10) keyed by a 64-bit seed and a
/// 64-bit stream id. Two instances with the same (seed, stream) produce the
/// same sequence; different streams are statistically independent, so work
/// items can own their generator without any shared state.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Generator for a named sub-stream, e.g. Rng::stream(seed, "icsi-test", 3).
    static Rng stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    /// Uniform double in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    double normal();
    /// Circularly-symmetric complex Gaussian CN(0, variance).
    cplx complex_normal(double variance);

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
};

/// 64-bit mixing used to derive stream ids from tags and indices.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_tag(std::string_view tag);

/// Child seed for a named sub-task, so nested components can derive their own
/// streams without colliding with the parent's.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

} // namespace irsma
