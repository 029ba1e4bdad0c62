#include "irsma/rng.hpp"

#include <cmath>

namespace irsma {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

} // namespace

std::uint64_t mix64(std::uint64_t x)
{
    // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t hash_tag(std::string_view tag)
{
    std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index)
{
    return mix64(seed ^ mix64(hash_tag(tag) + mix64(index)));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

Rng Rng::stream(std::uint64_t seed, std::string_view tag, std::uint64_t index)
{
    return Rng(seed, mix64(hash_tag(tag) ^ mix64(index)));
}

void Rng::refill()
{
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    block_ = philox4x32_10(ctr, key);
    ++counter_;
    used_ = 0;
}

Rng::result_type Rng::operator()()
{
    if (used_ > 2)
        refill();
    const std::uint64_t out = (static_cast<std::uint64_t>(block_[used_]) << 32) | block_[used_ + 1];
    used_ += 2;
    return out;
}

double Rng::uniform()
{
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

__extension__ using u128 = unsigned __int128;

std::uint64_t Rng::below(std::uint64_t n)
{
    // Lemire's nearly-divisionless method
    u128 m = static_cast<u128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<u128>((*this)()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal()
{
    // Box-Muller, one output per call so the generator stays stateless
    // apart from the counter.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

cplx Rng::complex_normal(double variance)
{
    // |z|^2 ~ Exp(variance), arg z ~ U[0, 2pi)
    const double radius = std::sqrt(-variance * std::log(1.0 - uniform()));
    return std::polar(radius, kTwoPi * uniform());
}

} // namespace irsma
