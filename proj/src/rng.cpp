#include "wclt/rng.hpp"

#include <cmath>

namespace wclt {

namespace {
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint32_t c0, std::uint32_t c1,
                                        std::uint32_t c2, std::uint32_t c3) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    std::array<std::uint32_t, 4> x{c0, c1, c2, c3};
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, x[0], hi0, lo0);
        mulhilo(kPhiloxM1, x[2], hi1, lo1);
        std::array<std::uint32_t, 4> y{hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
        x = y;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return x;
}

void CounterRng::refill() {
    buf_ = philox4x32(seed_, static_cast<std::uint32_t>(block_),
                      static_cast<std::uint32_t>(block_ >> 32),
                      static_cast<std::uint32_t>(stream_),
                      static_cast<std::uint32_t>(stream_ >> 32));
    ++block_;
    pos_ = 0;
}

std::uint64_t CounterRng::uniform_u64() {
    if (pos_ > 2) refill();
    std::uint64_t v = (static_cast<std::uint64_t>(buf_[pos_]) << 32) | buf_[pos_ + 1];
    pos_ += 2;
    return v;
}

double CounterRng::uniform() {
    // 53-bit mantissa, strictly inside (0,1)
    return (static_cast<double>(uniform_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::complex<double> CounterRng::unit_phase() {
    double a = 2.0 * M_PI * uniform();
    return {std::cos(a), std::sin(a)};
}

EntryDraw entry_uniforms(std::uint64_t seed, std::uint64_t sample, std::uint32_t i,
                         std::uint32_t j) {
    auto b = philox4x32(seed, static_cast<std::uint32_t>(sample),
                        static_cast<std::uint32_t>(sample >> 32), i, j);
    double u1 = (static_cast<double>((static_cast<std::uint64_t>(b[0]) << 21) ^ b[1]) *
                 0x1.0p-53);
    double u2 = (static_cast<double>((static_cast<std::uint64_t>(b[2]) << 21) ^ b[3]) *
                 0x1.0p-53);
    // keep strictly inside (0,1) for Box-Muller logs
    u1 = u1 - std::floor(u1);
    u2 = u2 - std::floor(u2);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    if (u2 <= 0.0) u2 = 0x1.0p-53;
    return {u1, u2};
}

}  // namespace wclt
