#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace wclt {

// Counter-based generator (Philox-4x32-10). A draw is a pure function of
// (seed, stream, counter), so samples can be generated in parallel and are
// reproducible entry-by-entry.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint32_t c0, std::uint32_t c1,
                                        std::uint32_t c2, std::uint32_t c3);

class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t uniform_u64();
    double uniform();  // in (0,1)
    double normal();   // standard normal, Box-Muller
    std::complex<double> unit_phase();

  private:
    void refill();
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Independent per-entry draws for Hermitian matrix sampling: two uniforms
// for the (sample, i, j) slot.
struct EntryDraw {
    double u1;
    double u2;
};
EntryDraw entry_uniforms(std::uint64_t seed, std::uint64_t sample, std::uint32_t i,
                         std::uint32_t j);

}  // namespace wclt
