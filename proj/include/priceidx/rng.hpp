#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace priceidx::rng {

/// Bit-mixing finalizer used to derive independent substream seeds from a
/// master seed. Distinct inputs map to well-separated engine states.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded sampler with hand-rolled distribution mappers.
///
/// The engine (std::mt19937_64) is fully specified by the standard, but the
/// standard *distributions* are not bit-portable across library
/// implementations. Every artifact of this project must be byte-identical
/// for a fixed seed regardless of toolchain or thread count, so the
/// distribution transforms are implemented here with a fixed algorithm and
/// a fixed per-draw engine consumption.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Seed of substream `stream` of master seed `master`. Substreams with
    /// distinct indices are statistically independent, which lets parallel
    /// replicates draw from private streams in any execution order.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
        return splitmix64(master ^ splitmix64(stream + 0x51ed2701a9e36a87ULL));
    }

    /// Sampler for substream `stream` of master seed `master`.
    static Sampler substream(std::uint64_t master, std::uint64_t stream) {
        return Sampler(derive_seed(master, stream));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1): never returns 0 (safe under log).
    double uniform01_open() {
        for (;;) {
            const double u = uniform01();
            if (u > 0.0) return u;
        }
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Multiply-shift mapping; the residual bias
    /// (< n / 2^64) is far below any tolerance used in this project.
    std::size_t uniform_index(std::size_t n) {
        const unsigned __int128 wide = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::size_t>(wide >> 64);
    }

    /// Standard normal via Box-Muller. Consumes exactly two engine draws.
    double normal();

    /// Normal with given mean and standard deviation.
    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Gamma(shape, 1), shape > 0, via Marsaglia-Tsang squeeze with the
    /// power boost for shape < 1.
    double gamma(double shape);

    /// Symmetric Dirichlet of the given length and concentration; entries
    /// are strictly positive and sum to 1.
    std::vector<double> dirichlet(std::size_t length, double concentration);

  private:
    std::mt19937_64 engine_;
};

} // namespace priceidx::rng
