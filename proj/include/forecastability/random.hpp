#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fcast {

/// Identity of the random stream, recorded in report metadata so runs can be
/// replicated on any platform.
inline constexpr std::string_view kRngIdentity =
    "mt19937_64; uniform = top 53 bits; normal = Marsaglia polar; "
    "sub-streams = splitmix64(seed ^ stream)";

/// Deterministic generator. std::mt19937_64 is bit-specified by the standard,
/// but the std distributions are not, so every transform is done here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, bound), bound > 0. Unbiased (rejection).
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Standard normal draw.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for an independent sub-stream; `stream` labels the consumer.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

namespace streams {
inline constexpr std::uint64_t noise = 0x6e6f697365ULL;
inline constexpr std::uint64_t sparsify = 0x7370617273ULL;
inline constexpr std::uint64_t phases = 0x7068617365ULL;
inline constexpr std::uint64_t initial_state = 0x696e697473ULL;
inline constexpr std::uint64_t baseline = 0x626173656cULL;
}  // namespace streams

}  // namespace fcast
