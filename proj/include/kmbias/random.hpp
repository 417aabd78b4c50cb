#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace kmbias {

/// Philox4x64-10 counter-based block cipher (Random123 family).
/// A block is four 64-bit words derived from a 128-bit key and a
/// 256-bit counter; consecutive blocks are obtained by incrementing
/// the counter. Keyed streams with distinct keys are independent for
/// all practical purposes, which is what makes per-subject substreams
/// safe to generate in parallel.
struct Philox4x64 {
    static constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
    static constexpr int kRounds = 10;

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 2> key,
                                              std::array<std::uint64_t, 4> counter);
};

/// Deterministic random stream identified by (seed, stream_id).
/// Construction fixes the whole output sequence; no global state is
/// involved, so the same pair always reproduces the same draws no
/// matter how work is partitioned across threads.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return key_[0]; }
    std::uint64_t stream_id() const { return key_[1]; }

    /// Next raw 64-bit word of the keyed Philox sequence.
    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_{};
    std::array<std::uint64_t, 4> buffer_{};
    int buffer_pos_ = 4;
};

/// Law of the dropout fraction u on the open interval (0,1):
/// either Uniform(0,1) or Beta(alpha, beta) with density
/// proportional to u^(alpha-1) (1-u)^(beta-1).
struct DropoutSpec {
    enum class Kind { UnitUniform, Beta };

    Kind kind = Kind::UnitUniform;
    double alpha = 0.0;
    double beta = 0.0;

    static DropoutSpec unit_uniform();
    static DropoutSpec beta_ab(double alpha, double beta);

    /// Parses the CLI text form, case-insensitively:
    /// "uniform" or "beta:A,B" (for example "beta:5,2").
    static DropoutSpec parse(std::string_view text);

    std::string to_string() const;

    /// Mean of the fraction u.
    double mean() const;

    bool operator==(const DropoutSpec&) const = default;
};

/// Inverse-CDF kernel of Exp(lambda): u in [0,1) -> -log(1-u)/lambda.
double exponential_from_unit(double u, double lambda);

/// Dropout-time kernel: a subject that would fail at failure_time and
/// draws fraction u is censored at (1-u) * failure_time. Fractions
/// near 1 therefore mean dropout shortly after entry, fractions near 0
/// mean dropout just before the failure would have occurred.
double dropout_time_from_fraction(double u, double failure_time);

/// One draw from Exp(lambda) via the inverse CDF. lambda must be > 0.
double sample_exponential(RandomStream& s, double lambda);

/// One draw of the dropout fraction u from x, guaranteed inside (0,1).
/// Uniform uses the stream directly; Beta uses the gamma-ratio method
/// (Marsaglia-Tsang squeeze with Box-Muller normals, plus the
/// power-of-uniform boost for shape < 1).
double sample_unit_fraction(RandomStream& s, const DropoutSpec& x);

/// Uniform draw on [lo, hi). Requires lo < hi.
double sample_uniform_interval(RandomStream& s, double lo, double hi);

/// Dropout censoring time for a subject with the given failure time:
/// dropout_time_from_fraction(u, failure_time) with u drawn from x.
/// Strictly below failure_time whenever failure_time > 0.
double sample_dropout_time(RandomStream& s, const DropoutSpec& x, double failure_time);

}  // namespace kmbias
