#include "kmbias/random.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kmbias {

namespace {

inline void mul_hilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(std::array<std::uint64_t, 2> key,
                                               std::array<std::uint64_t, 4> ctr) {
    for (int round = 0; round < kRounds; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mul_hilo(ctr[0], kMult0, hi0, lo0);
        mul_hilo(ctr[2], kMult1, hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_{seed, stream_id} {}

std::uint64_t RandomStream::next_u64() {
    if (buffer_pos_ == 4) {
        buffer_ = Philox4x64::block(key_, counter_);
        buffer_pos_ = 0;
        for (int i = 0; i < 4; ++i) {
            if (++counter_[i] != 0) break;  // 256-bit carry
        }
    }
    return buffer_[buffer_pos_++];
}

double RandomStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

DropoutSpec DropoutSpec::unit_uniform() { return DropoutSpec{Kind::UnitUniform, 0.0, 0.0}; }

DropoutSpec DropoutSpec::beta_ab(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("beta dropout law requires alpha > 0 and beta > 0");
    return DropoutSpec{Kind::Beta, alpha, beta};
}

DropoutSpec DropoutSpec::parse(std::string_view text) {
    std::string_view trimmed = text;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
        trimmed.remove_prefix(1);
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
        trimmed.remove_suffix(1);
    std::string lower(trimmed);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "uniform") return unit_uniform();
    if (lower.rfind("beta:", 0) == 0) {
        const std::string params = lower.substr(5);
        const auto comma = params.find(',');
        if (comma != std::string::npos) {
            try {
                std::size_t used_a = 0, used_b = 0;
                const std::string a_str = params.substr(0, comma);
                const std::string b_str = params.substr(comma + 1);
                const double a = std::stod(a_str, &used_a);
                const double b = std::stod(b_str, &used_b);
                if (used_a == a_str.size() && used_b == b_str.size()) return beta_ab(a, b);
            } catch (const std::invalid_argument&) {
            } catch (const std::out_of_range&) {
            }
        }
    }
    throw std::invalid_argument("invalid dropout law '" + std::string(text) +
                                "': expected \"uniform\" or \"beta:A,B\"");
}

std::string DropoutSpec::to_string() const {
    if (kind == Kind::UnitUniform) return "uniform";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "beta:%g,%g", alpha, beta);
    return buf;
}

double DropoutSpec::mean() const {
    return kind == Kind::UnitUniform ? 0.5 : alpha / (alpha + beta);
}

double exponential_from_unit(double u, double lambda) {
    return -std::log1p(-u) / lambda;
}

double dropout_time_from_fraction(double u, double failure_time) {
    return (1.0 - u) * failure_time;
}

double sample_exponential(RandomStream& s, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("sample_exponential: lambda must be > 0");
    return exponential_from_unit(s.next_unit(), lambda);
}

namespace {

double sample_standard_normal(RandomStream& s) {
    // Box-Muller; u1 is kept away from 1 by construction of next_unit.
    const double u1 = s.next_unit();
    const double u2 = s.next_unit();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang (2000) for shape >= 1; unit scale.
double sample_gamma(RandomStream& s, double shape) {
    if (shape < 1.0) {
        const double g = sample_gamma(s, shape + 1.0);
        double u;
        do {
            u = s.next_unit();
        } while (u <= 0.0);
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            z = sample_standard_normal(s);
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = s.next_unit();
        const double z2 = z * z;
        if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

double sample_unit_fraction(RandomStream& s, const DropoutSpec& x) {
    for (;;) {
        double u;
        if (x.kind == DropoutSpec::Kind::UnitUniform) {
            u = s.next_unit();
        } else {
            const double ga = sample_gamma(s, x.alpha);
            const double gb = sample_gamma(s, x.beta);
            u = ga / (ga + gb);
        }
        if (u > 0.0 && u < 1.0) return u;
    }
}

double sample_uniform_interval(RandomStream& s, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("sample_uniform_interval: requires lo < hi");
    return lo + (hi - lo) * s.next_unit();
}

double sample_dropout_time(RandomStream& s, const DropoutSpec& x, double failure_time) {
    if (!(failure_time >= 0.0))
        throw std::invalid_argument("sample_dropout_time: failure_time must be >= 0");
    return dropout_time_from_fraction(sample_unit_fraction(s, x), failure_time);
}

}  // namespace kmbias
