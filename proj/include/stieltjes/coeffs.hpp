#pragma once

#include <cstdint>
#include <random>
#include <variant>

#include <Eigen/Core>

namespace stieltjes::coeffs {

/// Shape a and scale b of the gamma law x^{a-1} e^{-x/b} / (b^a Gamma(a)).
struct GammaParams {
    double a = 1.0;
    double b = 1.0;

    double mean() const { return a * b; }
    double variance() const { return a * b * b; }
};

/// Degenerate law: every coefficient equals `value`.
struct ConstantParams {
    double value = 1.0;
};

using StreamKind = std::variant<GammaParams, ConstantParams>;

/// Bit generator used by all streams.  mt19937_64 output is fully specified
/// by the standard, so streams replay identically on every platform.
using Engine = std::mt19937_64;

/// Engine state for stream `stream_index` of experiment `seed`.
Engine derive_engine(std::uint64_t seed, std::uint64_t stream_index);

/// Uniform variate in the open interval (0, 1) with 53 random bits.
double uniform_open(Engine& engine);

/// Standard normal variate (Marsaglia polar method).
double standard_normal(Engine& engine);

/// One gamma(a, b) draw.  Marsaglia-Tsang squeeze/rejection for a >= 1;
/// for a < 1 a shape-(a+1) draw is multiplied by U^{1/a}.
/// Throws ParameterError unless a > 0 and b > 0.
double gamma_sample(const GammaParams& params, Engine& engine);

void validate(const StreamKind& kind);

/// Lazy, reproducible sequence s_1, s_2, ... of positive coefficients.
///
/// A stream is a small value: copying it forks the sequence at the current
/// position.  Nothing is cached; replaying the same (kind, seed, index)
/// regenerates the same values.
class CoefficientStream {
public:
    CoefficientStream(StreamKind kind, std::uint64_t seed, std::uint64_t stream_index);

    /// Next coefficient s_{position()+1}.
    double next();

    /// Next `count` coefficients.
    Eigen::VectorXd take(Eigen::Index count);

    /// Number of coefficients emitted so far.
    std::uint64_t position() const { return position_; }

    const StreamKind& kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    /// A fresh copy of this stream rewound to s_1.
    CoefficientStream restarted() const { return {kind_, seed_, stream_index_}; }

private:
    StreamKind kind_;
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    Engine engine_;
    std::uint64_t position_ = 0;
};

CoefficientStream make_stream(const StreamKind& kind, std::uint64_t seed, std::uint64_t stream_index);

/// The deterministic baseline s_n = 1.
inline CoefficientStream constant_stream(double value = 1.0) {
    return make_stream(ConstantParams{value}, 0, 0);
}

}  // namespace stieltjes::coeffs
