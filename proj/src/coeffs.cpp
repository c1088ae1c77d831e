#include "stieltjes/coeffs.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stieltjes/errors.hpp"

namespace stieltjes::coeffs {

namespace {

// splitmix64 finaliser; a bijective avalanche mix of 64-bit words.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double gamma_shape_at_least_one(double a, Engine& engine) {
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = standard_normal(engine);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open(engine);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

Engine derive_engine(std::uint64_t seed, std::uint64_t stream_index) {
    const std::uint64_t key = mix64(seed ^ mix64(stream_index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(stream_index), static_cast<std::uint32_t>(stream_index >> 32)};
    return Engine(seq);
}

double uniform_open(Engine& engine) {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(Engine& engine) {
    for (;;) {
        const double u = 2.0 * uniform_open(engine) - 1.0;
        const double v = 2.0 * uniform_open(engine) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double gamma_sample(const GammaParams& params, Engine& engine) {
    if (!(params.a > 0.0) || !(params.b > 0.0) || !std::isfinite(params.a) || !std::isfinite(params.b)) {
        throw ParameterError("gamma_sample: shape and scale must be positive (a=" + std::to_string(params.a) +
                             ", b=" + std::to_string(params.b) + ")");
    }
    if (params.a >= 1.0) return params.b * gamma_shape_at_least_one(params.a, engine);

    const double g = gamma_shape_at_least_one(params.a + 1.0, engine);
    const double u = uniform_open(engine);
    double x = g * std::pow(u, 1.0 / params.a);
    // U^{1/a} underflows for very small shapes; coefficients must stay positive.
    if (x <= 0.0) x = std::numeric_limits<double>::min();
    return params.b * x;
}

void validate(const StreamKind& kind) {
    if (const auto* g = std::get_if<GammaParams>(&kind)) {
        if (!(g->a > 0.0) || !(g->b > 0.0) || !std::isfinite(g->a) || !std::isfinite(g->b))
            throw ParameterError("gamma stream: a and b must be positive");
    } else {
        const auto& c = std::get<ConstantParams>(kind);
        if (!(c.value > 0.0) || !std::isfinite(c.value)) throw ParameterError("constant stream: value must be positive");
    }
}

CoefficientStream::CoefficientStream(StreamKind kind, std::uint64_t seed, std::uint64_t stream_index)
    : kind_(kind), seed_(seed), stream_index_(stream_index), engine_(derive_engine(seed, stream_index)) {
    validate(kind_);
}

double CoefficientStream::next() {
    ++position_;
    if (const auto* g = std::get_if<GammaParams>(&kind_)) return gamma_sample(*g, engine_);
    return std::get<ConstantParams>(kind_).value;
}

Eigen::VectorXd CoefficientStream::take(Eigen::Index count) {
    Eigen::VectorXd out(count);
    for (Eigen::Index i = 0; i < count; ++i) out[i] = next();
    return out;
}

CoefficientStream make_stream(const StreamKind& kind, std::uint64_t seed, std::uint64_t stream_index) {
    return CoefficientStream(kind, seed, stream_index);
}

}  // namespace stieltjes::coeffs
