#pragma once

#include "dynbc/errors.hpp"

#include <array>
#include <span>
#include <string>

namespace dynbc {

/// Linear combination sum_k weights[k] * values[k] / (scale * tau^power),
/// where values[0] is the newest sample. Covers every multistep difference
/// and delay extrapolation used by the schemes.
struct Stencil {
    std::array<double, 5> weights{};
    int width = 0;
    double scale = 1.0;
    int tau_power = 0;  ///< 1 for derivative stencils, 0 for extrapolations
    const char* name = "";
};

// Derivative stencils. values[0] is the newest sample.
/// (3 x^{n+3} - 4 x^{n+2} + x^{n+1}) / (2 tau)
inline constexpr Stencil kBdf2{{3.0, -4.0, 1.0}, 3, 2.0, 1, "BDF2"};
/// (5 x^{n+2} - 8 x^{n+1} + 3 x^n) / (2 tau): derivative one step ahead of x^{n+2}.
inline constexpr Stencil kAlt{{5.0, -8.0, 3.0}, 3, 2.0, 1, "ALT"};
/// (11 x^{n+4} - 18 x^{n+3} + 9 x^{n+2} - 2 x^{n+1}) / (6 tau)
inline constexpr Stencil kBdf3{{11.0, -18.0, 9.0, -2.0}, 4, 6.0, 1, "BDF3"};

// Delay approximations of p and p' at t from p(t - tau), p(t - 2 tau), ...
inline constexpr Stencil kExtrap2{{2.0, -1.0}, 2, 1.0, 0, "extrapolation-2"};
inline constexpr Stencil kExtrap3{{3.0, -3.0, 1.0}, 3, 1.0, 0, "extrapolation-3"};
inline constexpr Stencil kDelayRateA{{1.0, -1.0}, 2, 1.0, 1, "delay-rate-A"};
inline constexpr Stencil kDelayRateB{{5.0, -8.0, 3.0}, 3, 2.0, 1, "delay-rate-B"};
inline constexpr Stencil kDelayRateC{{6.0, -11.0, 6.0, -1.0}, 4, 2.0, 1, "delay-rate-C"};
inline constexpr Stencil kDelayRate3{{26.0, -57.0, 42.0, -11.0}, 4, 6.0, 1, "delay-rate-3"};

/// Applies `s` to values (newest first). Works for scalars and Eigen vectors.
template <typename T>
T apply_stencil(const Stencil& s, std::span<const T> values, double tau) {
    if (static_cast<int>(values.size()) < s.width) {
        throw ParameterError(std::string("stencil ") + s.name + " needs " + std::to_string(s.width) +
                             " history values, got " + std::to_string(values.size()));
    }
    const double denom = s.scale * (s.tau_power == 1 ? tau : 1.0);
    T out = values[0] * (s.weights[0] / denom);
    for (int k = 1; k < s.width; ++k) {
        out += values[static_cast<std::size_t>(k)] * (s.weights[static_cast<std::size_t>(k)] / denom);
    }
    return out;
}

enum class DerivativeKind { Bdf2, Alt, Bdf3 };

inline const Stencil& derivative_stencil(DerivativeKind kind) {
    switch (kind) {
        case DerivativeKind::Bdf2: return kBdf2;
        case DerivativeKind::Alt: return kAlt;
        case DerivativeKind::Bdf3: return kBdf3;
    }
    return kBdf2;
}

template <typename T>
T discrete_derivative(DerivativeKind kind, std::span<const T> values, double tau) {
    return apply_stencil(derivative_stencil(kind), values, tau);
}

}  // namespace dynbc
