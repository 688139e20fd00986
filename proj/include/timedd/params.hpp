#pragma once

#include "timedd/error.hpp"

#include <cmath>
#include <string>
#include <string_view>

namespace timedd {

/// Which optimality system: tracking (S1) or null controllability (S2).
enum class System { S1, S2 };

/// AS1 sends the adjoint into Q1 and the state into Q2; AS2 sends the state both ways.
enum class Variant { AS1, AS2 };

inline std::string_view to_string(System s) noexcept { return s == System::S1 ? "S1" : "S2"; }
inline std::string_view to_string(Variant v) noexcept { return v == Variant::AS1 ? "AS1" : "AS2"; }

inline System parse_system(std::string_view s) {
    if (s == "S1") return System::S1;
    if (s == "S2") return System::S2;
    throw InvalidConfig("unknown system '" + std::string(s) + "' (expected S1 or S2)");
}

inline Variant parse_variant(std::string_view s) {
    if (s == "AS1") return Variant::AS1;
    if (s == "AS2") return Variant::AS2;
    throw InvalidConfig("unknown variant '" + std::string(s) + "' (expected AS1 or AS2)");
}

/// Constants shared by the tracking and null-controllability problems.
struct ProblemParams {
    double alpha = 1.0;     ///< tracking weight
    double gamma = 1.0;     ///< final-time weight
    double nu = 1.0;        ///< control cost
    double kappa = 1.0;     ///< diffusion
    double T = 1.0;         ///< final time
    double interface = 0.5; ///< Gamma
    double L = 1.0;         ///< domain length

    /// Throws InvalidConfig naming the first offending field.
    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(alpha) || alpha < 0.0) throw InvalidConfig("alpha: must be finite and >= 0");
        if (!finite(gamma) || gamma < 0.0) throw InvalidConfig("gamma: must be finite and >= 0");
        if (!finite(nu) || nu <= 0.0) throw InvalidConfig("nu: must be finite and > 0");
        if (!finite(kappa) || kappa <= 0.0) throw InvalidConfig("kappa: must be finite and > 0");
        if (!finite(T) || T <= 0.0) throw InvalidConfig("T: must be finite and > 0");
        if (!finite(interface) || interface <= 0.0 || interface >= T)
            throw InvalidConfig("Gamma: must satisfy 0 < Gamma < T");
        if (!finite(L) || L <= 0.0) throw InvalidConfig("L: must be finite and > 0");
    }

    bool operator==(const ProblemParams&) const = default;
};

}  // namespace timedd
