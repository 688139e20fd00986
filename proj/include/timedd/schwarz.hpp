#pragma once

#include "timedd/discretization.hpp"
#include "timedd/error.hpp"
#include "timedd/mode_solver.hpp"
#include "timedd/params.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace timedd {

/// Spectral coefficients of y and lambda at t = Gamma, taken from the Q2 side.
/// AS1 transmits `lambda` into Q1, AS2 transmits `y`; both are kept.
struct InterfaceTrace {
    std::vector<double> y;
    std::vector<double> lambda;

    bool operator==(const InterfaceTrace&) const = default;
};

struct SchwarzConfig {
    System system = System::S2;
    Variant variant = Variant::AS1;
    ProblemParams params;
    TimeGrid time;
    /// Stop when the interface jump drops below tolerance times the largest trace norm seen.
    double tolerance = 1e-10;
    std::size_t max_iterations = 100;
    /// Transmitted coefficients for the first sweep (lambda for AS1, y for AS2); empty means zero.
    std::vector<double> initial_guess{};

    void validate(std::size_t modes) const {
        params.validate();
        if (std::abs(time.final_time() - params.T) > 1e-12 * params.T)
            throw InvalidConfig("schwarz: time grid final time differs from T");
        if (std::abs(time.interface() - params.interface) > 1e-12 * params.T)
            throw InvalidConfig("schwarz: Gamma is not a node of the time grid");
        if (!(tolerance > 0.0)) throw InvalidConfig("tol: must be > 0");
        if (max_iterations == 0) throw InvalidConfig("max_iter: must be >= 1");
        if (!initial_guess.empty() && initial_guess.size() != modes)
            throw InvalidConfig("schwarz: initial guess length differs from mode count");
    }
};

enum class SchwarzStatus { Converged, Stagnated, Diverged, MaxIterations };

inline std::string_view to_string(SchwarzStatus s) noexcept {
    switch (s) {
        case SchwarzStatus::Converged: return "converged";
        case SchwarzStatus::Stagnated: return "stagnated";
        case SchwarzStatus::Diverged: return "diverged";
        case SchwarzStatus::MaxIterations: return "max-iterations";
    }
    return "unknown";
}

struct ConvergenceReport {
    std::vector<double> state_error;    ///< ||y^l - y_ref||_{L2(Q)}, l = 1, 2, ...
    std::vector<double> adjoint_error;  ///< ||lambda^l - lambda_ref||_{L2(Q)}
    std::vector<double> interface_jump; ///< ||trace mismatch between Q1 and Q2 at Gamma||
    double observed_rate = std::numeric_limits<double>::quiet_NaN();
    SchwarzStatus status = SchwarzStatus::MaxIterations;

    std::size_t iterations() const noexcept { return state_error.size(); }
};

struct SweepResult {
    InterfaceTrace trace;
    std::vector<ModeTrajectory> q1;
    std::vector<ModeTrajectory> q2;
    double jump = 0.0;
};

struct SchwarzResult {
    ConvergenceReport report;
    SweepResult last;
    std::vector<ModeTrajectory> reference;
};

/// Geometric rate of a decaying history: exp of the least-squares slope of
/// log(e_l) over the last half of the entries. Entries at or below
/// `floor * max(history)` end the usable part of the history.
inline double observed_rate(std::span<const double> history, double floor = 0.0) {
    double peak = 0.0;
    for (double e : history) peak = std::max(peak, e);
    std::size_t n = 0;
    while (n < history.size() && history[n] > floor * peak && history[n] > 0.0) ++n;
    if (n < 3) throw InvalidConfig("observed_rate: need at least 3 positive entries");

    const std::size_t start = n / 2;
    const std::size_t m = n - start;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = start; k < n; ++k) {
        const double x = static_cast<double>(k);
        const double y = std::log(history[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double md = static_cast<double>(m);
    const double slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
    return std::exp(slope);
}

/// One alternating sweep: Q1 = (0, Gamma) first, then Q2 = (Gamma, T) with the fresh Q1 trace.
inline SweepResult schwarz_step(const SchwarzConfig& config, const ModeData& data,
                                const InterfaceTrace& current, std::size_t iteration = 0) {
    const std::size_t n = data.size();
    const auto& transmitted = config.variant == Variant::AS1 ? current.lambda : current.y;
    if (transmitted.size() != n) throw InvalidConfig("schwarz_step: interface data length differs from mode count");

    const auto& time = config.time;
    const auto q1_nodes = time.nodes_q1();
    const auto q2_nodes = time.nodes_q2();
    const std::size_t split = time.interface_index();
    const std::size_t last = time.nodes().size() - 1;

    SweepResult out;
    out.q1.reserve(n);
    out.q2.reserve(n);
    out.trace.y.resize(n);
    out.trace.lambda.resize(n);
    double jump_sq = 0.0;

    auto context = [&](const char* sub, std::size_t mode, const Error& e) {
        return SolverFailure(std::string(sub) + " solve failed (mode " + std::to_string(mode) +
                             ", iteration " + std::to_string(iteration) + "): " + e.what());
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto& series = data.target[i];
        const std::span<const double> target(series);
        ModeSystem sys{data.eigenvalues[i], config.params, config.system, {}};

        const auto q1_right = config.variant == Variant::AS1 ? BoundaryCondition::adjoint(transmitted[i])
                                                              : BoundaryCondition::state(transmitted[i]);
        if (!series.empty()) sys.target = target.first(split + 1);
        ModeTrajectory q1;
        try {
            q1 = solve_mode_bvp(sys, BoundaryCondition::state(data.initial[i]), q1_right, q1_nodes);
        } catch (const Error& e) {
            throw context("Q1", i, e);
        }

        if (!series.empty()) sys.target = target.subspan(split);
        ModeTrajectory q2;
        try {
            q2 = solve_mode_bvp(sys, BoundaryCondition::state(q1.y.back()),
                                terminal_condition(config.system, config.params, target_at(data, i, last)),
                                q2_nodes);
        } catch (const Error& e) {
            throw context("Q2", i, e);
        }

        out.trace.y[i] = q2.y.front();
        out.trace.lambda[i] = q2.lambda.front();
        const double dy = q1.y.back() - q2.y.front();
        const double dl = q1.lambda.back() - q2.lambda.front();
        jump_sq += dy * dy + dl * dl;
        out.q1.push_back(std::move(q1));
        out.q2.push_back(std::move(q2));
    }
    out.jump = std::sqrt(data.spatial_weight * jump_sq);
    return out;
}

namespace detail {

inline double split_error(const SweepResult& s, std::span<const ModeTrajectory> ref, std::size_t split,
                          Component c, double weight) {
    double acc = 0.0;
    std::vector<double> diff;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const auto& r = c == Component::State ? ref[i].y : ref[i].lambda;
        const auto& a = c == Component::State ? s.q1[i].y : s.q1[i].lambda;
        const auto& b = c == Component::State ? s.q2[i].y : s.q2[i].lambda;
        diff.resize(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) diff[k] = a[k] - r[k];
        acc += trapezoid_squared(s.q1[i].t, diff);
        diff.resize(b.size());
        for (std::size_t k = 0; k < b.size(); ++k) diff[k] = b[k] - r[split + k];
        acc += trapezoid_squared(s.q2[i].t, diff);
    }
    return std::sqrt(weight * acc);
}

inline double trace_norm(const InterfaceTrace& t, double weight) {
    double acc = 0.0;
    for (double v : t.y) acc += v * v;
    for (double v : t.lambda) acc += v * v;
    return std::sqrt(weight * acc);
}

}  // namespace detail

/// Stagnation: successive jump ratios within this distance of 1 ...
inline constexpr double kStagnationBand = 1e-8;
/// ... for this many consecutive sweeps.
inline constexpr std::size_t kStagnationSweeps = 3;
/// Divergence: error above this multiple of the first recorded error.
inline constexpr double kDivergenceGrowth = 10.0;

/// Iterates schwarz_step until the interface jump meets the tolerance, the
/// iteration stagnates or diverges, or max_iterations is reached. Errors are
/// measured against the monolithic discrete solution on the same grid.
inline SchwarzResult schwarz_solve(const SchwarzConfig& config, const ModeData& data) {
    const std::size_t n = data.size();
    config.validate(n);
    data.validate(config.time);

    SchwarzResult result;
    result.reference = monolithic_solve(config.system, config.params, data, config.time);

    InterfaceTrace trace{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    if (!config.initial_guess.empty()) {
        auto& slot = config.variant == Variant::AS1 ? trace.lambda : trace.y;
        slot = config.initial_guess;
    }
    double scale = detail::trace_norm(trace, data.spatial_weight);

    auto& rep = result.report;
    const std::size_t split = config.time.interface_index();
    std::size_t flat_ratios = 0;

    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        SweepResult sweep = schwarz_step(config, data, trace, it);
        rep.state_error.push_back(
            detail::split_error(sweep, result.reference, split, Component::State, data.spatial_weight));
        rep.adjoint_error.push_back(
            detail::split_error(sweep, result.reference, split, Component::Adjoint, data.spatial_weight));
        rep.interface_jump.push_back(sweep.jump);
        scale = std::max(scale, detail::trace_norm(sweep.trace, data.spatial_weight));
        trace = sweep.trace;
        result.last = std::move(sweep);

        const double jump = rep.interface_jump.back();
        if (jump <= config.tolerance * scale) {
            rep.status = SchwarzStatus::Converged;
            break;
        }
        const double first = rep.state_error.front();
        if (first > 0.0 && rep.state_error.back() > kDivergenceGrowth * first) {
            rep.status = SchwarzStatus::Diverged;
            break;
        }
        if (it >= 2) {
            const double prev = rep.interface_jump[it - 2];
            const bool flat = prev > 0.0 && std::abs(jump / prev - 1.0) <= kStagnationBand;
            flat_ratios = flat ? flat_ratios + 1 : 0;
            if (flat_ratios >= kStagnationSweeps) {
                rep.status = SchwarzStatus::Stagnated;
                break;
            }
        }
    }

    if (rep.iterations() >= 3) {
        try {
            rep.observed_rate = observed_rate(rep.state_error);
        } catch (const InvalidConfig&) {
            rep.observed_rate = 0.0;  // error vanished to rounding within two sweeps
        }
    }
    return result;
}

/// Seeded uniform(-scale, scale) interface guess.
inline std::vector<double> random_guess(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> g(n);
    for (auto& v : g) v = dist(rng);
    return g;
}

}  // namespace timedd
