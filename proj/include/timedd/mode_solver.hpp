#pragma once

#include "timedd/banded_lu.hpp"
#include "timedd/discretization.hpp"
#include "timedd/error.hpp"
#include "timedd/params.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace timedd {

/// One spectral mode of an optimality system:
///   y' + kappa d y = lambda / nu
///   lambda' - kappa d lambda = alpha (y - target)   (tracking)
///   lambda' - kappa d lambda = 0                    (null controllability)
struct ModeSystem {
    double d;
    ProblemParams params;
    System system;
    /// Target coefficient at every node of the solve interval; empty means zero.
    std::span<const double> target{};
};

/// Scalar condition at one end of the time interval.
struct BoundaryCondition {
    enum class Kind {
        State,        ///< y = value
        Adjoint,      ///< lambda = value
        AdjointRobin  ///< lambda + gamma y = value (right end only)
    };
    Kind kind;
    double value = 0.0;

    static BoundaryCondition state(double v) { return {Kind::State, v}; }
    static BoundaryCondition adjoint(double v) { return {Kind::Adjoint, v}; }
    static BoundaryCondition adjoint_robin(double v) { return {Kind::AdjointRobin, v}; }
};

struct BoundarySpec {
    double a;
    double b;
    BoundaryCondition left;
    BoundaryCondition right;
};

/// Time-discrete state/adjoint pair of one mode.
struct ModeTrajectory {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> lambda;
};

namespace detail {

inline void put_condition(BandMatrix<double>& m, std::vector<double>& rhs, std::size_t row,
                          std::size_t y_col, const BoundaryCondition& bc, double gamma) {
    switch (bc.kind) {
        case BoundaryCondition::Kind::State:
            m(row, y_col) = 1.0;
            rhs[row] = bc.value;
            break;
        case BoundaryCondition::Kind::Adjoint:
            m(row, y_col + 1) = 1.0;
            rhs[row] = bc.value;
            break;
        case BoundaryCondition::Kind::AdjointRobin:
            // large gamma: divide through so the row stays O(1)
            if (gamma > 1.0) {
                m(row, y_col) = 1.0;
                m(row, y_col + 1) = 1.0 / gamma;
                rhs[row] = bc.value / gamma;
            } else {
                m(row, y_col) = gamma;
                m(row, y_col + 1) = 1.0;
                rhs[row] = bc.value;
            }
            break;
    }
}

inline void pin_condition(ModeTrajectory& tr, std::size_t k, const BoundaryCondition& bc) {
    if (bc.kind == BoundaryCondition::Kind::State) tr.y[k] = bc.value;
    if (bc.kind == BoundaryCondition::Kind::Adjoint) tr.lambda[k] = bc.value;
}

}  // namespace detail

/// Crank-Nicolson solve of one mode on the given (strictly increasing) nodes.
///
/// Unknowns are interleaved (y_0, lambda_0, y_1, lambda_1, ...). Row 0 is the
/// left condition, rows 2j+1 / 2j+2 the trapezoidal state / adjoint
/// equations on [t_j, t_{j+1}] scaled by the step, and the last row the right
/// condition. The matrix is banded with two sub- and two super-diagonals.
inline ModeTrajectory solve_mode_bvp(const ModeSystem& sys, const BoundaryCondition& left,
                                     const BoundaryCondition& right, std::span<const double> nodes) {
    if (nodes.size() < 2) throw InvalidConfig("solve_mode_bvp: need at least one step");
    if (!sys.target.empty() && sys.target.size() != nodes.size())
        throw InvalidConfig("solve_mode_bvp: target series length does not match the time nodes");
    if (left.kind == BoundaryCondition::Kind::AdjointRobin)
        throw InvalidConfig("solve_mode_bvp: Robin condition is only allowed at the right end");
    if (!std::isfinite(left.value) || !std::isfinite(right.value))
        throw InvalidConfig("solve_mode_bvp: boundary data must be finite");

    const std::size_t m = nodes.size() - 1;
    const std::size_t n = 2 * (m + 1);
    const double kd = sys.params.kappa * sys.d;
    const double inv_nu = 1.0 / sys.params.nu;
    const double alpha = sys.system == System::S1 ? sys.params.alpha : 0.0;
    auto target = [&](std::size_t k) { return sys.target.empty() ? 0.0 : sys.target[k]; };

    BandMatrix<double> a(n, 2, 2);
    std::vector<double> rhs(n, 0.0);

    detail::put_condition(a, rhs, 0, 0, left, sys.params.gamma);
    for (std::size_t j = 0; j < m; ++j) {
        const double h = nodes[j + 1] - nodes[j];
        if (!(h > 0.0)) throw InvalidConfig("solve_mode_bvp: time nodes must be increasing");
        const std::size_t y0 = 2 * j, l0 = 2 * j + 1, y1 = 2 * j + 2, l1 = 2 * j + 3;

        const std::size_t rs = 2 * j + 1;
        a(rs, y0) = -1.0 + 0.5 * h * kd;
        a(rs, y1) = 1.0 + 0.5 * h * kd;
        a(rs, l0) = -0.5 * h * inv_nu;
        a(rs, l1) = -0.5 * h * inv_nu;

        const std::size_t ra = 2 * j + 2;
        a(ra, l0) = -1.0 - 0.5 * h * kd;
        a(ra, l1) = 1.0 - 0.5 * h * kd;
        a(ra, y0) = -0.5 * h * alpha;
        a(ra, y1) = -0.5 * h * alpha;
        rhs[ra] = -0.5 * h * alpha * (target(j) + target(j + 1));
    }
    detail::put_condition(a, rhs, n - 1, n - 2, right, sys.params.gamma);

    BandLU<double> lu(std::move(a));
    lu.solve_in_place(rhs);

    ModeTrajectory tr{{nodes.begin(), nodes.end()}, std::vector<double>(m + 1), std::vector<double>(m + 1)};
    for (std::size_t k = 0; k <= m; ++k) {
        tr.y[k] = rhs[2 * k];
        tr.lambda[k] = rhs[2 * k + 1];
        if (!std::isfinite(tr.y[k]) || !std::isfinite(tr.lambda[k]))
            throw SingularSystem("solve_mode_bvp: non-finite solution");
    }
    // Dirichlet-type rows hold up to rounding; store the prescribed values exactly.
    detail::pin_condition(tr, 0, left);
    detail::pin_condition(tr, m, right);
    return tr;
}

/// Uniform-step variant on [bc.a, bc.b].
inline ModeTrajectory solve_mode_bvp(const ModeSystem& sys, const BoundarySpec& bc, std::size_t steps) {
    if (steps == 0) throw InvalidConfig("solve_mode_bvp: step count must be >= 1");
    if (!(bc.b > bc.a)) throw InvalidConfig("solve_mode_bvp: empty interval");
    std::vector<double> nodes(steps + 1);
    const double h = (bc.b - bc.a) / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) nodes[k] = bc.a + static_cast<double>(k) * h;
    nodes[steps] = bc.b;
    return solve_mode_bvp(sys, bc.left, bc.right, nodes);
}

/// Spectral data of one problem instance: eigenvalues, initial state and
/// target per mode on the global time grid.
struct ModeData {
    std::vector<double> eigenvalues;
    std::vector<double> initial;
    /// target[i][k]; an empty inner vector means a zero target for mode i.
    std::vector<std::vector<double>> target;
    /// ||field||_{L2(Omega)}^2 = spatial_weight * sum_i c_i^2.
    double spatial_weight = 1.0;

    std::size_t size() const noexcept { return eigenvalues.size(); }

    void validate(const TimeGrid& time) const {
        if (eigenvalues.empty()) throw InvalidConfig("mode data: no modes");
        if (initial.size() != eigenvalues.size())
            throw InvalidConfig("mode data: initial coefficients length differs from mode count");
        if (target.size() != eigenvalues.size())
            throw InvalidConfig("mode data: target series count differs from mode count");
        for (const auto& s : target)
            if (!s.empty() && s.size() != time.nodes().size())
                throw InvalidConfig("mode data: target series length differs from time grid");
        for (double d : eigenvalues)
            if (!(d > 0.0)) throw InvalidConfig("mode data: eigenvalues must be > 0");
    }

    /// Zero target and initial state for every mode.
    static ModeData homogeneous(std::vector<double> eigenvalues, double spatial_weight = 1.0) {
        const std::size_t n = eigenvalues.size();
        return {std::move(eigenvalues), std::vector<double>(n, 0.0),
                std::vector<std::vector<double>>(n), spatial_weight};
    }

    /// Projects y0(x) and target(t, x) onto the grid spectrum.
    template <class InitialFn, class TargetFn>
    static ModeData from_grid(const SpectralSpace& space, const TimeGrid& time, InitialFn&& y0,
                              TargetFn&& target) {
        return {{space.eigenvalues().begin(), space.eigenvalues().end()},
                project_initial(y0, space), project_target(target, space, time),
                space.spatial_weight()};
    }
};

/// Final-time condition for the whole problem on the right end.
inline BoundaryCondition terminal_condition(System system, const ProblemParams& p, double target_at_T) {
    return system == System::S1 ? BoundaryCondition::adjoint_robin(p.gamma * target_at_T)
                                : BoundaryCondition::state(0.0);
}

inline double target_at(const ModeData& data, std::size_t mode, std::size_t node) {
    const auto& s = data.target[mode];
    return s.empty() ? 0.0 : s[node];
}

/// Undecomposed optimality system on (0, T), one trajectory per mode.
inline std::vector<ModeTrajectory> monolithic_solve(System system, const ProblemParams& params,
                                                    const ModeData& data, const TimeGrid& time) {
    params.validate();
    data.validate(time);
    const auto nodes = time.nodes();
    std::vector<ModeTrajectory> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const ModeSystem sys{data.eigenvalues[i], params, system, data.target[i]};
        out.push_back(solve_mode_bvp(sys, BoundaryCondition::state(data.initial[i]),
                                     terminal_condition(system, params, target_at(data, i, nodes.size() - 1)),
                                     nodes));
    }
    return out;
}

/// ||u||_{L2(Q)} with u = lambda / nu: trapezoidal in time, Parseval in space.
inline double control_norm(std::span<const ModeTrajectory> modes, const ProblemParams& params,
                           double spatial_weight) {
    double acc = 0.0;
    for (const auto& m : modes) acc += trapezoid_squared(m.t, m.lambda);
    return std::sqrt(spatial_weight * acc) / params.nu;
}

/// Which component of a trajectory a norm refers to.
enum class Component { State, Adjoint };

/// L2(Q) distance between two trajectory collections on identical nodes.
inline double l2_distance(std::span<const ModeTrajectory> a, std::span<const ModeTrajectory> b,
                          Component c, double spatial_weight) {
    if (a.size() != b.size()) throw InvalidConfig("l2_distance: mode count mismatch");
    double acc = 0.0;
    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& va = c == Component::State ? a[i].y : a[i].lambda;
        const auto& vb = c == Component::State ? b[i].y : b[i].lambda;
        if (va.size() != vb.size()) throw InvalidConfig("l2_distance: node count mismatch");
        diff.resize(va.size());
        for (std::size_t k = 0; k < va.size(); ++k) diff[k] = va[k] - vb[k];
        acc += trapezoid_squared(a[i].t, diff);
    }
    return std::sqrt(spatial_weight * acc);
}

}  // namespace timedd
