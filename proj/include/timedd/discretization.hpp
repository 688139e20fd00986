#pragma once

#include "timedd/error.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace timedd {

/// Uniform interior grid of (0, L) with homogeneous Dirichlet ends.
class SpatialGrid {
public:
    SpatialGrid(std::size_t interior_points, double length)
        : n_(interior_points), length_(length) {
        if (n_ == 0) throw InvalidGrid("spatial grid needs at least one interior point");
        if (!(length_ > 0.0) || !std::isfinite(length_))
            throw InvalidGrid("spatial grid length must be positive and finite");
        h_ = length_ / static_cast<double>(n_ + 1);
    }

    std::size_t size() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double mesh_size() const noexcept { return h_; }

    /// Interior node x_i for i = 1..N.
    double node(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }

private:
    std::size_t n_;
    double length_;
    double h_{};
};

/// Eigenvalues of (1/h^2) tridiag(-1, 2, -1), ascending.
inline std::vector<double> dirichlet_eigenvalues(const SpatialGrid& grid) {
    const std::size_t n = grid.size();
    const double h = grid.mesh_size();
    std::vector<double> d(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double s = std::sin(std::numbers::pi * static_cast<double>(i) /
                                  (2.0 * static_cast<double>(n + 1)));
        d[i - 1] = 4.0 / (h * h) * s * s;
    }
    return d;
}

/// Orthonormal type-I sine transform. The matrix
/// P_ij = sqrt(2/(N+1)) sin(pi i j / (N+1)) is symmetric and orthogonal,
/// so the same call maps nodal values to mode coefficients and back.
inline std::vector<double> sine_transform(std::span<const double> values, const SpatialGrid& grid) {
    const std::size_t n = grid.size();
    if (values.size() != n)
        throw InvalidConfig("sine_transform: expected " + std::to_string(n) + " values, got " +
                            std::to_string(values.size()));
    const double scale = std::sqrt(2.0 / static_cast<double>(n + 1));
    const double w = std::numbers::pi / static_cast<double>(n + 1);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            // sin(pi*i*j/(N+1)) with the product reduced mod 2(N+1) keeps the argument small
            const std::size_t r = (i * j) % (2 * (n + 1));
            acc += std::sin(w * static_cast<double>(r)) * values[j - 1];
        }
        out[i - 1] = scale * acc;
    }
    return out;
}

/// Grid plus its Dirichlet spectrum.
class SpectralSpace {
public:
    explicit SpectralSpace(SpatialGrid grid) : grid_(grid), eigenvalues_(dirichlet_eigenvalues(grid_)) {}

    const SpatialGrid& grid() const noexcept { return grid_; }
    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    std::size_t size() const noexcept { return eigenvalues_.size(); }

    /// Weight turning the Euclidean norm of mode coefficients into the
    /// discrete L2(Omega) norm, ||v||^2 = h * sum_j v_j^2.
    double spatial_weight() const noexcept { return grid_.mesh_size(); }

private:
    SpatialGrid grid_;
    std::vector<double> eigenvalues_;
};

/// Time grid of (0, T) split at the interface Gamma, uniform on each side.
/// Node `interface_index()` is exactly Gamma.
class TimeGrid {
public:
    TimeGrid(double final_time, double interface, std::size_t steps_q1, std::size_t steps_q2)
        : T_(final_time), gamma_(interface), m1_(steps_q1), m2_(steps_q2) {
        if (!(T_ > 0.0) || !std::isfinite(T_)) throw InvalidConfig("time grid: T must be positive");
        if (!(gamma_ > 0.0 && gamma_ < T_))
            throw InvalidConfig("time grid: interface must satisfy 0 < Gamma < T");
        if (m1_ == 0 || m2_ == 0) throw InvalidConfig("time grid: step counts must be >= 1");
        nodes_.reserve(m1_ + m2_ + 1);
        const double dt1 = step_q1();
        const double dt2 = step_q2();
        for (std::size_t k = 0; k < m1_; ++k) nodes_.push_back(static_cast<double>(k) * dt1);
        nodes_.push_back(gamma_);
        for (std::size_t k = 1; k < m2_; ++k) nodes_.push_back(gamma_ + static_cast<double>(k) * dt2);
        nodes_.push_back(T_);
    }

    /// Uniform global step `total_steps` over (0, T); Gamma has to fall on a node.
    static TimeGrid uniform(double final_time, double interface, std::size_t total_steps) {
        if (total_steps < 2) throw InvalidConfig("time grid: need at least two steps");
        if (!(final_time > 0.0)) throw InvalidConfig("time grid: T must be positive");
        const double exact = interface / final_time * static_cast<double>(total_steps);
        const double rounded = std::round(exact);
        if (std::abs(exact - rounded) > 1e-9 * static_cast<double>(total_steps) || rounded < 1.0 ||
            rounded >= static_cast<double>(total_steps))
            throw InvalidConfig("time grid: Gamma = " + std::to_string(interface) +
                                " is not a node of the uniform grid with " +
                                std::to_string(total_steps) + " steps");
        const auto m1 = static_cast<std::size_t>(rounded);
        return TimeGrid(final_time, interface, m1, total_steps - m1);
    }

    double final_time() const noexcept { return T_; }
    double interface() const noexcept { return gamma_; }
    std::size_t steps_q1() const noexcept { return m1_; }
    std::size_t steps_q2() const noexcept { return m2_; }
    std::size_t steps() const noexcept { return m1_ + m2_; }
    std::size_t interface_index() const noexcept { return m1_; }
    double step_q1() const noexcept { return gamma_ / static_cast<double>(m1_); }
    double step_q2() const noexcept { return (T_ - gamma_) / static_cast<double>(m2_); }

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> nodes_q1() const noexcept { return std::span(nodes_).first(m1_ + 1); }
    std::span<const double> nodes_q2() const noexcept { return std::span(nodes_).subspan(m1_); }

private:
    double T_;
    double gamma_;
    std::size_t m1_;
    std::size_t m2_;
    std::vector<double> nodes_;
};

/// Sine coefficients of f sampled at the interior nodes.
template <class F>
std::vector<double> project_initial(F&& f, const SpectralSpace& space) {
    const auto& g = space.grid();
    std::vector<double> samples(g.size());
    for (std::size_t j = 1; j <= g.size(); ++j) samples[j - 1] = f(g.node(j));
    return sine_transform(samples, g);
}

/// Per-mode time series of a space-time field: result[i][k] is the i-th
/// sine coefficient of f(t_k, .) on every global time node.
template <class F>
std::vector<std::vector<double>> project_target(F&& f, const SpectralSpace& space, const TimeGrid& time) {
    const auto& g = space.grid();
    const auto t = time.nodes();
    std::vector<std::vector<double>> series(g.size(), std::vector<double>(t.size()));
    std::vector<double> samples(g.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        for (std::size_t j = 1; j <= g.size(); ++j) samples[j - 1] = f(t[k], g.node(j));
        const auto c = sine_transform(samples, g);
        for (std::size_t i = 0; i < c.size(); ++i) series[i][k] = c[i];
    }
    return series;
}

/// Trapezoidal rule for samples `v` at nodes `t`.
inline double trapezoid(std::span<const double> t, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (v[k] + v[k - 1]);
    return acc;
}

/// Trapezoidal integral of v^2.
inline double trapezoid_squared(std::span<const double> t, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k)
        acc += 0.5 * (t[k] - t[k - 1]) * (v[k] * v[k] + v[k - 1] * v[k - 1]);
    return acc;
}

/// Discrete L2(Omega) norm of a field given by its mode coefficients.
inline double spatial_l2(std::span<const double> coefficients, double spatial_weight) {
    double acc = 0.0;
    for (double c : coefficients) acc += c * c;
    return std::sqrt(spatial_weight * acc);
}

}  // namespace timedd
