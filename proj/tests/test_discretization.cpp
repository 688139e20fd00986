#include "timedd/discretization.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace timedd;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::MatrixXd laplacian(std::size_t n, double h) {
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        a(i, i) = 2.0 / (h * h);
        if (i > 0) a(i, i - 1) = -1.0 / (h * h);
        if (i + 1 < m) a(i, i + 1) = -1.0 / (h * h);
    }
    return a;
}

}  // namespace

TEST(DirichletEigenvalues, SingleInteriorPoint) {
    const auto d = dirichlet_eigenvalues(SpatialGrid(1, 1.0));
    ASSERT_EQ(d.size(), 1u);
    EXPECT_DOUBLE_EQ(d[0], 8.0);
}

TEST(DirichletEigenvalues, ThreePointsMatchDenseEigensolver) {
    const SpatialGrid g(3, 1.0);
    const auto d = dirichlet_eigenvalues(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(3, g.mesh_size()));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(d[static_cast<std::size_t>(i)], es.eigenvalues()(i), 1e-12 * es.eigenvalues()(i));
    EXPECT_NEAR(d[0], 32.0 - 16.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(d[1], 32.0, 1e-12);
    EXPECT_NEAR(d[2], 32.0 + 16.0 * std::sqrt(2.0), 1e-12);
}

TEST(DirichletEigenvalues, AgreesWithDenseEigensolverUpTo64) {
    for (std::size_t n : {1u, 2u, 7u, 16u, 31u, 64u}) {
        for (double L : {1.0, 2.5}) {
            const SpatialGrid g(n, L);
            const auto d = dirichlet_eigenvalues(g);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(n, g.mesh_size()));
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_GT(d[i], 0.0);
                if (i > 0) EXPECT_GT(d[i], d[i - 1]);
                const double ref = es.eigenvalues()(static_cast<Eigen::Index>(i));
                EXPECT_NEAR(d[i], ref, 1e-12 * ref) << "n=" << n << " i=" << i;
            }
        }
    }
}

TEST(DirichletEigenvalues, SmallestApproachesPiSquared) {
    const SpatialGrid g(999, 1.0);
    const double h = g.mesh_size();
    const double d1 = dirichlet_eigenvalues(g)[0];
    EXPECT_NEAR(d1, pi * pi - h * h * std::pow(pi, 4) / 12.0, 1e-10);
    EXPECT_NEAR(d1 - pi * pi, -8.11e-6, 0.01e-6);
}

TEST(DirichletEigenvalues, ExpansionCoefficientConvergesAtSecondOrder) {
    std::vector<double> residual;
    for (std::size_t n : {31u, 63u, 127u, 255u}) {
        const SpatialGrid g(n, 1.0);
        const double h = g.mesh_size();
        residual.push_back((dirichlet_eigenvalues(g)[0] - pi * pi) / (h * h) + std::pow(pi, 4) / 12.0);
    }
    for (std::size_t k = 1; k < residual.size(); ++k) EXPECT_NEAR(residual[k - 1] / residual[k], 4.0, 0.05);
}

TEST(SpatialGrid, RejectsInvalid) {
    EXPECT_THROW(SpatialGrid(0, 1.0), InvalidGrid);
    EXPECT_THROW(SpatialGrid(4, 0.0), InvalidGrid);
    EXPECT_THROW(SpatialGrid(4, -1.0), InvalidGrid);
    const SpatialGrid g(9, 3.0);
    EXPECT_NEAR(g.mesh_size() * 10.0, 3.0, 1e-15);
    EXPECT_GT(g.node(1), 0.0);
    EXPECT_LT(g.node(9), 3.0);
}

TEST(SineTransform, IsOrthogonalInvolution) {
    std::mt19937 rng(3);
    std::normal_distribution<double> dist;
    for (std::size_t n : {1u, 5u, 31u, 100u}) {
        const SpatialGrid g(n, 1.0);
        std::vector<double> v(n);
        for (auto& x : v) x = dist(rng);
        const auto c = sine_transform(v, g);
        const auto back = sine_transform(c, g);
        double nv = 0.0, nc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(back[i], v[i], 1e-13);
            nv += v[i] * v[i];
            nc += c[i] * c[i];
        }
        EXPECT_NEAR(std::sqrt(nc), std::sqrt(nv), 1e-13 * std::sqrt(nv));
    }
}

TEST(SineTransform, EigenvectorMapsToUnitVector) {
    const std::size_t n = 12;
    const SpatialGrid g(n, 2.0);
    const double scale = std::sqrt(2.0 / static_cast<double>(n + 1));
    for (std::size_t mode = 1; mode <= n; ++mode) {
        std::vector<double> v(n);
        for (std::size_t j = 1; j <= n; ++j) v[j - 1] = scale * std::sin(pi * static_cast<double>(mode) * g.node(j) / g.length());
        const auto c = sine_transform(v, g);
        for (std::size_t i = 1; i <= n; ++i) EXPECT_NEAR(c[i - 1], i == mode ? 1.0 : 0.0, 1e-13);
    }
}

TEST(SineTransform, DiagonalizesLaplacian) {
    const std::size_t n = 10;
    const SpatialGrid g(n, 1.0);
    const auto d = dirichlet_eigenvalues(g);
    const Eigen::MatrixXd a = laplacian(n, g.mesh_size());
    Eigen::MatrixXd p(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const auto col = sine_transform(e, g);
        for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }
    const Eigen::MatrixXd dmat = p * a * p.transpose();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
            EXPECT_NEAR(dmat(i, j), i == j ? d[static_cast<std::size_t>(i)] : 0.0, 1e-10 * d.back());
}

TEST(SineTransform, RejectsLengthMismatch) {
    const SpatialGrid g(4, 1.0);
    std::vector<double> v(5, 1.0);
    EXPECT_THROW(sine_transform(v, g), InvalidConfig);
}

TEST(TimeGrid, InterfaceIsExactNode) {
    const TimeGrid t(1.0, 0.3, 3, 7);
    EXPECT_EQ(t.nodes().size(), 11u);
    EXPECT_EQ(t.nodes()[t.interface_index()], 0.3);
    EXPECT_EQ(t.nodes().back(), 1.0);
    EXPECT_EQ(t.nodes_q1().back(), t.nodes_q2().front());
    EXPECT_EQ(t.nodes_q1().size() + t.nodes_q2().size(), t.nodes().size() + 1);
    for (std::size_t k = 1; k < t.nodes().size(); ++k) EXPECT_GT(t.nodes()[k], t.nodes()[k - 1]);
}

TEST(TimeGrid, UniformRejectsOffGridInterface) {
    const auto t = TimeGrid::uniform(1.0, 0.5, 32);
    EXPECT_EQ(t.steps_q1(), 16u);
    EXPECT_EQ(t.steps_q2(), 16u);
    EXPECT_THROW(TimeGrid::uniform(1.0, 0.3, 32), InvalidConfig);
    EXPECT_THROW(TimeGrid::uniform(1.0, 1.0 / 3.0, 32), InvalidConfig);
    EXPECT_NO_THROW(TimeGrid::uniform(1.0, 0.25, 32));
    EXPECT_THROW(TimeGrid(1.0, 1.0, 4, 4), InvalidConfig);
    EXPECT_THROW(TimeGrid(1.0, 0.5, 0, 4), InvalidConfig);
}

TEST(ProjectTarget, ZeroFieldGivesZeroSeries) {
    const SpectralSpace space(SpatialGrid(7, 1.0));
    const auto time = TimeGrid::uniform(1.0, 0.5, 8);
    const auto s = project_target([](double, double) { return 0.0; }, space, time);
    for (const auto& mode : s)
        for (double v : mode) EXPECT_EQ(v, 0.0);
}

TEST(ProjectTarget, SeparableFieldLandsInFirstMode) {
    const std::size_t n = 15;
    const SpectralSpace space(SpatialGrid(n, 2.0));
    const auto time = TimeGrid::uniform(1.0, 0.5, 10);
    auto g = [](double t) { return 1.0 + 3.0 * t * t; };
    const auto s = project_target([&](double t, double x) { return g(t) * std::sin(pi * x / 2.0); }, space, time);
    const double factor = std::sqrt(static_cast<double>(n + 1) / 2.0);
    for (std::size_t k = 0; k < time.nodes().size(); ++k) {
        EXPECT_NEAR(s[0][k], factor * g(time.nodes()[k]), 1e-12 * factor * g(time.nodes()[k]));
        for (std::size_t i = 1; i < n; ++i) EXPECT_NEAR(s[i][k], 0.0, 1e-12 * factor * g(time.nodes()[k]));
    }
}

TEST(ProjectTarget, HeatTargetReconstructsPointwiseSamples) {
    const SpectralSpace space(SpatialGrid(31, 1.0));
    const auto time = TimeGrid::uniform(1.0, 0.5, 32);
    auto target = [](double t, double x) {
        return (std::exp(pi * pi * t) - std::exp(pi * pi)) / (2.0 * pi * pi) * std::sin(pi * x);
    };
    const auto s = project_target(target, space, time);
    for (std::size_t k = 0; k < time.nodes().size(); ++k) {
        std::vector<double> c(31);
        for (std::size_t i = 0; i < 31; ++i) c[i] = s[i][k];
        const auto samples = sine_transform(c, space.grid());
        for (std::size_t j = 1; j <= 31; ++j) {
            const double ref = target(time.nodes()[k], space.grid().node(j));
            EXPECT_NEAR(samples[j - 1], ref, 1e-11 * 1000.0);
        }
    }
}

TEST(Quadrature, TrapezoidIsExactForLinear) {
    const std::vector<double> t{0.0, 0.1, 0.5, 1.0};
    const std::vector<double> v{1.0, 1.2, 2.0, 3.0};
    EXPECT_NEAR(trapezoid(t, v), 2.0, 1e-15);
    EXPECT_NEAR(spatial_l2(std::vector<double>{3.0, 4.0}, 0.25), 2.5, 1e-15);
}
