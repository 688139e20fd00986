#include "timedd/experiments.hpp"
#include "timedd/penalization.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace timedd;

namespace {

struct HeatData {
    ProblemParams p;
    SpectralSpace space{SpatialGrid(31, 1.0)};
    TimeGrid time = TimeGrid::uniform(1.0, 0.5, 32);
    ModeData data;
    HeatData() { data = heat_case::mode_data(p, space, time); }
};

}  // namespace

TEST(Penalization, BoundAndMonotonicity) {
    const HeatData s;
    const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const auto study = penalization_sweep(s.p, eps, s.data, s.time);
    ASSERT_EQ(study.records.size(), eps.size());
    EXPECT_GT(study.reference_control_norm, 0.0);
    for (std::size_t k = 0; k < eps.size(); ++k) {
        const auto& r = study.records[k];
        EXPECT_TRUE(r.warning.empty());
        EXPECT_LE(r.misfit, 1.05 * r.bound) << r.eps;
        EXPECT_LE(r.control_norm, study.reference_control_norm * (1 + 1e-12));
        if (k > 0) {
            const auto& q = study.records[k - 1];
            EXPECT_LT(r.misfit, q.misfit);
            EXPECT_LT(r.control_gap, q.control_gap);
            EXPECT_GT(r.control_norm, q.control_norm);
        }
    }
}

TEST(Penalization, TinyEpsRecoversControllability) {
    const HeatData s;
    const std::vector<double> eps{1e-8};
    const auto study = penalization_sweep(s.p, eps, s.data, s.time);
    EXPECT_LT(study.records[0].control_gap, 1e-6);
    EXPECT_LT(study.records[0].state_gap, 1e-6);
}

TEST(Penalization, IgnoresTrackingWeight) {
    HeatData s;
    const std::vector<double> eps{1e-2};
    const auto a = penalization_sweep(s.p, eps, s.data, s.time);
    s.p.alpha = 50.0;
    const auto b = penalization_sweep(s.p, eps, s.data, s.time);
    EXPECT_EQ(a.records[0].misfit, b.records[0].misfit);
}

TEST(Penalization, RejectsInvalidEps) {
    const HeatData s;
    EXPECT_THROW(penalization_sweep(s.p, std::vector<double>{1e-2, 0.0}, s.data, s.time), InvalidConfig);
    EXPECT_THROW(penalization_sweep(s.p, std::vector<double>{-1.0}, s.data, s.time), InvalidConfig);
}

TEST(MisfitSlope, PowerLaw) {
    std::vector<PenalizationRecord> recs;
    for (double e : {1e-1, 1e-2, 1e-3}) recs.push_back({e, 2.0 * std::sqrt(e), 0, 0, 0, 0, {}});
    EXPECT_NEAR(misfit_slope(recs), 0.5, 1e-12);
    recs.push_back({1e-4, 1.0, 0, 0, 0, 0, "failed"});
    EXPECT_NEAR(misfit_slope(recs), 0.5, 1e-12);
    recs.resize(1);
    EXPECT_THROW(misfit_slope(recs), InvalidConfig);
}
