#pragma once

#include "timedd/discretization.hpp"
#include "timedd/error.hpp"
#include "timedd/mode_solver.hpp"
#include "timedd/params.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace timedd {

/// Tracking problem with alpha = 0 and gamma = 1/eps compared against the
/// null-controllability optimum u*.
struct PenalizationRecord {
    double eps;
    double misfit;        ///< ||y_eps(T) - y_T||_{L2(Omega)}
    double bound;         ///< sqrt(nu eps) ||u*||_{L2(Q)}
    double control_norm;  ///< ||u_eps||_{L2(Q)}
    double control_gap;   ///< ||u_eps - u*||_{L2(Q)}
    double state_gap;     ///< ||y_eps - y*||_{L2(Q)}
    std::string warning;  ///< non-empty if this eps could not be solved reliably
};

struct PenalizationStudy {
    double reference_control_norm;  ///< ||u*||_{L2(Q)}
    std::vector<PenalizationRecord> records;
};

/// Runs the eps sweep. The final-state target is zero and alpha is forced to
/// zero; the interior target in `data` is irrelevant and ignored.
inline PenalizationStudy penalization_sweep(const ProblemParams& base, std::span<const double> eps_list,
                                            const ModeData& data, const TimeGrid& time) {
    for (double e : eps_list)
        if (!(e > 0.0) || !std::isfinite(e)) throw InvalidConfig("eps-list: every eps must be > 0");

    ModeData zero_target = data;
    for (auto& s : zero_target.target) s.clear();

    ProblemParams p = base;
    p.alpha = 0.0;
    const auto reference = monolithic_solve(System::S2, p, zero_target, time);

    PenalizationStudy study;
    study.reference_control_norm = control_norm(reference, p, data.spatial_weight);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double eps : eps_list) {
        PenalizationRecord rec{eps, nan, std::sqrt(p.nu * eps) * study.reference_control_norm, nan, nan, nan, {}};
        try {
            ProblemParams pe = p;
            pe.gamma = 1.0 / eps;
            const auto sol = monolithic_solve(System::S1, pe, zero_target, time);
            std::vector<double> final_state(sol.size());
            for (std::size_t i = 0; i < sol.size(); ++i) final_state[i] = sol[i].y.back();
            rec.misfit = spatial_l2(final_state, data.spatial_weight);
            rec.control_norm = control_norm(sol, pe, data.spatial_weight);
            rec.control_gap = l2_distance(sol, reference, Component::Adjoint, data.spatial_weight) / p.nu;
            rec.state_gap = l2_distance(sol, reference, Component::State, data.spatial_weight);
        } catch (const Error& e) {
            rec.warning = e.what();
        }
        study.records.push_back(std::move(rec));
    }
    return study;
}

/// Least-squares slope of log(misfit) against log(eps) over the usable records.
inline double misfit_slope(std::span<const PenalizationRecord> records) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (const auto& r : records) {
        if (!r.warning.empty() || !(r.misfit > 0.0)) continue;
        const double x = std::log(r.eps);
        const double y = std::log(r.misfit);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw InvalidConfig("misfit_slope: need at least two usable records");
    const double md = static_cast<double>(m);
    return (md * sxy - sx * sy) / (md * sxx - sx * sx);
}

}  // namespace timedd
