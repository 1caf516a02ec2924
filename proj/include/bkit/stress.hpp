#pragma once

#include <string>
#include <vector>

namespace bkit::stress {

// Inputs to the breakout-width stress relation, all in MPa.
struct StressParams {
    double shmin = 0.0;  // minimum horizontal stress
    double pf = 0.0;     // pore pressure
    double cef = 0.0;    // effective rock-mass strength

    void validate() const;  // throws ParameterError
};

// Widths at which 1 - 2cos(pi - W) vanishes inside (0, 360).
inline constexpr double kSingularWidthDeg = 120.0;
inline constexpr double kSecondSingularWidthDeg = 240.0;
inline constexpr double kSingularGuardDeg = 1e-6;

// Maximum horizontal stress (MPa) implied by a breakout of full angular width `width_deg`:
//
//   S_Hmax = (C_ef + P_f) / (1 - 2cos(pi - W)) - S_hmin (1 + 2cos(pi - W)) / (1 - 2cos(pi - W))
//
// Throws ParameterError unless 0 < W < 360 and SingularityError within the guard band of 120 or 240.
double shmax(double width_deg, const StressParams& params);

// |S_Hmax(W + dW) - S_Hmax(W)|. With S_hmin fixed this is also the differential-stress error.
double width_sensitivity(double width0_deg, double dwidth_deg, const StressParams& params);

struct SweepRow {
    double width0_deg = 0.0;
    double delta_shmax = 0.0;  // MPa
};

struct SweepResult {
    std::vector<SweepRow> rows;
    // Baselines left out because W or W + dW fell in a singular neighborhood.
    std::vector<double> skipped_widths;
};

// Evaluates width_sensitivity on lo, lo+step, ... <= hi. Baselines whose pair straddles or
// touches a singular width split the range; they are listed in `skipped_widths` with a warning.
SweepResult sensitivity_sweep(double lo_deg, double hi_deg, double step_deg, double dwidth_deg,
                              const StressParams& params);

std::string format_sweep_csv(const SweepResult& sweep);

}  // namespace bkit::stress
