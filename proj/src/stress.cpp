#include <bkit/stress.hpp>

#include <bkit/errors.hpp>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>

namespace bkit::stress {

void StressParams::validate() const {
    if (!(cef > 0.0)) throw ParameterError("C_ef must be positive");
    if (!(pf >= 0.0)) throw ParameterError("pore pressure must be non-negative");
    if (!(shmin > 0.0)) throw ParameterError("S_hmin must be positive");
}

double shmax(double width_deg, const StressParams& params) {
    params.validate();
    if (!(width_deg > 0.0 && width_deg < 360.0)) {
        throw ParameterError(fmt::format("breakout width {} deg outside (0, 360)", width_deg));
    }
    for (double singular : {kSingularWidthDeg, kSecondSingularWidthDeg}) {
        if (std::abs(width_deg - singular) <= kSingularGuardDeg) {
            throw SingularityError(
                fmt::format("breakout width {} deg is at the {} deg singularity", width_deg, singular));
        }
    }
    const double c = std::cos(std::numbers::pi - width_deg * std::numbers::pi / 180.0);
    // At 90 deg cos(pi/2) evaluates to ~6e-17, not 0; snap so the identity case is exact.
    const double cs = std::abs(c) < 1e-15 ? 0.0 : c;
    const double denom = 1.0 - 2.0 * cs;
    return (params.cef + params.pf) / denom - params.shmin * (1.0 + 2.0 * cs) / denom;
}

double width_sensitivity(double width0_deg, double dwidth_deg, const StressParams& params) {
    return std::abs(shmax(width0_deg + dwidth_deg, params) - shmax(width0_deg, params));
}

SweepResult sensitivity_sweep(double lo_deg, double hi_deg, double step_deg, double dwidth_deg,
                              const StressParams& params) {
    if (!(step_deg > 0.0)) throw ParameterError("sweep step must be positive");
    if (!(hi_deg >= lo_deg)) throw ParameterError("sweep upper bound below lower bound");
    SweepResult out;
    const auto n = static_cast<long long>(std::floor((hi_deg - lo_deg) / step_deg + 1e-9));
    auto unusable = [](double w, double w1) {
        for (double s : {kSingularWidthDeg, kSecondSingularWidthDeg}) {
            if (std::abs(w - s) <= kSingularGuardDeg || std::abs(w1 - s) <= kSingularGuardDeg) return true;
            if ((w - s) * (w1 - s) < 0.0) return true;
        }
        return false;
    };
    for (long long i = 0; i <= n; ++i) {
        const double w = lo_deg + static_cast<double>(i) * step_deg;
        const double w1 = w + dwidth_deg;
        if (unusable(w, w1)) {
            out.skipped_widths.push_back(w);
            continue;
        }
        out.rows.push_back({w, width_sensitivity(w, dwidth_deg, params)});
    }
    if (!out.skipped_widths.empty()) {
        spdlog::warn("sensitivity_sweep: {} baseline widths skipped around a singular width",
                     out.skipped_widths.size());
    }
    return out;
}

std::string format_sweep_csv(const SweepResult& sweep) {
    std::string out = "width0_deg,delta_shmax_mpa\n";
    for (const auto& r : sweep.rows) out += fmt::format("{:.6f},{:.6f}\n", r.width0_deg, r.delta_shmax);
    return out;
}

}  // namespace bkit::stress
