#include "polaris/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "polaris/errors.hpp"

namespace polaris {

ScaleSchedule ScaleSchedule::reversed() const {
    ScaleSchedule out = *this;
    std::reverse(out.omegas.begin(), out.omegas.end());
    return out;
}

Vec cfg_combine(const Vec& eps_uncond, const Vec& eps_cond, double omega) {
    return (1.0 - omega) * eps_uncond + omega * eps_cond;
}

Vec cfg_combine(const PredictionPair& pair, double omega) {
    return cfg_combine(pair.eps_uncond, pair.eps_cond, omega);
}

double polaris_robust_scale(const PredictionDelta& delta, double guard) {
    if (!(guard > 0.0)) throw ConfigError("polaris_robust_scale: guard must be > 0");
    const double num = delta.d_uncond.squaredNorm() - delta.d_uncond.dot(delta.d_cond);
    const double den = (delta.d_uncond - delta.d_cond).squaredNorm() + guard;
    return num / den;
}

double polaris_exact_delta(const ExactSolverState& state) {
    const double bb = state.b.squaredNorm();
    if (bb < std::numeric_limits<double>::min()) {
        throw IllPosedStateError("polaris_exact_delta: ||b||^2 underflowed");
    }
    return -state.a.dot(state.b) / bb;
}

Vec tau_approx(double omega, const PredictionDelta& delta) {
    return (1.0 - omega) * delta.d_uncond + omega * delta.d_cond;
}

PolarisRobust::PolarisRobust(double omega0, double guard) : omega0_(omega0), guard_(guard) {
    if (!(guard > 0.0)) throw ConfigError("PolarisRobust: guard must be > 0");
}

double PolarisRobust::next_scale(int step, const PredictionDelta* delta, const ExactSolverState*) {
    if (step == 0) return omega0_;
    if (delta == nullptr) throw ConfigError("PolarisRobust: step >= 1 needs a prediction delta");
    return polaris_robust_scale(*delta, guard_);
}

void PolarisExact::begin(int) {
    omega_prev_ = omega0_;
    diverged_ = false;
}

double PolarisExact::next_scale(int step, const PredictionDelta*, const ExactSolverState* state) {
    if (step == 0) {
        omega_prev_ = omega0_;
        return omega0_;
    }
    if (state == nullptr) throw ConfigError("PolarisExact: step >= 1 needs a solver state");

    double dw;
    try {
        dw = polaris_exact_delta(*state);
    } catch (const IllPosedStateError&) {
        dw = kExactDeltaClamp;
        diverged_ = true;
    }
    if (!std::isfinite(dw)) {
        dw = kExactDeltaClamp;
        diverged_ = true;
    } else if (std::abs(dw) > kExactDeltaClamp) {
        dw = std::copysign(kExactDeltaClamp, dw);
        diverged_ = true;
    }
    omega_prev_ += dw;
    return omega_prev_;
}

ReplayScales::ReplayScales(ScaleSchedule schedule, ReplayOrder order)
    : schedule_(std::move(schedule)), order_(order) {}

double ReplayScales::next_scale(int step, const PredictionDelta*, const ExactSolverState*) {
    const int n = schedule_.size();
    if (step < 0 || step >= n) {
        throw ScheduleLengthError("ReplayScales: step " + std::to_string(step) +
                                  " outside recorded schedule of length " + std::to_string(n));
    }
    const int idx = order_ == ReplayOrder::Forward ? step : n - 1 - step;
    return schedule_.omegas[static_cast<size_t>(idx)];
}

RandomUniform::RandomUniform(double lo, double hi, std::uint64_t seed)
    : lo_(lo), hi_(hi), seed_(seed), rng_(seed) {
    if (!(lo < hi)) throw ConfigError("RandomUniform: need lo < hi");
}

void RandomUniform::begin(int) { rng_.reseed(seed_); }

double RandomUniform::next_scale(int, const PredictionDelta*, const ExactSolverState*) {
    return rng_.uniform(lo_, hi_);
}

double CosineDecay::next_scale(int step, const PredictionDelta*, const ExactSolverState*) {
    if (total_ <= 1) return start_;
    const double frac = static_cast<double>(step) / static_cast<double>(total_ - 1);
    return end_ + (start_ - end_) * 0.5 * (1.0 + std::cos(3.14159265358979323846 * frac));
}

void save_scale_schedule_csv(const ScaleSchedule& schedule, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("save_scale_schedule_csv: cannot open " + path);
    out << "step,omega\n";
    char buf[64];
    for (int i = 0; i < schedule.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", schedule.omegas[static_cast<size_t>(i)]);
        out << i << ',' << buf << '\n';
    }
}

ScaleSchedule load_scale_schedule_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_scale_schedule_csv: cannot open " + path);
    ScaleSchedule schedule;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("load_scale_schedule_csv: empty file " + path);
    int expected = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string step_field, omega_field;
        if (!std::getline(row, step_field, ',') || !std::getline(row, omega_field)) {
            throw ConfigError("load_scale_schedule_csv: malformed row '" + line + "'");
        }
        if (std::stoi(step_field) != expected) {
            throw ConfigError("load_scale_schedule_csv: non-contiguous step index in " + path);
        }
        schedule.omegas.push_back(std::stod(omega_field));
        ++expected;
    }
    return schedule;
}

}  // namespace polaris
