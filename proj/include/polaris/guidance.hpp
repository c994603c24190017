#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "polaris/oracle.hpp"
#include "polaris/rng.hpp"

namespace polaris {

// Change of the two predictions between consecutive inversion states.
struct PredictionDelta {
    Vec d_uncond;  // eps_phi(x_t) - eps_phi(x_{t-1})
    Vec d_cond;    // eps_c(x_t)   - eps_c(x_{t-1})
};

// Inputs of the exact (recursive) scale rule at one step.
struct ExactSolverState {
    Vec a;  // (1 - omega) d_uncond + omega d_cond, at the previous step's omega
    Vec b;  // eps_c(x_{t-1}) - eps_phi(x_{t-1})
    double omega_prev = 0.0;
};

// Per-step guidance scales recorded during inversion; index 0 holds omega_0.
struct ScaleSchedule {
    std::vector<double> omegas;

    int size() const { return static_cast<int>(omegas.size()); }
    ScaleSchedule reversed() const;
};

inline constexpr double kDefaultGuard = 1e-8;
inline constexpr double kDefaultOmega0 = 1.0;
inline constexpr double kExactDeltaClamp = 1e6;

// eps = (1 - omega) eps_uncond + omega eps_cond.
Vec cfg_combine(const Vec& eps_uncond, const Vec& eps_cond, double omega);
Vec cfg_combine(const PredictionPair& pair, double omega);

// Robust per-step scale: (||d_u||^2 - d_u . d_c) / (||d_u - d_c||^2 + guard).
double polaris_robust_scale(const PredictionDelta& delta, double guard);

// Exact scale change minimizing ||a + b dw||^2: dw = -(a.b)/||b||^2.
// Throws IllPosedStateError when ||b||^2 underflows.
double polaris_exact_delta(const ExactSolverState& state);

// Current-step error vector (1 - omega) d_uncond + omega d_cond.
Vec tau_approx(double omega, const PredictionDelta& delta);

enum class ReplayOrder { Forward, Reverse };

// Per-step guidance-scale source driving a trajectory. Stateful policies
// are confined to one trajectory execution at a time.
class ScalePolicy {
public:
    virtual ~ScalePolicy() = default;

    // Called once before a trajectory starts; resets internal state.
    virtual void begin(int total_steps) { (void)total_steps; }

    // Scale for the given step. delta/state may be null at step 0.
    virtual double next_scale(int step, const PredictionDelta* delta,
                              const ExactSolverState* state) = 0;

    // Set when the policy clamped or repaired a non-finite update.
    virtual bool divergence_flag() const { return false; }
};

class FixedScale final : public ScalePolicy {
public:
    explicit FixedScale(double omega) : omega_(omega) {}
    double next_scale(int, const PredictionDelta*, const ExactSolverState*) override { return omega_; }

private:
    double omega_;
};

class PolarisRobust final : public ScalePolicy {
public:
    explicit PolarisRobust(double omega0 = kDefaultOmega0, double guard = kDefaultGuard);
    double next_scale(int step, const PredictionDelta* delta, const ExactSolverState*) override;

private:
    double omega0_;
    double guard_;
};

// The unstable recursive rule; clamps |dw| at kExactDeltaClamp and sets the
// divergence flag instead of propagating non-finite scales.
class PolarisExact final : public ScalePolicy {
public:
    explicit PolarisExact(double omega0 = kDefaultOmega0) : omega0_(omega0) {}
    void begin(int total_steps) override;
    double next_scale(int step, const PredictionDelta*, const ExactSolverState* state) override;
    bool divergence_flag() const override { return diverged_; }

private:
    double omega0_;
    double omega_prev_ = 0.0;
    bool diverged_ = false;
};

class ReplayScales final : public ScalePolicy {
public:
    ReplayScales(ScaleSchedule schedule, ReplayOrder order);
    double next_scale(int step, const PredictionDelta*, const ExactSolverState*) override;

private:
    ScaleSchedule schedule_;
    ReplayOrder order_;
};

class RandomUniform final : public ScalePolicy {
public:
    RandomUniform(double lo, double hi, std::uint64_t seed);
    void begin(int total_steps) override;
    double next_scale(int, const PredictionDelta*, const ExactSolverState*) override;

private:
    double lo_, hi_;
    std::uint64_t seed_;
    Rng rng_;
};

class CosineDecay final : public ScalePolicy {
public:
    CosineDecay(double start, double end) : start_(start), end_(end) {}
    void begin(int total_steps) override { total_ = total_steps; }
    double next_scale(int step, const PredictionDelta*, const ExactSolverState*) override;

private:
    double start_, end_;
    int total_ = 1;
};

void save_scale_schedule_csv(const ScaleSchedule& schedule, const std::string& path);
ScaleSchedule load_scale_schedule_csv(const std::string& path);

}  // namespace polaris
