#pragma once

#include <vector>

#include "polaris/guidance.hpp"
#include "polaris/oracle.hpp"
#include "polaris/param.hpp"
#include "polaris/schedule.hpp"

namespace polaris {

// A latent vector at a position in the timestep map (0 = clean).
struct LatentState {
    Vec x;
    int t_index = 0;
};

// Side-channel magnitudes recorded at steps >= 1 of an inversion.
struct StepDiag {
    double a_norm = 0.0;    // ||(1-w) d_uncond + w d_cond|| at the step's omega
    double b_norm = 0.0;    // ||eps_c(prev) - eps_phi(prev)||
    double tau_norm = 0.0;  // ||tau_approx(omega_t)||
};

struct Trajectory {
    std::vector<LatentState> states;   // steps + 1 entries
    ScaleSchedule omegas;              // one entry per executed step
    std::vector<PredictionPair> preds; // optional per-step log
    std::vector<StepDiag> diags;       // optional, entries for steps >= 1
    bool diverged = false;

    int steps() const { return omegas.size(); }
    const LatentState& terminal() const { return states.back(); }
};

struct TrajectoryOptions {
    FieldSpace space = FieldSpace::Noise;
    bool log_preds = false;
    bool log_diags = false;
};

// One deterministic DDIM denoising step (t_index -> t_index - 1) at a frozen
// noise prediction.
LatentState ddim_denoise_step(const LatentState& state, const Vec& eps,
                              const NoiseSchedule& schedule, const TimestepMap& map);

// The algebraic inverse step (t_index -> t_index + 1) at the same frozen eps.
LatentState ddim_invert_step(const LatentState& state, const Vec& eps,
                             const NoiseSchedule& schedule, const TimestepMap& map);

// Inversion with per-step scale selection and recording. Non-finite states
// abort the loop; the partial trajectory comes back flagged as diverged.
Trajectory invert(const LatentState& x0, NoisePredictor& model, const Condition& cond_source,
                  ScalePolicy& policy, const NoiseSchedule& schedule, const TimestepMap& map,
                  const TrajectoryOptions& opt = {});

// Sampling that replays recorded scales: the step leaving timestep t uses
// omegas[T - t], so the first sampling step consumes omega_0.
Trajectory sample(const LatentState& xT, NoisePredictor& model, const Condition& cond_target,
                  const ScaleSchedule& omegas, const NoiseSchedule& schedule, const TimestepMap& map,
                  const TrajectoryOptions& opt = {});

// Teacher-forced sampling from frozen per-step guided noise; the exact
// algebraic mirror of the inversion that produced eps_per_step.
Trajectory sample_frozen(const LatentState& xT, const std::vector<Vec>& eps_per_step,
                         const NoiseSchedule& schedule, const TimestepMap& map);

struct RoundtripResult {
    Trajectory inversion;
    Trajectory sampling;

    const LatentState& reconstructed() const { return sampling.terminal(); }
    bool diverged() const { return inversion.diverged || sampling.diverged; }
};

// invert then sample; reconstruction when cond_target == cond_source,
// the editing analog otherwise.
RoundtripResult roundtrip(const LatentState& x0, NoisePredictor& model,
                          const Condition& cond_source, const Condition& cond_target,
                          ScalePolicy& policy, const NoiseSchedule& schedule,
                          const TimestepMap& map, const TrajectoryOptions& opt = {});

}  // namespace polaris
