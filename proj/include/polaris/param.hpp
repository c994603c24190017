#pragma once

#include <string>
#include <vector>

#include "polaris/oracle.hpp"
#include "polaris/schedule.hpp"

namespace polaris {

// Prediction parameterization. Score and velocity are time-dependent affine
// images of the noise prediction: psi = a_t eps + b_t with
//   score:    a_t = -1/sigma_t (sigma_t = sqrt(1 - alpha_bar)), b_t = 0
//   velocity: a_t = sqrt(alpha_bar),  b_t = -sqrt(1 - alpha_bar) x_t
enum class FieldSpace { Noise, Score, Velocity };

Vec to_space(const Vec& eps, const Vec& x, FieldSpace space, double alpha_bar);
Vec from_space(const Vec& psi, const Vec& x, FieldSpace space, double alpha_bar);

const char* field_space_name(FieldSpace space);

// Closed-form scale minimizing ||(1-w) d_psi_uncond + w d_psi_cond||^2 in the
// chosen space; same guarded form as the noise-space robust rule.
double unified_polaris_scale(const Vec& d_psi_uncond, const Vec& d_psi_cond, double guard);

// Runs the same fixed-omega inversion trajectory applying CFG in each of the
// three spaces and returns the max relative state deviation across steps and
// space pairs.
double check_fixed_scale_invariance(const AnalyticModel& model, const Vec& x0, double omega,
                                    const Condition& cond, const NoiseSchedule& schedule,
                                    const TimestepMap& map);

struct SpaceTraceRow {
    FieldSpace space;
    int step;
    double omega;
    double deviation;  // relative state difference vs the noise-space run
};

// Per-step comparison rows for fixed-omega or POLARIS-per-space trajectories.
std::vector<SpaceTraceRow> compare_spaces_fixed(const AnalyticModel& model, const Vec& x0,
                                                double omega, const Condition& cond,
                                                const NoiseSchedule& schedule, const TimestepMap& map);
std::vector<SpaceTraceRow> compare_spaces_polaris(const AnalyticModel& model, const Vec& x0,
                                                  double omega0, double guard, const Condition& cond,
                                                  const NoiseSchedule& schedule, const TimestepMap& map);

}  // namespace polaris
