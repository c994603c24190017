#include "polaris/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polaris/errors.hpp"

namespace polaris {

NoiseSchedule build_schedule(int t_train, double beta_start, double beta_end) {
    if (t_train < 2) {
        throw ConfigError("build_schedule: t_train must be >= 2, got " + std::to_string(t_train));
    }
    if (!(beta_start >= 0.0) || !(beta_end >= beta_start) || !(beta_end < 1.0)) {
        throw ConfigError("build_schedule: need 0 <= beta_start <= beta_end < 1");
    }

    NoiseSchedule s;
    s.t_train = t_train;
    s.betas.resize(static_cast<size_t>(t_train));
    s.alpha_bars.resize(static_cast<size_t>(t_train));

    const double span = beta_end - beta_start;
    double prod = 1.0;
    for (int i = 0; i < t_train; ++i) {
        const double beta = beta_start + span * static_cast<double>(i) / static_cast<double>(t_train - 1);
        s.betas[static_cast<size_t>(i)] = beta;
        prod *= 1.0 - beta;
        s.alpha_bars[static_cast<size_t>(i)] = prod;
    }
    return s;
}

TimestepMap subsample(const NoiseSchedule& schedule, int t_infer) {
    if (t_infer < 1 || t_infer > schedule.t_train) {
        throw ConfigError("subsample: t_infer must be in [1, t_train], got " + std::to_string(t_infer));
    }

    TimestepMap map;
    map.inference_steps.reserve(static_cast<size_t>(t_infer));
    for (int i = 0; i < t_infer; ++i) {
        const int idx = static_cast<int>((static_cast<long long>(i) * schedule.t_train) / t_infer);
        if (map.inference_steps.empty() || map.inference_steps.back() != idx) {
            map.inference_steps.push_back(idx);
        }
    }
    map.t_infer = static_cast<int>(map.inference_steps.size());
    return map;
}

double alpha_bar_at(const NoiseSchedule& schedule, const TimestepMap& map, int t_index) {
    return schedule.alpha_bar(train_index_at(schedule, map, t_index));
}

int train_index_at(const NoiseSchedule& schedule, const TimestepMap& map, int t_index) {
    if (t_index < 0 || t_index > map.t_infer) {
        throw ConfigError("train_index_at: state index " + std::to_string(t_index) +
                          " outside [0, " + std::to_string(map.t_infer) + "]");
    }
    if (t_index == map.t_infer) return schedule.t_train - 1;
    return map.inference_steps[static_cast<size_t>(t_index)];
}

}  // namespace polaris
