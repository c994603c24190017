#pragma once

#include <vector>

namespace polaris {

// Cumulative-product noise schedule over the training grid.
// alpha_bars[t] = prod_{i<=t} (1 - betas[i]).
struct NoiseSchedule {
    std::vector<double> betas;
    std::vector<double> alpha_bars;
    int t_train = 0;

    double alpha_bar(int train_index) const { return alpha_bars[static_cast<size_t>(train_index)]; }
};

// Strictly increasing subsequence of training indices used at inference time.
struct TimestepMap {
    std::vector<int> inference_steps;
    int t_infer = 0;

    int steps() const { return t_infer; }
};

// Linear beta schedule. beta_start = beta_end = 0 is allowed for the
// degenerate zero-noise schedule used in edge-case tests.
NoiseSchedule build_schedule(int t_train, double beta_start, double beta_end);

// Uniformly spaced training indices: floor(i * t_train / t_infer),
// deduplicated, ascending.
TimestepMap subsample(const NoiseSchedule& schedule, int t_infer);

// Signal level of a trajectory state. States are indexed 0..T (T =
// map.t_infer); index k < T sits at training index inference_steps[k], the
// terminal state T at the last training index.
double alpha_bar_at(const NoiseSchedule& schedule, const TimestepMap& map, int t_index);

// Training index backing a given state index (same convention as above).
int train_index_at(const NoiseSchedule& schedule, const TimestepMap& map, int t_index);

}  // namespace polaris
