#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace polaris {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Which part of the mixture a "prompt" refers to. Unconditional means the
// whole mixture; Component / Subset restrict it (weights renormalized).
struct Condition {
    enum class Kind { Unconditional, Component, Subset };

    Kind kind = Kind::Unconditional;
    std::vector<int> indices;

    static Condition unconditional() { return {}; }
    static Condition component(int i) { return {Kind::Component, {i}}; }
    static Condition subset(std::vector<int> idx) { return {Kind::Subset, std::move(idx)}; }
};

struct MixtureComponent {
    double weight = 1.0;
    Vec mean;
    Mat cov;  // symmetric positive-definite
};

// Gaussian-mixture data distribution. Stands in for a trained denoiser: the
// noised marginal and the posterior E[x0 | x_t] are available in closed form,
// so noise predictions carry no training error.
class AnalyticModel {
public:
    explicit AnalyticModel(std::vector<MixtureComponent> components);

    int dim() const { return dim_; }
    const std::vector<MixtureComponent>& components() const { return components_; }

    // Component indices selected by a condition (validated).
    std::vector<int> select(const Condition& cond) const;

    // Draws x0 from the (optionally conditioned) mixture.
    Vec sample(const Condition& cond, std::uint64_t seed) const;

private:
    std::vector<MixtureComponent> components_;
    std::vector<Mat> chol_;  // lower Cholesky factor per component, for sampling
    int dim_ = 0;
};

// Unconditional and conditional predictions at one state.
struct PredictionPair {
    Vec eps_uncond;
    Vec eps_cond;
    int t = 0;
};

// E[x0 | x_t] under the conditioned mixture at signal level alpha_bar.
// Responsibilities are evaluated in log space.
Vec posterior_mean(const AnalyticModel& model, const Vec& x, double alpha_bar, const Condition& cond);

// Exact noise prediction eps*(x_t) = (x_t - sqrt(alpha_bar) E[x0|x_t]) / sqrt(1 - alpha_bar).
Vec predict_noise(const AnalyticModel& model, const Vec& x, double alpha_bar, const Condition& cond);

// d E[x0|x] / dx when the conditioned mixture is a single Gaussian
// (constant in x); throws ConfigError for multi-component conditions.
Mat posterior_mean_jacobian(const AnalyticModel& model, double alpha_bar, const Condition& cond);

// log of the noised marginal density p_t(x) under the conditioned mixture.
double log_marginal(const AnalyticModel& model, const Vec& x, double alpha_bar, const Condition& cond);

// Prediction source for trajectory code.
class NoisePredictor {
public:
    virtual ~NoisePredictor() = default;

    virtual int dim() const = 0;
    virtual Vec predict(const Vec& x, double alpha_bar, const Condition& cond) = 0;

    // Called at the start of each trajectory.
    virtual void reset() {}
};

class AnalyticPredictor final : public NoisePredictor {
public:
    explicit AnalyticPredictor(const AnalyticModel& model) : model_(&model) {}

    int dim() const override { return model_->dim(); }
    Vec predict(const Vec& x, double alpha_bar, const Condition& cond) override {
        return predict_noise(*model_, x, alpha_bar, cond);
    }

private:
    const AnalyticModel* model_;
};

// Adds i.i.d. zero-mean Gaussian perturbations to every prediction of the
// wrapped predictor. Draws are keyed by (seed, call index): replaying the
// same call sequence reproduces the same deltas. Confine one instance to one
// trajectory at a time.
class PerturbedPredictor final : public NoisePredictor {
public:
    PerturbedPredictor(NoisePredictor& base, double noise_scale, std::uint64_t seed);

    int dim() const override { return base_->dim(); }
    Vec predict(const Vec& x, double alpha_bar, const Condition& cond) override;
    void reset() override;

private:
    NoisePredictor* base_;
    double noise_scale_;
    std::uint64_t seed_;
    std::uint64_t call_index_ = 0;
};

}  // namespace polaris
