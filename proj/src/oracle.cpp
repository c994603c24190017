#include "polaris/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "polaris/errors.hpp"
#include "polaris/rng.hpp"

namespace polaris {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_alpha_bar(double alpha_bar) {
    if (!(alpha_bar > 0.0) || !(alpha_bar < 1.0)) {
        throw DegenerateTimestepError("oracle: alpha_bar must lie in (0,1), got " +
                                      std::to_string(alpha_bar));
    }
}

// Per-component posterior quantities at one (x, alpha_bar).
struct PosteriorTerms {
    std::vector<double> resp;  // responsibilities, normalized
    std::vector<Vec> mean;     // E[x0 | x, component]
};

PosteriorTerms posterior_terms(const AnalyticModel& model, const Vec& x, double alpha_bar,
                               const std::vector<int>& sel) {
    const double sa = std::sqrt(alpha_bar);
    const int dim = model.dim();

    PosteriorTerms out;
    out.resp.resize(sel.size());
    out.mean.resize(sel.size());

    // log responsibilities, normalized by log-sum-exp
    std::vector<double> logw(sel.size());
    double total = 0.0;
    for (int idx : sel) total += model.components()[static_cast<size_t>(idx)].weight;

    double max_logw = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < sel.size(); ++j) {
        const auto& c = model.components()[static_cast<size_t>(sel[j])];
        Mat s = alpha_bar * c.cov;
        s.diagonal().array() += 1.0 - alpha_bar;
        Eigen::LLT<Mat> llt(s);
        if (llt.info() != Eigen::Success) {
            throw ConfigError("oracle: noised covariance not positive-definite");
        }
        const Vec d = x - sa * c.mean;
        const Vec sinv_d = llt.solve(d);
        double logdet = 0.0;
        for (int i = 0; i < dim; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
        const double log_pdf = -0.5 * (d.dot(sinv_d) + logdet + dim * kLog2Pi);
        logw[j] = std::log(c.weight / total) + log_pdf;
        max_logw = std::max(max_logw, logw[j]);
        out.mean[j] = c.mean + sa * (c.cov * sinv_d);
    }

    double denom = 0.0;
    for (size_t j = 0; j < sel.size(); ++j) denom += std::exp(logw[j] - max_logw);
    for (size_t j = 0; j < sel.size(); ++j) out.resp[j] = std::exp(logw[j] - max_logw) / denom;
    return out;
}

}  // namespace

AnalyticModel::AnalyticModel(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw ConfigError("AnalyticModel: no components");
    dim_ = static_cast<int>(components_[0].mean.size());
    if (dim_ < 1) throw ConfigError("AnalyticModel: zero-dimensional component mean");

    double weight_sum = 0.0;
    chol_.reserve(components_.size());
    for (const auto& c : components_) {
        if (c.mean.size() != dim_ || c.cov.rows() != dim_ || c.cov.cols() != dim_) {
            throw ConfigError("AnalyticModel: inconsistent component dimensions");
        }
        if (!(c.weight > 0.0)) throw ConfigError("AnalyticModel: weights must be positive");
        if ((c.cov - c.cov.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
            throw ConfigError("AnalyticModel: covariance not symmetric");
        }
        Eigen::LLT<Mat> llt(c.cov);
        if (llt.info() != Eigen::Success) {
            throw ConfigError("AnalyticModel: covariance not positive-definite");
        }
        chol_.push_back(llt.matrixL());
        weight_sum += c.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        throw ConfigError("AnalyticModel: weights sum to " + std::to_string(weight_sum) +
                          ", expected 1");
    }
}

std::vector<int> AnalyticModel::select(const Condition& cond) const {
    std::vector<int> sel;
    switch (cond.kind) {
        case Condition::Kind::Unconditional:
            for (int i = 0; i < static_cast<int>(components_.size()); ++i) sel.push_back(i);
            break;
        case Condition::Kind::Component:
        case Condition::Kind::Subset:
            sel = cond.indices;
            break;
    }
    if (sel.empty()) throw ConfigError("Condition: empty component selection");
    for (int i : sel) {
        if (i < 0 || i >= static_cast<int>(components_.size())) {
            throw ConfigError("Condition: component index " + std::to_string(i) + " out of range");
        }
    }
    return sel;
}

Vec AnalyticModel::sample(const Condition& cond, std::uint64_t seed) const {
    const auto sel = select(cond);
    Rng rng(seed);

    double total = 0.0;
    for (int i : sel) total += components_[static_cast<size_t>(i)].weight;
    const double pick = rng.uniform() * total;
    int chosen = sel.back();
    double acc = 0.0;
    for (int i : sel) {
        acc += components_[static_cast<size_t>(i)].weight;
        if (pick < acc) {
            chosen = i;
            break;
        }
    }

    Vec z(dim_);
    for (int i = 0; i < dim_; ++i) z[i] = rng.gaussian();
    return components_[static_cast<size_t>(chosen)].mean + chol_[static_cast<size_t>(chosen)] * z;
}

Vec posterior_mean(const AnalyticModel& model, const Vec& x, double alpha_bar, const Condition& cond) {
    check_alpha_bar(alpha_bar);
    const auto sel = model.select(cond);
    const auto terms = posterior_terms(model, x, alpha_bar, sel);

    Vec mean = Vec::Zero(model.dim());
    for (size_t j = 0; j < sel.size(); ++j) mean += terms.resp[j] * terms.mean[j];
    return mean;
}

Vec predict_noise(const AnalyticModel& model, const Vec& x, double alpha_bar, const Condition& cond) {
    const Vec mean = posterior_mean(model, x, alpha_bar, cond);
    return (x - std::sqrt(alpha_bar) * mean) / std::sqrt(1.0 - alpha_bar);
}

Mat posterior_mean_jacobian(const AnalyticModel& model, double alpha_bar, const Condition& cond) {
    check_alpha_bar(alpha_bar);
    const auto sel = model.select(cond);
    if (sel.size() != 1) {
        throw ConfigError("posterior_mean_jacobian: closed form needs a single-component condition");
    }
    const auto& c = model.components()[static_cast<size_t>(sel[0])];
    Mat s = alpha_bar * c.cov;
    s.diagonal().array() += 1.0 - alpha_bar;
    // d/dx [mu + sqrt(a) Sigma S^-1 (x - sqrt(a) mu)] = sqrt(a) Sigma S^-1
    return std::sqrt(alpha_bar) * c.cov * s.llt().solve(Mat::Identity(model.dim(), model.dim()));
}

double log_marginal(const AnalyticModel& model, const Vec& x, double alpha_bar, const Condition& cond) {
    check_alpha_bar(alpha_bar);
    const auto sel = model.select(cond);
    const double sa = std::sqrt(alpha_bar);
    const int dim = model.dim();

    double total = 0.0;
    for (int idx : sel) total += model.components()[static_cast<size_t>(idx)].weight;

    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(sel.size());
    for (size_t j = 0; j < sel.size(); ++j) {
        const auto& c = model.components()[static_cast<size_t>(sel[j])];
        Mat s = alpha_bar * c.cov;
        s.diagonal().array() += 1.0 - alpha_bar;
        Eigen::LLT<Mat> llt(s);
        const Vec d = x - sa * c.mean;
        double logdet = 0.0;
        for (int i = 0; i < dim; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
        terms[j] = std::log(c.weight / total) - 0.5 * (d.dot(llt.solve(d)) + logdet + dim * kLog2Pi);
        max_term = std::max(max_term, terms[j]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return max_term + std::log(acc);
}

PerturbedPredictor::PerturbedPredictor(NoisePredictor& base, double noise_scale, std::uint64_t seed)
    : base_(&base), noise_scale_(noise_scale), seed_(seed) {
    if (noise_scale < 0.0) throw ConfigError("PerturbedPredictor: noise_scale must be >= 0");
}

Vec PerturbedPredictor::predict(const Vec& x, double alpha_bar, const Condition& cond) {
    Vec pred = base_->predict(x, alpha_bar, cond);
    const std::uint64_t call = call_index_++;
    if (noise_scale_ == 0.0) return pred;

    Rng rng(derive_seed(seed_, 0, call));
    for (int i = 0; i < pred.size(); ++i) pred[i] += noise_scale_ * rng.gaussian();
    return pred;
}

void PerturbedPredictor::reset() {
    call_index_ = 0;
    base_->reset();
}

}  // namespace polaris
