#include "ewagg/finite_agg.hpp"

#include <cmath>
#include <limits>

namespace ewagg {

WeightVector::WeightVector(Vector w) : w_(std::move(w)) {
    if (w_.size() < 1) throw invalid_input_error("WeightVector: empty");
    double total = 0.0;
    for (Index j = 0; j < w_.size(); ++j) {
        if (!(w_[j] >= 0.0)) throw invalid_input_error("WeightVector: negative or NaN entry");
        total += w_[j];
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw invalid_input_error("WeightVector: entries must sum to 1 within 1e-12");
    }
}

WeightVector WeightVector::uniform(Index m) {
    if (m < 1) throw invalid_input_error("WeightVector::uniform: m must be >= 1");
    return WeightVector(Vector::Constant(m, 1.0 / static_cast<double>(m)));
}

Vector losses(const EvaluatedDictionary& dict, const ResponseVector& y) {
    if (y.size() != dict.n()) {
        throw invalid_input_error("losses: response length does not match dictionary rows");
    }
    if (!y.allFinite()) throw invalid_input_error("losses: non-finite response entry");
    const double n = static_cast<double>(dict.n());
    Vector out(dict.M());
    for (Index j = 0; j < dict.M(); ++j) {
        out[j] = (y - dict.values().col(j)).squaredNorm() / n;
    }
    return out;
}

WeightVector exp_weights(const Vector& loss_values, const AggregationConfig& cfg, Index n) {
    const Index m = loss_values.size();
    if (m < 1) throw invalid_input_error("exp_weights: empty loss vector");
    if (!(cfg.beta > 0.0)) throw invalid_input_error("exp_weights: beta must be positive");
    if (n < 1) throw invalid_input_error("exp_weights: n must be >= 1");
    const Vector prior = cfg.prior ? cfg.prior->w() : WeightVector::uniform(m).w();
    if (prior.size() != m) {
        throw invalid_input_error("exp_weights: prior length does not match losses");
    }

    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    Vector log_w(m);
    double max_log = neg_inf;
    for (Index j = 0; j < m; ++j) {
        const double lj = loss_values[j];
        if (std::isnan(lj)) throw invalid_input_error("exp_weights: NaN loss");
        if (prior[j] == 0.0 || lj == std::numeric_limits<double>::infinity()) {
            log_w[j] = neg_inf;
        } else {
            log_w[j] = std::log(prior[j]) - static_cast<double>(n) * lj / cfg.beta;
        }
        max_log = std::max(max_log, log_w[j]);
    }
    if (max_log == neg_inf) {
        throw degenerate_input_error("exp_weights: all prior mass on candidates with infinite loss");
    }
    Vector w(m);
    double total = 0.0;
    for (Index j = 0; j < m; ++j) {
        w[j] = std::exp(log_w[j] - max_log);
        total += w[j];
    }
    w /= total;
    return WeightVector(std::move(w));
}

Vector aggregate(const EvaluatedDictionary& dict, const WeightVector& weights) {
    if (weights.size() != dict.M()) {
        throw invalid_input_error("aggregate: weight length does not match dictionary size");
    }
    return dict.values() * weights.w();
}

EwaResult run_ewa(const EvaluatedDictionary& dict, const ResponseVector& y,
                  const AggregationConfig& cfg) {
    WeightVector w = exp_weights(losses(dict, y), cfg, dict.n());
    Vector pred = aggregate(dict, w);
    return EwaResult{std::move(pred), std::move(w)};
}

} // namespace ewagg
