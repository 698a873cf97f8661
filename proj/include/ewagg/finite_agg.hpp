#ifndef EWAGG_FINITE_AGG_HPP
#define EWAGG_FINITE_AGG_HPP

#include <optional>

#include "ewagg/model.hpp"

namespace ewagg {

/// Probability vector over a finite candidate set.
class WeightVector {
  public:
    explicit WeightVector(Vector w);
    static WeightVector uniform(Index m);

    const Vector& w() const { return w_; }
    Index size() const { return w_.size(); }
    double operator[](Index j) const { return w_[j]; }

  private:
    Vector w_;
};

struct AggregationConfig {
    double beta;                        // temperature, > 0
    std::optional<WeightVector> prior;  // default: uniform over the candidates
};

/// Entry j = empirical squared distance between y and dictionary column j.
Vector losses(const EvaluatedDictionary& dict, const ResponseVector& y);

/// w_j proportional to prior_j * exp(-n * loss_j / beta), computed in the log
/// domain with max subtraction. Losses of +infinity receive zero weight; it is
/// an error for the whole prior mass to sit on infinite losses.
WeightVector exp_weights(const Vector& loss_values, const AggregationConfig& cfg, Index n);

/// Convex combination of dictionary columns.
Vector aggregate(const EvaluatedDictionary& dict, const WeightVector& weights);

struct EwaResult {
    Vector prediction;
    WeightVector weights;
};

/// losses -> exp_weights -> aggregate.
EwaResult run_ewa(const EvaluatedDictionary& dict, const ResponseVector& y,
                  const AggregationConfig& cfg);

} // namespace ewagg

#endif
