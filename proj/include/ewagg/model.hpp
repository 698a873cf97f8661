#ifndef EWAGG_MODEL_HPP
#define EWAGG_MODEL_HPP

#include <Eigen/Dense>
#include <vector>

#include "ewagg/error.hpp"

namespace ewagg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Regression responses Y (or the truth vector f in simulations), length n.
using ResponseVector = Vector;

/// Coefficient vector over the dictionary, length M.
using CoefVector = Vector;

/// Evaluations of M candidate functions at n fixed design points:
/// entry (i,j) holds the j-th function at the i-th point. The design points
/// themselves are never stored; every downstream formula consumes evaluations.
class EvaluatedDictionary {
  public:
    explicit EvaluatedDictionary(Matrix values);

    const Matrix& values() const { return values_; }
    Index n() const { return values_.rows(); }
    Index M() const { return values_.cols(); }
    Vector column(Index j) const { return values_.col(j); }

  private:
    Matrix values_;
};

/// Empirical second-moment matrix of the dictionary columns.
struct GramMatrix {
    Matrix phi;   // M x M, symmetric PSD
    double trace; // sum of diagonal entries

    /// Largest diagonal entry (the tightest uniform column-norm bound).
    double phi0() const { return phi.diagonal().maxCoeff(); }
};

struct SparsityStats {
    std::vector<Index> support; // indices j with lambda[j] != 0, ascending
    Index m_lambda;             // support size
    double l1;                  // sum of absolute entries
};

/// (1/n) * sum v_i^2. Rejects empty or non-finite input.
double empirical_norm_sq(const Vector& v);

/// values * lambda; the prediction vector of the linear combination.
Vector predict(const EvaluatedDictionary& dict, const CoefVector& lambda);

/// Gram matrix (1/n) X^T X with trace; validates symmetry and positive
/// semidefiniteness (eigenvalues >= -1e-10 * trace).
GramMatrix gram(const EvaluatedDictionary& dict);

/// Exact-zero support, its cardinality, and the l1 norm. The support test is
/// bit-exact: callers wanting fuzzy supports must threshold beforehand.
SparsityStats sparsity_stats(const CoefVector& lambda);

} // namespace ewagg

#endif
