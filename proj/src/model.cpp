#include "ewagg/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ewagg {

EvaluatedDictionary::EvaluatedDictionary(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw invalid_input_error("EvaluatedDictionary: need n >= 1 and M >= 1");
    }
    if (!values_.allFinite()) {
        throw invalid_input_error("EvaluatedDictionary: non-finite entry");
    }
}

double empirical_norm_sq(const Vector& v) {
    if (v.size() == 0) throw invalid_input_error("empirical_norm_sq: empty vector");
    if (!v.allFinite()) throw invalid_input_error("empirical_norm_sq: non-finite entry");
    return v.squaredNorm() / static_cast<double>(v.size());
}

Vector predict(const EvaluatedDictionary& dict, const CoefVector& lambda) {
    if (lambda.size() != dict.M()) {
        throw invalid_input_error("predict: coefficient length does not match dictionary size");
    }
    if (!lambda.allFinite()) throw invalid_input_error("predict: non-finite coefficient");
    return dict.values() * lambda;
}

GramMatrix gram(const EvaluatedDictionary& dict) {
    const double n = static_cast<double>(dict.n());
    Matrix phi = dict.values().transpose() * dict.values() / n;
    phi = 0.5 * (phi + phi.transpose()); // kill rounding asymmetry
    const double trace = phi.trace();
    Eigen::SelfAdjointEigenSolver<Matrix> es(phi, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw invalid_input_error("gram: eigenvalue computation failed");
    }
    if (es.eigenvalues().minCoeff() < -1e-10 * trace) {
        throw invalid_input_error("gram: matrix not positive semidefinite");
    }
    return GramMatrix{std::move(phi), trace};
}

SparsityStats sparsity_stats(const CoefVector& lambda) {
    SparsityStats stats;
    stats.l1 = 0.0;
    for (Index j = 0; j < lambda.size(); ++j) {
        if (lambda[j] != 0.0) stats.support.push_back(j);
        stats.l1 += std::fabs(lambda[j]);
    }
    stats.m_lambda = static_cast<Index>(stats.support.size());
    return stats;
}

} // namespace ewagg
