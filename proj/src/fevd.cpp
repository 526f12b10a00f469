#include "spillnet/fevd.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spillnet/error.hpp"

namespace spillnet {

GfevdTerms gfevd_terms(const MaCoefficients& ma, const Matrix& sigma) {
  const Eigen::Index n = sigma.rows();
  GfevdTerms terms{Matrix::Zero(n, n), Vector::Zero(n)};
  Matrix a_sigma(n, n);
  for (const auto& a : ma.matrices) {
    a_sigma.noalias() = a * sigma;
    terms.numerator += a_sigma.cwiseAbs2();
    // (A Sigma A')_ii is row i of A Sigma dotted with row i of A.
    terms.denominator += a_sigma.cwiseProduct(a).rowwise().sum();
  }
  return terms;
}

FevdMatrix gfevd(const MaCoefficients& ma, const Matrix& sigma, std::vector<std::string> series_ids) {
  const Eigen::Index n = sigma.rows();
  if (sigma.cols() != n || ma.matrices.empty() || ma.matrices.front().rows() != n) {
    throw SchemaError("covariance and moving-average dimensions disagree");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(sigma(j, j) > 0.0)) {
      throw DegenerateCovarianceError(
          fmt::format("residual variance of series {} is {} (must be positive)", j, sigma(j, j)));
    }
  }
  const GfevdTerms terms = gfevd_terms(ma, sigma);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(terms.denominator(i) > 0.0)) {
      throw DegenerateVarianceError(
          fmt::format("forecast-error variance of series {} is {} (must be positive)", i, terms.denominator(i)));
    }
  }
  FevdMatrix out;
  out.horizon = ma.horizon;
  out.series_ids = std::move(series_ids);
  out.raw = terms.numerator;
  for (Eigen::Index j = 0; j < n; ++j) out.raw.col(j) /= sigma(j, j);
  for (Eigen::Index i = 0; i < n; ++i) out.raw.row(i) /= terms.denominator(i);
  out.normalized = out.raw;
  for (Eigen::Index i = 0; i < n; ++i) out.normalized.row(i) /= out.raw.row(i).sum();
  return out;
}

FevdMatrix gfevd(const VarModel& model, int horizon, std::vector<std::string> series_ids) {
  return gfevd(ma_coefficients(model, horizon), model.residual_covariance, std::move(series_ids));
}

FevdMatrix fevd_from_normalized(const Matrix& normalized, std::vector<std::string> series_ids,
                                int horizon) {
  if (normalized.rows() != normalized.cols()) throw SchemaError("share matrix must be square");
  if (!series_ids.empty() && static_cast<Eigen::Index>(series_ids.size()) != normalized.rows()) {
    throw SchemaError("series id count does not match share matrix");
  }
  if (!normalized.allFinite() || (normalized.array() < 0.0).any()) {
    throw ValidationError("share matrix entries must be finite and non-negative");
  }
  return FevdMatrix{horizon, normalized, normalized, std::move(series_ids)};
}

}  // namespace spillnet
