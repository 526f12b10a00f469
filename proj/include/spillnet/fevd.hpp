#pragma once

#include <string>
#include <vector>

#include "spillnet/var.hpp"

namespace spillnet {

struct FevdMatrix {
  int horizon = 0;
  Matrix raw;         // d_ij, unnormalized
  Matrix normalized;  // rows sum to one
  std::vector<std::string> series_ids;
};

/// Accumulated pieces of the generalized decomposition:
///   numerator(i, j) = sum_h (e_i' A_h Sigma e_j)^2
///   denominator(i)  = sum_h  e_i' A_h Sigma A_h' e_i
struct GfevdTerms {
  Matrix numerator;
  Vector denominator;
};

GfevdTerms gfevd_terms(const MaCoefficients& ma, const Matrix& sigma);

/// Generalized H-step forecast-error variance decomposition.
/// Throws DegenerateCovarianceError when some sigma_jj <= 0 and
/// DegenerateVarianceError when some forecast-error variance is not positive.
FevdMatrix gfevd(const MaCoefficients& ma, const Matrix& sigma,
                 std::vector<std::string> series_ids = {});
FevdMatrix gfevd(const VarModel& model, int horizon, std::vector<std::string> series_ids = {});

/// Wraps an already-normalized share matrix (e.g. a published table).
FevdMatrix fevd_from_normalized(const Matrix& normalized, std::vector<std::string> series_ids,
                                int horizon = 0);

}  // namespace spillnet
