#pragma once

#include <cstddef>
#include <vector>

#include "spillnet/ingest.hpp"
#include "spillnet/types.hpp"

namespace spillnet {

struct VarSpec {
  int lag_order = 2;
  bool include_intercept = true;

  /// Throws ConfigError unless 1 <= lag_order <= 20.
  void validate() const;
};

/// Minimum sample length accepted by fit_var for N series and lag p.
inline std::size_t min_var_observations(std::size_t num_series, int lag_order) {
  const auto p = static_cast<std::size_t>(lag_order);
  return num_series * p + p + 10;
}

struct VarModel {
  VarSpec spec;
  std::vector<Matrix> coefficients;  // Phi_1 .. Phi_p, each N x N
  Vector intercept;                  // zero when disabled
  Matrix residual_covariance;        // E'E / T_eff
  std::size_t effective_sample = 0;
  bool stable = false;
  double max_companion_modulus = 0.0;

  std::size_t num_series() const { return static_cast<std::size_t>(residual_covariance.rows()); }
};

/// Least-squares VAR(p) fit. `data` is N x T (rows = series). `names` labels
/// series in error messages and may be empty.
VarModel fit_var(const Eigen::Ref<const Matrix>& data, const VarSpec& spec,
                 const std::vector<std::string>& names = {});
VarModel fit_var(const VolatilityPanel& panel, const VarSpec& spec);

/// Block companion matrix of Phi_1..Phi_p (Np x Np).
Matrix companion_matrix(const std::vector<Matrix>& coefficients);
double spectral_radius(const Matrix& square);

struct MaCoefficients {
  int horizon = 0;
  std::vector<Matrix> matrices;  // A_0 .. A_{H-1}
};

/// A_0 = I, A_i = sum_k Phi_k A_{i-k}.
MaCoefficients ma_coefficients(const std::vector<Matrix>& coefficients, int horizon);
MaCoefficients ma_coefficients(const VarModel& model, int horizon);

}  // namespace spillnet
