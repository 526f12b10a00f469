#include "spillnet/var.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include "spillnet/error.hpp"

namespace spillnet {

void VarSpec::validate() const {
  if (lag_order < 1 || lag_order > 20) {
    throw ConfigError(fmt::format("VAR lag order must lie in [1, 20], got {}", lag_order));
  }
}

namespace {

std::string label(const std::vector<std::string>& names, Eigen::Index i) {
  const auto k = static_cast<std::size_t>(i);
  return k < names.size() ? names[k] : fmt::format("#{}", i);
}

std::string regressor_label(const std::vector<std::string>& names, Eigen::Index col, bool intercept,
                            Eigen::Index n) {
  if (intercept) {
    if (col == 0) return "intercept";
    --col;
  }
  return fmt::format("lag {} of '{}'", col / n + 1, label(names, col % n));
}

}  // namespace

VarModel fit_var(const Eigen::Ref<const Matrix>& data, const VarSpec& spec,
                 const std::vector<std::string>& names) {
  spec.validate();
  const Eigen::Index n = data.rows();
  const Eigen::Index t = data.cols();
  const Eigen::Index p = spec.lag_order;
  if (n < 1) throw LengthError("VAR needs at least one series");
  const auto needed = min_var_observations(static_cast<std::size_t>(n), spec.lag_order);
  if (static_cast<std::size_t>(t) < needed) {
    throw LengthError(fmt::format("VAR({}) on {} series needs at least {} observations, got {}", p, n,
                                  needed, t));
  }

  const Eigen::Index t_eff = t - p;
  const Eigen::Index offset = spec.include_intercept ? 1 : 0;
  const Eigen::Index k = n * p + offset;
  Matrix x(t_eff, k);
  if (spec.include_intercept) x.col(0).setOnes();
  for (Eigen::Index lag = 1; lag <= p; ++lag) {
    // Row r of the design is observation p + r; its lag-l block is column p + r - l of data.
    x.middleCols(offset + (lag - 1) * n, n) = data.middleCols(p - lag, t_eff).transpose();
  }
  const Matrix y = data.rightCols(t_eff).transpose();

  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  if (qr.rank() < k) {
    const Eigen::Index dependent = qr.colsPermutation().indices()(qr.rank());
    throw SingularDesignError(fmt::format(
        "singular design in equation for '{}' (rank {} of {}): {} is linearly dependent on other regressors",
        label(names, 0), qr.rank(), k, regressor_label(names, dependent, spec.include_intercept, n)));
  }
  const Matrix beta = qr.solve(y);  // k x N, column i = equation i
  const Matrix resid = y - x * beta;

  VarModel model;
  model.spec = spec;
  model.effective_sample = static_cast<std::size_t>(t_eff);
  model.intercept = spec.include_intercept ? Vector(beta.row(0).transpose()) : Vector::Zero(n);
  model.coefficients.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index lag = 0; lag < p; ++lag) {
    model.coefficients.emplace_back(beta.middleRows(offset + lag * n, n).transpose());
  }
  Matrix sigma = resid.transpose() * resid / static_cast<double>(t_eff);
  model.residual_covariance = 0.5 * (sigma + sigma.transpose());
  model.max_companion_modulus = spectral_radius(companion_matrix(model.coefficients));
  model.stable = model.max_companion_modulus < 1.0;
  return model;
}

VarModel fit_var(const VolatilityPanel& panel, const VarSpec& spec) {
  return fit_var(panel.values, spec, ids_of(panel.series_ids));
}

Matrix companion_matrix(const std::vector<Matrix>& coefficients) {
  if (coefficients.empty()) return Matrix();
  const Eigen::Index n = coefficients.front().rows();
  const auto p = static_cast<Eigen::Index>(coefficients.size());
  Matrix c = Matrix::Zero(n * p, n * p);
  for (Eigen::Index lag = 0; lag < p; ++lag) {
    c.block(0, lag * n, n, n) = coefficients[static_cast<std::size_t>(lag)];
  }
  if (p > 1) c.bottomLeftCorner(n * (p - 1), n * (p - 1)).setIdentity();
  return c;
}

double spectral_radius(const Matrix& square) {
  if (square.size() == 0) return 0.0;
  if (square.rows() == 1) return std::abs(square(0, 0));
  Eigen::EigenSolver<Matrix> solver(square, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error("eigenvalue computation for the companion matrix did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

MaCoefficients ma_coefficients(const std::vector<Matrix>& coefficients, int horizon) {
  if (horizon < 1) throw ConfigError(fmt::format("horizon must be >= 1, got {}", horizon));
  if (coefficients.empty()) throw ConfigError("no VAR coefficient matrices");
  const Eigen::Index n = coefficients.front().rows();
  MaCoefficients ma;
  ma.horizon = horizon;
  ma.matrices.reserve(static_cast<std::size_t>(horizon));
  ma.matrices.push_back(Matrix::Identity(n, n));
  for (int i = 1; i < horizon; ++i) {
    Matrix a = Matrix::Zero(n, n);
    const int top = std::min<int>(i, static_cast<int>(coefficients.size()));
    for (int k = 1; k <= top; ++k) {
      a.noalias() += coefficients[static_cast<std::size_t>(k - 1)] * ma.matrices[static_cast<std::size_t>(i - k)];
    }
    ma.matrices.push_back(std::move(a));
  }
  return ma;
}

MaCoefficients ma_coefficients(const VarModel& model, int horizon) {
  return ma_coefficients(model.coefficients, horizon);
}

}  // namespace spillnet
