#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "spillnet/error.hpp"
#include "spillnet/ingest.hpp"

namespace spillnet {

double adf_statistic(const std::vector<double>& series, int lag) {
  if (lag < 0) throw ConfigError("ADF lag must be >= 0");
  const auto n = static_cast<Eigen::Index>(series.size());
  const Eigen::Index l = lag;
  const Eigen::Index rows = n - l - 1;
  const Eigen::Index cols = l + 2;
  if (rows - cols < 1) {
    throw LengthError(fmt::format("ADF regression with lag {} needs more than {} observations", lag, n));
  }
  Matrix x(rows, cols);
  Vector y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index t = r + l + 1;
    const auto st = static_cast<std::size_t>(t);
    y(r) = series[st] - series[st - 1];
    x(r, 0) = 1.0;
    x(r, 1) = series[st - 1];
    for (Eigen::Index k = 1; k <= l; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      x(r, 1 + k) = series[st - sk] - series[st - sk - 1];
    }
  }
  Eigen::ColPivHouseholderQR<Matrix> pivoted(x);
  if (pivoted.rank() < cols) {
    throw SingularDesignError("ADF regression design is rank deficient");
  }
  Eigen::HouseholderQR<Matrix> qr(x);
  const Vector beta = qr.solve(y);
  const Vector resid = y - x * beta;
  const double s2 = resid.squaredNorm() / static_cast<double>(rows - cols);
  const Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  const Matrix r_inv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(cols, cols));
  const double var_gamma = s2 * r_inv.row(1).squaredNorm();
  return beta(1) / std::sqrt(var_gamma);
}

DescriptiveStats describe(const std::vector<double>& series, int adf_lag) {
  const std::size_t n = series.size();
  if (adf_lag < 0) throw ConfigError("ADF lag must be >= 0");
  if (n < static_cast<std::size_t>(adf_lag) + 10) {
    throw LengthError(fmt::format("series of length {} is too short for ADF lag {}", n, adf_lag));
  }
  DescriptiveStats s;
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (double v : series) sum += v;
  s.mean = sum / dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : series) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  if (m2 == 0.0) throw DegenerateSeriesError("series has zero variance");
  s.std = std::sqrt(m2 / (dn - 1.0));
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.kurtosis = m4 / (m2 * m2);

  std::vector<double> sorted(series);
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  s.adf_statistic = adf_statistic(series, adf_lag);
  s.adf_significant_1pct = s.adf_statistic < AdfCriticalValues::one_pct;
  return s;
}

}  // namespace spillnet
