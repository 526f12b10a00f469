#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "spillnet/var.hpp"

namespace spillnet::testing {

Matrix simulate_var(const std::vector<Matrix>& phis, const Vector& intercept, const Matrix& sigma,
                    std::size_t length, std::uint64_t seed, std::size_t burn_in) {
  const Eigen::Index n = sigma.rows();
  const auto p = static_cast<Eigen::Index>(phis.size());
  const Matrix chol = sigma.llt().matrixL();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto total = static_cast<Eigen::Index>(length + burn_in);
  Matrix y = Matrix::Zero(n, total + p);
  Vector z(n);
  for (Eigen::Index t = p; t < total + p; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
    Vector v = intercept + chol * z;
    for (Eigen::Index k = 0; k < p; ++k) v += phis[static_cast<std::size_t>(k)] * y.col(t - k - 1);
    y.col(t) = v;
  }
  return y.rightCols(static_cast<Eigen::Index>(length));
}

std::vector<Matrix> random_stable_var(int n, int p, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Matrix> phis;
  for (int k = 0; k < p; ++k) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = unif(rng) / (k + 1);
    phis.push_back(m);
  }
  // Scaling Phi_k by s^k scales every companion eigenvalue by s.
  const double rho = spectral_radius(companion_matrix(phis));
  const double s = radius / rho;
  double f = s;
  for (auto& m : phis) {
    m *= f;
    f *= s;
  }
  return phis;
}

Matrix random_spd(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix b(n, n);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = normal(rng);
  Matrix s = b * b.transpose() / n + 0.5 * Matrix::Identity(n, n);
  return 0.5 * (s + s.transpose());
}

std::vector<Date> business_days(std::size_t count) {
  using namespace std::chrono;
  std::vector<Date> out;
  sys_days d = sys_days{year{2000} / January / 3};
  while (out.size() < count) {
    const weekday wd{d};
    if (wd != Saturday && wd != Sunday) out.emplace_back(d);
    d += days{1};
  }
  return out;
}

VolatilityPanel make_panel(const Matrix& values) {
  VolatilityPanel p;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%02d", static_cast<int>(i + 1));
    p.series_ids.push_back({buf, {}, {}});
  }
  p.dates = business_days(static_cast<std::size_t>(values.cols()));
  p.values = values;
  return p;
}

VolatilityPanel synthetic_panel(int n, std::size_t length, std::uint64_t seed) {
  auto phis = random_stable_var(n, 1, seed, 0.6);
  Matrix sigma = Matrix::Constant(n, n, 0.6) + 0.4 * Matrix::Identity(n, n);
  sigma *= 1e-8;
  const Vector intercept = Vector::Constant(n, 3e-4);
  return make_panel(simulate_var(phis, intercept, sigma, length, seed + 1));
}

std::string ohlc_csv(int n, std::size_t length, std::uint64_t seed, int flat) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto dates = business_days(length);
  std::vector<double> level(static_cast<std::size_t>(n), 0.0), price(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) price[static_cast<std::size_t>(i)] = 10.0 + 5.0 * i;
  std::string out = "series_id,date,open,high,low,close\n";
  double common = 0.0;
  for (std::size_t t = 0; t < length; ++t) {
    common = 0.9 * common + 0.3 * z(rng);
    const std::string day = format_date(dates[t]);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const std::string id = fmt::format("s{:02}", i + 1);
      if (i == flat) {
        out += fmt::format("{},{},20,20,20,20\n", id, day);
        continue;
      }
      level[k] = 0.8 * level[k] + 0.5 * common + 0.3 * z(rng);
      const double scale = 0.015 * std::exp(0.5 * level[k]);
      const double open = price[k];
      const double high = open * std::exp(scale * std::abs(z(rng)));
      const double low = open * std::exp(-scale * std::abs(z(rng)));
      const double close = low + u(rng) * (high - low);
      out += fmt::format("{},{},{},{},{},{}\n", id, day, open, high, low, close);
      price[k] = close;
    }
  }
  return out;
}

}  // namespace spillnet::testing
