#pragma once

#include <initializer_list>
#include <random>

#include "regret/objectives.hpp"
#include "regret/types.hpp"

namespace regret::test {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Row-major literal.
inline Matrix mat(int rows, int cols, std::initializer_list<double> v) {
  Matrix M(rows, cols);
  auto it = v.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = *it++;
  return M;
}

inline Vector gaussian(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

inline Matrix spd(int d, std::mt19937_64& rng) {
  Matrix M(d, d);
  for (int j = 0; j < d; ++j) M.col(j) = gaussian(d, rng);
  return M.transpose() * M / d + 0.5 * Matrix::Identity(d, d);
}

inline Vector fd_gradient(const Objective& f, const Vector& x) {
  const double h = 1e-6 * (1.0 + x.norm());
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector p = x, m = x;
    p[i] += h;
    m[i] -= h;
    g[i] = (f.value(p) - f.value(m)) / (2.0 * h);
  }
  return g;
}

}  // namespace regret::test
