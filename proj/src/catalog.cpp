#include "regula/catalog.hpp"

#include <cmath>
#include <numbers>

namespace regula {

namespace {

// 0.8 * (plane rotation by 0.7 in coordinates 0,1) + diag(0.6, 0.5, 0.4):
// operator norm 0.8 < 1, so the map is a contraction with constant 0.
std::vector<std::vector<double>> contraction_matrix() {
  const double c = 0.8 * std::cos(0.7);
  const double s = 0.8 * std::sin(0.7);
  return {
      {c, -s, 0.0, 0.0, 0.0},
      {s, c, 0.0, 0.0, 0.0},
      {0.0, 0.0, 0.6, 0.0, 0.0},
      {0.0, 0.0, 0.0, 0.5, 0.0},
      {0.0, 0.0, 0.0, 0.0, 0.4},
  };
}

// offset chosen so the fixed point is exactly `target`: c = (I - A) target
std::vector<double> offset_for_fixed_point(const std::vector<std::vector<double>>& A,
                                           const std::vector<double>& target) {
  const std::size_t d = target.size();
  std::vector<double> c(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = target[i];
    for (std::size_t j = 0; j < d; ++j) s -= A[i][j] * target[j];
    c[i] = s;
  }
  return c;
}

}  // namespace

std::vector<CatalogEntry> standard_catalog() {
  const double half_pi = std::numbers::pi_v<double> / 2.0;

  std::vector<CatalogEntry> entries;
  entries.push_back({"scaling-neg2-d1", OperatorSpec::scaling(-2.0, 1), Vec{1.0}});
  entries.push_back({"scaling-neg2-d2", OperatorSpec::scaling(-2.0, 2), Vec{0.8, -0.6}});
  entries.push_back(
      {"scaling-neg2-d3", OperatorSpec::scaling(-2.0, 3), Vec{1.0, 0.5, -0.25}});
  entries.push_back({"rotation-d2", OperatorSpec::rotation(half_pi, 2), Vec{1.0, 0.0}});

  const auto A = contraction_matrix();
  const std::vector<double> p{1.0, -1.0, 2.0, 0.5, -0.25};
  const auto c = offset_for_fixed_point(A, p);
  const double step = 1.0 / std::sqrt(5.0);
  const Vec affine_x0{p[0] + step, p[1] + step, p[2] + step, p[3] + step, p[4] + step};
  entries.push_back({"affine-contraction-d5", OperatorSpec::affine(A, c, 0.0), affine_x0});

  entries.push_back({"rotation-ball-d2",
                     OperatorSpec::projected(OperatorSpec::rotation(half_pi, 2),
                                             {0.0, 0.0}, 2.0),
                     Vec{1.0, 0.0}});
  entries.push_back({"scaling-half-ball-d3",
                     OperatorSpec::projected(OperatorSpec::scaling(0.5, 3),
                                             {0.0, 0.0, 0.0}, 3.0),
                     Vec{0.8, 0.8, 0.8}});
  entries.push_back({"affine-contraction-ball-d5",
                     OperatorSpec::projected(OperatorSpec::affine(A, c, 0.0), p, 2.0),
                     affine_x0});
  return entries;
}

}  // namespace regula
