#include "regula/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace regula {

double SeededRng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi_v<double> * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Vec SeededRng::in_ball(const Vec& center, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("ball radius must be nonnegative");
  const std::size_t d = center.dim();
  std::vector<double> dir(d);
  double nn = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    dir[i] = gaussian();
    nn += dir[i] * dir[i];
  }
  const double n = std::sqrt(nn);
  // radial cdf of the uniform ball: r ~ R * u^(1/d)
  const double r = radius * std::pow(uniform01(), 1.0 / static_cast<double>(d));
  std::vector<double> out(d);
  if (n == 0.0) {
    for (std::size_t i = 0; i < d; ++i) out[i] = center[i];
    return Vec(std::move(out));
  }
  for (std::size_t i = 0; i < d; ++i) out[i] = center[i] + r * dir[i] / n;
  return Vec(std::move(out));
}

}  // namespace regula
