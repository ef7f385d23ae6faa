#include "regula/vec.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "regula/numeric.hpp"

namespace regula {

namespace {

void require_finite(const std::vector<double>& c) {
  for (double v : c) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("vector component is not finite");
    }
  }
}

}  // namespace

Vec::Vec(std::vector<double> components) : c_(std::move(components)) { require_finite(c_); }

Vec::Vec(std::initializer_list<double> components) : c_(components) { require_finite(c_); }

Vec Vec::zero(std::size_t dim) { return Vec(std::vector<double>(dim, 0.0)); }

std::string Vec::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ", ";
    out += fmt_g17(c_[i]);
  }
  out += ")";
  return out;
}

void require_same_dim(const Vec& u, const Vec& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("dimension mismatch");
}

double inner(const Vec& u, const Vec& v) {
  require_same_dim(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] * v[i];
  return s;
}

double norm(const Vec& u) { return std::sqrt(inner(u, u)); }

double dist(const Vec& u, const Vec& v) { return norm(u - v); }

Vec operator+(const Vec& u, const Vec& v) {
  require_same_dim(u, v);
  std::vector<double> c(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) c[i] = u[i] + v[i];
  return Vec(std::move(c));
}

Vec operator-(const Vec& u, const Vec& v) {
  require_same_dim(u, v);
  std::vector<double> c(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) c[i] = u[i] - v[i];
  return Vec(std::move(c));
}

Vec operator*(double s, const Vec& u) {
  std::vector<double> c(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) c[i] = s * u[i];
  return Vec(std::move(c));
}

Vec convex_combination(double t, const Vec& u, const Vec& v) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("convex weight outside [0,1]");
  }
  require_same_dim(u, v);
  const double s = 1.0 - t;
  std::vector<double> c(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) c[i] = t * u[i] + s * v[i];
  return Vec(std::move(c));
}

double identity_defect_sum(const Vec& x, const Vec& y) {
  const Vec sum = x + y;
  return inner(sum, sum) - inner(x, x) - inner(y, y) - 2.0 * inner(x, y);
}

double identity_defect_convex(double t, const Vec& x, const Vec& y) {
  const Vec mix = convex_combination(t, x, y);
  const Vec diff = x - y;
  return inner(mix, mix) - t * inner(x, x) - (1.0 - t) * inner(y, y) +
         t * (1.0 - t) * inner(diff, diff);
}

}  // namespace regula
