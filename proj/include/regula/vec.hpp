#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace regula {

/// Point of a finite-dimensional real coordinate space with the Euclidean
/// inner product. Components are validated to be finite on construction;
/// operations combining two vectors require equal dimension.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::vector<double> components);
  Vec(std::initializer_list<double> components);

  static Vec zero(std::size_t dim);

  std::size_t dim() const noexcept { return c_.size(); }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  const std::vector<double>& components() const noexcept { return c_; }

  /// "(a, b, ...)" with round-trip precision, for witnesses and diagnostics.
  std::string str() const;

 private:
  std::vector<double> c_;
};

void require_same_dim(const Vec& u, const Vec& v);

// Summation order in inner is fixed left-to-right, which makes symmetry
// exact and keeps repeated evaluations bit-identical.
double inner(const Vec& u, const Vec& v);
double norm(const Vec& u);
double dist(const Vec& u, const Vec& v);

Vec operator+(const Vec& u, const Vec& v);
Vec operator-(const Vec& u, const Vec& v);
Vec operator*(double s, const Vec& u);

/// t*u + (1-t)*v componentwise; t must lie in [0,1].
Vec convex_combination(double t, const Vec& u, const Vec& v);

/// ||x+y||^2 - ||x||^2 - ||y||^2 - 2<x,y>; zero in exact arithmetic.
double identity_defect_sum(const Vec& x, const Vec& y);

/// ||t x + (1-t) y||^2 - t||x||^2 - (1-t)||y||^2 + t(1-t)||x-y||^2 for
/// t in [0,1]; zero in exact arithmetic.
double identity_defect_convex(double t, const Vec& x, const Vec& y);

}  // namespace regula
