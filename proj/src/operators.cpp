#include "regula/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regula/numeric.hpp"
#include "regula/rng.hpp"

namespace regula {

namespace {

// Gaussian elimination with partial pivoting; nullopt when a pivot is
// numerically zero. Small dense systems only (fixed-point solves).
std::optional<std::vector<double>> solve_dense(std::vector<std::vector<double>> m,
                                               std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    }
    if (std::fabs(m[piv][col]) < 1e-12) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

void require_kappa_range(double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("strictness constant must lie in [0,1)");
  }
}

Vec affine_apply(const std::vector<std::vector<double>>& A, const std::vector<double>& c,
                 const Vec& x) {
  const std::size_t d = c.size();
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += A[i][j] * x[j];
    out[i] = s + c[i];
  }
  return Vec(std::move(out));
}

// Largest sampled root of the defect seen as a linear function of kappa.
double estimate_affine_kappa(const Operator::EvalFn& eval, std::size_t dim) {
  SeededRng rng(0x9e3779b97f4a7c15ull);
  const Vec origin = Vec::zero(dim);
  double est = 0.0;
  for (int i = 0; i < 4096; ++i) {
    const Vec x = rng.in_ball(origin, 10.0);
    const Vec y = rng.in_ball(origin, 10.0);
    const Vec tx = eval(x);
    const Vec ty = eval(y);
    const Vec dxy = x - y;
    const Vec dt = tx - ty;
    const Vec disp = (x - tx) - (y - ty);
    const double denom = inner(disp, disp);
    if (denom < 1e-12) continue;
    est = std::max(est, (inner(dt, dt) - inner(dxy, dxy)) / denom);
  }
  return est;
}

}  // namespace

Operator::Operator(std::string id, std::size_t dim, double kappa, EvalFn raw,
                   std::optional<Ball> domain, std::optional<Vec> fixed_point)
    : id_(std::move(id)),
      dim_(dim),
      kappa_(kappa),
      raw_(std::move(raw)),
      domain_(std::move(domain)),
      fixed_point_(std::move(fixed_point)) {
  require_kappa_range(kappa_);
  if (dim_ == 0) throw std::invalid_argument("operator dimension must be positive");
  if (domain_) {
    if (domain_->center.dim() != dim_) {
      throw std::invalid_argument("ball center dimension mismatch");
    }
    if (!(domain_->radius > 0.0)) {
      throw std::invalid_argument("ball radius must be positive");
    }
  }
  if (fixed_point_) {
    const double r = dist(*fixed_point_, (*this)(*fixed_point_));
    if (r > 1e-12 * (1.0 + norm(*fixed_point_))) {
      throw std::invalid_argument("claimed fixed point is not fixed");
    }
  }
}

Vec Operator::project(const Vec& x) const {
  if (!domain_) return x;
  const Vec d = x - domain_->center;
  const double r = norm(d);
  if (r <= domain_->radius) return x;
  return domain_->center + (domain_->radius / r) * d;
}

bool Operator::contains(const Vec& x) const {
  if (x.dim() != dim_) return false;
  if (!domain_) return true;
  const double r = dist(x, domain_->center);
  return r <= domain_->radius * (1.0 + 1e-9) + 1e-12;
}

Vec Operator::operator()(const Vec& x) const {
  if (x.dim() != dim_) throw std::invalid_argument("dimension mismatch");
  return raw_(project(x));
}

OperatorSpec OperatorSpec::scaling(double a, std::size_t dim) {
  OperatorSpec s;
  s.variant = Variant::Scaling;
  s.a = a;
  s.dim = dim;
  return s;
}

OperatorSpec OperatorSpec::rotation(double angle, std::size_t dim, std::size_t p,
                                    std::size_t q) {
  OperatorSpec s;
  s.variant = Variant::Rotation;
  s.angle = angle;
  s.dim = dim;
  s.plane_p = p;
  s.plane_q = q;
  return s;
}

OperatorSpec OperatorSpec::affine(std::vector<std::vector<double>> matrix,
                                  std::vector<double> offset,
                                  std::optional<double> kappa) {
  OperatorSpec s;
  s.variant = Variant::Affine;
  s.dim = offset.size();
  s.matrix = std::move(matrix);
  s.offset = std::move(offset);
  s.kappa = kappa;
  return s;
}

OperatorSpec OperatorSpec::projected(OperatorSpec base_spec, std::vector<double> center,
                                     double radius) {
  OperatorSpec s;
  s.variant = Variant::Projected;
  s.dim = base_spec.dim;
  s.base = std::make_shared<OperatorSpec>(std::move(base_spec));
  s.ball_center = std::move(center);
  s.ball_radius = radius;
  return s;
}

std::string OperatorSpec::id() const {
  switch (variant) {
    case Variant::Scaling:
      return "scaling(a=" + fmt_g17(a) + ",dim=" + std::to_string(dim) + ")";
    case Variant::Rotation:
      return "rotation(angle=" + fmt_g17(angle) + ",dim=" + std::to_string(dim) +
             ",plane=" + std::to_string(plane_p) + "-" + std::to_string(plane_q) + ")";
    case Variant::Affine:
      return "affine(dim=" + std::to_string(dim) + ")";
    case Variant::Projected:
      return "projected(" + (base ? base->id() : std::string("?")) +
             ",radius=" + fmt_g17(ball_radius) + ")";
  }
  return "operator";
}

Operator build_operator(const OperatorSpec& spec) {
  if (spec.dim == 0) throw std::invalid_argument("operator dimension must be positive");
  if (spec.kappa) require_kappa_range(*spec.kappa);

  switch (spec.variant) {
    case OperatorSpec::Variant::Scaling: {
      const double a = spec.a;
      if (!std::isfinite(a)) throw std::invalid_argument("scaling factor must be finite");
      double derived = 0.0;
      if (std::fabs(a) > 1.0) {
        derived = (a * a - 1.0) / ((1.0 - a) * (1.0 - a));
      }
      if (derived >= 1.0) {
        throw std::invalid_argument("scaling factor yields a strictness constant >= 1");
      }
      if (a < -1.0 && a <= -3.0) {
        throw std::invalid_argument("scaling factor must exceed -3");
      }
      const double kappa = spec.kappa.value_or(derived);
      return Operator(
          spec.id(), spec.dim, kappa, [a](const Vec& x) { return a * x; },
          std::nullopt, Vec::zero(spec.dim));
    }

    case OperatorSpec::Variant::Rotation: {
      if (spec.dim < 2) throw std::invalid_argument("rotation needs dimension >= 2");
      if (spec.plane_p >= spec.dim || spec.plane_q >= spec.dim ||
          spec.plane_p == spec.plane_q) {
        throw std::invalid_argument("rotation plane indices out of range");
      }
      const double c = std::cos(spec.angle);
      const double s = std::sin(spec.angle);
      const std::size_t p = spec.plane_p, q = spec.plane_q;
      const double kappa = spec.kappa.value_or(0.0);
      auto eval = [c, s, p, q](const Vec& x) {
        std::vector<double> out = x.components();
        out[p] = c * x[p] - s * x[q];
        out[q] = s * x[p] + c * x[q];
        return Vec(std::move(out));
      };
      return Operator(spec.id(), spec.dim, kappa, eval, std::nullopt,
                      Vec::zero(spec.dim));
    }

    case OperatorSpec::Variant::Affine: {
      const std::size_t d = spec.offset.size();
      if (d == 0 || spec.matrix.size() != d) {
        throw std::invalid_argument("affine matrix/offset shape mismatch");
      }
      for (const auto& row : spec.matrix) {
        if (row.size() != d) throw std::invalid_argument("affine matrix is not square");
      }
      auto matrix = spec.matrix;
      auto offset = spec.offset;
      Operator::EvalFn eval = [matrix, offset](const Vec& x) {
        return affine_apply(matrix, offset, x);
      };

      double kappa;
      if (spec.kappa) {
        kappa = *spec.kappa;
      } else {
        kappa = estimate_affine_kappa(eval, d);
        if (kappa >= 1.0) {
          throw std::invalid_argument("affine map has strictness constant >= 1");
        }
      }

      // Fixed point solves (I - A) p = offset when the system is regular.
      std::optional<Vec> fp;
      {
        std::vector<std::vector<double>> ia(d, std::vector<double>(d));
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            ia[i][j] = (i == j ? 1.0 : 0.0) - matrix[i][j];
          }
        }
        if (auto p = solve_dense(std::move(ia), offset)) {
          Vec cand(std::move(*p));
          if (dist(cand, eval(cand)) <= 1e-12 * (1.0 + norm(cand))) fp = std::move(cand);
        }
      }

      Operator op(spec.id(), d, kappa, eval, std::nullopt, fp);
      if (!spec.kappa) {
        // A constant estimated from samples is never certified silently.
        auto rep = check_strict(op, kappa, make_domain_sampler(op, 0xC0FFEEull), 4096);
        if (!rep.holds) {
          throw std::invalid_argument("estimated affine strictness constant failed validation");
        }
      }
      return op;
    }

    case OperatorSpec::Variant::Projected: {
      if (!spec.base) throw std::invalid_argument("projected spec lacks a base");
      if (spec.base->variant == OperatorSpec::Variant::Projected) {
        throw std::invalid_argument("nested projected specs are not supported");
      }
      Operator base_op = build_operator(*spec.base);
      if (spec.ball_center.size() != base_op.dim()) {
        throw std::invalid_argument("ball center dimension mismatch");
      }
      if (!(spec.ball_radius > 0.0)) {
        throw std::invalid_argument("ball radius must be positive");
      }
      Ball ball{Vec(spec.ball_center), spec.ball_radius};

      // The restriction to the ball keeps the base constant, but the base
      // map must keep the ball invariant or the restriction is not a
      // self-map; sampled containment rejects such specs.
      {
        SeededRng rng(0xB411u);
        for (int i = 0; i < 256; ++i) {
          Vec x = rng.in_ball(ball.center, ball.radius);
          const Vec tx = base_op(x);
          const double excess = dist(tx, ball.center) - ball.radius;
          if (excess > zero_tol(ball.radius * ball.radius, 1e-9)) {
            throw std::invalid_argument("projected operator is not a self-map of its ball");
          }
        }
      }

      const double kappa = spec.kappa.value_or(base_op.kappa());
      std::optional<Vec> fp;
      if (base_op.known_fixed_point()) {
        const Vec& p = *base_op.known_fixed_point();
        if (dist(p, ball.center) <= ball.radius * (1.0 + 1e-12)) fp = p;
      }
      Operator::EvalFn raw = [base_op](const Vec& x) { return base_op(x); };
      return Operator(spec.id(), base_op.dim(), kappa, std::move(raw), ball,
                      std::move(fp));
    }
  }
  throw std::logic_error("unreachable operator variant");
}

double strictness_defect(const Operator& T, double kappa, const Vec& x, const Vec& y) {
  const Vec tx = T(x);
  const Vec ty = T(y);
  const Vec dxy = x - y;
  const Vec dt = tx - ty;
  const Vec disp = (x - tx) - (y - ty);
  return inner(dt, dt) - inner(dxy, dxy) - kappa * inner(disp, disp);
}

double residual(const Operator& T, const Vec& x) { return dist(x, T(x)); }

PairSampler make_domain_sampler(const Operator& T, std::uint64_t seed,
                                double full_space_radius) {
  Vec center = T.domain() ? T.domain()->center : Vec::zero(T.dim());
  double radius = T.domain() ? T.domain()->radius : full_space_radius;
  auto rng = std::make_shared<SeededRng>(seed);
  return [rng, center, radius]() {
    PairSample s;
    s.x = rng->in_ball(center, radius);
    s.y = rng->in_ball(center, radius);
    return s;
  };
}

StrictnessReport check_strict(const Operator& T, double kappa, const PairSampler& sampler,
                              int n_samples, double tol) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  require_kappa_range(kappa);
  StrictnessReport rep;
  bool first = true;
  for (int i = 0; i < n_samples; ++i) {
    PairSample s = sampler();
    if (!T.contains(s.x) || !T.contains(s.y)) {
      throw std::invalid_argument("sampler produced a point outside the operator domain");
    }
    const double defect = strictness_defect(T, kappa, s.x, s.y);
    const double scale = 1.0 + inner(s.x, s.x) + inner(s.y, s.y);
    const double excess = defect - tol * scale;
    if (first || excess > rep.worst_excess) {
      rep.worst_excess = excess;
      rep.worst_defect = defect;
      rep.worst_pair = std::move(s);
      first = false;
    }
  }
  rep.holds = rep.worst_excess <= 0.0;
  return rep;
}

std::optional<Vec> approx_fixed_point(const Operator& T, const Vec& x, double b,
                                      double delta, long long budget) {
  if (!(b > 0.0)) throw std::invalid_argument("b must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");

  if (T.known_fixed_point()) {
    const Vec& p = *T.known_fixed_point();
    if (dist(x, p) <= b && residual(T, p) < delta) return p;
  }

  const double lam = (T.kappa() + 1.0) / 2.0;
  Vec y = T.project(x);
  for (long long step = 0; step <= budget; ++step) {
    const Vec ty = T(y);
    if (dist(x, y) <= b && dist(y, ty) < delta) return y;
    if (step == budget) break;
    y = convex_combination(lam, y, ty);
  }
  return std::nullopt;
}

}  // namespace regula
