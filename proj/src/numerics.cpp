#include "denslab/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace denslab {

// ---- Domain -----------------------------------------------------------------

Domain::Domain(std::vector<AxisBounds> axes, std::vector<Box> exhaustion)
    : axes_(std::move(axes)), exhaustion_(std::move(exhaustion)) {
  if (axes_.empty() || axes_.size() > 2)
    throw std::invalid_argument("Domain: dimension must be 1 or 2");
  for (const auto& a : axes_)
    if (!(a.lo < a.hi)) throw std::invalid_argument("Domain: empty axis interval");
  if (exhaustion_.empty()) exhaustion_ = default_exhaustion(axes_, 5);
}

Domain Domain::interval(double lo, double hi) { return Domain({AxisBounds{lo, hi}}); }
Domain Domain::whole_line() { return Domain({AxisBounds{-kInf, kInf}}); }
Domain Domain::half_line(double lo) { return Domain({AxisBounds{lo, kInf}}); }
Domain Domain::box2d(AxisBounds a0, AxisBounds a1) { return Domain({a0, a1}); }

bool Domain::bounded() const {
  for (const auto& a : axes_)
    if (!a.bounded()) return false;
  return true;
}

bool Domain::contains(const Vec& x) const {
  for (int i = 0; i < dim(); ++i)
    if (!(x(i) > axes_[static_cast<size_t>(i)].lo && x(i) < axes_[static_cast<size_t>(i)].hi))
      return false;
  return true;
}

const Box& Domain::exhaustion_box(int k) const {
  if (k < 1 || k > static_cast<int>(exhaustion_.size()))
    throw std::out_of_range("exhaustion index out of range");
  return exhaustion_[static_cast<size_t>(k - 1)];
}

std::vector<Box> default_exhaustion(const std::vector<AxisBounds>& axes, int count) {
  std::vector<Box> out;
  int n = static_cast<int>(axes.size());
  for (int k = 1; k <= count; ++k) {
    Box b;
    b.lo.resize(n);
    b.hi.resize(n);
    for (int i = 0; i < n; ++i) {
      const auto& a = axes[static_cast<size_t>(i)];
      if (a.bounded()) {
        double margin = (a.hi - a.lo) / (2.0 * (k + 1));
        b.lo(i) = a.lo + margin;
        b.hi(i) = a.hi - margin;
      } else {
        b.lo(i) = a.lo_finite() ? a.lo + 1.0 / (k + 1) : -2.0 * k;
        b.hi(i) = a.hi_finite() ? a.hi - 1.0 / (k + 1) : 2.0 * k;
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

void Domain::validate_exhaustion() const {
  if (exhaustion_.empty()) throw std::invalid_argument("exhaustion is empty");
  for (size_t k = 0; k + 1 < exhaustion_.size(); ++k) {
    for (int i = 0; i < dim(); ++i) {
      if (exhaustion_[k].lo(i) < exhaustion_[k + 1].lo(i) - 1e-15 ||
          exhaustion_[k].hi(i) > exhaustion_[k + 1].hi(i) + 1e-15)
        throw std::invalid_argument("exhaustion boxes are not nested");
    }
  }
  for (const auto& b : exhaustion_) {
    for (int i = 0; i < dim(); ++i) {
      const auto& a = axes_[static_cast<size_t>(i)];
      if ((a.lo_finite() && b.lo(i) <= a.lo) || (a.hi_finite() && b.hi(i) >= a.hi))
        throw std::invalid_argument("exhaustion closure is not contained in U");
      if (!std::isfinite(b.lo(i)) || !std::isfinite(b.hi(i)))
        throw std::invalid_argument("exhaustion boxes must be bounded");
    }
  }
  // coverage on samples: the last box must contain a representative grid of U
  const Box& last = exhaustion_.back();
  int K = static_cast<int>(exhaustion_.size());
  const int samples = 25;
  for (int i = 0; i < dim(); ++i) {
    const auto& a = axes_[static_cast<size_t>(i)];
    double margin = (a.bounded() ? (a.hi - a.lo) : 1.0) / (2.0 * (K + 1)) * 1.0001;
    double lo = a.lo_finite() ? a.lo + margin : -K;
    double hi = a.hi_finite() ? a.hi - margin : K;
    for (int s = 0; s < samples; ++s) {
      double t = lo + (hi - lo) * s / (samples - 1);
      if (t < last.lo(i) || t > last.hi(i))
        throw std::invalid_argument("exhaustion does not cover U on samples");
    }
  }
}

// ---- Golub-Welsch -----------------------------------------------------------

namespace {

struct Rule1D {
  Eigen::VectorXd nodes, weights;
};

// Nodes/weights of the n-point rule for the weight with Jacobi recurrence
// coefficients a_k (diagonal) and b_k (squared off-diagonal), zeroth moment mu0.
Rule1D golub_welsch(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double mu0) {
  int n = static_cast<int>(a.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = a(i);
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = std::sqrt(b(i + 1));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  Rule1D r;
  r.nodes = es.eigenvalues();
  r.weights.resize(n);

  // Eigenvalues locate the nodes to ~1e-15 absolute, but eigenvector-based
  // weights lose all relative accuracy when the weight is tiny. Refine each
  // node by Newton iteration on the orthonormal polynomial p_n and take the
  // weight from the Christoffel function: w_i = 1 / sum_{k<n} p_k(x_i)^2.
  auto eval = [&](double x, double& pn, double& dpn, double& christoffel) {
    double pkm1 = 0.0, pk = 1.0 / std::sqrt(mu0);
    double dkm1 = 0.0, dk = 0.0;
    christoffel = pk * pk;
    for (int k = 0; k < n; ++k) {
      // p_n only needs a fixed positive scale for the final step; 1 is fine.
      double sb1 = (k + 1 < n) ? std::sqrt(b(k + 1)) : 1.0;
      double sbk = (k > 0) ? std::sqrt(b(k)) : 0.0;
      double pk1 = ((x - a(k)) * pk - sbk * pkm1) / sb1;
      double dk1 = ((x - a(k)) * dk + pk - sbk * dkm1) / sb1;
      pkm1 = pk;
      pk = pk1;
      dkm1 = dk;
      dk = dk1;
      if (k + 1 < n) christoffel += pk * pk;
    }
    pn = pk;
    dpn = dk;
  };

  for (int i = 0; i < n; ++i) {
    double x = r.nodes(i);
    for (int it = 0; it < 3; ++it) {
      double pn, dpn, chr;
      eval(x, pn, dpn, chr);
      if (dpn == 0.0) break;
      double step = pn / dpn;
      x -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    double pn, dpn, chr;
    eval(x, pn, dpn, chr);
    r.nodes(i) = x;
    r.weights(i) = 1.0 / chr;
  }
  return r;
}

Rule1D gauss_legendre(int n) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b(n);
  b(0) = 2.0;  // mu0 slot unused; set explicitly below
  for (int k = 1; k < n; ++k) b(k) = k * k / (4.0 * k * k - 1.0);
  return golub_welsch(a, b, 2.0);
}

Rule1D gauss_hermite(int n) {  // weight e^{-x^2}
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b(n);
  b(0) = 0.0;
  for (int k = 1; k < n; ++k) b(k) = k / 2.0;
  return golub_welsch(a, b, std::sqrt(M_PI));
}

Rule1D gauss_laguerre(int n) {  // weight e^{-x}
  Eigen::VectorXd a(n), b(n);
  for (int k = 0; k < n; ++k) a(k) = 2.0 * k + 1.0;
  b(0) = 0.0;
  for (int k = 1; k < n; ++k) b(k) = static_cast<double>(k) * k;
  return golub_welsch(a, b, 1.0);
}

Rule1D composite_legendre(double lo, double hi, int order, int panels) {
  Rule1D base = gauss_legendre(order);
  Rule1D r;
  r.nodes.resize(order * panels);
  r.weights.resize(order * panels);
  double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * h, mid = a + h / 2.0;
    for (int i = 0; i < order; ++i) {
      r.nodes(p * order + i) = mid + base.nodes(i) * h / 2.0;
      r.weights(p * order + i) = base.weights(i) * h / 2.0;
    }
  }
  return r;
}

Rule1D tanh_sinh(double lo, double hi, int order) {
  // step h = 1/order, truncated where the transformed weight underflows
  double h = 1.0 / std::max(1, order);
  double mid = (lo + hi) / 2.0, half = (hi - lo) / 2.0;
  std::vector<double> xs, ws;
  for (int j = -8 * order; j <= 8 * order; ++j) {
    double t = j * h;
    double st = M_PI_2 * std::sinh(t);
    double w = h * M_PI_2 * std::cosh(t) / (std::cosh(st) * std::cosh(st));
    if (w < 1e-300) continue;
    // distance to the nearer endpoint computed without cancellation:
    // 1 -+ tanh(s) = 2 / (1 + e^{+-2s})
    double node;
    if (st <= 0.0) {
      double d = half * 2.0 / (1.0 + std::exp(-2.0 * st));
      node = lo + d;
      if (d <= 0.0 || node >= hi || node <= lo) continue;
    } else {
      double d = half * 2.0 / (1.0 + std::exp(2.0 * st));
      node = hi - d;
      if (d <= 0.0 || node <= lo || node >= hi) continue;
    }
    xs.push_back(node);
    ws.push_back(half * w);
  }
  Rule1D r;
  r.nodes = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<long>(xs.size()));
  r.weights = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<long>(ws.size()));
  return r;
}

// Truncation window for one axis.
void truncate_axis(const AxisBounds& a, double R, double& lo, double& hi) {
  lo = a.lo_finite() ? a.lo : -R;
  hi = a.hi_finite() ? a.hi : R;
}

Rule1D build_axis_rule(const AxisBounds& axis, QuadratureKind kind, int order, const TailSpec& tail,
                       bool& truncated) {
  truncated = false;
  switch (kind) {
    case QuadratureKind::GaussHermite: {
      if (axis.lo_finite() || axis.hi_finite())
        throw std::invalid_argument("gauss-hermite requires a whole-line axis");
      Rule1D r = gauss_hermite(order);
      for (int i = 0; i < r.nodes.size(); ++i)
        r.weights(i) *= std::exp(r.nodes(i) * r.nodes(i));
      return r;
    }
    case QuadratureKind::GaussLaguerre: {
      if (!axis.lo_finite() || axis.hi_finite())
        throw std::invalid_argument("gauss-laguerre requires a half-line axis");
      Rule1D r = gauss_laguerre(order);
      for (int i = 0; i < r.nodes.size(); ++i) {
        r.weights(i) *= std::exp(r.nodes(i));
        r.nodes(i) += axis.lo;
      }
      return r;
    }
    case QuadratureKind::GaussLegendreComposite: {
      double lo, hi;
      truncate_axis(axis, tail.radius, lo, hi);
      truncated = !axis.bounded();
      int panels = std::max(4, static_cast<int>(std::ceil((hi - lo) / 2.0)));
      return composite_legendre(lo, hi, order, panels);
    }
    case QuadratureKind::TanhSinh: {
      double lo, hi;
      truncate_axis(axis, tail.radius, lo, hi);
      truncated = !axis.bounded();
      return tanh_sinh(lo, hi, order);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

QuadratureRule build_quadrature(const Domain& domain, QuadratureKind kind, int order,
                                const TailSpec& tail) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  QuadratureRule rule;
  rule.kind = kind;
  rule.dim = domain.dim();
  rule.domain = domain;

  bool any_truncated = false;
  std::vector<Rule1D> axes;
  for (int i = 0; i < domain.dim(); ++i) {
    bool tr = false;
    axes.push_back(build_axis_rule(domain.axis(i), kind, order, tail, tr));
    any_truncated |= tr;
  }
  rule.tail_radius = any_truncated ? tail.radius : 0.0;

  if (domain.dim() == 1) {
    rule.nodes = axes[0].nodes;
    rule.weights = axes[0].weights;
  } else {
    long n0 = axes[0].nodes.size(), n1 = axes[1].nodes.size();
    rule.nodes.resize(n0 * n1, 2);
    rule.weights.resize(n0 * n1);
    for (long i = 0; i < n0; ++i)
      for (long j = 0; j < n1; ++j) {
        rule.nodes(i * n1 + j, 0) = axes[0].nodes(i);
        rule.nodes(i * n1 + j, 1) = axes[1].nodes(j);
        rule.weights(i * n1 + j) = axes[0].weights(i) * axes[1].weights(j);
      }
  }

  switch (kind) {
    case QuadratureKind::GaussHermite:
    case QuadratureKind::GaussLaguerre:
      rule.exactness_degree = 2 * order - 1;
      break;
    case QuadratureKind::GaussLegendreComposite:
      rule.exactness_degree = 2 * order - 1;
      break;
    case QuadratureKind::TanhSinh:
      rule.exactness_degree = std::min(order, 20);
      break;
  }

  if (order >= 2) {
    rule.coarse = std::make_shared<QuadratureRule>(
        build_quadrature(domain, kind, std::max(1, order / 2 + (kind == QuadratureKind::TanhSinh ? order / 4 : 0)), tail));
    rule.coarse->coarse.reset();
  }
  return rule;
}

double exactness_error(const QuadratureRule& rule) {
  if (rule.dim != 1) return 0.0;  // tensor rules inherit per-axis exactness
  int deg = rule.exactness_degree;
  double worst = 0.0;
  for (int k = 0; k <= deg; ++k) {
    double num = 0.0, abssum = 0.0, exact = 0.0;
    auto accumulate = [&](double x, double natural_weight, int i) {
      double term = rule.weights(i) * natural_weight * std::pow(x, k);
      num += term;
      abssum += std::abs(term);
    };
    switch (rule.kind) {
      case QuadratureKind::GaussHermite: {
        for (int i = 0; i < rule.size(); ++i) {
          double x = rule.nodes(i, 0);
          accumulate(x, std::exp(-x * x), i);
        }
        exact = (k % 2 == 1) ? 0.0 : std::tgamma((k + 1) / 2.0);
        break;
      }
      case QuadratureKind::GaussLaguerre: {
        double lo = rule.domain.axis(0).lo;
        for (int i = 0; i < rule.size(); ++i) {
          double x = rule.nodes(i, 0) - lo;
          accumulate(x, std::exp(-x), i);
        }
        exact = factorial(k);
        break;
      }
      case QuadratureKind::GaussLegendreComposite:
      case QuadratureKind::TanhSinh: {
        double lo = rule.domain.axis(0).lo_finite() ? rule.domain.axis(0).lo : -rule.tail_radius;
        double hi = rule.domain.axis(0).hi_finite() ? rule.domain.axis(0).hi : rule.tail_radius;
        for (int i = 0; i < rule.size(); ++i) accumulate(rule.nodes(i, 0), 1.0, i);
        exact = (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
        break;
      }
    }
    // relative to the absolute node sum: the conditioning-aware scale
    double scale = std::max({std::abs(exact), abssum, 1.0});
    worst = std::max(worst, std::abs(num - exact) / scale);
  }
  return worst;
}

// ---- integration ---------------------------------------------------------------

namespace {

template <typename S, typename F>
S weighted_sum(const F& f, const QuadratureRule& rule, const MeasureSpec& measure) {
  S total = S(0);
  Vec x(rule.dim);
  for (int i = 0; i < rule.size(); ++i) {
    for (int d = 0; d < rule.dim; ++d) x(d) = rule.nodes(i, d);
    double w = measure.density(x);
    if (!std::isfinite(w) || w < 0.0)
      throw std::runtime_error("measure density invalid at node x=" + std::to_string(x(0)));
    if (w == 0.0) continue;
    S v = f(x);
    if (!std::isfinite(std::abs(v))) {
      std::string loc = "(" + std::to_string(x(0)) + (rule.dim == 2 ? "," + std::to_string(x(1)) : "") + ")";
      throw std::runtime_error("non-finite integrand at node " + loc);
    }
    total += S(rule.weights(i) * w) * v;
  }
  for (const auto& atom : measure.atoms) total += S(atom.mass) * f(atom.location);
  return total;
}

// Exponential tail model: samples the integrand magnitude at the truncation
// radius and beyond, fits C e^{-c r}.
template <typename F>
double tail_bound_estimate(const F& f, const QuadratureRule& rule, const MeasureSpec& measure) {
  if (rule.tail_radius <= 0.0) return 0.0;
  double R = rule.tail_radius;
  double bound = 0.0;
  Vec x = Vec::Zero(rule.dim);
  for (int d = 0; d < rule.dim; ++d) {
    const auto& a = rule.domain.axis(d);
    for (double sign : {-1.0, 1.0}) {
      if (sign < 0 && a.lo_finite()) continue;
      if (sign > 0 && a.hi_finite()) continue;
      Vec p = x;
      p(d) = sign * R;
      Vec q = x;
      q(d) = sign * 1.5 * R;
      double g1 = std::abs(f(p)) * measure.density(p);
      double g2 = std::abs(f(q)) * measure.density(q);
      if (g1 <= 0.0) continue;
      if (g2 >= g1) {
        bound += g1 * R;  // no observed decay; pessimistic linear cap
        continue;
      }
      double c = -std::log(g2 / g1) / (0.5 * R);
      bound += g1 / c;
    }
  }
  return bound;
}

}  // namespace

IntegralResult integrate(const std::function<double(const Vec&)>& f, const QuadratureRule& rule,
                         const MeasureSpec& measure) {
  IntegralResult r;
  r.value = weighted_sum<double>(f, rule, measure);
  double coarse = rule.coarse ? weighted_sum<double>(f, *rule.coarse, measure) : r.value;
  r.error_estimate = std::abs(r.value - coarse) + tail_bound_estimate(f, rule, measure) +
                     1e-14 * std::abs(r.value);
  return r;
}

IntegralResult integrate(const ScalarField& f, const QuadratureRule& rule,
                         const MeasureSpec& measure) {
  return integrate([&f](const Vec& x) { return f(x); }, rule, measure);
}

ComplexIntegralResult integrate_complex(const std::function<Complex(const Vec&)>& f,
                                        const QuadratureRule& rule, const MeasureSpec& measure) {
  ComplexIntegralResult r;
  r.value = weighted_sum<Complex>(f, rule, measure);
  Complex coarse = rule.coarse ? weighted_sum<Complex>(f, *rule.coarse, measure) : r.value;
  r.error_estimate = std::abs(r.value - coarse) + tail_bound_estimate(f, rule, measure) +
                     1e-14 * std::abs(r.value);
  return r;
}

// ---- norms ----------------------------------------------------------------------

namespace {

double golden_polish(const std::function<double(double)>& g, double lo, double hi) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = g(c), fd = g(d);
  for (int it = 0; it < 60 && (b - a) > 1e-12 * (1.0 + std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = g(d);
    }
  }
  return std::max(fc, fd);
}

double sup_over_nodes(const std::function<double(const Vec&)>& f, const QuadratureRule& rule) {
  double best = 0.0;
  long best_i = 0;
  Vec x(rule.dim);
  for (int i = 0; i < rule.size(); ++i) {
    for (int d = 0; d < rule.dim; ++d) x(d) = rule.nodes(i, d);
    double v = std::abs(f(x));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (rule.dim == 1) {
    // polish between the neighbours of the best node
    std::vector<double> xs(rule.nodes.data(), rule.nodes.data() + rule.size());
    std::sort(xs.begin(), xs.end());
    double xb = rule.nodes(best_i, 0);
    auto it = std::lower_bound(xs.begin(), xs.end(), xb);
    const auto& a = rule.domain.axis(0);
    double lo = (it == xs.begin()) ? (a.lo_finite() ? a.lo + 1e-13 : *it) : *(it - 1);
    double hi = (it + 1 == xs.end()) ? (a.hi_finite() ? a.hi - 1e-13 : *it) : *(it + 1);
    if (hi > lo) {
      auto g = [&](double t) {
        Vec p(1);
        p << t;
        return std::abs(f(p));
      };
      best = std::max(best, golden_polish(g, lo, hi));
    }
  }
  return best;
}

}  // namespace

NormResult lp_norm_checked(const std::function<double(const Vec&)>& f, double p,
                           const QuadratureRule& rule, const MeasureSpec& measure) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  NormResult out;
  if (std::isinf(p)) {
    out.value = sup_over_nodes(f, rule);
    out.error_estimate = 1e-10 * (1.0 + out.value);
    return out;
  }
  auto absp = [&](const Vec& x) { return std::pow(std::abs(f(x)), p); };
  IntegralResult fine = integrate(absp, rule, measure);
  out.value = std::pow(std::max(0.0, fine.value), 1.0 / p);
  out.error_estimate = fine.error_estimate;

  // Divergence probes: power-law fit of the integrand at finite endpoints
  // (exponent <= -1 means the integral keeps growing under refinement) and a
  // growth check at the truncation radius for unbounded axes.
  Vec center = Vec::Zero(rule.dim);
  if (rule.dim == 2)
    for (int d = 0; d < rule.dim; ++d)
      center(d) = 0.5 * (rule.nodes.col(d).minCoeff() + rule.nodes.col(d).maxCoeff());
  for (int d = 0; d < rule.dim; ++d) {
    const auto& a = rule.domain.axis(d);
    for (int side = 0; side < 2; ++side) {
      double endpoint = side == 0 ? a.lo : a.hi;
      if (!std::isfinite(endpoint)) {
        double R = rule.tail_radius > 0 ? rule.tail_radius : 40.0;
        Vec p1 = center, p2 = center;
        p1(d) = side == 0 ? -R : R;
        p2(d) = side == 0 ? -1.5 * R : 1.5 * R;
        double g1 = absp(p1) * measure.density(p1);
        double g2 = absp(p2) * measure.density(p2);
        if (g2 >= g1 && g1 > 1e-12 * (1.0 + std::abs(fine.value))) out.diverged = true;
        continue;
      }
      double dir = side == 0 ? 1.0 : -1.0;
      Vec p1 = center, p2 = center;
      p1(d) = endpoint + dir * 1e-8;
      p2(d) = endpoint + dir * 1e-6;
      double g1 = absp(p1) * measure.density(p1);
      double g2 = absp(p2) * measure.density(p2);
      if (g1 > 0.0 && g2 > 0.0 && g1 > 1.0001 * g2) {
        // fit g ~ |x - endpoint|^s; s <= -1 is non-integrable
        double s = -std::log(g1 / g2) / std::log(1e2);
        if (s <= -1.0 + 1e-6) out.diverged = true;
      }
    }
  }
  if (!std::isfinite(out.value)) out.diverged = true;
  return out;
}

double lp_norm(const std::function<double(const Vec&)>& f, double p, const QuadratureRule& rule,
               const MeasureSpec& measure) {
  return lp_norm_checked(f, p, rule, measure).value;
}

double lp_norm(const ScalarField& f, double p, const QuadratureRule& rule,
               const MeasureSpec& measure) {
  return lp_norm([&f](const Vec& x) { return f(x); }, p, rule, measure);
}

double grid_supremum(const std::function<double(const Vec&)>& f, const Box& box,
                     int points_per_axis) {
  int n = static_cast<int>(box.lo.size());
  double best = 0.0;
  Vec best_x = box.lo;
  if (n == 1) {
    for (int i = 0; i < points_per_axis; ++i) {
      Vec x(1);
      x << box.lo(0) + (box.hi(0) - box.lo(0)) * i / (points_per_axis - 1);
      double v = std::abs(f(x));
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    double h = (box.hi(0) - box.lo(0)) / (points_per_axis - 1);
    auto g = [&](double t) {
      Vec p(1);
      p << t;
      return std::abs(f(p));
    };
    best = std::max(best, golden_polish(g, std::max(box.lo(0), best_x(0) - h),
                                        std::min(box.hi(0), best_x(0) + h)));
  } else {
    int m = std::min(points_per_axis, 201);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Vec x(2);
        x << box.lo(0) + (box.hi(0) - box.lo(0)) * i / (m - 1),
            box.lo(1) + (box.hi(1) - box.lo(1)) * j / (m - 1);
        best = std::max(best, std::abs(f(x)));
      }
  }
  return best;
}

}  // namespace denslab
