#pragma once

// Quadrature rules, integration and L_p norms on open boxes of R^n (n <= 2),
// including truncated rules with exponential tail-bound estimates for
// unbounded domains.

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "denslab/funcmodel.hpp"

namespace denslab {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AxisBounds {
  double lo = -kInf;
  double hi = kInf;
  bool lo_finite() const { return std::isfinite(lo); }
  bool hi_finite() const { return std::isfinite(hi); }
  bool bounded() const { return lo_finite() && hi_finite(); }
};

// A bounded axis-aligned box (used for exhaustion members U_k).
struct Box {
  Vec lo, hi;
  bool contains(const Vec& x, double margin = 0.0) const {
    for (int i = 0; i < lo.size(); ++i)
      if (x(i) < lo(i) - margin || x(i) > hi(i) + margin) return false;
    return true;
  }
};

class Domain {
 public:
  Domain() = default;
  Domain(std::vector<AxisBounds> axes, std::vector<Box> exhaustion = {});

  static Domain interval(double lo, double hi);
  static Domain whole_line();
  static Domain half_line(double lo = 0.0);
  static Domain box2d(AxisBounds a0, AxisBounds a1);

  int dim() const { return static_cast<int>(axes_.size()); }
  const AxisBounds& axis(int i) const { return axes_.at(static_cast<size_t>(i)); }
  bool bounded() const;
  bool contains(const Vec& x) const;

  const std::vector<Box>& exhaustion() const { return exhaustion_; }
  const Box& exhaustion_box(int k) const;  // 1-based k
  // Checks U_k strictly nested, closures inside U, union covering (on samples).
  void validate_exhaustion() const;

 private:
  std::vector<AxisBounds> axes_;
  std::vector<Box> exhaustion_;
};

// Generates a default nested exhaustion with `count` members.
std::vector<Box> default_exhaustion(const std::vector<AxisBounds>& axes, int count);

struct Atom {
  Vec location;
  double mass = 0.0;
};

struct MeasureSpec {
  ScalarField density;  // w >= 0 on U
  std::vector<Atom> atoms;

  MeasureSpec() : density(constant_field(1.0)) {}
  explicit MeasureSpec(ScalarField w, std::vector<Atom> a = {})
      : density(std::move(w)), atoms(std::move(a)) {
    for (const auto& atom : atoms)
      if (!(atom.mass > 0.0)) throw std::invalid_argument("atom mass must be positive");
  }
};

inline MeasureSpec lebesgue() { return MeasureSpec(); }

enum class QuadratureKind { GaussLegendreComposite, GaussHermite, GaussLaguerre, TanhSinh };

struct TailSpec {
  double radius = 40.0;   // truncation radius R for unbounded axes
  double growth_cap = 0.0;  // declared cap on exponential growth of integrands
};

struct QuadratureRule {
  QuadratureKind kind;
  int dim = 1;
  Eigen::MatrixXd nodes;    // N x dim, inside U
  Eigen::VectorXd weights;  // positive; Lebesgue weights (natural weight factored out)
  int exactness_degree = 0;
  double tail_radius = 0.0;     // 0 when no truncation happened
  double tail_bound = 0.0;      // last tail-bound estimate recorded by integrate()
  std::shared_ptr<QuadratureRule> coarse;  // companion lower-order rule
  Domain domain;

  int size() const { return static_cast<int>(nodes.rows()); }
};

QuadratureRule build_quadrature(const Domain& domain, QuadratureKind kind, int order,
                                const TailSpec& tail = {});

// Polynomial exactness of the rule with respect to its natural weight
// (e^{-x^2} for Gauss-Hermite, e^{-x} for Gauss-Laguerre, 1 otherwise):
// max relative error over monomials up to the declared degree.
double exactness_error(const QuadratureRule& rule);

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

struct ComplexIntegralResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
};

IntegralResult integrate(const ScalarField& f, const QuadratureRule& rule,
                         const MeasureSpec& measure = {});
IntegralResult integrate(const std::function<double(const Vec&)>& f, const QuadratureRule& rule,
                         const MeasureSpec& measure = {});
ComplexIntegralResult integrate_complex(const std::function<Complex(const Vec&)>& f,
                                        const QuadratureRule& rule,
                                        const MeasureSpec& measure = {});

struct NormResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool diverged = false;
};

// For finite p: (integral |f|^p dmu)^{1/p}. For p = infinity: grid supremum
// with a local golden-section polish. Divergence is detected by comparing
// refinement levels.
NormResult lp_norm_checked(const std::function<double(const Vec&)>& f, double p,
                           const QuadratureRule& rule, const MeasureSpec& measure = {});
double lp_norm(const ScalarField& f, double p, const QuadratureRule& rule,
               const MeasureSpec& measure = {});
double lp_norm(const std::function<double(const Vec&)>& f, double p, const QuadratureRule& rule,
               const MeasureSpec& measure = {});

// Supremum of |f| over a bounded box via a dense grid plus golden-section
// polish along each axis around the best grid point.
double grid_supremum(const std::function<double(const Vec&)>& f, const Box& box,
                     int points_per_axis = 801);

}  // namespace denslab
