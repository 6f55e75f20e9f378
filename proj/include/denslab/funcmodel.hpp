#pragma once

// Expression DSL for weights, targets and map components, with exact
// forward-mode derivatives via jets, plus the complex exponential
// evaluation e^{-i(lambda, Phi(x))} f0(x) used throughout.

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "denslab/jet.hpp"

namespace denslab {

using Vec = Eigen::VectorXd;
using Complex = std::complex<double>;

constexpr int kMaxDerivativeOrder = 6;

class ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class Smoothness { Smooth, MeasurableOnly };

// An evaluable function of x in U, with derivative access when smooth.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(ExprPtr root, int dim);

  int dim() const { return dim_; }
  Smoothness smoothness() const { return smoothness_; }
  bool is_smooth() const { return smoothness_ == Smoothness::Smooth; }

  double operator()(const Vec& x) const;
  double operator()(double x) const;

  // Taylor jet of the field at x up to the given total order.
  // Throws for measurable-only fields when order > 0.
  Jet<double> jet(const Vec& x, int order) const;

  std::string to_string() const;

  const ExprPtr& root() const { return root_; }

  // pointwise algebra (dims must agree; dim-0 constants promote)
  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double c, const ScalarField& a);

 private:
  ExprPtr root_;
  int dim_ = 1;
  Smoothness smoothness_ = Smoothness::Smooth;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        pos(position) {}
  size_t pos;
};

// Grammar: infix + - * / ^ (right-assoc ^), unary minus, f(expr),
// variables "x" or "x1".."x2", numeric literals.
ScalarField parse_expression(const std::string& text);

ScalarField constant_field(double value, int dim = 1);
ScalarField coordinate_field(int axis, int dim);

// A smooth field defined by arbitrary evaluation callbacks. jet_fn may be
// null, in which case derivative queries throw.
ScalarField builtin_field(std::string name, int dim,
                          std::function<double(const Vec&)> eval,
                          std::function<Jet<double>(const Vec&, int)> jet_fn = nullptr,
                          Smoothness smoothness = Smoothness::Smooth);

// Evaluator for D^alpha f, checked against finite differences in tests.
class DerivativeEvaluator {
 public:
  DerivativeEvaluator(ScalarField f, MultiIndex alpha);
  double operator()(const Vec& x) const;
  double operator()(double x) const;
  const MultiIndex& alpha() const { return alpha_; }

 private:
  ScalarField f_;
  MultiIndex alpha_;
};

DerivativeEvaluator derivative(const ScalarField& f, const MultiIndex& alpha);

// ---- presets ---------------------------------------------------------------

struct WeightInfo {
  ScalarField field;
  bool singular_at_origin = false;  // laguerre with alpha < 0
};

// name in {gaussian, laguerre(alpha), exotic, gaussian_nd, vanishing_gaussian}
WeightInfo preset_weight(const std::string& name, double param = 0.0);

// ---- maps Phi --------------------------------------------------------------

struct SampleCheckRecord {
  bool passed = false;
  int samples = 0;
  std::string failure;  // offending sample pair, when failed
};

class MapPhi {
 public:
  MapPhi() = default;
  MapPhi(std::vector<ScalarField> components, SampleCheckRecord check);

  int dim() const { return static_cast<int>(components_.size()); }
  const ScalarField& component(int j) const { return components_.at(static_cast<size_t>(j)); }
  const std::vector<ScalarField>& components() const { return components_; }
  const SampleCheckRecord& check() const { return check_; }

  Vec operator()(const Vec& x) const;

 private:
  std::vector<ScalarField> components_;
  SampleCheckRecord check_;
};

struct PhiSpec {
  // preset in {identity, affine, sinh, cubic} or empty with custom components
  std::string preset;
  double a = 1.0, b = 0.0;  // affine parameters
  std::vector<std::string> custom;  // component expressions
  int dim = 1;
  // sample-check window (1-D monotonicity / 2-D Jacobian sign constancy)
  double sample_lo = -10.0, sample_hi = 10.0;
  int sample_count = 10000;
};

// Builds the map and runs the diffeomorphism sample check; throws on failure.
MapPhi make_phi(const PhiSpec& spec);

// ---- complex frequencies and the exponential -------------------------------

struct ComplexFrequency {
  Eigen::VectorXcd lambda;  // in C^n
  double strip = 1.0;       // epsilon with ||Im lambda|| < epsilon

  ComplexFrequency() = default;
  ComplexFrequency(Complex l, double eps);
  ComplexFrequency(Eigen::VectorXcd l, double eps);

  int dim() const { return static_cast<int>(lambda.size()); }
  double im_norm() const { return lambda.imag().norm(); }
  void validate() const;  // throws if outside the strip
};

// e^{-i (lambda, Phi(x))} f0(x), with the bilinear pairing (no conjugation).
Complex eval_exponential(const ComplexFrequency& lambda, const MapPhi& phi,
                         const ScalarField& f0, const Vec& x);

// Same tilted field as a complex jet in x (for seminorm pipelines).
Jet<Complex> eval_exponential_jet(const Eigen::VectorXcd& lambda, const MapPhi& phi,
                                  const ScalarField& f0, const Vec& x, int order);

}  // namespace denslab
