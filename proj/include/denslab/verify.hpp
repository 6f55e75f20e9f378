#pragma once

// Numerical verification of the analytic engine: the holomorphic H-map
// H_T(lambda) = <T, e^{-i(lambda,Phi)} f0>, the derivative-moment identity,
// the weak Fourier-integral identity, the seminorm growth bound, and
// closure-equality experiments.

#include <map>
#include <memory>
#include <mutex>

#include "denslab/approx.hpp"
#include "denslab/spaces.hpp"

namespace denslab {

struct HolomorphicProbe {
  DualFunctional T;
  MapPhi phi;
  ScalarField f0;
  double epsilon = 1.0;  // strip half-width: ||Im lambda|| < epsilon
  QuadratureRule rule;
  MeasureSpec measure;

  struct Cache {
    std::mutex guard;
    std::map<std::vector<double>, Complex> values;
  };
  std::shared_ptr<Cache> cache = std::make_shared<Cache>();
};

Complex h_map(const HolomorphicProbe& probe, const Eigen::VectorXcd& lambda);
Complex h_map(const HolomorphicProbe& probe, Complex lambda);  // n = 1

// max |H_T(conj lambda) - conj H_T(lambda)| over the given frequencies
double conjugate_symmetry_residual(const HolomorphicProbe& probe,
                                   const std::vector<Complex>& lambdas);

// F(f)(xi) = integral f(lambda) e^{-i lambda xi} dlambda  (no 2pi prefactor)
Complex fourier_transform(const ScalarField& f, double xi, const QuadratureRule& rule);

enum class DiffMethod { RichardsonFd, ComplexStep };

struct Prop210Result {
  Complex lhs;  // numerical D^alpha (T . H_1) at lambda = 0
  Complex rhs;  // <T, (-i)^{|alpha|} Phi^alpha f0> by quadrature
  double relative_error = 0.0;
};
// RichardsonFd: nested central differences, |alpha| <= 4, base step h,
// `levels` rounds of step halving. ComplexStep: |alpha| = 1 only, valid for
// real T-data / Phi / f0 (H'(0) is then purely imaginary).
Prop210Result check_prop210(const HolomorphicProbe& probe, const MultiIndex& alpha,
                            DiffMethod method = DiffMethod::RichardsonFd, int levels = 3,
                            double h = 1e-2);

struct Lemma212Result {
  double max_residual = 0.0;
  std::vector<std::pair<double, double>> residual_grid;  // (x, |LHS - RHS|)
};
// LHS(x) = [int f(lambda) e^{-i lambda Phi(x)} dlambda] f0(x) via rule_lambda;
// RHS(x) = F(f)(Phi(x)) f0(x) with F by the supplied oracle, or by an
// independent internal high-order rule when none is given.
Lemma212Result check_lemma212(const ScalarField& f, const MapPhi& phi, const ScalarField& f0,
                              const QuadratureRule& rule_lambda,
                              const std::vector<double>& x_grid,
                              std::function<Complex(double)> transform_oracle = nullptr);

struct GrowthFit {
  double exponent = 0.0;  // fitted d log p / d log(1 + |lambda|)
  double bound = 0.0;     // N + |alpha| + 1
  bool within_bound = false;
  std::vector<std::pair<double, double>> samples;  // (|lambda|, seminorm)
};
GrowthFit check_lemma28(const MapPhi& phi, const ScalarField& f0,
                        const std::vector<double>& lambda_grid, const SpaceSpec& space,
                        const SeminormIndex& idx);

struct ClosureComparison {
  std::vector<DecayPoint> monomial;
  std::vector<DecayPoint> exponential;
  double gap = 0.0;  // |final monomial error - final exponential error|
  bool both_decay = false;
  bool both_plateau = false;
  bool consistent = false;
};
// Same target approximated from the monomial and the real-frequency
// exponential family at matched member counts; consistency means both decay
// or both plateau, with final errors within a factor 2.
ClosureComparison compare_closures(const ScalarField& target, const MapPhi& phi,
                                   const ScalarField& f0, const SpaceSpec& space,
                                   const std::vector<int>& degree_sizes,
                                   const std::vector<std::vector<double>>& frequency_grids,
                                   const std::string& f0_preset = "", double f0_param = 0.0);

}  // namespace denslab
