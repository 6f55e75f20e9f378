#pragma once

// Basis families whose spans are tested for density, and numerical
// admissibility checks for the weight/map pairs that generate them.

#include <optional>
#include <string>
#include <vector>

#include "denslab/spaces.hpp"

namespace denslab {

enum class FamilyKind { Monomial, Exponential, Pullback, Gap, Translate };

struct Member {
  std::function<Complex(const Vec&)> value;
  // Complex jet up to the requested order; null when the generating data is
  // only measurable.
  std::function<Jet<Complex>(const Vec&, int)> jet;
  bool is_real = true;
  std::string label;

  // index metadata, populated per kind
  MultiIndex degree;           // monomial exponent beta
  Eigen::VectorXcd frequency;  // exponential
  int exponent = 0;            // gap
  Vec shift;                   // translate

  double real_value(const Vec& x) const { return value(x).real(); }
};

// Hint for span-equivalent stable bases used by the projection solvers.
enum class StableBasis { None, HermiteFunctions, LaguerreFunctions };

struct BasisFamily {
  FamilyKind kind = FamilyKind::Monomial;
  std::vector<Member> members;
  MapPhi phi;
  ScalarField f0;
  bool phi_is_identity = false;

  StableBasis stable = StableBasis::None;
  double laguerre_alpha = 0.0;

  int size() const { return static_cast<int>(members.size()); }
};

// Members Phi^beta f0 over all |beta| <= degree_cap, graded order.
// f0_preset ("gaussian", "laguerre") lets solvers swap in the span-equivalent
// orthonormal recurrence basis when Phi is the identity.
BasisFamily monomial_family(const MapPhi& phi, const ScalarField& f0, int degree_cap,
                            const std::string& f0_preset = "", double f0_param = 0.0);

BasisFamily exponential_family(const MapPhi& phi, const ScalarField& f0,
                               const std::vector<ComplexFrequency>& frequencies);

// {x^n e^{-x} : N <= n <= index_cap, l does not divide n}.
BasisFamily gap_family(int N, int l, int index_cap);

BasisFamily translate_family(const ScalarField& seed, const std::vector<Vec>& shifts);

BasisFamily pullback_family(const std::vector<ScalarField>& f_list, const MapPhi& phi,
                            const ScalarField& f0);

// All D^alpha Phi_j with |alpha| <= m (components only when m = 0).
struct AlgebraGenerators {
  std::vector<ScalarField> generators;
};
AlgebraGenerators algebra_generators(const MapPhi& phi, int m);

// D^alpha f as a field with its own (shifted) jets.
ScalarField derivative_field(const ScalarField& f, MultiIndex alpha);

struct AdmissibilityVerdict {
  bool pass = false;
  double epsilon = 0.0;  // largest grid value certified
  std::vector<std::string> failures;
  std::vector<std::pair<double, bool>> per_epsilon;  // (grid value, passed)
  double tail_ratio = 0.0;      // best geometric decay ratio observed
  double norm_value = 0.0;      // checked norm at the certified epsilon
  double norm_error = 0.0;
};

// Finiteness of ||e^{eps ||Phi||} Phi^beta f0||_p for |beta| <= degree_probe,
// probed at the top degree with geometric tail fits and endpoint power fits.
AdmissibilityVerdict check_thm31(const ScalarField& f0, const MapPhi& phi, double p,
                                 const MeasureSpec& measure, const Domain& domain,
                                 std::vector<double> eps_grid, int degree_probe = 12);

// Finiteness of the full capped seminorm data of e^{eps||Phi||} g D^alpha f0
// (g over algebra generator powers) plus seminorm panels of e^{-i(lambda,Phi)}f0
// at sampled strip frequencies.
AdmissibilityVerdict check_assumption26(const SpaceSpec& space, const ScalarField& f0,
                                        const MapPhi& phi, double eps, int degree_probe = 6);

}  // namespace denslab
