#pragma once

// Concrete function-space models (weighted L_p, C^m with a compact
// exhaustion, truncated Schwartz) and evaluation of the seminorm family
// p_{k,alpha,N}(f) = || chi_k (1+||x||)^N D^alpha f ||_p.

#include <functional>
#include <iosfwd>
#include <vector>

#include "denslab/numerics.hpp"

namespace denslab {

enum class SpaceKind { Lp, Cm, Schwartz };

using RealJetFn = std::function<Jet<double>(const Vec&, int)>;
using ComplexJetFn = std::function<Jet<Complex>(const Vec&, int)>;

struct SpaceParams {
  Domain domain = Domain::whole_line();
  MeasureSpec measure;
  double p = 0.0;      // 0 = kind default (Lp: 2, Cm/Schwartz: infinity)
  int m = 0;           // regularity order; effective order capped by alpha_max
  int k_max = 0;       // 0 = kind default (Lp/Schwartz: 1, Cm: exhaustion size)
  int N_max = 0;       // Schwartz polynomial-weight cap
  int alpha_max = -1;  // -1 = kind default (Lp: 0, Cm: m, Schwartz: 2)
  std::optional<QuadratureKind> quad;  // integral-seminorm rule override
  int quad_order = 16;
  TailSpec tail;
  double sup_radius = 20.0;  // Schwartz supremum truncation half-width
};

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Lp;
  Domain domain;
  MeasureSpec measure;
  double p = 2.0;  // kInf for sup-seminorm models
  int m = 0;
  int k_max = 1;
  int N_max = 0;
  int alpha_max = 0;
  QuadratureRule rule;  // used when p is finite
  double sup_radius = 20.0;

  // Highest derivative order any seminorm of this space may request.
  int derivative_cap() const { return std::min(std::min(m, alpha_max), kMaxDerivativeOrder); }
  // Region the sup-type seminorm at index k is evaluated over.
  Box sup_box(int k) const;
};

SpaceSpec make_space(SpaceKind kind, SpaceParams params = {});

struct SeminormIndex {
  int k = 1;
  MultiIndex alpha;
  int N = 0;
};

// All (k, alpha, N) within the caps, sorted by (k, |alpha|, N).
std::vector<SeminormIndex> seminorm_indices(const SpaceSpec& space);

// Terms of D^alpha(g f) = sum c (D^beta g)(D^gamma f), beta + gamma = alpha.
struct LeibnizTerm {
  MultiIndex beta, gamma;
  double coeff = 1.0;
};
std::vector<LeibnizTerm> leibniz_terms(const MultiIndex& alpha);

double seminorm(const SpaceSpec& space, const RealJetFn& f, int k, MultiIndex alpha,
                int N = 0);
double seminorm(const SpaceSpec& space, const ComplexJetFn& f, int k, MultiIndex alpha,
                int N = 0);
double seminorm(const SpaceSpec& space, const ScalarField& f, int k,
                MultiIndex alpha = MultiIndex(), int N = 0);
// Order-zero seminorm of a plain evaluator (measurable fields allowed).
double seminorm(const SpaceSpec& space, const std::function<double(const Vec&)>& f, int k);

struct PanelRow {
  int k = 1;
  MultiIndex alpha;
  int N = 0;
  double value = 0.0;
};

std::vector<PanelRow> seminorm_panel(const SpaceSpec& space, const ScalarField& f);
std::vector<PanelRow> seminorm_panel(const SpaceSpec& space, const RealJetFn& f);
void write_panel_csv(const std::vector<PanelRow>& rows, std::ostream& out, int dim);

// Verdict metric: d(f, g) = max over the capped family of p_{k,alpha,N}(f - g).
double space_distance(const SpaceSpec& space, const RealJetFn& diff);
double space_distance(const SpaceSpec& space, const ComplexJetFn& diff);
double space_distance(const SpaceSpec& space, const std::function<double(const Vec&)>& diff);

}  // namespace denslab
