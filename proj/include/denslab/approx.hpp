#pragma once

// Best-approximation engine: Gram systems, L2 projection with spectral
// cutoff, IRLS for general L_p, Lawson's algorithm for (weighted) sup norms,
// error-decay classification, and annihilator witnesses.

#include <memory>
#include <optional>

#include "denslab/families.hpp"

namespace denslab {

struct ProjectionReport {
  FamilyKind kind = FamilyKind::Monomial;
  int size = 0;
  double error = 0.0;  // best-approximation error in the requested norm
  Eigen::VectorXcd coefficients;  // in computational-basis order
  bool stable_basis_used = false;
  int effective_rank = 0;
  double condition = 0.0;  // top/smallest kept eigenvalue of the Gram system
  int iterations = 0;
  bool converged = true;
  double target_norm = 0.0;
  double fit_norm = 0.0;
};

// ---- dual functionals -------------------------------------------------------

enum class DualKind { IntegrateAgainst, PointDerivative, Combination };

struct DualFunctional {
  DualKind kind = DualKind::IntegrateAgainst;
  ScalarField g;  // IntegrateAgainst: f -> integral of f g dmu
  Vec x0;         // PointDerivative: f -> D^alpha f(x0)
  MultiIndex alpha;
  std::vector<std::pair<double, std::shared_ptr<DualFunctional>>> terms;
  std::string label;
};

DualFunctional integrate_dual(ScalarField g, std::string label = "");
DualFunctional point_dual(Vec x0, MultiIndex alpha = MultiIndex(), std::string label = "");
DualFunctional combine_duals(std::vector<std::pair<double, DualFunctional>> terms,
                             std::string label = "");

Complex apply_dual(const DualFunctional& T, const std::function<Complex(const Vec&)>& value,
                   const std::function<Jet<Complex>(const Vec&, int)>& jet,
                   const QuadratureRule& rule, const MeasureSpec& measure = {});
double apply_dual(const DualFunctional& T, const ScalarField& f, const QuadratureRule& rule,
                  const MeasureSpec& measure = {});
Complex apply_dual(const DualFunctional& T, const Member& m, const QuadratureRule& rule,
                   const MeasureSpec& measure = {});

// ---- computational basis ----------------------------------------------------

// Span-equivalent basis actually handed to the solvers: the raw members, or
// the orthonormal Hermite/Laguerre recurrence systems when the family hints
// that its span admits one.
struct CompBasis {
  int size = 0;
  bool stable_used = false;
  std::function<Eigen::VectorXcd(const Vec&)> values;                  // all basis fns at x
  std::function<std::vector<Jet<Complex>>(const Vec&, int)> jets;      // null if unavailable
};
CompBasis computational_basis(const BasisFamily& family);

// ---- solvers ----------------------------------------------------------------

// G[i][j] = integral of member_i * conj(member_j) dmu over the raw members.
Eigen::MatrixXcd gram_matrix(const BasisFamily& family, const QuadratureRule& rule,
                             const MeasureSpec& measure = {});

ProjectionReport project_l2(const ScalarField& target, const BasisFamily& family,
                            const QuadratureRule& rule, const MeasureSpec& measure = {},
                            double rank_cutoff = 1e-12);

struct IrlsParams {
  int max_iters = 200;
  double tol = 1e-8;
  double delta = 1e-8;  // residual clamp for p < 2
};
ProjectionReport project_lp(const ScalarField& target, const BasisFamily& family, double p,
                            const QuadratureRule& rule, const MeasureSpec& measure = {},
                            IrlsParams params = {});

struct LawsonParams {
  int max_iters = 500;
  double tol = 1e-10;
  int grid_points = 401;
};
// Grid minimax on the box; with alpha_cap/N_max > 0 the rows extend over
// derivative orders and polynomial weights (simultaneous C^m/Schwartz fit).
ProjectionReport project_sup(const ScalarField& target, const BasisFamily& family,
                             const Box& box, int alpha_cap = 0, int N_max = 0,
                             LawsonParams params = {});

// Best-approximation error of target from the family in the space's verdict
// metric (the L_p norm, or the max of the capped sup seminorms).
ProjectionReport project_in_space(const ScalarField& target, const BasisFamily& family,
                                  const SpaceSpec& space);

// ---- decay and verdicts -----------------------------------------------------

struct DecayPoint {
  int size = 0;
  double error = 0.0;
};

struct DecayResult {
  std::vector<DecayPoint> table;
  double tail_slope = 0.0;  // d log(error) / d size over the last points
  bool decaying = false;
  double plateau = 0.0;  // final error level
};

DecayResult error_decay(const ScalarField& target,
                        const std::function<BasisFamily(int)>& family_builder,
                        const std::vector<int>& sizes, const SpaceSpec& space);

enum class DensityOutcome { DenseConsistent, ObstructionFound, Inconclusive };

struct DensityVerdict {
  DensityOutcome outcome = DensityOutcome::Inconclusive;
  std::optional<DualFunctional> witness;
  double witness_pairing_max = 0.0;   // max |<g, probed member>|
  double witness_target_value = 0.0;  // |<g, separating target>|
  std::vector<DecayResult> decays;    // evidence for dense-consistent
  std::string note;
};

DensityVerdict annihilator_witness(const SpaceSpec& space, const ScalarField& f0,
                                   const MapPhi& phi, int probe_degree);

// Preset targets per domain shape (whole line / half line / bounded).
std::vector<ScalarField> targets_library(const Domain& domain);

}  // namespace denslab
