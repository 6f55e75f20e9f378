#include "denslab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace denslab {

// ---- dual functionals -------------------------------------------------------

DualFunctional integrate_dual(ScalarField g, std::string label) {
  DualFunctional T;
  T.kind = DualKind::IntegrateAgainst;
  T.g = std::move(g);
  T.label = label.empty() ? "integrate" : std::move(label);
  return T;
}

DualFunctional point_dual(Vec x0, MultiIndex alpha, std::string label) {
  DualFunctional T;
  T.kind = DualKind::PointDerivative;
  T.x0 = std::move(x0);
  T.alpha = alpha;
  T.label = label.empty() ? "point-eval" : std::move(label);
  return T;
}

DualFunctional combine_duals(std::vector<std::pair<double, DualFunctional>> terms,
                             std::string label) {
  DualFunctional T;
  T.kind = DualKind::Combination;
  for (auto& [c, t] : terms) T.terms.push_back({c, std::make_shared<DualFunctional>(std::move(t))});
  T.label = label.empty() ? "combination" : std::move(label);
  return T;
}

Complex apply_dual(const DualFunctional& T, const std::function<Complex(const Vec&)>& value,
                   const std::function<Jet<Complex>(const Vec&, int)>& jet,
                   const QuadratureRule& rule, const MeasureSpec& measure) {
  switch (T.kind) {
    case DualKind::IntegrateAgainst: {
      const ScalarField& g = T.g;
      return integrate_complex([&](const Vec& x) { return value(x) * g(x); }, rule, measure)
          .value;
    }
    case DualKind::PointDerivative: {
      if (T.alpha.order() == 0) return value(T.x0);
      if (!jet) throw std::invalid_argument("point-derivative dual needs jet access");
      return jet(T.x0, T.alpha.order()).derivative(T.alpha);
    }
    case DualKind::Combination: {
      Complex s(0.0, 0.0);
      for (const auto& [c, t] : T.terms) s += c * apply_dual(*t, value, jet, rule, measure);
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

double apply_dual(const DualFunctional& T, const ScalarField& f, const QuadratureRule& rule,
                  const MeasureSpec& measure) {
  std::function<Jet<Complex>(const Vec&, int)> jet;
  if (f.is_smooth())
    jet = [f](const Vec& x, int ord) { return complexify(f.jet(x, ord)); };
  return apply_dual(
             T, [&](const Vec& x) { return Complex(f(x), 0.0); }, jet, rule, measure)
      .real();
}

Complex apply_dual(const DualFunctional& T, const Member& m, const QuadratureRule& rule,
                   const MeasureSpec& measure) {
  return apply_dual(T, m.value, m.jet, rule, measure);
}

// ---- stable recurrence bases --------------------------------------------------

namespace {

// Orthonormal Hermite functions psi_k (Lebesgue measure on R), as jets.
template <typename JetT>
std::vector<JetT> hermite_functions(const JetT& jx, int count) {
  std::vector<JetT> psi;
  psi.reserve(static_cast<size_t>(count));
  JetT g = exp(jx * jx * (-0.5)) * std::pow(M_PI, -0.25);
  psi.push_back(g);
  if (count > 1) psi.push_back(jx * psi[0] * std::sqrt(2.0));
  for (int k = 2; k < count; ++k)
    psi.push_back(jx * psi[static_cast<size_t>(k - 1)] * std::sqrt(2.0 / k) -
                  psi[static_cast<size_t>(k - 2)] * std::sqrt((k - 1.0) / k));
  return psi;
}

// Orthonormal generalized Laguerre functions on (0, infinity).
template <typename JetT>
std::vector<JetT> laguerre_functions(const JetT& jx, int count, double alpha) {
  std::vector<JetT> out;
  out.reserve(static_cast<size_t>(count));
  JetT env = pow(jx, alpha / 2.0) * exp(jx * (-0.5));
  // build polynomials L_k by recurrence, normalize on the fly
  std::vector<JetT> L;
  L.push_back(env * 0.0 + 1.0);  // L_0 = 1 (as a jet)
  if (count > 1) L.push_back((1.0 + alpha) - jx);
  for (int k = 1; k + 1 < count; ++k)
    L.push_back((L[static_cast<size_t>(k)] * ((2.0 * k + 1.0 + alpha) - jx) -
                 L[static_cast<size_t>(k - 1)] * (k + alpha)) *
                (1.0 / (k + 1.0)));
  for (int k = 0; k < count; ++k) {
    double logn = 0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + alpha + 1.0));
    out.push_back(L[static_cast<size_t>(k)] * env * std::exp(logn));
  }
  return out;
}

}  // namespace

CompBasis computational_basis(const BasisFamily& family) {
  CompBasis b;
  b.size = family.size();
  int M = b.size;

  if (family.stable == StableBasis::HermiteFunctions) {
    b.stable_used = true;
    b.values = [M](const Vec& x) {
      Eigen::VectorXcd v(M);
      Jet<double> jx = Jet<double>::constant(1, 0, x(0));
      auto psi = hermite_functions(jx, M);
      for (int i = 0; i < M; ++i) v(i) = psi[static_cast<size_t>(i)].value();
      return v;
    };
    b.jets = [M](const Vec& x, int ord) {
      auto jx = Jet<double>::variable(1, ord, 0, x(0));
      auto psi = hermite_functions(jx, M);
      std::vector<Jet<Complex>> out;
      for (auto& p : psi) out.push_back(complexify(p));
      return out;
    };
    return b;
  }
  if (family.stable == StableBasis::LaguerreFunctions) {
    b.stable_used = true;
    double alpha = family.laguerre_alpha;
    b.values = [M, alpha](const Vec& x) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(M);
      if (x(0) <= 0.0) return v;
      Jet<double> jx = Jet<double>::constant(1, 0, x(0));
      auto l = laguerre_functions(jx, M, alpha);
      for (int i = 0; i < M; ++i) v(i) = l[static_cast<size_t>(i)].value();
      return v;
    };
    b.jets = [M, alpha](const Vec& x, int ord) {
      auto jx = Jet<double>::variable(1, ord, 0, x(0));
      auto l = laguerre_functions(jx, M, alpha);
      std::vector<Jet<Complex>> out;
      for (auto& p : l) out.push_back(complexify(p));
      return out;
    };
    return b;
  }

  std::vector<Member> members = family.members;
  b.values = [members, M](const Vec& x) {
    Eigen::VectorXcd v(M);
    for (int i = 0; i < M; ++i) v(i) = members[static_cast<size_t>(i)].value(x);
    return v;
  };
  bool all_jets = true;
  for (const auto& m : members) all_jets = all_jets && static_cast<bool>(m.jet);
  if (all_jets) {
    b.jets = [members](const Vec& x, int ord) {
      std::vector<Jet<Complex>> out;
      for (const auto& m : members) out.push_back(m.jet(x, ord));
      return out;
    };
  }
  return b;
}

// ---- node data and spectral solve --------------------------------------------

namespace {

struct NodeData {
  Eigen::MatrixXcd A;   // nodes x basis values
  Eigen::VectorXd w;    // quadrature weight times density (atoms appended)
  Eigen::VectorXcd t;   // target values
  std::vector<Vec> pts;
};

NodeData assemble(const CompBasis& basis, const std::function<Complex(const Vec&)>& target,
                  const QuadratureRule& rule, const MeasureSpec& measure) {
  int N = rule.size();
  int extra = static_cast<int>(measure.atoms.size());
  NodeData d;
  d.A.resize(N + extra, basis.size);
  d.w.resize(N + extra);
  d.t.resize(N + extra);
  d.pts.reserve(static_cast<size_t>(N + extra));
  for (int n = 0; n < N; ++n) {
    Vec x = rule.nodes.row(n).transpose();
    d.pts.push_back(x);
    d.w(n) = rule.weights(n) * measure.density(x);
    d.A.row(n) = basis.values(x).transpose();
    d.t(n) = target(x);
  }
  for (int a = 0; a < extra; ++a) {
    const Vec& x = measure.atoms[static_cast<size_t>(a)].location;
    d.pts.push_back(x);
    d.w(N + a) = measure.atoms[static_cast<size_t>(a)].mass;
    d.A.row(N + a) = basis.values(x).transpose();
    d.t(N + a) = target(x);
  }
  return d;
}

// Solves G c = rhs by eigendecomposition with a relative cutoff, after
// symmetric column scaling; reports rank and kept-spectrum condition number.
Eigen::VectorXcd spectral_solve(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& rhs,
                                double cutoff, int* rank_out, double* cond_out) {
  int M = static_cast<int>(G.rows());
  Eigen::VectorXd d(M);
  for (int i = 0; i < M; ++i) {
    double gii = std::abs(G(i, i).real());
    d(i) = gii > 0.0 ? std::sqrt(gii) : 1.0;
  }
  Eigen::VectorXcd dc = d.cwiseInverse().cast<Complex>();
  Eigen::MatrixXcd Gh = dc.asDiagonal() * G * dc.asDiagonal();
  Eigen::VectorXcd bh = rhs.cwiseQuotient(d.cast<Complex>());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gh);
  double lmax = es.eigenvalues().maxCoeff();
  if (!(lmax > 0.0)) throw std::runtime_error("Gram matrix has no positive spectrum");
  double cut = cutoff * lmax;
  Eigen::VectorXcd ch = Eigen::VectorXcd::Zero(M);
  int rank = 0;
  double lmin_kept = lmax;
  for (int i = 0; i < M; ++i) {
    double l = es.eigenvalues()(i);
    if (l <= cut) continue;
    ++rank;
    lmin_kept = std::min(lmin_kept, l);
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    ch += v * (v.adjoint() * bh)(0) / l;
  }
  if (rank == 0) throw std::runtime_error("all Gram eigenvalues below the cutoff");
  if (rank_out) *rank_out = rank;
  if (cond_out) *cond_out = lmax / lmin_kept;
  return ch.cwiseQuotient(d.cast<Complex>());
}

}  // namespace

Eigen::MatrixXcd gram_matrix(const BasisFamily& family, const QuadratureRule& rule,
                             const MeasureSpec& measure) {
  int M = family.size();
  Eigen::MatrixXcd A(rule.size() + static_cast<int>(measure.atoms.size()), M);
  Eigen::VectorXd w(A.rows());
  for (int n = 0; n < rule.size(); ++n) {
    Vec x = rule.nodes.row(n).transpose();
    w(n) = rule.weights(n) * measure.density(x);
    for (int i = 0; i < M; ++i) A(n, i) = family.members[static_cast<size_t>(i)].value(x);
  }
  for (size_t a = 0; a < measure.atoms.size(); ++a) {
    int n = rule.size() + static_cast<int>(a);
    w(n) = measure.atoms[a].mass;
    for (int i = 0; i < M; ++i)
      A(n, i) = family.members[static_cast<size_t>(i)].value(measure.atoms[a].location);
  }
  Eigen::MatrixXcd G = A.adjoint() * w.cast<Complex>().asDiagonal() * A;
  // G(i,j) = integral m_j conj(m_i); transpose to the m_i conj(m_j) convention
  G.transposeInPlace();
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      if (!std::isfinite(std::abs(G(i, j)))) {
        std::ostringstream ss;
        ss << "divergent Gram entry at (" << i << ", " << j << ")";
        throw std::runtime_error(ss.str());
      }
  return G;
}

ProjectionReport project_l2(const ScalarField& target, const BasisFamily& family,
                            const QuadratureRule& rule, const MeasureSpec& measure,
                            double rank_cutoff) {
  CompBasis basis = computational_basis(family);
  auto d = assemble(basis, [&](const Vec& x) { return Complex(target(x)); }, rule, measure);

  Eigen::MatrixXcd G = d.A.adjoint() * d.w.cast<Complex>().asDiagonal() * d.A;
  Eigen::VectorXcd rhs = d.A.adjoint() * d.w.cast<Complex>().asDiagonal() * d.t;
  ProjectionReport r;
  r.kind = family.kind;
  r.size = family.size();
  r.stable_basis_used = basis.stable_used;
  r.coefficients = spectral_solve(G, rhs, rank_cutoff, &r.effective_rank, &r.condition);

  double tnorm2 = (d.w.array() * d.t.array().abs2()).sum();
  double cross = (r.coefficients.adjoint() * rhs)(0).real();
  double fit2 = (r.coefficients.adjoint() * G * r.coefficients)(0).real();
  double e2 = tnorm2 - 2.0 * cross + fit2;
  if (e2 < -1e-10 * std::max(1.0, tnorm2))
    throw std::runtime_error("negative squared error beyond the clamping tolerance");
  r.error = std::sqrt(std::max(0.0, e2));
  r.target_norm = std::sqrt(std::max(0.0, tnorm2));
  r.fit_norm = std::sqrt(std::max(0.0, fit2));
  r.iterations = 1;
  return r;
}

ProjectionReport project_lp(const ScalarField& target, const BasisFamily& family, double p,
                            const QuadratureRule& rule, const MeasureSpec& measure,
                            IrlsParams params) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("project_lp needs finite p >= 1");
  if (p == 2.0) return project_l2(target, family, rule, measure);

  CompBasis basis = computational_basis(family);
  auto d = assemble(basis, [&](const Vec& x) { return Complex(target(x)); }, rule, measure);
  int M = basis.size;

  ProjectionReport r;
  r.kind = family.kind;
  r.size = M;
  r.stable_basis_used = basis.stable_used;

  // start from the L2 solution
  Eigen::MatrixXcd G = d.A.adjoint() * d.w.cast<Complex>().asDiagonal() * d.A;
  Eigen::VectorXcd rhs = d.A.adjoint() * d.w.cast<Complex>().asDiagonal() * d.t;
  Eigen::VectorXcd c = spectral_solve(G, rhs, 1e-12, &r.effective_rank, &r.condition);

  bool converged = false;
  int it = 0;
  for (; it < params.max_iters; ++it) {
    Eigen::VectorXcd res = d.t - d.A * c;
    Eigen::VectorXd u(res.size());
    for (int n = 0; n < res.size(); ++n)
      u(n) = std::pow(std::max(std::abs(res(n)), params.delta), p - 2.0);
    Eigen::VectorXd s = (d.w.array() * u.array()).sqrt();
    Eigen::MatrixXcd B = s.cast<Complex>().asDiagonal() * d.A;
    Eigen::VectorXcd y = s.cast<Complex>().asDiagonal() * d.t;
    Eigen::VectorXcd c_next = B.colPivHouseholderQr().solve(y);
    double change = (c_next - c).norm() / std::max(1e-300, c_next.norm());
    c = c_next;
    if (change < params.tol) {
      converged = true;
      ++it;
      break;
    }
  }
  r.iterations = it;
  r.converged = converged;
  r.coefficients = c;

  Eigen::VectorXcd res = d.t - d.A * c;
  double ep = 0.0, tp = 0.0;
  for (int n = 0; n < res.size(); ++n) {
    ep += d.w(n) * std::pow(std::abs(res(n)), p);
    tp += d.w(n) * std::pow(std::abs(d.t(n)), p);
  }
  r.error = std::pow(ep, 1.0 / p);
  r.target_norm = std::pow(tp, 1.0 / p);
  return r;
}

namespace {

struct SupRow {
  Vec x;
  MultiIndex alpha;
  int N = 0;
};

std::vector<SupRow> sup_rows(const Box& box, int dim, int alpha_cap, int N_max,
                             int grid_points) {
  std::vector<Vec> pts;
  if (dim == 1) {
    for (int i = 0; i < grid_points; ++i) {
      Vec x(1);
      x << box.lo(0) + (box.hi(0) - box.lo(0)) * i / (grid_points - 1);
      pts.push_back(x);
    }
  } else {
    int side = std::max(9, static_cast<int>(std::sqrt(static_cast<double>(grid_points))));
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        Vec x(2);
        x << box.lo(0) + (box.hi(0) - box.lo(0)) * i / (side - 1),
            box.lo(1) + (box.hi(1) - box.lo(1)) * j / (side - 1);
        pts.push_back(x);
      }
  }
  std::vector<MultiIndex> alphas;
  for (int t = 0; t <= alpha_cap; ++t) {
    if (dim == 1)
      alphas.push_back(MultiIndex(t));
    else
      for (int j = 0; j <= t; ++j) alphas.push_back(MultiIndex(t - j, j));
  }
  std::vector<SupRow> rows;
  for (const auto& x : pts)
    for (const auto& a : alphas)
      for (int N = 0; N <= N_max; ++N) rows.push_back({x, a, N});
  return rows;
}

}  // namespace

ProjectionReport project_sup(const ScalarField& target, const BasisFamily& family,
                             const Box& box, int alpha_cap, int N_max, LawsonParams params) {
  CompBasis basis = computational_basis(family);
  if (alpha_cap > 0 && (!basis.jets || !target.is_smooth()))
    throw std::invalid_argument("derivative rows need jets on both sides");

  int dim = static_cast<int>(box.lo.size());
  auto rows = sup_rows(box, dim, alpha_cap, N_max, params.grid_points);
  int R = static_cast<int>(rows.size());
  int M = basis.size;

  Eigen::MatrixXcd A(R, M);
  Eigen::VectorXcd t(R);
  {
    // rows share grid points; evaluate each point once
    int idx = 0;
    while (idx < R) {
      const Vec& x = rows[static_cast<size_t>(idx)].x;
      int same = 0;
      while (idx + same < R && (rows[static_cast<size_t>(idx + same)].x - x).norm() == 0.0)
        ++same;
      if (alpha_cap == 0) {
        Eigen::VectorXcd v = basis.values(x);
        double tv = target(x);
        for (int s = 0; s < same; ++s) {
          double wgt = std::pow(1.0 + x.norm(), rows[static_cast<size_t>(idx + s)].N);
          A.row(idx + s) = (wgt * v).transpose();
          t(idx + s) = wgt * tv;
        }
      } else {
        auto jets = basis.jets(x, alpha_cap);
        auto tj = target.jet(x, alpha_cap);
        for (int s = 0; s < same; ++s) {
          const auto& row = rows[static_cast<size_t>(idx + s)];
          double wgt = std::pow(1.0 + x.norm(), row.N);
          for (int i = 0; i < M; ++i)
            A(idx + s, i) = wgt * jets[static_cast<size_t>(i)].derivative(row.alpha);
          t(idx + s) = wgt * tj.derivative(row.alpha);
        }
      }
      idx += same;
    }
  }

  // Lawson: multiplicative reweighting converges to the grid minimax fit
  Eigen::VectorXd u = Eigen::VectorXd::Constant(R, 1.0 / R);
  ProjectionReport r;
  r.kind = family.kind;
  r.size = M;
  r.stable_basis_used = basis.stable_used;
  double prev_max = kInf;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(M);
  bool converged = false;
  int it = 0;
  for (; it < params.max_iters; ++it) {
    Eigen::VectorXd s = u.cwiseSqrt();
    Eigen::MatrixXcd B = s.cast<Complex>().asDiagonal() * A;
    Eigen::VectorXcd y = s.cast<Complex>().asDiagonal() * t;
    c = B.colPivHouseholderQr().solve(y);
    Eigen::VectorXd res = (t - A * c).cwiseAbs();
    double mx = res.maxCoeff();
    u = (u.array() * (res.array() + 1e-300)).matrix();
    u /= u.sum();
    if (std::abs(mx - prev_max) <= params.tol * std::max(1.0, mx)) {
      prev_max = mx;
      converged = true;
      ++it;
      break;
    }
    prev_max = mx;
  }
  r.iterations = it;
  r.converged = converged;
  r.coefficients = c;
  r.error = prev_max;
  r.target_norm = t.cwiseAbs().maxCoeff();
  r.fit_norm = (A * c).cwiseAbs().maxCoeff();
  return r;
}

ProjectionReport project_in_space(const ScalarField& target, const BasisFamily& family,
                                  const SpaceSpec& space) {
  if (std::isfinite(space.p)) {
    return space.p == 2.0 ? project_l2(target, family, space.rule, space.measure)
                          : project_lp(target, family, space.p, space.rule, space.measure);
  }
  // nested sups: the largest exhaustion box dominates the capped family
  return project_sup(target, family, space.sup_box(space.k_max), space.derivative_cap(),
                     space.N_max);
}

DecayResult error_decay(const ScalarField& target,
                        const std::function<BasisFamily(int)>& family_builder,
                        const std::vector<int>& sizes, const SpaceSpec& space) {
  DecayResult d;
  for (int s : sizes) {
    auto fam = family_builder(s);
    auto rep = project_in_space(target, fam, space);
    d.table.push_back({s, rep.error});
  }
  if (d.table.empty()) return d;
  int n = static_cast<int>(d.table.size());
  int tail = std::min(3, n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - tail; i < n; ++i) {
    double x = d.table[static_cast<size_t>(i)].size;
    double y = std::log(std::max(d.table[static_cast<size_t>(i)].error, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = tail * sxx - sx * sx;
  d.tail_slope = denom != 0.0 ? (tail * sxy - sx * sy) / denom : 0.0;
  double first = d.table.front().error, last = d.table.back().error;
  d.plateau = last;
  d.decaying = last < 0.5 * first && d.tail_slope < 0.0;
  return d;
}

// ---- witnesses ----------------------------------------------------------------

std::vector<ScalarField> targets_library(const Domain& domain) {
  bool half = domain.axis(0).lo_finite() && !domain.axis(0).hi_finite();
  if (domain.dim() == 1 && half)
    return {parse_expression("x*exp(-x)"), parse_expression("exp(-2*x)"),
            parse_expression("1/(1+x)*exp(-x/2)")};
  return {parse_expression("1/(1+x^2)"), parse_expression("exp(-(x-1)^2)"),
          parse_expression("sin(3*x)*exp(-x^2/4)")};
}

namespace {

std::pair<double, double> scan_window(const Domain& dom) {
  const auto& a = dom.axis(0);
  if (a.bounded()) return {a.lo, a.hi};
  if (a.lo_finite()) return {a.lo, a.lo + 12.0};
  if (a.hi_finite()) return {a.hi - 12.0, a.hi};
  return {-6.0, 6.0};
}

// Smooth bump supported exactly on (a, b), peak value 1 at the midpoint.
ScalarField interval_bump(double a, double b) {
  double len = b - a;
  auto eval = [a, len](const Vec& x) {
    double t = (x(0) - a) / len;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(4.0 - 1.0 / (t * (1.0 - t)));
  };
  std::ostringstream name;
  name << "bump(" << a << "," << b << ")";
  return builtin_field(name.str(), 1, eval, nullptr, Smoothness::MeasurableOnly);
}

}  // namespace

DensityVerdict annihilator_witness(const SpaceSpec& space, const ScalarField& f0,
                                   const MapPhi& phi, int probe_degree) {
  if (probe_degree < 1) throw std::invalid_argument("probe_degree must be >= 1");
  DensityVerdict v;
  auto [lo, hi] = scan_window(space.domain);

  const int G = 4001;
  double fmax = 0.0;
  std::vector<double> vals(G);
  for (int i = 0; i < G; ++i) {
    Vec x(1);
    x << lo + (hi - lo) * (i + 0.5) / G;
    vals[static_cast<size_t>(i)] = std::abs(f0(x));
    fmax = std::max(fmax, vals[static_cast<size_t>(i)]);
  }
  if (fmax == 0.0) {
    v.note = "weight vanishes identically on the scan window";
    return v;
  }

  if (std::isfinite(space.p)) {
    // longest run of certified zeros -> interval obstruction; runs touching an
    // unbounded window edge are tail underflow of a decaying weight, not a
    // zero set, so they don't count
    int best_len = 0, best_start = -1, run = 0;
    for (int i = 0; i <= G; ++i) {
      bool zero = i < G && vals[static_cast<size_t>(i)] < 1e-13 * fmax;
      if (zero) {
        ++run;
      } else {
        int start = i - run;
        bool tail = (start == 0 && !space.domain.axis(0).lo_finite()) ||
                    (i == G && !space.domain.axis(0).hi_finite());
        if (run > best_len && !tail) {
          best_len = run;
          best_start = start;
        }
        run = 0;
      }
    }
    double step = (hi - lo) / G;
    if (best_len * step >= 0.05 * (hi - lo)) {
      double a = lo + (best_start + 0.5) * step;
      double b = a + (best_len - 1) * step;
      double shrink = 0.05 * (b - a);
      ScalarField g = interval_bump(a + shrink, b - shrink);
      auto T = integrate_dual(g, "interval-annihilator");

      auto probes = monomial_family(phi, f0, probe_degree);
      for (const auto& m : probes.members)
        v.witness_pairing_max = std::max(
            v.witness_pairing_max, std::abs(apply_dual(T, m, space.rule, space.measure)));
      for (const auto& t : targets_library(space.domain)) {
        double pairing = std::abs(apply_dual(T, t, space.rule, space.measure));
        if (pairing > 1e-3) {
          v.witness_target_value = pairing;
          break;
        }
      }
      v.witness = T;
      v.outcome = DensityOutcome::ObstructionFound;
      v.note = "weight vanishes on an interval";
      return v;
    }
  } else {
    // sup-type space: a single zero of f0 obstructs via point evaluation
    Box box = space.sup_box(space.k_max);
    double best = kInf, bx = 0.0;
    int pts = 4001;
    for (int i = 0; i <= pts; ++i) {
      Vec x(1);
      x << box.lo(0) + (box.hi(0) - box.lo(0)) * i / pts;
      double m = std::abs(f0(x));
      if (m < best) {
        best = m;
        bx = x(0);
      }
    }
    // zoom on the coarse argmin: a simple zero needs ~1e-14 resolution to
    // clear the certification threshold below
    double h = (box.hi(0) - box.lo(0)) / pts;
    for (int round = 0; round < 9 && best > 0.0; ++round) {
      double clo = std::max(box.lo(0), bx - h), chi = std::min(box.hi(0), bx + h);
      for (int i = 0; i <= 40; ++i) {
        Vec x(1);
        x << clo + (chi - clo) * i / 40;
        double m = std::abs(f0(x));
        if (m < best) {
          best = m;
          bx = x(0);
        }
      }
      h /= 20.0;
    }
    if (best < 1e-10 * fmax) {
      Vec x0(1);
      x0 << bx;
      auto T = point_dual(x0, MultiIndex(), "point-annihilator");
      auto probes = monomial_family(phi, f0, probe_degree);
      for (const auto& m : probes.members)
        v.witness_pairing_max = std::max(v.witness_pairing_max, std::abs(m.value(x0)));
      for (const auto& t : targets_library(space.domain)) {
        if (std::abs(t(x0)) > 1e-3) {
          v.witness_target_value = std::abs(t(x0));
          break;
        }
      }
      if (v.witness_target_value == 0.0) v.witness_target_value = 1.0;  // constant target
      v.witness = T;
      v.outcome = DensityOutcome::ObstructionFound;
      v.note = "weight has a zero at x0 = " + std::to_string(bx);
      return v;
    }
  }

  // no obstruction found: dense-consistent needs decaying errors on >= 3 targets
  auto targets = targets_library(space.domain);
  bool all_decay = true;
  for (const auto& t : targets) {
    auto d = error_decay(
        t, [&](int s) { return monomial_family(phi, f0, s); }, {4, 8, 16}, space);
    all_decay = all_decay && d.decaying;
    v.decays.push_back(std::move(d));
  }
  v.outcome = all_decay ? DensityOutcome::DenseConsistent : DensityOutcome::Inconclusive;
  v.note = all_decay ? "errors decay on all probe targets" : "decay evidence incomplete";
  return v;
}

}  // namespace denslab
