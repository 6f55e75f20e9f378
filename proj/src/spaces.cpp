#include "denslab/spaces.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace denslab {

Box SpaceSpec::sup_box(int k) const {
  if (kind == SpaceKind::Cm) return domain.exhaustion_box(k);
  // Schwartz: U_k = R^n for every k; the sup is truncated at sup_radius,
  // which is safe for the rapidly decreasing integrands the model admits.
  Box b;
  b.lo = Vec::Constant(domain.dim(), -sup_radius);
  b.hi = Vec::Constant(domain.dim(), sup_radius);
  return b;
}

SpaceSpec make_space(SpaceKind kind, SpaceParams params) {
  SpaceSpec s;
  s.kind = kind;
  s.domain = params.domain;
  s.measure = params.measure;
  s.sup_radius = params.sup_radius;

  switch (kind) {
    case SpaceKind::Lp: {
      s.p = params.p == 0.0 ? 2.0 : params.p;
      if (!(s.p >= 1.0) || std::isinf(s.p))
        throw std::invalid_argument("Lp space requires a finite exponent p >= 1");
      if (params.m != 0) throw std::invalid_argument("Lp space requires m = 0");
      if (params.alpha_max > 0 || params.N_max > 0)
        throw std::invalid_argument("Lp space carries only the inclusion seminorm");
      s.m = 0;
      s.k_max = 1;  // U_k = U
      s.N_max = 0;
      s.alpha_max = 0;
      break;
    }
    case SpaceKind::Cm: {
      if (params.p != 0.0 && !std::isinf(params.p))
        throw std::invalid_argument("Cm space requires p = infinity");
      if (params.N_max > 0)
        throw std::invalid_argument("Cm seminorms carry no polynomial weight (N = 0)");
      if (params.m < 0) throw std::invalid_argument("regularity order m must be >= 0");
      s.p = kInf;
      s.m = params.m;
      s.alpha_max = params.alpha_max < 0 ? params.m : params.alpha_max;
      s.N_max = 0;
      int kmax_default = static_cast<int>(params.domain.exhaustion().size());
      s.k_max = params.k_max == 0 ? kmax_default : params.k_max;
      if (s.k_max < 1 || s.k_max > kmax_default)
        throw std::invalid_argument("k_max exceeds the exhaustion length");
      params.domain.validate_exhaustion();
      break;
    }
    case SpaceKind::Schwartz: {
      for (int i = 0; i < params.domain.dim(); ++i)
        if (params.domain.axis(i).lo_finite() || params.domain.axis(i).hi_finite())
          throw std::invalid_argument("Schwartz space requires the whole line/plane");
      s.p = params.p == 0.0 ? kInf : params.p;
      if (!(s.p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
      s.alpha_max = params.alpha_max < 0 ? 2 : params.alpha_max;
      s.m = s.alpha_max;  // all derivatives exist; the cap is the effective m
      s.N_max = params.N_max;
      s.k_max = 1;  // U_k = R^n
      break;
    }
  }
  if (s.alpha_max > kMaxDerivativeOrder || s.N_max > 8)
    throw std::invalid_argument("seminorm caps exceed supported orders");

  if (std::isfinite(s.p)) {
    QuadratureKind kind_q = params.quad.value_or(QuadratureKind::GaussLegendreComposite);
    s.rule = build_quadrature(s.domain, kind_q, params.quad_order, params.tail);
  }
  return s;
}

std::vector<SeminormIndex> seminorm_indices(const SpaceSpec& s) {
  std::vector<SeminormIndex> out;
  int acap = s.derivative_cap();
  for (int k = 1; k <= s.k_max; ++k) {
    for (int t = 0; t <= acap; ++t) {
      std::vector<MultiIndex> alphas;
      if (s.domain.dim() == 1) {
        alphas.push_back(MultiIndex(t));
      } else {
        for (int j = 0; j <= t; ++j) alphas.push_back(MultiIndex(t - j, j));
      }
      for (const auto& a : alphas)
        for (int N = 0; N <= s.N_max; ++N) out.push_back({k, a, N});
    }
  }
  return out;
}

std::vector<LeibnizTerm> leibniz_terms(const MultiIndex& alpha) {
  std::vector<LeibnizTerm> out;
  for (int b0 = 0; b0 <= alpha[0]; ++b0)
    for (int b1 = 0; b1 <= alpha[1]; ++b1) {
      LeibnizTerm t;
      t.beta = MultiIndex(b0, b1);
      t.gamma = MultiIndex(alpha[0] - b0, alpha[1] - b1);
      t.coeff = binomial(alpha[0], b0) * binomial(alpha[1], b1);
      out.push_back(t);
    }
  return out;
}

namespace {

void validate_index(const SpaceSpec& s, int k, const MultiIndex& a, int N) {
  if (k < 1 || k > s.k_max) throw std::out_of_range("seminorm index k out of range");
  if (a[0] < 0 || a[1] < 0) throw std::invalid_argument("negative multi-index");
  if (s.domain.dim() == 1 && a[1] != 0)
    throw std::invalid_argument("2-D multi-index on a 1-D space");
  if (a.order() > s.derivative_cap())
    throw std::out_of_range("derivative order exceeds the space caps");
  if (N < 0 || N > s.N_max) throw std::out_of_range("weight exponent N out of range");
}

// Core dispatch once |D^alpha f| is available pointwise.
double seminorm_from_abs(const SpaceSpec& s, const std::function<double(const Vec&)>& absg,
                         int k, int N) {
  auto weighted = [&](const Vec& x) {
    double v = absg(x);
    return N > 0 ? v * std::pow(1.0 + x.norm(), N) : v;
  };
  if (std::isinf(s.p)) return grid_supremum(weighted, s.sup_box(k));
  // chi_k is identically 1: both integral models here have U_k = U.
  return lp_norm(weighted, s.p, s.rule, s.measure);
}

template <typename S>
double seminorm_jet(const SpaceSpec& s, const std::function<Jet<S>(const Vec&, int)>& f,
                    int k, MultiIndex a, int N) {
  validate_index(s, k, a, N);
  int ord = a.order();
  return seminorm_from_abs(
      s, [&](const Vec& x) { return std::abs(f(x, ord).derivative(a)); }, k, N);
}

}  // namespace

double seminorm(const SpaceSpec& s, const RealJetFn& f, int k, MultiIndex alpha, int N) {
  return seminorm_jet<double>(s, f, k, alpha, N);
}

double seminorm(const SpaceSpec& s, const ComplexJetFn& f, int k, MultiIndex alpha, int N) {
  return seminorm_jet<Complex>(s, f, k, alpha, N);
}

double seminorm(const SpaceSpec& s, const ScalarField& f, int k, MultiIndex alpha, int N) {
  validate_index(s, k, alpha, N);
  if (alpha.order() == 0)  // value path keeps measurable-only fields usable
    return seminorm_from_abs(s, [&](const Vec& x) { return std::abs(f(x)); }, k, N);
  return seminorm_jet<double>(
      s, [&](const Vec& x, int ord) { return f.jet(x, ord); }, k, alpha, N);
}

double seminorm(const SpaceSpec& s, const std::function<double(const Vec&)>& f, int k) {
  validate_index(s, k, MultiIndex(), 0);
  return seminorm_from_abs(s, [&](const Vec& x) { return std::abs(f(x)); }, k, 0);
}

namespace {

template <typename F>
std::vector<PanelRow> panel_impl(const SpaceSpec& s, const F& eval) {
  std::vector<PanelRow> rows;
  for (const auto& idx : seminorm_indices(s))
    rows.push_back({idx.k, idx.alpha, idx.N, eval(idx)});
  return rows;
}

}  // namespace

std::vector<PanelRow> seminorm_panel(const SpaceSpec& s, const ScalarField& f) {
  return panel_impl(s, [&](const SeminormIndex& i) { return seminorm(s, f, i.k, i.alpha, i.N); });
}

std::vector<PanelRow> seminorm_panel(const SpaceSpec& s, const RealJetFn& f) {
  return panel_impl(s, [&](const SeminormIndex& i) { return seminorm(s, f, i.k, i.alpha, i.N); });
}

void write_panel_csv(const std::vector<PanelRow>& rows, std::ostream& out, int dim) {
  out << "k,alpha,N,value\n";
  std::ostringstream ss;
  ss.precision(16);
  for (const auto& r : rows) {
    ss.str("");
    if (dim == 1)
      ss << r.alpha[0];
    else
      ss << r.alpha[0] << ':' << r.alpha[1];
    out << r.k << ',' << ss.str() << ',' << r.N << ',';
    ss.str("");
    ss << r.value;
    out << ss.str() << '\n';
  }
}

namespace {

template <typename F>
double distance_impl(const SpaceSpec& s, const F& f) {
  double d = 0.0;
  for (const auto& i : seminorm_indices(s)) d = std::max(d, seminorm(s, f, i.k, i.alpha, i.N));
  return d;
}

}  // namespace

double space_distance(const SpaceSpec& s, const RealJetFn& diff) {
  return distance_impl(s, diff);
}

double space_distance(const SpaceSpec& s, const ComplexJetFn& diff) {
  return distance_impl(s, diff);
}

double space_distance(const SpaceSpec& s, const std::function<double(const Vec&)>& diff) {
  if (s.derivative_cap() > 0)
    throw std::invalid_argument("space caps request derivatives; pass a jet evaluator");
  double d = 0.0;
  for (const auto& i : seminorm_indices(s)) {
    double v = seminorm_from_abs(s, [&](const Vec& x) { return std::abs(diff(x)); }, i.k, i.N);
    d = std::max(d, v);
  }
  return d;
}

}  // namespace denslab
