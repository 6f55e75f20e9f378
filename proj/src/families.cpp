#include "denslab/families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace denslab {

namespace {

bool detect_identity(const MapPhi& phi) {
  if (phi.dim() == 0) return false;
  int n = phi.component(0).dim();
  if (phi.dim() != n) return false;
  for (double t : {-1.7, -0.3, 0.0, 0.9, 2.4}) {
    Vec x = Vec::Constant(n, t);
    if (n == 2) x(1) = -t + 0.1;
    Vec y = phi(x);
    if ((y - x).norm() > 1e-12 * (1.0 + x.norm())) return false;
  }
  return true;
}

std::vector<MultiIndex> graded_multi_indices(int dim, int degree_cap) {
  std::vector<MultiIndex> out;
  for (int t = 0; t <= degree_cap; ++t) {
    if (dim == 1) {
      out.push_back(MultiIndex(t));
    } else {
      for (int j = 0; j <= t; ++j) out.push_back(MultiIndex(t - j, j));
    }
  }
  return out;
}

std::string multi_label(const MultiIndex& b, int dim) {
  std::ostringstream ss;
  if (dim == 1)
    ss << b[0];
  else
    ss << '(' << b[0] << ',' << b[1] << ')';
  return ss.str();
}

}  // namespace

BasisFamily monomial_family(const MapPhi& phi, const ScalarField& f0, int degree_cap,
                            const std::string& f0_preset, double f0_param) {
  if (degree_cap < 0) throw std::invalid_argument("degree_cap must be >= 0");
  BasisFamily fam;
  fam.kind = FamilyKind::Monomial;
  fam.phi = phi;
  fam.f0 = f0;
  fam.phi_is_identity = detect_identity(phi);
  if (fam.phi_is_identity && f0_preset == "gaussian") fam.stable = StableBasis::HermiteFunctions;
  if (fam.phi_is_identity && f0_preset == "laguerre") {
    fam.stable = StableBasis::LaguerreFunctions;
    fam.laguerre_alpha = f0_param;
  }

  int n = phi.dim();
  bool smooth = f0.is_smooth();
  for (const auto& s : phi.components()) smooth = smooth && s.is_smooth();
  for (const auto& beta : graded_multi_indices(n, degree_cap)) {
    Member m;
    m.degree = beta;
    m.label = "beta=" + multi_label(beta, n);
    MapPhi p = phi;
    ScalarField w = f0;
    m.value = [p, w, beta](const Vec& x) -> Complex {
      Vec y = p(x);
      double v = w(x);
      for (int j = 0; j < y.size(); ++j)
        for (int i = 0; i < beta[static_cast<int>(j)]; ++i) v *= y(j);
      return Complex(v, 0.0);
    };
    if (smooth) {
      m.jet = [p, w, beta](const Vec& x, int ord) {
        Jet<double> r = w.jet(x, ord);
        for (int j = 0; j < p.dim(); ++j)
          if (beta[j] > 0) r = r * ipow(p.component(j).jet(x, ord), beta[j]);
        return complexify(r);
      };
    }
    fam.members.push_back(std::move(m));
  }
  return fam;
}

BasisFamily exponential_family(const MapPhi& phi, const ScalarField& f0,
                               const std::vector<ComplexFrequency>& frequencies) {
  BasisFamily fam;
  fam.kind = FamilyKind::Exponential;
  fam.phi = phi;
  fam.f0 = f0;
  fam.phi_is_identity = detect_identity(phi);
  for (const auto& freq : frequencies) {
    freq.validate();
    Member m;
    m.frequency = freq.lambda;
    m.is_real = freq.lambda.norm() == 0.0;
    std::ostringstream ss;
    ss << "lambda=" << freq.lambda.transpose();
    m.label = ss.str();
    MapPhi p = phi;
    ScalarField w = f0;
    ComplexFrequency fq = freq;
    m.value = [fq, p, w](const Vec& x) { return eval_exponential(fq, p, w, x); };
    if (f0.is_smooth()) {
      Eigen::VectorXcd lam = freq.lambda;
      m.jet = [lam, p, w](const Vec& x, int ord) {
        return eval_exponential_jet(lam, p, w, x, ord);
      };
    }
    fam.members.push_back(std::move(m));
  }
  return fam;
}

BasisFamily gap_family(int N, int l, int index_cap) {
  if (l < 2) throw std::invalid_argument("gap family requires l >= 2");
  if (index_cap < N) throw std::invalid_argument("index_cap must be >= N");
  if (N < 0) throw std::invalid_argument("N must be >= 0");
  BasisFamily fam;
  fam.kind = FamilyKind::Gap;
  fam.f0 = parse_expression("exp(-x)");
  PhiSpec id;
  id.preset = "identity";
  fam.phi = make_phi(id);
  fam.phi_is_identity = true;
  for (int n = N; n <= index_cap; ++n) {
    if (n % l == 0) continue;
    Member m;
    m.exponent = n;
    m.label = "n=" + std::to_string(n);
    m.value = [n](const Vec& x) -> Complex {
      double t = x(0);
      if (t <= 0.0) return Complex(0.0, 0.0);
      // log-domain evaluation avoids overflow of t^n for large n
      return Complex(std::exp(n * std::log(t) - t), 0.0);
    };
    m.jet = [n](const Vec& x, int ord) {
      auto jx = Jet<double>::variable(1, ord, 0, x(0));
      return complexify(ipow(jx, n) * exp(-jx));
    };
    fam.members.push_back(std::move(m));
  }
  return fam;
}

BasisFamily translate_family(const ScalarField& seed, const std::vector<Vec>& shifts) {
  BasisFamily fam;
  fam.kind = FamilyKind::Translate;
  fam.f0 = seed;
  for (const auto& s : shifts) {
    Member m;
    m.shift = s;
    std::ostringstream ss;
    ss << "shift=" << s.transpose();
    m.label = ss.str();
    ScalarField f = seed;
    Vec sh = s;
    m.value = [f, sh](const Vec& x) { return Complex(f(Vec(x - sh)), 0.0); };
    if (seed.is_smooth())
      m.jet = [f, sh](const Vec& x, int ord) { return complexify(f.jet(Vec(x - sh), ord)); };
    fam.members.push_back(std::move(m));
  }
  return fam;
}

BasisFamily pullback_family(const std::vector<ScalarField>& f_list, const MapPhi& phi,
                            const ScalarField& f0) {
  BasisFamily fam;
  fam.kind = FamilyKind::Pullback;
  fam.phi = phi;
  fam.f0 = f0;
  fam.phi_is_identity = detect_identity(phi);
  int idx = 0;
  for (const auto& f : f_list) {
    Member m;
    m.label = "f[" + std::to_string(idx++) + "]";
    MapPhi p = phi;
    ScalarField w = f0, g = f;
    m.value = [g, p, w](const Vec& x) { return Complex(g(p(x)) * w(x), 0.0); };
    if (f.is_smooth() && f0.is_smooth() && phi.dim() == 1 && phi.component(0).is_smooth()) {
      m.jet = [g, p, w](const Vec& x, int ord) {
        Jet<double> jphi = p.component(0).jet(x, ord);
        Vec y(1);
        y << jphi.value();
        Jet<double> jg = g.jet(y, ord);
        std::vector<double> derivs(static_cast<size_t>(ord) + 1);
        for (int k = 0; k <= ord; ++k) derivs[static_cast<size_t>(k)] = jg.derivative(MultiIndex(k));
        return complexify(jphi.compose(derivs) * w.jet(x, ord));
      };
    }
    fam.members.push_back(std::move(m));
  }
  return fam;
}

ScalarField derivative_field(const ScalarField& f, MultiIndex alpha) {
  if (alpha.order() == 0) return f;
  if (!f.is_smooth()) throw std::invalid_argument("derivative of a measurable-only field");
  int dim = f.dim();
  std::string name = "D^" + multi_label(alpha, dim) + "[" + f.to_string() + "]";
  auto eval = [f, alpha](const Vec& x) { return f.jet(x, alpha.order()).derivative(alpha); };
  auto jet_fn = [f, alpha, dim](const Vec& x, int ord) {
    Jet<double> base = f.jet(x, ord + alpha.order());
    Jet<double> r(dim, ord);
    if (dim == 1) {
      for (int k = 0; k <= ord; ++k)
        r.at(MultiIndex(k)) =
            base.derivative(MultiIndex(k + alpha[0])) / multi_factorial(MultiIndex(k));
    } else {
      for (int i = 0; i <= ord; ++i)
        for (int j = 0; i + j <= ord; ++j)
          r.at(MultiIndex(i, j)) = base.derivative(MultiIndex(i + alpha[0], j + alpha[1])) /
                                   multi_factorial(MultiIndex(i, j));
    }
    return r;
  };
  return builtin_field(name, dim, eval, jet_fn);
}

AlgebraGenerators algebra_generators(const MapPhi& phi, int m) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  AlgebraGenerators out;
  int dim = phi.component(0).dim();
  for (int j = 0; j < phi.dim(); ++j)
    for (const auto& a : graded_multi_indices(dim, m)) out.generators.push_back(
        derivative_field(phi.component(j), a));
  return out;
}

// ---- admissibility probes ---------------------------------------------------

namespace {

Vec probe_center(const Domain& dom) {
  Vec c(dom.dim());
  for (int i = 0; i < dom.dim(); ++i) {
    const auto& a = dom.axis(i);
    if (a.bounded())
      c(i) = (a.lo + a.hi) / 2.0;
    else if (a.lo_finite())
      c(i) = a.lo + 1.0;
    else if (a.hi_finite())
      c(i) = a.hi - 1.0;
    else
      c(i) = 0.0;
  }
  return c;
}

std::vector<Vec> unbounded_directions(const Domain& dom) {
  std::vector<Vec> dirs;
  for (int i = 0; i < dom.dim(); ++i) {
    if (!dom.axis(i).hi_finite()) dirs.push_back(Vec::Unit(dom.dim(), i));
    if (!dom.axis(i).lo_finite()) dirs.push_back(-Vec::Unit(dom.dim(), i));
  }
  if (dom.dim() == 2 && dirs.size() >= 3) {
    // diagonals when both axes run to infinity on some side
    for (double s0 : {-1.0, 1.0})
      for (double s1 : {-1.0, 1.0}) {
        bool ok0 = s0 > 0 ? !dom.axis(0).hi_finite() : !dom.axis(0).lo_finite();
        bool ok1 = s1 > 0 ? !dom.axis(1).hi_finite() : !dom.axis(1).lo_finite();
        if (ok0 && ok1) {
          Vec d(2);
          d << s0 * M_SQRT1_2, s1 * M_SQRT1_2;
          dirs.push_back(d);
        }
      }
  }
  return dirs;
}

struct ProbeOutcome {
  bool ok = true;
  double ratio = kInf;  // best geometric decay ratio seen
  std::string note;
};

// Requires the integrand to decay geometrically between R and 2R along every
// unbounded direction for some R <= 20480.
ProbeOutcome tail_probe(const std::function<double(const Vec&)>& h, const Domain& dom) {
  ProbeOutcome out;
  Vec base = probe_center(dom);
  for (const auto& d : unbounded_directions(dom)) {
    bool decayed = false;
    double best = kInf;
    double prev = h(Vec(base + 20.0 * d));
    for (double r = 40.0; r <= 20480.0; r *= 2.0) {
      double cur = h(Vec(base + r * d));
      if (!std::isfinite(prev) || !std::isfinite(cur)) {
        std::ostringstream ss;
        ss << "non-finite integrand near radius " << r << " along direction " << d.transpose();
        out.ok = false;
        out.note = ss.str();
        return out;
      }
      if ((prev == 0.0 && cur == 0.0) || (prev > 0.0 && cur <= 1e-3 * prev) ||
          (cur < 1e-280 && prev < 1e-280)) {
        decayed = true;
        if (prev > 0.0) best = std::min(best, cur / prev);
        break;
      }
      if (prev > 0.0) best = std::min(best, cur / prev);
      prev = cur;
    }
    if (!decayed) {
      std::ostringstream ss;
      ss << "no geometric tail decay along direction " << d.transpose()
         << " (best ratio " << best << ")";
      out.ok = false;
      out.note = ss.str();
      return out;
    }
    out.ratio = std::min(out.ratio, best);
  }
  return out;
}

// Power-law fit at finite boundary points; the (already p-powered) integrand
// diverges when its local exponent s satisfies s <= -1.
ProbeOutcome endpoint_probe(const std::function<double(const Vec&)>& h, const Domain& dom) {
  ProbeOutcome out;
  Vec base = probe_center(dom);
  for (int i = 0; i < dom.dim(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const auto& a = dom.axis(i);
      double endpoint;
      double sign;
      if (side == 0 && a.lo_finite()) {
        endpoint = a.lo;
        sign = 1.0;
      } else if (side == 1 && a.hi_finite()) {
        endpoint = a.hi;
        sign = -1.0;
      } else {
        continue;
      }
      Vec x1 = base, x2 = base;
      x1(i) = endpoint + sign * 1e-8;
      x2(i) = endpoint + sign * 1e-6;
      double h1 = h(x1), h2 = h(x2);
      if (h1 == 0.0 && h2 == 0.0) continue;
      if (!std::isfinite(h1) || !std::isfinite(h2) || h1 <= 0.0 || h2 <= 0.0) {
        out.ok = false;
        out.note = "non-finite integrand at the boundary of axis " + std::to_string(i);
        return out;
      }
      double s = std::log(h1 / h2) / std::log(1e-8 / 1e-6);
      if (s <= -1.0 + 1e-6) {
        std::ostringstream ss;
        ss << "integrand ~ r^" << s << " diverges at the axis-" << i << " boundary";
        out.ok = false;
        out.note = ss.str();
        return out;
      }
    }
  }
  return out;
}

QuadratureRule admissibility_rule(const Domain& dom) {
  if (dom.bounded()) return build_quadrature(dom, QuadratureKind::GaussLegendreComposite, 16);
  bool has_finite_end = false;
  for (int i = 0; i < dom.dim(); ++i)
    has_finite_end = has_finite_end || dom.axis(i).lo_finite() || dom.axis(i).hi_finite();
  if (dom.dim() == 1 && has_finite_end)
    return build_quadrature(dom, QuadratureKind::TanhSinh, 48, {80.0, 0.0});
  return build_quadrature(dom, QuadratureKind::GaussLegendreComposite, 16, {60.0, 0.0});
}

}  // namespace

AdmissibilityVerdict check_thm31(const ScalarField& f0, const MapPhi& phi, double p,
                                 const MeasureSpec& measure, const Domain& domain,
                                 std::vector<double> eps_grid, int degree_probe) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("requires finite p >= 1");
  std::sort(eps_grid.begin(), eps_grid.end(), std::greater<double>());

  AdmissibilityVerdict v;
  auto betas = graded_multi_indices(phi.dim(), 0);  // beta = 0 ...
  for (const auto& b : graded_multi_indices(phi.dim(), degree_probe))
    if (b.order() == degree_probe) betas.push_back(b);  // ... plus the top degree

  for (double eps : eps_grid) {
    bool eps_ok = true;
    for (const auto& beta : betas) {
      auto h = [&](const Vec& x) {
        Vec y = phi(x);
        double m = std::exp(eps * y.norm()) * std::abs(f0(x));
        for (int j = 0; j < y.size(); ++j)
          for (int i = 0; i < beta[static_cast<int>(j)]; ++i) m *= std::abs(y(j));
        return std::pow(m, p) * measure.density(x);
      };
      if (!domain.bounded()) {
        auto t = tail_probe(h, domain);
        if (!t.ok) {
          eps_ok = false;
          v.failures.push_back("eps=" + std::to_string(eps) + " |beta|=" +
                               std::to_string(beta.order()) + ": " + t.note);
          break;
        }
        if (eps == eps_grid.back() || v.tail_ratio == 0.0)
          v.tail_ratio = std::min(t.ratio, v.tail_ratio == 0.0 ? kInf : v.tail_ratio);
      }
      auto e = endpoint_probe(h, domain);
      if (!e.ok) {
        eps_ok = false;
        v.failures.push_back("eps=" + std::to_string(eps) + " |beta|=" +
                             std::to_string(beta.order()) + ": " + e.note);
        break;
      }
    }
    v.per_epsilon.push_back({eps, eps_ok});
    if (eps_ok && !v.pass) {
      v.pass = true;
      v.epsilon = eps;
    }
  }

  if (v.pass) {
    // Margin check: the certified norm itself must be finite and resolved.
    auto rule = admissibility_rule(domain);
    const MultiIndex& top = betas.back();
    double eps = v.epsilon;
    auto g = [&](const Vec& x) {
      Vec y = phi(x);
      double m = std::exp(eps * y.norm()) * std::abs(f0(x));
      for (int j = 0; j < y.size(); ++j)
        for (int i = 0; i < top[static_cast<int>(j)]; ++i) m *= std::abs(y(j));
      return m;
    };
    auto n = lp_norm_checked(g, p, rule, measure);
    v.norm_value = n.value;
    v.norm_error = n.error_estimate;
    if (n.diverged || !std::isfinite(n.value)) {
      v.pass = false;
      v.failures.push_back("norm check diverged at certified eps");
    }
  }
  return v;
}

AdmissibilityVerdict check_assumption26(const SpaceSpec& space, const ScalarField& f0,
                                        const MapPhi& phi, double eps, int degree_probe) {
  AdmissibilityVerdict v;
  v.epsilon = eps;
  v.pass = true;
  auto note = [&](const std::string& s) {
    v.pass = false;
    v.failures.push_back(s);
  };

  int gen_order = std::min(space.derivative_cap(), 2);
  auto gens = algebra_generators(phi, f0.is_smooth() ? gen_order : 0);

  // item 2: chi_k e^{eps||Phi||} g grad_N^alpha f0 finite for generator powers g
  for (const auto& idx : seminorm_indices(space)) {
    if (idx.alpha.order() > 0 && !f0.is_smooth()) {
      note("derivative seminorm requested for a measurable-only weight");
      continue;
    }
    for (size_t gi = 0; gi <= gens.generators.size(); ++gi) {
      auto F = [&, gi](const Vec& x) {
        double d = idx.alpha.order() == 0
                       ? f0(x)
                       : f0.jet(x, idx.alpha.order()).derivative(idx.alpha);
        double m = std::abs(d) * std::exp(eps * phi(x).norm());
        if (idx.N > 0) m *= std::pow(1.0 + x.norm(), idx.N);
        if (gi > 0) m *= std::pow(std::abs(gens.generators[gi - 1](x)), degree_probe);
        return m;
      };
      std::string where = "k=" + std::to_string(idx.k) + " |alpha|=" +
                          std::to_string(idx.alpha.order()) + " N=" + std::to_string(idx.N) +
                          " g#" + std::to_string(gi);
      if (std::isinf(space.p)) {
        if (!space.domain.bounded() && space.kind == SpaceKind::Schwartz) {
          auto t = tail_probe(F, space.domain);
          if (!t.ok) {
            note(where + ": " + t.note);
            continue;
          }
          v.tail_ratio = std::min(v.tail_ratio == 0.0 ? kInf : v.tail_ratio, t.ratio);
        }
        double sup = grid_supremum(F, space.sup_box(idx.k));
        if (!std::isfinite(sup)) note(where + ": supremum not finite");
      } else {
        auto h = [&](const Vec& x) { return std::pow(F(x), space.p) * space.measure.density(x); };
        if (!space.domain.bounded()) {
          auto t = tail_probe(h, space.domain);
          if (!t.ok) {
            note(where + ": " + t.note);
            continue;
          }
        }
        auto e = endpoint_probe(h, space.domain);
        if (!e.ok) {
          note(where + ": " + e.note);
          continue;
        }
        double val = lp_norm(F, space.p, space.rule, space.measure);
        if (!std::isfinite(val)) note(where + ": norm not finite");
      }
    }
  }

  // item 1: seminorm panels of e^{-i(lambda,Phi)} f0 at sampled strip frequencies
  if (f0.is_smooth()) {
    int n = phi.dim();
    std::vector<Eigen::VectorXcd> freqs;
    for (double re : {-1.0, 0.0, 1.0})
      for (double im : {-0.9 * eps, 0.0, 0.9 * eps}) {
        Eigen::VectorXcd l = Eigen::VectorXcd::Constant(n, Complex(re, im / std::sqrt(n)));
        freqs.push_back(l);
      }
    for (const auto& lam : freqs) {
      MapPhi p = phi;
      ScalarField w = f0;
      ComplexJetFn tilted = [lam, p, w](const Vec& x, int ord) {
        return eval_exponential_jet(lam, p, w, x, ord);
      };
      for (const auto& idx : seminorm_indices(space)) {
        double val = seminorm(space, tilted, idx.k, idx.alpha, idx.N);
        if (!std::isfinite(val)) {
          std::ostringstream ss;
          ss << "seminorm of the tilted weight not finite at lambda=" << lam.transpose();
          note(ss.str());
        }
      }
    }
  }
  return v;
}

}  // namespace denslab
