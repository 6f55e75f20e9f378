#include "denslab/verify.hpp"

#include <cmath>
#include <sstream>

namespace denslab {

namespace {

bool smooth_data(const MapPhi& phi, const ScalarField& f0) {
  if (!f0.is_smooth()) return false;
  for (const auto& c : phi.components())
    if (!c.is_smooth()) return false;
  return true;
}

Complex minus_i_pow(int k) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= Complex(0.0, -1.0);
  return r;
}

// (-i)^{|alpha|} Phi^alpha f0 as value/jet callbacks for apply_dual
struct MomentField {
  std::function<Complex(const Vec&)> value;
  std::function<Jet<Complex>(const Vec&, int)> jet;  // null for measurable data
};

MomentField moment_field(const MapPhi& phi, const ScalarField& f0, const MultiIndex& alpha) {
  Complex scale = minus_i_pow(alpha.order());
  MomentField out;
  out.value = [phi, f0, alpha, scale](const Vec& x) {
    Complex v = scale * f0(x);
    Vec px = phi(x);
    for (int j = 0; j < phi.dim(); ++j)
      for (int r = 0; r < alpha[j]; ++r) v *= px(j);
    return v;
  };
  if (smooth_data(phi, f0)) {
    out.jet = [phi, f0, alpha, scale](const Vec& x, int order) {
      Jet<Complex> v = Jet<Complex>::constant(phi.component(0).dim(), order, scale);
      for (int j = 0; j < phi.dim(); ++j)
        if (alpha[j] > 0) v = v * ipow(complexify(phi.component(j).jet(x, order)), alpha[j]);
      return v * complexify(f0.jet(x, order));
    };
  }
  return out;
}

// lambda as a flat (re, im, re, im, ...) cache key
std::vector<double> cache_key(const Eigen::VectorXcd& lambda) {
  std::vector<double> k;
  k.reserve(2 * static_cast<size_t>(lambda.size()));
  for (int j = 0; j < lambda.size(); ++j) {
    k.push_back(lambda(j).real());
    k.push_back(lambda(j).imag());
  }
  return k;
}

Complex h_map_uncached(const HolomorphicProbe& probe, const Eigen::VectorXcd& lambda) {
  ComplexFrequency freq(lambda, probe.epsilon);
  freq.validate();
  auto value = [&probe, freq](const Vec& x) {
    return eval_exponential(freq, probe.phi, probe.f0, x);
  };
  std::function<Jet<Complex>(const Vec&, int)> jet;
  if (smooth_data(probe.phi, probe.f0)) {
    Eigen::VectorXcd l = lambda;
    jet = [&probe, l](const Vec& x, int order) {
      return eval_exponential_jet(l, probe.phi, probe.f0, x, order);
    };
  }
  return apply_dual(probe.T, value, jet, probe.rule, probe.measure);
}

// first-order central stencils nested over the axes of alpha; error O(h^2)
Complex nested_central(const std::function<Complex(const Vec&)>& g, const Vec& base,
                       const MultiIndex& alpha, double h) {
  int axis = alpha[0] > 0 ? 0 : (alpha[1] > 0 ? 1 : -1);
  if (axis < 0) return g(base);
  MultiIndex rest = alpha;
  rest.a[static_cast<size_t>(axis)] -= 1;
  Vec up = base, dn = base;
  up(axis) += h;
  dn(axis) -= h;
  return (nested_central(g, up, rest, h) - nested_central(g, dn, rest, h)) / (2.0 * h);
}

double decayed(const std::vector<DecayPoint>& table) {
  return !table.empty() && table.back().error < 0.5 * table.front().error;
}

}  // namespace

Complex h_map(const HolomorphicProbe& probe, const Eigen::VectorXcd& lambda) {
  auto key = cache_key(lambda);
  {
    std::lock_guard<std::mutex> lk(probe.cache->guard);
    auto it = probe.cache->values.find(key);
    if (it != probe.cache->values.end()) return it->second;
  }
  Complex v = h_map_uncached(probe, lambda);
  std::lock_guard<std::mutex> lk(probe.cache->guard);
  probe.cache->values.emplace(std::move(key), v);
  return v;
}

Complex h_map(const HolomorphicProbe& probe, Complex lambda) {
  Eigen::VectorXcd l(1);
  l << lambda;
  return h_map(probe, l);
}

double conjugate_symmetry_residual(const HolomorphicProbe& probe,
                                   const std::vector<Complex>& lambdas) {
  double worst = 0.0;
  for (Complex l : lambdas)
    worst = std::max(worst, std::abs(h_map(probe, std::conj(l)) - std::conj(h_map(probe, l))));
  return worst;
}

Complex fourier_transform(const ScalarField& f, double xi, const QuadratureRule& rule) {
  return integrate_complex(
             [&](const Vec& l) { return f(l) * std::exp(Complex(0.0, -l(0) * xi)); }, rule)
      .value;
}

Prop210Result check_prop210(const HolomorphicProbe& probe, const MultiIndex& alpha,
                            DiffMethod method, int levels, double h) {
  int n = probe.phi.dim();
  if (alpha.order() < 1) throw std::invalid_argument("check_prop210 needs |alpha| >= 1");
  if (n < 2 && alpha[1] != 0)
    throw std::invalid_argument("alpha has a second axis but Phi is one-dimensional");

  Prop210Result r;
  auto mf = moment_field(probe.phi, probe.f0, alpha);
  r.rhs = apply_dual(probe.T, mf.value, mf.jet, probe.rule, probe.measure);

  auto g = [&probe, n](const Vec& l) {
    Eigen::VectorXcd z(n);
    for (int j = 0; j < n; ++j) z(j) = Complex(l(j), 0.0);
    return h_map(probe, z);
  };

  if (method == DiffMethod::ComplexStep) {
    if (alpha.order() != 1)
      throw std::invalid_argument("complex-step is only valid for |alpha| = 1");
    // real data: H(0) and all real-lambda moments are real, so H'(0) is purely
    // imaginary and Im H(h)/h is a cancellation-free quotient
    int axis = alpha[0] == 1 ? 0 : 1;
    double hs = 1e-8;
    Vec l = Vec::Zero(n);
    l(axis) = hs;
    r.lhs = Complex(0.0, 1.0) * (g(l).imag() / hs);
  } else {
    if (alpha.order() > 4)
      throw std::invalid_argument("richardson-fd supports |alpha| <= 4");
    if (levels < 1) throw std::invalid_argument("richardson-fd needs at least one level");
    // Richardson table over step halving; stencil error is O(h^2)
    std::vector<Complex> row(static_cast<size_t>(levels));
    for (int j = 0; j < levels; ++j)
      row[static_cast<size_t>(j)] =
          nested_central(g, Vec::Zero(n), alpha, h / std::pow(2.0, j));
    for (int m = 1; m < levels; ++m) {
      double f = std::pow(4.0, m);
      for (int j = levels - 1; j >= m; --j)
        row[static_cast<size_t>(j)] =
            (f * row[static_cast<size_t>(j)] - row[static_cast<size_t>(j - 1)]) / (f - 1.0);
    }
    r.lhs = row[static_cast<size_t>(levels - 1)];
  }
  r.relative_error = std::abs(r.lhs - r.rhs) / std::max(1.0, std::abs(r.rhs));
  return r;
}

Lemma212Result check_lemma212(const ScalarField& f, const MapPhi& phi, const ScalarField& f0,
                              const QuadratureRule& rule_lambda,
                              const std::vector<double>& x_grid,
                              std::function<Complex(double)> transform_oracle) {
  if (phi.dim() != 1) throw std::invalid_argument("check_lemma212 is one-dimensional");
  QuadratureRule oracle_rule;
  if (!transform_oracle) {
    oracle_rule = build_quadrature(Domain::whole_line(), QuadratureKind::GaussLegendreComposite,
                                   24, {16.0, 0.0});
    transform_oracle = [&f, &oracle_rule](double xi) {
      return fourier_transform(f, xi, oracle_rule);
    };
  }

  Lemma212Result out;
  for (double xv : x_grid) {
    Vec x(1);
    x << xv;
    double w = f0(x);
    double px = phi(x)(0);
    Complex lhs = integrate_complex(
                      [&](const Vec& l) {
                        return f(l) * std::exp(Complex(0.0, -l(0) * px));
                      },
                      rule_lambda)
                      .value *
                  w;
    Complex rhs = transform_oracle(px) * w;
    double res = std::abs(lhs - rhs);
    out.residual_grid.emplace_back(xv, res);
    out.max_residual = std::max(out.max_residual, res);
  }
  return out;
}

GrowthFit check_lemma28(const MapPhi& phi, const ScalarField& f0,
                        const std::vector<double>& lambda_grid, const SpaceSpec& space,
                        const SeminormIndex& idx) {
  if (lambda_grid.size() < 2)
    throw std::invalid_argument("check_lemma28 needs at least two grid frequencies");
  GrowthFit fit;
  fit.bound = idx.N + idx.alpha.order() + 1;

  for (double lv : lambda_grid) {
    Eigen::VectorXcd l = Eigen::VectorXcd::Constant(phi.dim(), Complex(lv, 0.0));
    ComplexJetFn jet = [l, &phi, &f0](const Vec& x, int order) {
      return eval_exponential_jet(l, phi, f0, x, order);
    };
    double p = seminorm(space, jet, idx.k, idx.alpha, idx.N);
    fit.samples.emplace_back(std::abs(lv) * std::sqrt(static_cast<double>(phi.dim())), p);
  }

  // least-squares slope of log p against log(1 + |lambda|)
  double su = 0.0, sv = 0.0, suu = 0.0, suv = 0.0;
  int m = 0;
  for (auto [ln, p] : fit.samples) {
    if (!(p > 0.0) || !std::isfinite(p)) continue;
    double u = std::log1p(ln), v = std::log(p);
    su += u;
    sv += v;
    suu += u * u;
    suv += u * v;
    ++m;
  }
  if (m < 2) throw std::runtime_error("growth fit has fewer than two usable seminorm values");
  double denom = m * suu - su * su;
  fit.exponent = denom > 0.0 ? (m * suv - su * sv) / denom : 0.0;
  fit.within_bound = fit.exponent <= fit.bound + 1e-6;
  return fit;
}

ClosureComparison compare_closures(const ScalarField& target, const MapPhi& phi,
                                   const ScalarField& f0, const SpaceSpec& space,
                                   const std::vector<int>& degree_sizes,
                                   const std::vector<std::vector<double>>& frequency_grids,
                                   const std::string& f0_preset, double f0_param) {
  if (degree_sizes.size() != frequency_grids.size())
    throw std::invalid_argument("degree_sizes and frequency_grids must have matching counts");
  if (degree_sizes.empty()) throw std::invalid_argument("compare_closures needs >= 1 stage");

  ClosureComparison out;
  for (size_t i = 0; i < degree_sizes.size(); ++i) {
    auto mono = monomial_family(phi, f0, degree_sizes[i], f0_preset, f0_param);
    if (static_cast<int>(frequency_grids[i].size()) != mono.size()) {
      std::ostringstream ss;
      ss << "frequency grid " << i << " has " << frequency_grids[i].size()
         << " members but the matched monomial family has " << mono.size();
      throw std::invalid_argument(ss.str());
    }
    std::vector<ComplexFrequency> freqs;
    for (double l : frequency_grids[i]) {
      Eigen::VectorXcd z = Eigen::VectorXcd::Constant(phi.dim(), Complex(l, 0.0));
      freqs.emplace_back(z, 1.0);
    }
    auto expo = exponential_family(phi, f0, freqs);
    out.monomial.push_back({mono.size(), project_in_space(target, mono, space).error});
    out.exponential.push_back({expo.size(), project_in_space(target, expo, space).error});
  }

  double fm = out.monomial.back().error, fe = out.exponential.back().error;
  out.gap = std::abs(fm - fe);
  out.both_decay = decayed(out.monomial) && decayed(out.exponential);
  out.both_plateau = !decayed(out.monomial) && !decayed(out.exponential);
  // once both runs have converged below a negligibility floor, the final
  // ratio is numerical noise and carries no closure information
  bool within2 = (fm <= 1e-3 && fe <= 1e-3) ||
                 std::max(fm, fe) <= 2.0 * std::min(fm, fe) + 1e-12;
  out.consistent = (out.both_decay || out.both_plateau) && within2;
  return out;
}

}  // namespace denslab
