#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "denslab/verify.hpp"
#include "oracles.hpp"

using namespace denslab;

namespace {

MapPhi identity_phi() {
  PhiSpec s;
  s.preset = "identity";
  return make_phi(s);
}

HolomorphicProbe gaussian_probe(double shift = 0.0) {
  HolomorphicProbe p;
  std::ostringstream os;
  os << "exp(-(x-" << shift << ")^2)";
  p.T = integrate_dual(parse_expression(os.str()));
  p.phi = identity_phi();
  p.f0 = preset_weight("gaussian").field;
  p.epsilon = 1.0;
  p.rule = build_quadrature(Domain::whole_line(), QuadratureKind::GaussLegendreComposite, 16,
                            {40.0, 0.0});
  return p;
}

}  // namespace

TEST_CASE("h_map: identity case, parity, quadrature oracle, strip, cache") {
  auto p = gaussian_probe();
  // lambda = 0 is <T, f0>
  double pairing = oracles::simpson([](double x) { return std::exp(-1.5 * x * x); }, -12, 12);
  CHECK(h_map(p, Complex(0.0, 0.0)).real() == doctest::Approx(pairing).epsilon(1e-12));
  CHECK(std::abs(h_map(p, Complex(0.0, 0.0)).imag()) < 1e-14);

  // even integrand: real for every real lambda
  for (double l : {0.5, 1.0, 3.0})
    CHECK(std::abs(h_map(p, Complex(l, 0.0)).imag()) < 1e-13);

  double oracle =
      oracles::simpson([](double x) { return std::exp(-1.5 * x * x) * std::cos(x); }, -12, 12);
  CHECK(h_map(p, Complex(1.0, 0.0)).real() == doctest::Approx(oracle).epsilon(1e-11));

  CHECK_THROWS(h_map(p, Complex(0.0, 1.5)));  // outside the strip

  CHECK(p.cache->values.size() >= 4);
  Complex again = h_map(p, Complex(1.0, 0.0));
  CHECK(again.real() == doctest::Approx(oracle).epsilon(1e-11));
}

TEST_CASE("h_map conjugate symmetry for even real data") {
  // real T-data alone gives the reflection conj H(l) = H(-conj l); the
  // literal identity H(conj l) = conj H(l) additionally needs H real on the
  // real axis, which the even canonical probe provides
  auto p = gaussian_probe();
  std::vector<Complex> ls = {Complex(0.3, 0.2), Complex(-1.0, 0.4), Complex(2.0, -0.7),
                             Complex(0.0, 0.9)};
  CHECK(conjugate_symmetry_residual(p, ls) < 1e-12);

  auto shifted = gaussian_probe(1.0);
  double worst = 0.0;
  for (Complex l : ls)
    worst = std::max(worst,
                     std::abs(h_map(shifted, -std::conj(l)) - std::conj(h_map(shifted, l))));
  CHECK(worst < 1e-12);
}

TEST_CASE("h_map local group law") {
  auto p = gaussian_probe(1.0);
  Complex l1(0.3, 0.2), l2(-0.5, 0.1);
  Complex lhs = h_map(p, l1 + l2);
  // tilt the weight by e^{-i l2 x} and evaluate at l1
  auto tilted = [&p, l2, l1](const Vec& x) {
    return std::exp(Complex(0.0, -1.0) * l1 * x(0)) *
           (std::exp(Complex(0.0, -1.0) * l2 * x(0)) * p.f0(x));
  };
  Complex rhs = apply_dual(p.T, tilted, nullptr, p.rule, p.measure);
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("Fourier convention: Gaussian maps to sqrt(2 pi) Gaussian") {
  auto f = parse_expression("exp(-x^2/2)");
  auto rule = build_quadrature(Domain::whole_line(), QuadratureKind::GaussLegendreComposite, 16,
                               {16.0, 0.0});
  for (double xi : {0.0, 0.7, 2.0}) {
    Complex v = fourier_transform(f, xi, rule);
    CHECK(v.real() ==
          doctest::Approx(std::sqrt(2 * M_PI) * std::exp(-xi * xi / 2)).epsilon(1e-10));
    CHECK(std::abs(v.imag()) < 1e-12);
  }
}

TEST_CASE("check_prop210: parity zero and the closed-form second moment") {
  auto p = gaussian_probe();
  auto r1 = check_prop210(p, MultiIndex(1));
  CHECK(std::abs(r1.rhs) < 1e-13);  // odd moment
  CHECK(std::abs(r1.lhs) < 1e-8);

  auto r2 = check_prop210(p, MultiIndex(2));
  // rhs = -(1/3) sqrt(2 pi / 3)
  CHECK(r2.rhs.real() ==
        doctest::Approx(-std::sqrt(2 * M_PI / 3) / 3.0).epsilon(1e-12));
  CHECK(std::abs(r2.rhs.imag()) < 1e-13);
  CHECK(r2.relative_error < 1e-5);
}

TEST_CASE("check_prop210: shifted weight, orders 1..3 under richardson-fd") {
  auto p = gaussian_probe(1.0);
  for (int k : {1, 2, 3}) {
    auto r = check_prop210(p, MultiIndex(k));
    CHECK(std::abs(r.rhs) > 1e-3);  // genuinely nonzero moments
    CHECK(r.relative_error < 1e-5);
  }
  CHECK_THROWS(check_prop210(p, MultiIndex(5)));
}

TEST_CASE("check_prop210: complex-step at first order") {
  auto p = gaussian_probe(1.0);
  auto r = check_prop210(p, MultiIndex(1), DiffMethod::ComplexStep);
  CHECK(r.relative_error < 1e-10);
  CHECK_THROWS(check_prop210(p, MultiIndex(2), DiffMethod::ComplexStep));
}

TEST_CASE("check_prop210: richardson error shrinks with an extra level") {
  auto p = gaussian_probe(1.0);
  auto e2 = check_prop210(p, MultiIndex(2), DiffMethod::RichardsonFd, 2).relative_error;
  auto e3 = check_prop210(p, MultiIndex(2), DiffMethod::RichardsonFd, 3).relative_error;
  CHECK(e3 < e2);
}

TEST_CASE("check_lemma212: closed-form and independent-oracle residuals") {
  auto phi = identity_phi();
  auto f0 = preset_weight("gaussian").field;
  auto rule16 = build_quadrature(Domain::whole_line(),
                                 QuadratureKind::GaussLegendreComposite, 16, {12.0, 0.0});
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(-3.0 + 0.1 * i);

  auto gauss = parse_expression("exp(-x^2/2)");
  auto closed = [](double xi) {
    return Complex(std::sqrt(2 * M_PI) * std::exp(-xi * xi / 2), 0.0);
  };
  auto r = check_lemma212(gauss, phi, f0, rule16, grid, closed);
  CHECK(r.max_residual < 1e-8);
  CHECK(r.residual_grid.size() == grid.size());

  auto poly = parse_expression("x^2*exp(-x^2/2)");
  CHECK(check_lemma212(poly, phi, f0, rule16, grid).max_residual < 1e-7);

  auto zero = constant_field(0.0);
  CHECK(check_lemma212(gauss, phi, zero, rule16, grid).max_residual == 0.0);
}

TEST_CASE("check_lemma212: residual drops 10x when the lambda rule doubles") {
  auto phi = identity_phi();
  auto f0 = preset_weight("gaussian").field;
  auto gauss = parse_expression("exp(-x^2/2)");
  auto closed = [](double xi) {
    return Complex(std::sqrt(2 * M_PI) * std::exp(-xi * xi / 2), 0.0);
  };
  std::vector<double> grid = {-2.0, -1.0, 0.0, 0.5, 1.5, 3.0};
  auto coarse = build_quadrature(Domain::whole_line(),
                                 QuadratureKind::GaussLegendreComposite, 3, {9.0, 0.0});
  auto fine = build_quadrature(Domain::whole_line(),
                               QuadratureKind::GaussLegendreComposite, 6, {9.0, 0.0});
  double rc = check_lemma212(gauss, phi, f0, coarse, grid, closed).max_residual;
  double rf = check_lemma212(gauss, phi, f0, fine, grid, closed).max_residual;
  CHECK(rc > 1e-13);  // coarse rule is above the floor, so the ratio is meaningful
  CHECK(rf * 10.0 <= rc);
}

TEST_CASE("check_lemma28: flat in L2, at most linear for the Schwartz derivative") {
  auto phi = identity_phi();
  auto f0 = preset_weight("gaussian").field;
  std::vector<double> grid = {0.0, 1.0, 2.0, 4.0, 8.0, 16.0};

  SpaceParams lp;
  lp.domain = Domain::whole_line();
  auto l2 = make_space(SpaceKind::Lp, lp);
  auto flat = check_lemma28(phi, f0, grid, l2, SeminormIndex{1, MultiIndex(), 0});
  CHECK(std::abs(flat.exponent) < 0.05);  // |e^{-i lambda x}| = 1
  CHECK(flat.within_bound);
  double base = flat.samples.front().second;
  for (auto [ln, v] : flat.samples) CHECK(v == doctest::Approx(base).epsilon(1e-10));

  SpaceParams sp;
  sp.N_max = 0;
  sp.alpha_max = 1;
  auto schwartz = make_space(SpaceKind::Schwartz, sp);
  auto lin = check_lemma28(phi, f0, grid, schwartz, SeminormIndex{1, MultiIndex(1), 0});
  CHECK(lin.bound == doctest::Approx(2.0));
  CHECK(lin.within_bound);
  CHECK(lin.exponent > 0.5);  // the chain rule really brings down a factor lambda
  CHECK(lin.exponent < 1.3);

  // lambda = 0 row is the seminorm of f0 itself
  auto zrow = check_lemma28(phi, f0, {0.0, 1.0}, schwartz, SeminormIndex{1, MultiIndex(), 0});
  RealJetFn fj = [&f0](const Vec& x, int ord) { return f0.jet(x, ord); };
  CHECK(zrow.samples.front().second ==
        doctest::Approx(seminorm(schwartz, fj, 1, MultiIndex(), 0)).epsilon(1e-12));
}

TEST_CASE("compare_closures: both families decay on a smooth target") {
  auto phi = identity_phi();
  auto f0 = preset_weight("gaussian").field;
  SpaceParams sp;
  sp.domain = Domain::whole_line();
  auto space = make_space(SpaceKind::Lp, sp);
  auto target = parse_expression("exp(-(x-1)^2)");

  std::vector<int> degrees = {4, 10, 16};
  std::vector<double> widths = {3.0, 4.0, 5.0};
  std::vector<std::vector<double>> grids;
  for (size_t k = 0; k < degrees.size(); ++k) {
    std::vector<double> g;
    for (int i = 0; i <= degrees[k]; ++i)
      g.push_back(-widths[k] + 2.0 * widths[k] * i / degrees[k]);
    grids.push_back(g);
  }
  auto c = compare_closures(target, phi, f0, space, degrees, grids, "gaussian");
  CHECK(c.both_decay);
  CHECK(c.consistent);
  CHECK(c.monomial.back().error < 1e-3);
  CHECK(c.exponential.back().error < 1e-3);
  CHECK(c.monomial.size() == 3);
  CHECK(c.monomial.back().error < c.monomial.front().error);
  CHECK(c.exponential.back().error < c.exponential.front().error);
}

TEST_CASE("compare_closures: shared plateau for a weight with an interval zero") {
  auto phi = identity_phi();
  auto f0 = preset_weight("vanishing_gaussian").field;
  SpaceParams sp;
  sp.domain = Domain::whole_line();
  auto space = make_space(SpaceKind::Lp, sp);
  auto target = parse_expression("1/(1+x^2)");

  std::vector<int> degrees = {4, 8};
  std::vector<std::vector<double>> grids;
  for (int d : degrees) {
    std::vector<double> g;
    for (int i = 0; i <= d; ++i) g.push_back(-2.0 + 4.0 * i / d);
    grids.push_back(g);
  }
  auto c = compare_closures(target, phi, f0, space, degrees, grids);
  CHECK(c.both_plateau);
  CHECK(c.consistent);
  // the plateau is the target's mass over the zero set of f0, so it is far from 0
  CHECK(c.monomial.back().error > 0.1);
}

TEST_CASE("compare_closures: shared member gives zero errors; bad input throws") {
  auto phi = identity_phi();
  auto f0 = preset_weight("gaussian").field;
  SpaceParams sp;
  sp.domain = Domain::whole_line();
  auto space = make_space(SpaceKind::Lp, sp);

  auto c = compare_closures(f0, phi, f0, space, {2}, {{-1.0, 0.0, 1.0}}, "gaussian");
  // the L2 error formula bottoms out at the cancellation floor ~1e-8 ||t||
  CHECK(c.monomial.back().error < 1e-7);
  CHECK(c.exponential.back().error < 1e-7);
  CHECK(c.consistent);

  CHECK_THROWS(compare_closures(f0, phi, f0, space, {2}, {{0.0}}, "gaussian"));
  CHECK_THROWS(compare_closures(f0, phi, f0, space, {2, 4}, {{0.0, 1.0, 2.0}}, "gaussian"));
}
