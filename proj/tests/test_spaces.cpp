#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "denslab/spaces.hpp"
#include "oracles.hpp"

using namespace denslab;

namespace {

SpaceSpec l2_line() {
  SpaceParams p;
  p.domain = Domain::whole_line();
  return make_space(SpaceKind::Lp, p);
}

RealJetFn jet_of(const ScalarField& f) {
  return [f](const Vec& x, int ord) { return f.jet(x, ord); };
}

}  // namespace

TEST_CASE("make_space rejects inconsistent parameters") {
  SpaceParams cm;
  cm.domain = Domain::interval(-2.0, 2.0);
  cm.p = 2.0;
  CHECK_THROWS_WITH_AS(make_space(SpaceKind::Cm, cm), doctest::Contains("infinity"),
                       std::invalid_argument);

  SpaceParams lp;
  lp.m = 1;
  CHECK_THROWS(make_space(SpaceKind::Lp, lp));
  SpaceParams lpinf;
  lpinf.p = kInf;
  CHECK_THROWS(make_space(SpaceKind::Lp, lpinf));

  SpaceParams sch;
  sch.domain = Domain::interval(0.0, 1.0);
  CHECK_THROWS(make_space(SpaceKind::Schwartz, sch));

  SpaceParams deep;
  deep.domain = Domain::interval(-2.0, 2.0);
  deep.m = 1;
  deep.k_max = 99;
  CHECK_THROWS(make_space(SpaceKind::Cm, deep));
}

TEST_CASE("Lp inclusion seminorm matches the norm and closed forms") {
  auto s = l2_line();
  auto f = parse_expression("exp(-x^2/2)");
  double v = seminorm(s, f, 1);
  CHECK(v == doctest::Approx(std::pow(M_PI, 0.25)).epsilon(1e-10));
  CHECK(v == doctest::Approx(lp_norm(f, 2.0, s.rule, s.measure)).epsilon(1e-14));
}

TEST_CASE("C0 endpoint supremum on the first exhaustion box") {
  SpaceParams p;
  p.domain = Domain::interval(-2.0, 2.0);
  auto s = make_space(SpaceKind::Cm, p);
  // default exhaustion: U_1 = (-1, 1)
  CHECK(s.domain.exhaustion_box(1).hi(0) == doctest::Approx(1.0));
  auto f = parse_expression("x");
  CHECK(seminorm(s, f, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("C1 derivative seminorms take sups of closed forms") {
  SpaceParams p;
  p.domain = Domain::interval(-1.0, 1.0);
  p.m = 1;
  auto s = make_space(SpaceKind::Cm, p);
  auto f = parse_expression("x^2");
  for (int k = 1; k <= s.k_max; ++k) {
    double hi = s.domain.exhaustion_box(k).hi(0);
    CHECK(seminorm(s, f, k, MultiIndex(0)) == doctest::Approx(hi * hi).epsilon(1e-6));
    CHECK(seminorm(s, f, k, MultiIndex(1)) == doctest::Approx(2 * hi).epsilon(1e-6));
  }
}

TEST_CASE("Schwartz seminorm against a dense-grid oracle") {
  SpaceParams p;
  p.N_max = 1;
  p.alpha_max = 1;
  auto s = make_space(SpaceKind::Schwartz, p);
  auto f = parse_expression("exp(-x^2/2)");
  double v = seminorm(s, f, 1, MultiIndex(1), 1);
  // sup (1+|x|) |x| e^{-x^2/2}, scanned independently
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    double x = -10.0 + 20.0 * i / 100000;
    best = std::max(best, (1 + std::abs(x)) * std::abs(x) * std::exp(-x * x / 2));
  }
  CHECK(v == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("seminorm axioms on random samples") {
  std::vector<ScalarField> pool = {
      parse_expression("exp(-x^2/2)"), parse_expression("sin(3*x)*exp(-x^2/4)"),
      parse_expression("x^2*exp(-x^2)"), parse_expression("1/(1+x^2)*exp(-x^2/8)")};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);

  SpaceParams sp;
  sp.N_max = 1;
  sp.alpha_max = 2;
  std::vector<SpaceSpec> spaces = {l2_line(), make_space(SpaceKind::Schwartz, sp)};
  for (const auto& s : spaces) {
    for (const auto& idx : seminorm_indices(s)) {
      for (int trial = 0; trial < 4; ++trial) {
        const auto& f = pool[rng() % pool.size()];
        const auto& g = pool[rng() % pool.size()];
        double c = coef(rng);
        double pf = seminorm(s, f, idx.k, idx.alpha, idx.N);
        double pg = seminorm(s, g, idx.k, idx.alpha, idx.N);
        double psum = seminorm(s, jet_of(f + g), idx.k, idx.alpha, idx.N);
        double pscaled = seminorm(s, jet_of(c * f), idx.k, idx.alpha, idx.N);
        CHECK(psum <= pf + pg + 1e-10);
        CHECK(pscaled == doctest::Approx(std::abs(c) * pf).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("inclusion condition: order-zero seminorm equals the chi_k norm") {
  auto s = l2_line();
  auto f = parse_expression("x*exp(-x^2)");
  CHECK(seminorm(s, f, 1) ==
        doctest::Approx(lp_norm(f, s.p, s.rule, s.measure)).epsilon(1e-12));

  SpaceParams cp;
  cp.domain = Domain::interval(-2.0, 2.0);
  auto cm = make_space(SpaceKind::Cm, cp);
  for (int k = 1; k <= cm.k_max; ++k) {
    double direct =
        grid_supremum([&](const Vec& x) { return std::abs(f(x)); }, cm.domain.exhaustion_box(k));
    CHECK(seminorm(cm, f, k) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("Cm seminorms are monotone along the exhaustion") {
  SpaceParams p;
  p.domain = Domain::interval(-3.0, 3.0);
  p.m = 2;
  auto s = make_space(SpaceKind::Cm, p);
  std::vector<ScalarField> pool = {parse_expression("exp(-x^2/2)"),
                                   parse_expression("sin(3*x)+x^2"),
                                   parse_expression("cosh(x/2)")};
  for (const auto& f : pool)
    for (int t = 0; t <= 2; ++t)
      for (int k = 1; k + 1 <= s.k_max; ++k)
        CHECK(seminorm(s, f, k, MultiIndex(t)) <=
              seminorm(s, f, k + 1, MultiIndex(t)) + 1e-12);
}

TEST_CASE("Leibniz expansion matches the product derivative at random points") {
  std::vector<ScalarField> pool1 = {
      parse_expression("exp(-x^2/2)"), parse_expression("sin(2*x)"),
      parse_expression("x^3-x"), parse_expression("1/(2+cos(x))")};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pt(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& g = pool1[rng() % pool1.size()];
    const auto& f = pool1[rng() % pool1.size()];
    MultiIndex alpha(1 + static_cast<int>(rng() % 3));
    int N = static_cast<int>(rng() % 3);
    Vec x(1);
    x << pt(rng);
    double w = std::pow(1.0 + x.norm(), N);

    double lhs = w * (g * f).jet(x, alpha.order()).derivative(alpha);
    double rhs = 0.0;
    for (const auto& term : leibniz_terms(alpha)) {
      double dg = g.jet(x, term.beta.order()).derivative(term.beta);
      double df = f.jet(x, term.gamma.order()).derivative(term.gamma);
      rhs += term.coeff * dg * (w * df);
    }
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
  }

  // 2-D spot check
  auto g2 = parse_expression("exp(-x1^2-x2^2)");
  auto f2 = parse_expression("x1^2*x2+sin(x2)");
  MultiIndex a(1, 1);
  Vec q(2);
  q << 0.3, -0.8;
  double lhs = (g2 * f2).jet(q, 2).derivative(a);
  double rhs = 0.0;
  for (const auto& term : leibniz_terms(a))
    rhs += term.coeff * g2.jet(q, term.beta.order()).derivative(term.beta) *
           f2.jet(q, term.gamma.order()).derivative(term.gamma);
  CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("seminorm panel ordering, zero case, CSV export") {
  SpaceParams p;
  p.N_max = 1;
  p.alpha_max = 2;
  auto s = make_space(SpaceKind::Schwartz, p);
  auto rows = seminorm_panel(s, constant_field(0.0));
  CHECK(rows.size() == 3u * 2u);  // |alpha| in {0,1,2} x N in {0,1}
  for (const auto& r : rows) CHECK(r.value == 0.0);
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    auto key = [](const PanelRow& r) {
      return std::make_tuple(r.k, r.alpha.order(), r.N);
    };
    CHECK(key(rows[i]) <= key(rows[i + 1]));
  }

  auto gauss_rows = seminorm_panel(s, parse_expression("exp(-x^2/2)"));
  std::ostringstream csv;
  write_panel_csv(gauss_rows, csv, s.domain.dim());
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,alpha,N,value");
  int count = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++count;
  CHECK(count == static_cast<int>(gauss_rows.size()));
}

TEST_CASE("index validation") {
  auto s = l2_line();
  auto f = parse_expression("exp(-x^2)");
  CHECK_THROWS_AS(seminorm(s, f, 2), std::out_of_range);
  CHECK_THROWS_AS(seminorm(s, f, 1, MultiIndex(1)), std::out_of_range);
  CHECK_THROWS_AS(seminorm(s, f, 1, MultiIndex(0), 1), std::out_of_range);

  SpaceParams p;
  p.N_max = 1;
  p.alpha_max = 1;
  auto sch = make_space(SpaceKind::Schwartz, p);
  CHECK_THROWS(seminorm(sch, f, 1, MultiIndex(2)));
  CHECK_THROWS(seminorm(sch, f, 1, MultiIndex(0, 1)));  // 2-D index on 1-D space
}

TEST_CASE("measurable fields are allowed at derivative order zero") {
  SpaceParams p;
  p.domain = Domain::interval(-2.0, 2.0);
  auto s = make_space(SpaceKind::Lp, p);
  auto f = parse_expression("floor(x)*exp(-x^2)");
  CHECK(seminorm(s, f, 1) > 0.0);
}

TEST_CASE("space_distance is the max seminorm of the difference") {
  auto s = l2_line();
  auto f = parse_expression("exp(-x^2/2)");
  auto g = parse_expression("x*exp(-x^2/2)");
  double d = space_distance(s, [&](const Vec& x) { return f(x) - g(x); });
  double direct = lp_norm([&](const Vec& x) { return f(x) - g(x); }, 2.0, s.rule, s.measure);
  CHECK(d == doctest::Approx(direct).epsilon(1e-13));

  SpaceParams sp;
  sp.N_max = 2;
  sp.alpha_max = 2;
  auto sch = make_space(SpaceKind::Schwartz, sp);
  double zero = space_distance(sch, jet_of(f + (-1.0) * f));
  CHECK(zero == 0.0);
  CHECK(space_distance(sch, jet_of(f)) >= seminorm(sch, f, 1, MultiIndex(2), 2));
}
