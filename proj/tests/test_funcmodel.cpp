#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "denslab/funcmodel.hpp"
#include "oracles.hpp"

using namespace denslab;

TEST_CASE("parse and evaluate basic expressions") {
  CHECK(parse_expression("exp(-x^2/2)")(0.0) == doctest::Approx(1.0));
  CHECK(parse_expression("x*sqrt(1+x^2)")(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(parse_expression("2^3^2")(0.0) == doctest::Approx(512.0));  // right-assoc ^
  CHECK(parse_expression("1-2-3")(0.0) == doctest::Approx(-4.0));
  CHECK(parse_expression("-x^2")(2.0) == doctest::Approx(-4.0));
}

TEST_CASE("smoothness flag tracks floor and abs") {
  auto exotic = parse_expression("exp(-sqrt(x^6+cos(x)+2))*floor(x^2+2)");
  CHECK(exotic.smoothness() == Smoothness::MeasurableOnly);
  CHECK(parse_expression("abs(x)").smoothness() == Smoothness::MeasurableOnly);
  CHECK(parse_expression("exp(-x^2/2)").smoothness() == Smoothness::Smooth);
  CHECK_THROWS(exotic.jet(Vec::Zero(1), 1));
}

TEST_CASE("parser reports errors with position") {
  CHECK_THROWS_AS(parse_expression("1+*2"), ParseError);
  CHECK_THROWS_WITH_AS(parse_expression("siin(x)"), doctest::Contains("unknown identifier"),
                       ParseError);
  CHECK_THROWS_AS(parse_expression("(1+x"), ParseError);
  try {
    parse_expression("x + $");
  } catch (const ParseError& e) {
    CHECK(e.pos == 4);
  }
}

TEST_CASE("print/reparse round trip is evaluation-equivalent") {
  std::vector<std::string> exprs = {"exp(-x^2/2)", "x*sqrt(1+x^2)", "sin(3*x)/(1+x^2)",
                                    "x^3-2*x+cosh(x/2)", "2^x"};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pt(-3.0, 3.0);
  for (const auto& s : exprs) {
    auto f = parse_expression(s);
    auto g = parse_expression(f.to_string());
    for (int i = 0; i < 100; ++i) {
      double x = pt(rng);
      double fv = f(x), gv = g(x);
      CHECK(std::abs(fv - gv) <= 1e-14 * std::max(1.0, std::abs(fv)));
    }
  }
}

TEST_CASE("derivatives: closed forms") {
  CHECK(derivative(parse_expression("x^3"), MultiIndex(1))(2.0) == doctest::Approx(12.0));
  CHECK(derivative(parse_expression("exp(-x^2/2)"), MultiIndex(2))(0.0) ==
        doctest::Approx(-1.0).epsilon(1e-13));
  // frozen from the Richardson finite-difference oracle (= cosh(0.7))
  double d3 = derivative(parse_expression("sinh(x)"), MultiIndex(3))(0.7);
  CHECK(d3 == doctest::Approx(1.2551690056309430).epsilon(1e-10));
  double fd = oracles::richardson_fd([](double t) { return std::sinh(t); }, 0.7, 3);
  CHECK(std::abs(d3 - fd) / std::abs(fd) < 1e-6);
}

TEST_CASE("derivative order cap and measurable-only rejection") {
  auto f = parse_expression("exp(x)");
  CHECK_THROWS(derivative(f, MultiIndex(7)));
  CHECK_THROWS(derivative(parse_expression("floor(x)"), MultiIndex(1)));
}

TEST_CASE("jets agree with Richardson finite differences on random fields/points") {
  std::vector<std::string> pool = {
      "exp(-x^2/2)", "sin(3*x)*cos(x)", "x*sqrt(1+x^2)", "1/(1+x^2)",
      "sinh(x/2)+x^3", "exp(cos(x))", "log(2+x^2)", "x^5-3*x^2+1",
      "cosh(x)/(2+sin(x))", "sqrt(4+x^2)"};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pt(-2.0, 2.0);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& s = pool[rng() % pool.size()];
    auto f = parse_expression(s);
    double x = pt(rng);
    int k = 1 + static_cast<int>(rng() % 3);
    double exact = derivative(f, MultiIndex(k))(x);
    double fd = oracles::richardson_fd([&](double t) { return f(t); }, x, k);
    double scale = std::max(std::abs(fd), 1.0);
    CHECK(std::abs(exact - fd) / scale < 1e-6);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("2-D mixed partial derivatives") {
  auto f = parse_expression("x1^2*x2^3+sin(x1*x2)");
  Vec p(2);
  p << 0.7, -0.4;
  // d^2/dx1 dx2: 6 x1 x2^2 + cos(x1 x2) - x1 x2 sin(x1 x2)
  double expect = 6 * p(0) * p(1) * p(1) + std::cos(p(0) * p(1)) -
                  p(0) * p(1) * std::sin(p(0) * p(1));
  CHECK(f.jet(p, 2).derivative(MultiIndex(1, 1)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("preset weights") {
  auto g = preset_weight("gaussian");
  CHECK(g.field(0.0) == doctest::Approx(1.0));
  CHECK_FALSE(g.singular_at_origin);

  auto lag = preset_weight("laguerre", -0.5);
  CHECK(lag.singular_at_origin);
  CHECK(lag.field(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(lag.field(4.0) == doctest::Approx(std::exp(-2.0) * std::pow(4.0, -0.25)).epsilon(1e-12));
  CHECK_THROWS(preset_weight("laguerre", -1.0));

  auto nd = preset_weight("gaussian_nd");
  CHECK(nd.field(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  auto ex = preset_weight("exotic");
  CHECK(ex.field.smoothness() == Smoothness::MeasurableOnly);

  auto vg = preset_weight("vanishing_gaussian");
  CHECK(vg.field(0.5) == 0.0);
  CHECK(vg.field(0.0) == 0.0);
  CHECK(vg.field(1.0) == 0.0);
  CHECK(vg.field(-0.5) > 0.0);
  CHECK(vg.field(2.0) > 0.0);
}

TEST_CASE("make_phi presets and rejection") {
  PhiSpec id;
  id.preset = "identity";
  auto phi = make_phi(id);
  CHECK(phi.check().passed);
  Vec x(1);
  x << 1.5;
  CHECK(phi(x)(0) == doctest::Approx(1.5));

  PhiSpec cubic;
  cubic.preset = "cubic";
  CHECK_NOTHROW(make_phi(cubic));

  PhiSpec quad;
  quad.custom = {"x^2"};
  CHECK_THROWS_WITH_AS(make_phi(quad), doctest::Contains("sample check failed"),
                       std::invalid_argument);

  PhiSpec aff;
  aff.preset = "affine";
  aff.a = 0.0;
  CHECK_THROWS(make_phi(aff));
}

TEST_CASE("eval_exponential identities") {
  PhiSpec id;
  id.preset = "identity";
  auto phi = make_phi(id);
  auto f0 = preset_weight("gaussian").field;
  Vec x(1);
  x << 0.3;

  ComplexFrequency zero(Complex(0.0, 0.0), 1.0);
  CHECK(std::abs(eval_exponential(zero, phi, f0, x) - Complex(f0(x), 0.0)) < 1e-15);

  double eps = 0.8;
  ComplexFrequency tilt(Complex(0.0, eps / 2), eps);
  Vec one(1);
  one << 1.0;
  Complex v = eval_exponential(tilt, phi, constant_field(1.0), one);
  CHECK(v.real() == doctest::Approx(std::exp(eps / 2)).epsilon(1e-13));
  CHECK(std::abs(v.imag()) < 1e-14);

  ComplexFrequency l1(Complex(1.0, 0.0), 1.0);
  Vec origin = Vec::Zero(1);
  CHECK(std::abs(eval_exponential(l1, phi, f0, origin) - Complex(1.0, 0.0)) < 1e-14);

  ComplexFrequency outside(Complex(0.0, 2.0), 1.0);
  CHECK_THROWS(eval_exponential(outside, phi, f0, x));
}

TEST_CASE("local group law of the exponential tilt") {
  PhiSpec spec;
  spec.preset = "sinh";
  auto phi = make_phi(spec);
  auto f0 = preset_weight("gaussian").field;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(-0.2, 0.2), pt(-1.5, 1.5);
  double eps = 0.5;
  for (int trial = 0; trial < 30; ++trial) {
    Complex l1(re(rng), im(rng)), l2(re(rng), im(rng));
    if (std::abs(l1.imag()) >= eps || std::abs(l2.imag()) >= eps ||
        std::abs(l1.imag() + l2.imag()) >= eps)
      continue;
    Vec x(1);
    x << pt(rng);
    Complex a = eval_exponential({l1, eps}, phi, constant_field(1.0), x);
    Complex b = eval_exponential({l2, eps}, phi, f0, x);
    Complex c = eval_exponential({l1 + l2, eps}, phi, f0, x);
    CHECK(std::abs(a * b - c) < 1e-12 * std::max(1.0, std::abs(c)));
  }
}

TEST_CASE("exponential jet matches the pointwise evaluation and derivative oracle") {
  PhiSpec id;
  id.preset = "identity";
  auto phi = make_phi(id);
  auto f0 = preset_weight("gaussian").field;
  Eigen::VectorXcd lam(1);
  lam(0) = Complex(1.3, 0.2);
  Vec x(1);
  x << 0.4;
  auto j = eval_exponential_jet(lam, phi, f0, x, 2);
  Complex direct = eval_exponential({lam, 1.0}, phi, f0, x);
  CHECK(std::abs(j.value() - direct) < 1e-14);

  // first derivative via the product rule: (-i lambda - x) e^{-i lambda x} e^{-x^2/2}
  Complex expect = (Complex(0, -1) * lam(0) - Complex(x(0))) * direct;
  CHECK(std::abs(j.derivative(MultiIndex(1)) - expect) < 1e-13);
}
