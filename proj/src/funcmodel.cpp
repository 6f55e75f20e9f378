#include "denslab/funcmodel.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace denslab {

// ---- expression tree --------------------------------------------------------

enum class UnaryFn { Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh, Abs, Floor, Neg };
enum class BinOp { Add, Sub, Mul, Div, Pow };

class ExprNode {
 public:
  enum class Kind { Constant, Variable, Unary, Binary, Builtin };

  Kind kind;
  double constant = 0.0;
  int axis = 0;
  UnaryFn fn = UnaryFn::Exp;
  BinOp op = BinOp::Add;
  ExprPtr lhs, rhs, arg;

  // builtin
  std::string name;
  std::function<double(const Vec&)> builtin_eval;
  std::function<Jet<double>(const Vec&, int)> builtin_jet;
  Smoothness builtin_smoothness = Smoothness::Smooth;

  static ExprPtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Constant;
    n->constant = v;
    return n;
  }
  static ExprPtr make_var(int axis) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Variable;
    n->axis = axis;
    return n;
  }
  static ExprPtr make_unary(UnaryFn f, ExprPtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Unary;
    n->fn = f;
    n->arg = std::move(a);
    return n;
  }
  static ExprPtr make_binary(BinOp o, ExprPtr l, ExprPtr r) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Binary;
    n->op = o;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }
};

namespace {

bool contains_nonsmooth(const ExprPtr& e) {
  if (!e) return false;
  switch (e->kind) {
    case ExprNode::Kind::Unary:
      if (e->fn == UnaryFn::Abs || e->fn == UnaryFn::Floor) return true;
      return contains_nonsmooth(e->arg);
    case ExprNode::Kind::Binary:
      return contains_nonsmooth(e->lhs) || contains_nonsmooth(e->rhs);
    case ExprNode::Kind::Builtin:
      return e->builtin_smoothness == Smoothness::MeasurableOnly;
    default:
      return false;
  }
}

int max_axis(const ExprPtr& e) {
  if (!e) return -1;
  switch (e->kind) {
    case ExprNode::Kind::Variable:
      return e->axis;
    case ExprNode::Kind::Unary:
      return max_axis(e->arg);
    case ExprNode::Kind::Binary:
      return std::max(max_axis(e->lhs), max_axis(e->rhs));
    default:
      return -1;
  }
}

double eval_node(const ExprNode& n, const Vec& x) {
  switch (n.kind) {
    case ExprNode::Kind::Constant:
      return n.constant;
    case ExprNode::Kind::Variable:
      return x(n.axis);
    case ExprNode::Kind::Builtin:
      return n.builtin_eval(x);
    case ExprNode::Kind::Unary: {
      double a = eval_node(*n.arg, x);
      switch (n.fn) {
        case UnaryFn::Exp: return std::exp(a);
        case UnaryFn::Log: return std::log(a);
        case UnaryFn::Sqrt: return std::sqrt(a);
        case UnaryFn::Sin: return std::sin(a);
        case UnaryFn::Cos: return std::cos(a);
        case UnaryFn::Sinh: return std::sinh(a);
        case UnaryFn::Cosh: return std::cosh(a);
        case UnaryFn::Abs: return std::abs(a);
        case UnaryFn::Floor: return std::floor(a);
        case UnaryFn::Neg: return -a;
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      double a = eval_node(*n.lhs, x);
      double b = eval_node(*n.rhs, x);
      switch (n.op) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div: return a / b;
        case BinOp::Pow: return std::pow(a, b);
      }
      break;
    }
  }
  throw std::logic_error("eval_node: unreachable");
}

std::optional<double> constant_value(const ExprPtr& e) {
  if (e && e->kind == ExprNode::Kind::Constant) return e->constant;
  return std::nullopt;
}

Jet<double> jet_node(const ExprNode& n, const Vec& x, int dim, int order) {
  using J = Jet<double>;
  switch (n.kind) {
    case ExprNode::Kind::Constant:
      return J::constant(dim, order, n.constant);
    case ExprNode::Kind::Variable:
      return J::variable(dim, order, n.axis, x(n.axis));
    case ExprNode::Kind::Builtin:
      if (!n.builtin_jet)
        throw std::runtime_error("derivative unavailable for builtin field '" + n.name + "'");
      return n.builtin_jet(x, order);
    case ExprNode::Kind::Unary: {
      if (n.fn == UnaryFn::Neg) return -jet_node(*n.arg, x, dim, order);
      if (n.fn == UnaryFn::Abs || n.fn == UnaryFn::Floor)
        throw std::runtime_error("derivative of a measurable-only field");
      J a = jet_node(*n.arg, x, dim, order);
      switch (n.fn) {
        case UnaryFn::Exp: return exp(a);
        case UnaryFn::Log: return log(a);
        case UnaryFn::Sqrt: return sqrt(a);
        case UnaryFn::Sin: return sin(a);
        case UnaryFn::Cos: return cos(a);
        case UnaryFn::Sinh: return sinh(a);
        case UnaryFn::Cosh: return cosh(a);
        default: break;
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      if (n.op == BinOp::Pow) {
        J base = jet_node(*n.lhs, x, dim, order);
        if (auto c = constant_value(n.rhs)) {
          double e = *c;
          double r = std::round(e);
          if (std::abs(e - r) < 1e-12 && std::abs(r) <= 64)
            return ipow(base, static_cast<long>(r));
          return pow(base, e);
        }
        J expo = jet_node(*n.rhs, x, dim, order);
        return exp(expo * log(base));
      }
      J a = jet_node(*n.lhs, x, dim, order);
      J b = jet_node(*n.rhs, x, dim, order);
      switch (n.op) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div: return a / b;
        default: break;
      }
      break;
    }
  }
  throw std::logic_error("jet_node: unreachable");
}

const char* fn_name(UnaryFn f) {
  switch (f) {
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Log: return "log";
    case UnaryFn::Sqrt: return "sqrt";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Sinh: return "sinh";
    case UnaryFn::Cosh: return "cosh";
    case UnaryFn::Abs: return "abs";
    case UnaryFn::Floor: return "floor";
    case UnaryFn::Neg: return "-";
  }
  return "?";
}

void print_node(const ExprNode& n, std::ostream& os) {
  switch (n.kind) {
    case ExprNode::Kind::Constant: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.constant;
      os << tmp.str();
      break;
    }
    case ExprNode::Kind::Variable:
      os << "x" << (n.axis + 1);
      break;
    case ExprNode::Kind::Builtin:
      os << "<" << n.name << ">";
      break;
    case ExprNode::Kind::Unary:
      if (n.fn == UnaryFn::Neg) {
        os << "(-";
        print_node(*n.arg, os);
        os << ")";
      } else {
        os << fn_name(n.fn) << "(";
        print_node(*n.arg, os);
        os << ")";
      }
      break;
    case ExprNode::Kind::Binary: {
      const char* opc = n.op == BinOp::Add ? "+"
                        : n.op == BinOp::Sub ? "-"
                        : n.op == BinOp::Mul ? "*"
                        : n.op == BinOp::Div ? "/"
                                             : "^";
      os << "(";
      print_node(*n.lhs, os);
      os << opc;
      print_node(*n.rhs, os);
      os << ")";
      break;
    }
  }
}

}  // namespace

ScalarField::ScalarField(ExprPtr root, int dim) : root_(std::move(root)), dim_(dim) {
  smoothness_ = contains_nonsmooth(root_) ? Smoothness::MeasurableOnly : Smoothness::Smooth;
}

double ScalarField::operator()(const Vec& x) const {
  if (x.size() < dim_) throw std::invalid_argument("ScalarField: point dimension too small");
  return eval_node(*root_, x);
}

double ScalarField::operator()(double x) const {
  Vec v(1);
  v << x;
  return (*this)(v);
}

Jet<double> ScalarField::jet(const Vec& x, int order) const {
  if (order > 0 && !is_smooth())
    throw std::runtime_error("derivative of a measurable-only field");
  if (order > kMaxDerivativeOrder)
    throw std::invalid_argument("derivative order exceeds the configured maximum");
  return jet_node(*root_, x, dim_, order);
}

std::string ScalarField::to_string() const {
  std::ostringstream os;
  print_node(*root_, os);
  return os.str();
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField(ExprNode::make_binary(BinOp::Add, a.root_, b.root_),
                     std::max(a.dim_, b.dim_));
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField(ExprNode::make_binary(BinOp::Sub, a.root_, b.root_),
                     std::max(a.dim_, b.dim_));
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField(ExprNode::make_binary(BinOp::Mul, a.root_, b.root_),
                     std::max(a.dim_, b.dim_));
}
ScalarField operator*(double c, const ScalarField& a) {
  return ScalarField(ExprNode::make_binary(BinOp::Mul, ExprNode::make_const(c), a.root_), a.dim_);
}

ScalarField constant_field(double value, int dim) {
  return ScalarField(ExprNode::make_const(value), dim);
}

ScalarField coordinate_field(int axis, int dim) {
  if (axis < 0 || axis >= dim) throw std::invalid_argument("coordinate_field: axis out of range");
  return ScalarField(ExprNode::make_var(axis), dim);
}

ScalarField builtin_field(std::string name, int dim, std::function<double(const Vec&)> eval,
                          std::function<Jet<double>(const Vec&, int)> jet_fn,
                          Smoothness smoothness) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Builtin;
  n->name = std::move(name);
  n->builtin_eval = std::move(eval);
  n->builtin_jet = std::move(jet_fn);
  n->builtin_smoothness = smoothness;
  return ScalarField(n, dim);
}

// ---- parser -----------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  // expr := term (('+'|'-') term)*
  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        e = ExprNode::make_binary(BinOp::Add, e, term());
      else if (accept('-'))
        e = ExprNode::make_binary(BinOp::Sub, e, term());
      else
        return e;
    }
  }

  // term := factor (('*'|'/') factor)*
  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      skip_ws();
      if (accept('*'))
        e = ExprNode::make_binary(BinOp::Mul, e, factor());
      else if (accept('/'))
        e = ExprNode::make_binary(BinOp::Div, e, factor());
      else
        return e;
    }
  }

  // factor := ('-'|'+') factor | power    (unary minus binds looser than ^)
  ExprPtr factor() {
    skip_ws();
    if (accept('-')) return ExprNode::make_unary(UnaryFn::Neg, factor());
    if (accept('+')) return factor();
    return power();
  }

  // power := atom ('^' factor)?   (right-associative)
  ExprPtr power() {
    ExprPtr base = atom();
    skip_ws();
    if (accept('^')) return ExprNode::make_binary(BinOp::Pow, base, factor());
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr number() {
    size_t start = pos_;
    size_t consumed = 0;
    double v;
    try {
      v = std::stod(s_.substr(start), &consumed);
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ = start + consumed;
    return ExprNode::make_const(v);
  }

  ExprPtr identifier() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);

    static const std::map<std::string, UnaryFn> fns = {
        {"exp", UnaryFn::Exp},   {"log", UnaryFn::Log},   {"sqrt", UnaryFn::Sqrt},
        {"sin", UnaryFn::Sin},   {"cos", UnaryFn::Cos},   {"sinh", UnaryFn::Sinh},
        {"cosh", UnaryFn::Cosh}, {"abs", UnaryFn::Abs},   {"floor", UnaryFn::Floor}};
    auto it = fns.find(name);
    if (it != fns.end()) {
      skip_ws();
      expect('(');
      ExprPtr a = expr();
      expect(')');
      return ExprNode::make_unary(it->second, a);
    }
    if (name == "pi") return ExprNode::make_const(M_PI);
    if (name == "x") return ExprNode::make_var(0);
    if (name == "x1") return ExprNode::make_var(0);
    if (name == "x2") return ExprNode::make_var(1);
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

ScalarField parse_expression(const std::string& text) {
  Parser p(text);
  ExprPtr root = p.parse();
  int dim = std::max(1, max_axis(root) + 1);
  return ScalarField(root, dim);
}

// ---- derivative evaluator ----------------------------------------------------

DerivativeEvaluator::DerivativeEvaluator(ScalarField f, MultiIndex alpha)
    : f_(std::move(f)), alpha_(alpha) {
  if (!f_.is_smooth() && alpha.order() > 0)
    throw std::runtime_error("derivative of a measurable-only field");
  if (alpha.order() > kMaxDerivativeOrder)
    throw std::invalid_argument("derivative order exceeds the configured maximum");
}

double DerivativeEvaluator::operator()(const Vec& x) const {
  if (alpha_.order() == 0) return f_(x);
  return f_.jet(x, alpha_.order()).derivative(alpha_);
}

double DerivativeEvaluator::operator()(double x) const {
  Vec v(1);
  v << x;
  return (*this)(v);
}

DerivativeEvaluator derivative(const ScalarField& f, const MultiIndex& alpha) {
  return DerivativeEvaluator(f, alpha);
}

// ---- presets ----------------------------------------------------------------

WeightInfo preset_weight(const std::string& name, double param) {
  if (name == "gaussian") return {parse_expression("exp(-x^2/2)"), false};
  if (name == "gaussian_nd") return {parse_expression("exp(-x^2)"), false};
  if (name == "exotic")
    return {parse_expression("exp(-sqrt(x^6+cos(x)+2))*floor(x^2+2)"), false};
  if (name == "laguerre") {
    double alpha = param;
    if (alpha <= -1.0) throw std::invalid_argument("laguerre weight requires alpha > -1");
    std::ostringstream os;
    os.precision(17);
    os << "exp(-x/2)*x^(" << alpha / 2.0 << ")";
    return {parse_expression(os.str()), alpha < 0.0};
  }
  if (name == "vanishing_gaussian") {
    // e^{-x^2/2} times a smooth factor that is identically zero on [0,1]
    auto edge = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    auto eval = [edge](const Vec& x) {
      double t = x(0);
      return std::exp(-t * t / 2.0) * (edge(t - 1.0) + edge(-t));
    };
    // smooth but without a jet rule; admitted to L_p pipelines only
    return {builtin_field("vanishing_gaussian", 1, eval, nullptr, Smoothness::Smooth), false};
  }
  throw std::invalid_argument("unknown preset weight '" + name + "'");
}

// ---- MapPhi -----------------------------------------------------------------

MapPhi::MapPhi(std::vector<ScalarField> components, SampleCheckRecord check)
    : components_(std::move(components)), check_(std::move(check)) {}

Vec MapPhi::operator()(const Vec& x) const {
  Vec y(dim());
  for (int j = 0; j < dim(); ++j) y(j) = components_[static_cast<size_t>(j)](x);
  return y;
}

namespace {

SampleCheckRecord check_1d_monotone(const ScalarField& f, double lo, double hi, int count) {
  SampleCheckRecord rec;
  rec.samples = count;
  double prev = f(lo);
  double x_prev = lo;
  int dir = 0;
  for (int i = 1; i < count; ++i) {
    double x = lo + (hi - lo) * i / (count - 1);
    double v = f(x);
    if (v == prev) {
      rec.failure = "not strictly monotone between x=" + std::to_string(x_prev) +
                    " and x=" + std::to_string(x);
      return rec;
    }
    int d = v > prev ? 1 : -1;
    if (dir == 0)
      dir = d;
    else if (d != dir) {
      rec.failure = "monotonicity flips between x=" + std::to_string(x_prev) +
                    " and x=" + std::to_string(x);
      return rec;
    }
    prev = v;
    x_prev = x;
  }
  rec.passed = true;
  return rec;
}

SampleCheckRecord check_2d_jacobian(const std::vector<ScalarField>& comp, double lo, double hi,
                                    int count) {
  SampleCheckRecord rec;
  rec.samples = count;
  int side = static_cast<int>(std::sqrt(static_cast<double>(count)));
  int sign = 0;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      Vec x(2);
      x << lo + (hi - lo) * i / (side - 1), lo + (hi - lo) * j / (side - 1);
      Jet<double> j0 = comp[0].jet(x, 1);
      Jet<double> j1 = comp[1].jet(x, 1);
      double det = j0.derivative(MultiIndex(1, 0)) * j1.derivative(MultiIndex(0, 1)) -
                   j0.derivative(MultiIndex(0, 1)) * j1.derivative(MultiIndex(1, 0));
      if (det == 0.0) {
        rec.failure = "Jacobian vanishes at (" + std::to_string(x(0)) + "," +
                      std::to_string(x(1)) + ")";
        return rec;
      }
      int s = det > 0 ? 1 : -1;
      if (sign == 0)
        sign = s;
      else if (s != sign) {
        rec.failure = "Jacobian sign flips at (" + std::to_string(x(0)) + "," +
                      std::to_string(x(1)) + ")";
        return rec;
      }
    }
  rec.passed = true;
  return rec;
}

}  // namespace

MapPhi make_phi(const PhiSpec& spec) {
  std::vector<ScalarField> comp;
  if (!spec.preset.empty()) {
    if (spec.preset == "identity") {
      for (int j = 0; j < spec.dim; ++j) comp.push_back(coordinate_field(j, spec.dim));
    } else if (spec.preset == "affine") {
      if (spec.a == 0.0) throw std::invalid_argument("affine map requires a != 0");
      std::ostringstream os;
      os.precision(17);
      os << spec.a << "*x+(" << spec.b << ")";
      comp.push_back(parse_expression(os.str()));
    } else if (spec.preset == "sinh") {
      comp.push_back(parse_expression("sinh(x)"));
    } else if (spec.preset == "cubic") {
      comp.push_back(parse_expression("x+x^3"));
    } else {
      throw std::invalid_argument("unknown phi preset '" + spec.preset + "'");
    }
  } else {
    for (const auto& text : spec.custom) comp.push_back(parse_expression(text));
  }
  if (comp.empty()) throw std::invalid_argument("phi has no components");

  SampleCheckRecord rec;
  if (comp.size() == 1) {
    rec = check_1d_monotone(comp[0], spec.sample_lo, spec.sample_hi, spec.sample_count);
  } else if (comp.size() == 2) {
    rec = check_2d_jacobian(comp, spec.sample_lo, spec.sample_hi, spec.sample_count);
  } else {
    throw std::invalid_argument("phi supports at most 2 components");
  }
  if (!rec.passed) throw std::invalid_argument("phi sample check failed: " + rec.failure);
  return MapPhi(std::move(comp), std::move(rec));
}

// ---- complex frequencies ------------------------------------------------------

ComplexFrequency::ComplexFrequency(Complex l, double eps) : lambda(1), strip(eps) {
  lambda(0) = l;
}

ComplexFrequency::ComplexFrequency(Eigen::VectorXcd l, double eps)
    : lambda(std::move(l)), strip(eps) {}

void ComplexFrequency::validate() const {
  if (!(im_norm() < strip))
    throw std::invalid_argument("frequency outside the strip ||Im lambda|| < epsilon");
}

Complex eval_exponential(const ComplexFrequency& lambda, const MapPhi& phi,
                         const ScalarField& f0, const Vec& x) {
  lambda.validate();
  Vec y = phi(x);
  Complex pairing(0.0, 0.0);
  for (int j = 0; j < lambda.dim(); ++j) pairing += lambda.lambda(j) * y(j);
  return std::exp(Complex(0.0, -1.0) * pairing) * f0(x);
}

Jet<Complex> eval_exponential_jet(const Eigen::VectorXcd& lambda, const MapPhi& phi,
                                  const ScalarField& f0, const Vec& x, int order) {
  int dim = f0.dim();
  Jet<Complex> pairing(dim, order, Complex(0.0));
  for (int j = 0; j < lambda.size(); ++j)
    pairing += lambda(j) * complexify(phi.component(j).jet(x, order));
  Jet<Complex> tilt = exp(Complex(0.0, -1.0) * pairing);
  return tilt * complexify(f0.jet(x, order));
}

}  // namespace denslab
