#pragma once

// Truncated multivariate Taylor expansions ("jets") in one or two variables.
// A Jet<S> stores the coefficients of a Taylor polynomial of total degree
// <= order around some point; arithmetic on jets propagates derivatives
// exactly (forward mode). S is double or std::complex<double>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace denslab {

// Multi-index for n <= 2. For n == 1 the second entry is zero.
struct MultiIndex {
  std::array<int, 2> a{0, 0};

  MultiIndex() = default;
  MultiIndex(int a0) : a{a0, 0} {}
  MultiIndex(int a0, int a1) : a{a0, a1} {}

  int order() const { return a[0] + a[1]; }
  int operator[](int i) const { return a[static_cast<size_t>(i)]; }
  bool operator==(const MultiIndex& o) const { return a == o.a; }
};

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double multi_factorial(const MultiIndex& m) {
  return factorial(m[0]) * factorial(m[1]);
}

// binomial(n, k) as a double
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <typename S>
class Jet {
 public:
  Jet() : dim_(1), order_(0), c_(1, S(0)) {}

  Jet(int dim, int order, S constant = S(0))
      : dim_(dim), order_(order), c_(size_for(dim, order), S(0)) {
    if (dim < 1 || dim > 2) throw std::invalid_argument("Jet: dim must be 1 or 2");
    if (order < 0) throw std::invalid_argument("Jet: negative order");
    c_[0] = constant;
  }

  static Jet constant(int dim, int order, S value) { return Jet(dim, order, value); }

  // Jet of the coordinate function x_axis around the point value.
  static Jet variable(int dim, int order, int axis, S value) {
    Jet j(dim, order, value);
    if (axis < 0 || axis >= dim) throw std::invalid_argument("Jet: axis out of range");
    if (order >= 1) j.at(axis == 0 ? MultiIndex(1, 0) : MultiIndex(0, 1)) = S(1);
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }

  S value() const { return c_[0]; }

  S& at(const MultiIndex& m) { return c_[index(m)]; }
  const S& at(const MultiIndex& m) const { return c_[index(m)]; }

  // D^m f at the expansion point: coefficient times m!.
  S derivative(const MultiIndex& m) const {
    if (m.order() > order_) throw std::out_of_range("Jet: derivative order exceeds jet order");
    return at(m) * S(multi_factorial(m));
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    check_compatible(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_compatible(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(const S& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const S& s) { return a *= s; }
  friend Jet operator*(const S& s, Jet a) { return a *= s; }

  friend Jet operator+(Jet a, const S& s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(const S& s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, const S& s) {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator-(const S& s, Jet a) { return (-a) + s; }

  // Truncated Cauchy product.
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet r(a.dim_, a.order_);
    if (a.dim_ == 1) {
      for (int i = 0; i <= a.order_; ++i)
        for (int j = 0; i + j <= a.order_; ++j)
          r.c_[static_cast<size_t>(i + j)] += a.c_[static_cast<size_t>(i)] * b.c_[static_cast<size_t>(j)];
    } else {
      for (int i0 = 0; i0 <= a.order_; ++i0)
        for (int i1 = 0; i0 + i1 <= a.order_; ++i1) {
          S av = a.at(MultiIndex(i0, i1));
          if (av == S(0)) continue;
          for (int j0 = 0; i0 + i1 + j0 <= a.order_; ++j0)
            for (int j1 = 0; i0 + i1 + j0 + j1 <= a.order_; ++j1)
              r.at(MultiIndex(i0 + j0, i1 + j1)) += av * b.at(MultiIndex(j0, j1));
        }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(const Jet& a, const S& s) { return a * (S(1) / s); }
  friend Jet operator/(const S& s, const Jet& b) { return reciprocal(b) * s; }

  // f applied to this jet, given the derivative values f^(k) at value().
  // derivs[k] = f^(k)(value()), k = 0..order.
  Jet compose(const std::vector<S>& derivs) const {
    Jet h = *this;
    h.c_[0] = S(0);  // the non-constant part
    Jet r(dim_, order_, derivs[0]);
    Jet hp(dim_, order_, S(1));  // h^k, built incrementally
    for (int k = 1; k <= order_; ++k) {
      hp = hp * h;
      r += hp * (derivs[static_cast<size_t>(k)] / S(factorial(k)));
    }
    return r;
  }

  static size_t size_for(int dim, int order) {
    return dim == 1 ? static_cast<size_t>(order + 1)
                    : static_cast<size_t>((order + 1) * (order + 2) / 2);
  }

 private:
  size_t index(const MultiIndex& m) const {
    if (dim_ == 1) return static_cast<size_t>(m[0]);
    // rows by total degree d = i+j, position within row by j
    int d = m.order();
    return static_cast<size_t>(d * (d + 1) / 2 + m[1]);
  }

  void check_compatible(const Jet& o) const {
    if (dim_ != o.dim_ || order_ != o.order_)
      throw std::invalid_argument("Jet: incompatible dims/orders");
  }

  int dim_;
  int order_;
  std::vector<S> c_;
};

// ---- analytic functions on jets -------------------------------------------

namespace jet_detail {

template <typename S>
std::vector<S> cyclic4(S d0, S d1, S d2, S d3, int order) {
  std::vector<S> d(static_cast<size_t>(order) + 1);
  const S cyc[4] = {d0, d1, d2, d3};
  for (int k = 0; k <= order; ++k) d[static_cast<size_t>(k)] = cyc[k % 4];
  return d;
}

}  // namespace jet_detail

template <typename S>
Jet<S> exp(const Jet<S>& x) {
  using std::exp;
  S e = exp(x.value());
  std::vector<S> d(static_cast<size_t>(x.order()) + 1, e);
  return x.compose(d);
}

template <typename S>
Jet<S> log(const Jet<S>& x) {
  using std::log;
  std::vector<S> d(static_cast<size_t>(x.order()) + 1);
  d[0] = log(x.value());
  S inv = S(1) / x.value();
  S p = inv;
  double sign = 1.0;
  for (int k = 1; k <= x.order(); ++k) {
    d[static_cast<size_t>(k)] = S(sign * factorial(k - 1)) * p;
    p *= inv;
    sign = -sign;
  }
  return x.compose(d);
}

// x^a for constant real exponent a; requires a strictly positive base
// unless the caller has reduced to an integer power.
template <typename S>
Jet<S> pow(const Jet<S>& x, double a) {
  using std::pow;
  std::vector<S> d(static_cast<size_t>(x.order()) + 1);
  S v = x.value();
  double coef = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    d[static_cast<size_t>(k)] = S(coef) * pow(v, S(a - k));
    coef *= (a - k);
  }
  return x.compose(d);
}

template <typename S>
Jet<S> reciprocal(const Jet<S>& x) {
  std::vector<S> d(static_cast<size_t>(x.order()) + 1);
  S inv = S(1) / x.value();
  S p = inv;
  double coef = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    d[static_cast<size_t>(k)] = S(coef) * p;
    p *= inv;
    coef *= -(k + 1);
  }
  return x.compose(d);
}

// Integer power by repeated multiplication; valid for any base value.
template <typename S>
Jet<S> ipow(const Jet<S>& x, long n) {
  if (n < 0) return reciprocal(ipow(x, -n));
  Jet<S> r(x.dim(), x.order(), S(1));
  Jet<S> b = x;
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

template <typename S>
Jet<S> sqrt(const Jet<S>& x) {
  return pow(x, 0.5);
}

template <typename S>
Jet<S> sin(const Jet<S>& x) {
  using std::cos;
  using std::sin;
  S s = sin(x.value()), c = cos(x.value());
  return x.compose(jet_detail::cyclic4<S>(s, c, -s, -c, x.order()));
}

template <typename S>
Jet<S> cos(const Jet<S>& x) {
  using std::cos;
  using std::sin;
  S s = sin(x.value()), c = cos(x.value());
  return x.compose(jet_detail::cyclic4<S>(c, -s, -c, s, x.order()));
}

template <typename S>
Jet<S> sinh(const Jet<S>& x) {
  using std::cosh;
  using std::sinh;
  S s = sinh(x.value()), c = cosh(x.value());
  std::vector<S> d(static_cast<size_t>(x.order()) + 1);
  for (int k = 0; k <= x.order(); ++k) d[static_cast<size_t>(k)] = (k % 2 == 0) ? s : c;
  return x.compose(d);
}

template <typename S>
Jet<S> cosh(const Jet<S>& x) {
  using std::cosh;
  using std::sinh;
  S s = sinh(x.value()), c = cosh(x.value());
  std::vector<S> d(static_cast<size_t>(x.order()) + 1);
  for (int k = 0; k <= x.order(); ++k) d[static_cast<size_t>(k)] = (k % 2 == 0) ? c : s;
  return x.compose(d);
}

// Promote a real jet to a complex one.
inline Jet<std::complex<double>> complexify(const Jet<double>& x) {
  Jet<std::complex<double>> r(x.dim(), x.order());
  if (x.dim() == 1) {
    for (int i = 0; i <= x.order(); ++i) r.at(MultiIndex(i)) = x.at(MultiIndex(i));
  } else {
    for (int i = 0; i <= x.order(); ++i)
      for (int j = 0; i + j <= x.order(); ++j)
        r.at(MultiIndex(i, j)) = x.at(MultiIndex(i, j));
  }
  return r;
}

}  // namespace denslab
