// Second-order jets of functions of one real variable: value, first and
// second derivative, propagated through arithmetic by the chain rule.
#pragma once

#include <cmath>
#include <complex>

namespace fio {

template <class T>
struct Jet {
  T v{};
  T d1{};
  T d2{};

  static Jet constant(T c) { return {c, T{}, T{}}; }
  static Jet variable(T x) { return {x, T{1}, T{}}; }

  template <class U>
  Jet<U> as() const {
    return {U(v), U(d1), U(d2)};
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
  Jet& operator*=(T c) {
    v *= c;
    d1 *= c;
    d2 *= c;
    return *this;
  }
};

template <class T>
Jet<T> operator+(Jet<T> a, const Jet<T>& b) { return a += b; }
template <class T>
Jet<T> operator-(Jet<T> a, const Jet<T>& b) { return a -= b; }
template <class T>
Jet<T> operator*(Jet<T> a, T c) { return a *= c; }
template <class T>
Jet<T> operator*(T c, Jet<T> a) { return a *= c; }

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + T{2} * a.d1 * b.d1 + a.v * b.d2};
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  const T q = a.v / b.v;
  const T q1 = (a.d1 - q * b.d1) / b.v;
  const T q2 = (a.d2 - T{2} * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  const T e = exp(a.v);
  return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}

/// Composition f(g(t)) where (f, f', f'') is given at g(t).
template <class T, class U>
Jet<T> compose(const Jet<U>& g, T f, T f1, T f2) {
  return {f, f1 * T(g.d1), f2 * T(g.d1) * T(g.d1) + f1 * T(g.d2)};
}

}  // namespace fio
