#pragma once

// Small fixed-size 2D vector and matrix types, generic over the scalar so the
// same constitutive code runs on double and on Dual<N>.

#include <cmath>

#include "fpi/dual.hpp"

namespace fpi {

template <class T>
struct Vec2 {
  T x{}, y{};

  Vec2() = default;
  Vec2(T x_, T y_) : x(x_), y(y_) {}
  template <class U>
  explicit Vec2(const Vec2<U>& o) : x(T(o.x)), y(T(o.y)) {}

  T& operator[](int i) { return i == 0 ? x : y; }
  const T& operator[](int i) const { return i == 0 ? x : y; }

  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  Vec2& operator*=(const T& s) {
    x *= s;
    y *= s;
    return *this;
  }
};

template <class T> Vec2<T> operator+(Vec2<T> a, const Vec2<T>& b) { return a += b; }
template <class T> Vec2<T> operator-(Vec2<T> a, const Vec2<T>& b) { return a -= b; }
template <class T> Vec2<T> operator-(const Vec2<T>& a) { return {-a.x, -a.y}; }
template <class T> Vec2<T> operator*(Vec2<T> a, const T& s) { return a *= s; }
template <class T> Vec2<T> operator*(const T& s, Vec2<T> a) { return a *= s; }
template <class T> Vec2<T> operator/(const Vec2<T>& a, const T& s) { return {a.x / s, a.y / s}; }
template <int N> Vec2<Dual<N>> operator*(Vec2<Dual<N>> a, double s) { return a *= Dual<N>(s); }
template <int N> Vec2<Dual<N>> operator*(double s, Vec2<Dual<N>> a) { return a *= Dual<N>(s); }

template <class T> T dot(const Vec2<T>& a, const Vec2<T>& b) { return a.x * b.x + a.y * b.y; }
template <class T> T cross(const Vec2<T>& a, const Vec2<T>& b) { return a.x * b.y - a.y * b.x; }
template <class T> T norm(const Vec2<T>& a) { return sqrt(dot(a, a)); }

// Row-major 2x2: [[xx, xy], [yx, yy]].
template <class T>
struct Mat2 {
  T xx{}, xy{}, yx{}, yy{};

  Mat2() = default;
  Mat2(T a, T b, T c, T d) : xx(a), xy(b), yx(c), yy(d) {}
  template <class U>
  explicit Mat2(const Mat2<U>& o) : xx(T(o.xx)), xy(T(o.xy)), yx(T(o.yx)), yy(T(o.yy)) {}

  static Mat2 identity() { return {T(1.0), T(0.0), T(0.0), T(1.0)}; }
  static Mat2 diag(T a, T b) { return {a, T(0.0), T(0.0), b}; }

  T& operator()(int i, int j) { return i == 0 ? (j == 0 ? xx : xy) : (j == 0 ? yx : yy); }
  const T& operator()(int i, int j) const { return i == 0 ? (j == 0 ? xx : xy) : (j == 0 ? yx : yy); }
  Vec2<T> row(int i) const { return i == 0 ? Vec2<T>{xx, xy} : Vec2<T>{yx, yy}; }
  Vec2<T> col(int j) const { return j == 0 ? Vec2<T>{xx, yx} : Vec2<T>{xy, yy}; }

  Mat2& operator+=(const Mat2& o) {
    xx += o.xx;
    xy += o.xy;
    yx += o.yx;
    yy += o.yy;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    xx -= o.xx;
    xy -= o.xy;
    yx -= o.yx;
    yy -= o.yy;
    return *this;
  }
  Mat2& operator*=(const T& s) {
    xx *= s;
    xy *= s;
    yx *= s;
    yy *= s;
    return *this;
  }
};

template <class T> Mat2<T> operator+(Mat2<T> a, const Mat2<T>& b) { return a += b; }
template <class T> Mat2<T> operator-(Mat2<T> a, const Mat2<T>& b) { return a -= b; }
template <class T> Mat2<T> operator*(Mat2<T> a, const T& s) { return a *= s; }
template <class T> Mat2<T> operator*(const T& s, Mat2<T> a) { return a *= s; }
template <int N> Mat2<Dual<N>> operator*(Mat2<Dual<N>> a, double s) { return a *= Dual<N>(s); }
template <int N> Mat2<Dual<N>> operator*(double s, Mat2<Dual<N>> a) { return a *= Dual<N>(s); }

template <class T>
Mat2<T> operator*(const Mat2<T>& a, const Mat2<T>& b) {
  return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy, a.yx * b.xx + a.yy * b.yx,
          a.yx * b.xy + a.yy * b.yy};
}
template <class T>
Vec2<T> operator*(const Mat2<T>& a, const Vec2<T>& v) {
  return {a.xx * v.x + a.xy * v.y, a.yx * v.x + a.yy * v.y};
}

template <class T> Mat2<T> transpose(const Mat2<T>& a) { return {a.xx, a.yx, a.xy, a.yy}; }
template <class T> T det(const Mat2<T>& a) { return a.xx * a.yy - a.xy * a.yx; }
template <class T> T trace(const Mat2<T>& a) { return a.xx + a.yy; }
template <class T>
Mat2<T> inverse(const Mat2<T>& a) {
  const T inv = T(1.0) / det(a);
  return {a.yy * inv, -a.xy * inv, -a.yx * inv, a.xx * inv};
}
template <class T>
T ddot(const Mat2<T>& a, const Mat2<T>& b) {
  return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}
template <class T>
Mat2<T> sym(const Mat2<T>& a) {
  const T off = T(0.5) * (a.xy + a.yx);
  return {a.xx, off, off, a.yy};
}
template <class T>
Mat2<T> outer(const Vec2<T>& a, const Vec2<T>& b) {
  return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

template <class T>
Vec2<T> lift(const Vec2<double>& v) {
  return {T(v.x), T(v.y)};
}
template <class T>
Mat2<T> lift(const Mat2<double>& m) {
  return {T(m.xx), T(m.xy), T(m.yx), T(m.yy)};
}

using Point = Vec2<double>;

}  // namespace fpi
