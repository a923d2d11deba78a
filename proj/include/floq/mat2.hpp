#pragma once

#include <algorithm>
#include <complex>

namespace floq {

using cplx = std::complex<double>;

struct vec2 {
  cplx x{}, y{};
};

struct mat2 {
  cplx a11{}, a12{}, a21{}, a22{};

  static mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

inline mat2 operator*(const mat2& a, const mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

inline vec2 operator*(const mat2& m, const vec2& u) {
  return {m.a11 * u.x + m.a12 * u.y, m.a21 * u.x + m.a22 * u.y};
}

inline cplx det(const mat2& m) { return m.a11 * m.a22 - m.a12 * m.a21; }
inline cplx trace(const mat2& m) { return m.a11 + m.a22; }

inline double norm_max(const mat2& m) {
  return std::max(std::max(std::abs(m.a11), std::abs(m.a12)),
                  std::max(std::abs(m.a21), std::abs(m.a22)));
}

// determinant of the column pair (u | v)
inline cplx det2(const vec2& u, const vec2& v) { return u.x * v.y - u.y * v.x; }

inline mat2 mat_pow(mat2 b, unsigned n) {
  mat2 r = mat2::identity();
  while (n) {
    if (n & 1u) r = r * b;
    n >>= 1u;
    if (n) b = b * b;
  }
  return r;
}

inline cplx pow_int(cplx b, unsigned n) {
  cplx r = 1.0;
  while (n) {
    if (n & 1u) r = r * b;
    n >>= 1u;
    if (n) b = b * b;
  }
  return r;
}

}  // namespace floq
