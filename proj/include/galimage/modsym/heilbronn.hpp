#pragma once

#include <cmath>
#include <vector>

#include "galimage/modsym/p1.hpp"
#include "galimage/numth/factor.hpp"

namespace galimage::modsym {

enum class HeilbronnKind { cremona, merel };

/// Cremona's Heilbronn matrices of determinant p (p prime).
inline std::vector<Mat2> heilbronn_cremona(u64 p) {
  require(is_prime(p), "heilbronn_cremona: p must be prime");
  if (p == 2) return {{1, 0, 0, 2}, {2, 0, 0, 1}, {2, 1, 0, 1}, {1, 0, 1, 2}};
  const i64 P = static_cast<i64>(p);
  std::vector<Mat2> out{{1, 0, 0, P}};
  for (i64 r = -(P - 1) / 2; r <= (P - 1) / 2; ++r) {
    i64 x1 = P, x2 = -r, y1 = 0, y2 = 1, a = -P, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      const i64 q = std::llround(static_cast<double>(a) / static_cast<double>(b));
      const i64 c = a - b * q;
      a = -b;
      b = c;
      const i64 x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      const i64 y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

/// Merel's set: [a b; c d] with a > b >= 0, d > c >= 0, ad - bc = n.
inline std::vector<Mat2> heilbronn_merel(u64 n) {
  require(n >= 1, "heilbronn_merel: n must be positive");
  const i64 m = static_cast<i64>(n);
  std::vector<Mat2> out;
  for (i64 a = 1; a <= m; ++a) {
    for (i64 d = 1; a + d - 1 <= m; ++d) {
      const i64 bc = a * d - m;
      if (bc < 0) continue;
      for (i64 c = 0; c < d; ++c) {
        if (c == 0) {
          if (bc != 0) continue;
          for (i64 b = 0; b < a; ++b) out.push_back({a, b, 0, d});
        } else if (bc % c == 0 && bc / c < a) {
          out.push_back({a, bc / c, c, d});
        }
      }
    }
  }
  return out;
}

inline std::vector<Mat2> heilbronn(u64 p, HeilbronnKind kind) {
  return kind == HeilbronnKind::cremona ? heilbronn_cremona(p) : heilbronn_merel(p);
}

}  // namespace galimage::modsym
