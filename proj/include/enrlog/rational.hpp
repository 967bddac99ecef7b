#pragma once

// Exact rational arithmetic plus a point at infinity, used for metric
// distances. No floating point anywhere in the engine.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace enrlog {

struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0, gcd(|num|, den) == 1

  constexpr Rat() = default;
  Rat(std::int64_t n) : num(n), den(1) {}
  Rat(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
  friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
  friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
  friend Rat operator/(Rat a, Rat b) {
    if (b.num == 0) throw std::invalid_argument("rational division by zero");
    return Rat(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.num * b.den <= b.num * a.den; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

// A distance value: a nonnegative rational or infinity. Addition and
// comparison treat infinity as absorbing.
struct Dist {
  bool inf = false;
  Rat q;

  constexpr Dist() = default;
  Dist(Rat r) : inf(false), q(r) {}
  Dist(std::int64_t n) : inf(false), q(n) {}
  static Dist infinity() {
    Dist d;
    d.inf = true;
    return d;
  }

  friend Dist operator+(const Dist& a, const Dist& b) {
    if (a.inf || b.inf) return infinity();
    return Dist(a.q + b.q);
  }
  friend bool operator==(const Dist& a, const Dist& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.q == b.q;
  }
  friend bool operator!=(const Dist& a, const Dist& b) { return !(a == b); }
  friend bool operator<(const Dist& a, const Dist& b) {
    if (a.inf) return false;
    if (b.inf) return true;
    return a.q < b.q;
  }
  friend bool operator<=(const Dist& a, const Dist& b) { return a < b || a == b; }
  friend bool operator>(const Dist& a, const Dist& b) { return b < a; }
  friend bool operator>=(const Dist& a, const Dist& b) { return b <= a; }

  std::string str() const { return inf ? "inf" : q.str(); }
};

inline Dist dist_min(const Dist& a, const Dist& b) { return a <= b ? a : b; }
inline Dist dist_max(const Dist& a, const Dist& b) { return a <= b ? b : a; }

}  // namespace enrlog
