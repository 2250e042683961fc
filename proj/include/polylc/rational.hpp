#pragma once
#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace polylc {

// gmpxx keeps mpq values canonical (gcd 1, positive denominator) after every
// arithmetic operation; construction from strings goes through parse_rational.
using Integer = mpz_class;
using Rational = mpq_class;

using Point = std::vector<Rational>;
using IntVec = std::vector<Integer>;
using RatMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<Integer>>;

Rational rat(long p, long q = 1);
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);
std::string to_string(const Point& p);

Integer lcm(const Integer& a, const Integer& b);
Integer gcd(const Integer& a, const Integer& b);
// least common multiple of the denominators
Integer common_denominator(const Point& p);

std::size_t hash_value(const Rational& r);
std::size_t hash_value(const Integer& z);
std::size_t hash_value(const Point& p);
std::size_t hash_value(const IntVec& p);

inline void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

template <class T>
struct VecHash {
  std::size_t operator()(const std::vector<T>& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) hash_mix(h, std::hash<T>{}(x));
    return h;
  }
};

struct PointHash {
  std::size_t operator()(const Point& p) const { return hash_value(p); }
};
struct IntVecHash {
  std::size_t operator()(const IntVec& p) const { return hash_value(p); }
};

Point to_point(const IntVec& v, const Integer& denom = 1);
IntVec to_intvec(const std::vector<long>& v);
Point make_point(const std::vector<long>& v, long denom = 1);

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(const Rational& s, const Point& a);
Rational dot(const Point& a, const Point& b);

}  // namespace polylc
