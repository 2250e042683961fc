#include "polylc/rational.hpp"

#include "polylc/errors.hpp"

namespace polylc {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotAVertex: return "NotAVertex";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::NotASimplex: return "NotASimplex";
    case ErrorCode::DegeneratePolytope: return "DegeneratePolytope";
    case ErrorCode::NotInComplex: return "NotInComplex";
    case ErrorCode::IncompleteStar: return "IncompleteStar";
    case ErrorCode::InvalidComplex: return "InvalidComplex";
    case ErrorCode::EmptyVoxelization: return "EmptyVoxelization";
    case ErrorCode::DisconnectedVoxelization: return "DisconnectedVoxelization";
    case ErrorCode::NotPseudoManifold: return "NotPseudoManifold";
    case ErrorCode::UnknownCellType: return "UnknownCellType";
    case ErrorCode::SmoothnessRequired: return "SmoothnessRequired";
    case ErrorCode::FanNotPolytopal: return "FanNotPolytopal";
    case ErrorCode::InvalidCase: return "InvalidCase";
    case ErrorCode::NerveNotQuadrilateral: return "NerveNotQuadrilateral";
    case ErrorCode::ConeMismatch: return "ConeMismatch";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::NonDisjointBadEdges: return "NonDisjointBadEdges";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InconsistentKind: return "InconsistentKind";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::GenusOne: return "GenusOne";
    case ErrorCode::NotLogCanonicalConfiguration: return "NotLogCanonicalConfiguration";
    case ErrorCode::UnknownRow: return "UnknownRow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Rational rat(long p, long q) {
  if (q == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0)
    throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
  if (r.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }
std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += to_string(p[i]);
  }
  return s + ")";
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer common_denominator(const Point& p) {
  Integer d = 1;
  for (const auto& x : p) d = lcm(d, x.get_den());
  return d;
}

std::size_t hash_value(const Integer& z) {
  // low limb plus sign/size is plenty for hashing
  std::size_t h = static_cast<std::size_t>(mpz_size(z.get_mpz_t()));
  if (mpz_size(z.get_mpz_t()) > 0) hash_mix(h, static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), 0)));
  hash_mix(h, static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1));
  return h;
}

std::size_t hash_value(const Rational& r) {
  std::size_t h = hash_value(r.get_num());
  hash_mix(h, hash_value(r.get_den()));
  return h;
}

std::size_t hash_value(const Point& p) {
  std::size_t h = p.size();
  for (const auto& x : p) hash_mix(h, hash_value(x));
  return h;
}

std::size_t hash_value(const IntVec& p) {
  std::size_t h = p.size();
  for (const auto& x : p) hash_mix(h, hash_value(x));
  return h;
}

Point to_point(const IntVec& v, const Integer& denom) {
  Point p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    p[i] = Rational(v[i], denom);
    p[i].canonicalize();
  }
  return p;
}

IntVec to_intvec(const std::vector<long>& v) {
  IntVec r;
  r.reserve(v.size());
  for (long x : v) r.emplace_back(x);
  return r;
}

Point make_point(const std::vector<long>& v, long denom) {
  Point p;
  p.reserve(v.size());
  for (long x : v) p.push_back(rat(x, denom));
  return p;
}

Point operator+(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Point operator-(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Point operator*(const Rational& s, const Point& a) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Rational dot(const Point& a, const Point& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace polylc
