#include "polylc/linalg.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "polylc/errors.hpp"

namespace polylc {

std::string AbelianInvariants::str() const {
  if (trivial()) return "0";
  std::string s;
  if (free_rank > 0) s = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
  for (const auto& t : torsion) {
    if (!s.empty()) s += " + ";
    s += "Z/" + to_string(t);
  }
  return s;
}

Integer vec_gcd(const IntVec& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

IntVec primitive_step(const IntVec& v) {
  Integer g = vec_gcd(v);
  if (g == 0) throw Error(ErrorCode::ZeroVector, "primitive step of the zero vector");
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
  return r;
}

Integer determinant(IntMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t sw = k + 1;
      while (sw < n && m[sw][k] == 0) ++sw;
      if (sw == n) return 0;
      std::swap(m[k], m[sw]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

Rational determinant(const RatMatrix& m) {
  std::size_t n = m.size();
  RatMatrix a = m;
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

namespace {

// reduced row echelon form in place; returns pivot columns
std::vector<std::size_t> rref(RatMatrix& a, std::size_t ncols) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < ncols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < ncols; ++j) a[i][j] -= f * a[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

}  // namespace

std::size_t rank(RatMatrix m) {
  if (m.empty()) return 0;
  std::size_t nc = m[0].size();
  return rref(m, nc).size();
}

std::size_t rank(const IntMatrix& m) {
  RatMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& x : m[i]) r[i].emplace_back(x);
  return rank(r);
}

std::optional<std::vector<Rational>> solve_linear(const RatMatrix& A, const std::vector<Rational>& b) {
  std::size_t n = A.empty() ? 0 : A[0].size();
  RatMatrix aug(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    aug[i] = A[i];
    aug[i].push_back(b[i]);
  }
  auto piv = rref(aug, n + 1);
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t k = 0; k < piv.size(); ++k) {
    if (piv[k] == n) return std::nullopt;
    x[piv[k]] = aug[k][n];
  }
  return x;
}

RatMatrix rational_kernel(const RatMatrix& A) {
  if (A.empty()) return {};
  std::size_t n = A[0].size();
  RatMatrix a = A;
  auto piv = rref(a, n);
  std::vector<bool> is_piv(n, false);
  for (auto c : piv) is_piv[c] = true;
  RatMatrix ker;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<Rational> v(n, Rational(0));
    v[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -a[k][f];
    ker.push_back(v);
  }
  return ker;
}

RatMatrix inverse(const RatMatrix& A) {
  std::size_t n = A.size();
  RatMatrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = A[i];
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? Rational(1) : Rational(0));
  }
  auto piv = rref(aug, 2 * n);
  if (piv.size() < n || piv[n - 1] != n - 1) throw Error(ErrorCode::InvalidArgument, "singular matrix");
  RatMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i].assign(aug[i].begin() + n, aug[i].end());
  return inv;
}

RatMatrix transpose(const RatMatrix& A) {
  if (A.empty()) return {};
  RatMatrix t(A[0].size(), std::vector<Rational>(A.size()));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A[i].size(); ++j) t[j][i] = A[i][j];
  return t;
}

RatMatrix multiply(const RatMatrix& A, const RatMatrix& B) {
  std::size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
  RatMatrix C(n, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (A[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
    }
  return C;
}

std::vector<Rational> apply(const RatMatrix& A, const std::vector<Rational>& x) {
  std::vector<Rational> y(A.size(), Rational(0));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (A[i][j] != 0) y[i] += A[i][j] * x[j];
  return y;
}

IntMatrix integer_kernel(const IntMatrix& Ain, std::size_t n) {
  IntMatrix A = Ain;
  const std::size_t m = A.size();
  IntMatrix U(n, IntVec(n, Integer(0)));  // U[j] = column j of the transform
  for (std::size_t j = 0; j < n; ++j) U[j][j] = 1;
  auto colop = [&](std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t i = 0; i < m; ++i) A[i][dst] -= q * A[i][src];
    for (std::size_t i = 0; i < n; ++i) U[dst][i] -= q * U[src][i];
  };
  auto colswap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(A[i][a], A[i][b]);
    std::swap(U[a], U[b]);
  };
  std::size_t p = 0;
  for (std::size_t i = 0; i < m && p < n; ++i) {
    while (true) {
      std::size_t best = n;
      for (std::size_t j = p; j < n; ++j)
        if (A[i][j] != 0 && (best == n || abs(A[i][j]) < abs(A[i][best]))) best = j;
      if (best == n) break;
      colswap(p, best);
      bool done = true;
      for (std::size_t j = p + 1; j < n; ++j) {
        if (A[i][j] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A[i][j].get_mpz_t(), A[i][p].get_mpz_t());
        colop(j, p, q);
        if (A[i][j] != 0) done = false;
      }
      if (done) {
        ++p;
        break;
      }
    }
  }
  IntMatrix ker(U.begin() + p, U.end());
  return ker;
}

IntMatrix hermite_normal_form(IntMatrix a, std::size_t n) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < a.size(); ++c) {
    while (true) {
      std::size_t best = a.size();
      for (std::size_t i = r; i < a.size(); ++i)
        if (a[i][c] != 0 && (best == a.size() || abs(a[i][c]) < abs(a[best][c]))) best = i;
      if (best == a.size()) goto next_col;
      std::swap(a[r], a[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < a.size(); ++i) {
        if (a[i][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
        for (std::size_t j = c; j < n; ++j) a[i][j] -= q * a[r][j];
        if (a[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (a[r][c] < 0)
      for (auto& x : a[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
      if (q != 0)
        for (std::size_t j = c; j < n; ++j) a[i][j] -= q * a[r][j];
    }
    ++r;
  next_col:;
  }
  a.resize(r);
  return a;
}

IntMatrix saturation(const IntMatrix& rows, std::size_t n) {
  IntMatrix perp = integer_kernel(rows, n);  // basis of the orthogonal complement
  IntMatrix sat = integer_kernel(perp, n);
  return hermite_normal_form(sat, n);
}

std::vector<Integer> elementary_divisors(IntMatrix a) {
  std::vector<Integer> diag;
  std::size_t m = a.size(), n = m ? a[0].size() : 0;
  std::size_t t = 0;
  while (t < m && t < n) {
    // smallest nonzero entry in the remaining block
    std::size_t bi = m, bj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (bi == m || abs(a[i][j]) < abs(a[bi][bj]))) {
          bi = i;
          bj = j;
        }
    if (bi == m) break;
    std::swap(a[t], a[bi]);
    for (std::size_t i = 0; i < m; ++i) std::swap(a[i][t], a[i][bj]);
    bool clean = true;
    for (std::size_t i = t + 1; i < m; ++i) {
      if (a[i][t] == 0) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
      for (std::size_t j = t; j < n; ++j) a[i][j] -= q * a[t][j];
      if (a[i][t] != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (a[t][j] == 0) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
      for (std::size_t i = t; i < m; ++i) a[i][j] -= q * a[i][t];
      if (a[t][j] != 0) clean = false;
    }
    if (!clean) continue;
    // divisibility: pivot must divide the rest of the block
    bool divides = true;
    for (std::size_t i = t + 1; i < m && divides; ++i)
      for (std::size_t j = t + 1; j < n; ++j)
        if (a[i][j] % a[t][t] != 0) {
          for (std::size_t k = t; k < n; ++k) a[t][k] += a[i][k];
          divides = false;
          break;
        }
    if (!divides) continue;
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  return diag;
}

bool is_saturated_basis(const IntMatrix& rows) {
  if (rows.empty()) return true;
  auto d = elementary_divisors(rows);
  if (d.size() != rows.size()) return false;
  for (const auto& x : d)
    if (x != 1) return false;
  return true;
}

AbelianInvariants smith_normal_form(const IntMatrix& m, std::size_t ncols) {
  AbelianInvariants r;
  auto d = elementary_divisors(m);
  r.free_rank = ncols - d.size();
  for (const auto& x : d)
    if (x >= 2) r.torsion.push_back(x);
  return r;
}

AbelianInvariants smith_normal_form(const IntMatrix& m) {
  return smith_normal_form(m, m.empty() ? 0 : m[0].size());
}

namespace {

using Row = std::vector<std::pair<std::uint32_t, long>>;

long checked_muladd(long a, long f, long b) {  // a - f*b
  long p, r;
  if (__builtin_mul_overflow(f, b, &p) || __builtin_sub_overflow(a, p, &r))
    throw Error(ErrorCode::InvalidArgument, "integer overflow in sparse elimination");
  return r;
}

}  // namespace

AbelianInvariants sparse_cokernel(const SparseRelations& in) {
  const std::size_t nc = in.ncols;
  std::vector<Row> rows = in.rows;
  std::vector<char> row_alive(rows.size(), 1);
  std::vector<char> col_alive(nc, 1);
  std::vector<std::vector<std::uint32_t>> col_rows(nc);
  std::vector<std::uint32_t> col_count(nc, 0);
  for (std::uint32_t r = 0; r < rows.size(); ++r) {
    Row clean;
    for (auto& e : rows[r])
      if (e.second != 0) clean.push_back(e);
    std::sort(clean.begin(), clean.end());
    // merge duplicate columns
    Row merged;
    for (auto& e : clean) {
      if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
      else merged.push_back(e);
    }
    rows[r].clear();
    for (auto& e : merged)
      if (e.second != 0) rows[r].push_back(e);
    for (auto& e : rows[r]) {
      col_rows[e.first].push_back(r);
      ++col_count[e.first];
    }
  }
  using Key = std::pair<std::size_t, std::uint32_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
  for (std::uint32_t r = 0; r < rows.size(); ++r)
    if (!rows[r].empty()) heap.push({rows[r].size(), r});
    else row_alive[r] = 0;
  std::size_t unit_rank = 0;
  Row tmp;
  while (!heap.empty()) {
    auto [len, r] = heap.top();
    heap.pop();
    if (!row_alive[r] || rows[r].size() != len) continue;
    // unit entry in the sparsest column
    std::size_t best = rows[r].size();
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      auto& e = rows[r][k];
      if (e.second != 1 && e.second != -1) continue;
      if (best == rows[r].size() || col_count[e.first] < col_count[rows[r][best].first]) best = k;
    }
    if (best == rows[r].size()) continue;  // stuck until modified
    const std::uint32_t pc = rows[r][best].first;
    const long pv = rows[r][best].second;
    Row prow = rows[r];
    for (std::uint32_t other : col_rows[pc]) {
      if (other == r || !row_alive[other]) continue;
      auto& orow = rows[other];
      auto it = std::lower_bound(orow.begin(), orow.end(), std::make_pair(pc, std::numeric_limits<long>::min()));
      if (it == orow.end() || it->first != pc) continue;
      long f = it->second * pv;  // pv = ±1 so a/pv = a*pv
      tmp.clear();
      std::size_t i = 0, j = 0;
      while (i < orow.size() || j < prow.size()) {
        if (j == prow.size() || (i < orow.size() && orow[i].first < prow[j].first)) {
          tmp.push_back(orow[i++]);
        } else if (i == orow.size() || prow[j].first < orow[i].first) {
          long v = checked_muladd(0, f, prow[j].second);
          tmp.push_back({prow[j].first, v});
          col_rows[prow[j].first].push_back(other);
          ++col_count[prow[j].first];
          ++j;
        } else {
          long v = checked_muladd(orow[i].second, f, prow[j].second);
          if (v != 0) tmp.push_back({orow[i].first, v});
          else --col_count[orow[i].first];
          ++i;
          ++j;
        }
      }
      orow.swap(tmp);
      if (orow.empty()) row_alive[other] = 0;
      else heap.push({orow.size(), other});
    }
    for (auto& e : prow) --col_count[e.first];
    row_alive[r] = 0;
    col_alive[pc] = 0;
    col_rows[pc].clear();
    ++unit_rank;
  }
  // dense remainder
  std::vector<std::uint32_t> cols;
  std::vector<long> colpos(nc, -1);
  for (std::uint32_t c = 0; c < nc; ++c)
    if (col_alive[c]) {
      colpos[c] = static_cast<long>(cols.size());
      cols.push_back(c);
    }
  IntMatrix dense;
  for (std::uint32_t r = 0; r < rows.size(); ++r) {
    if (!row_alive[r] || rows[r].empty()) continue;
    IntVec v(cols.size(), Integer(0));
    for (auto& e : rows[r]) v[colpos[e.first]] = Integer(e.second);
    dense.push_back(std::move(v));
  }
  AbelianInvariants res;
  if (dense.size() * cols.size() > 40'000'000)
    throw Error(ErrorCode::InvalidArgument, "dense remainder too large for Smith form");
  auto d = dense.empty() ? std::vector<Integer>{} : elementary_divisors(dense);
  res.free_rank = nc - unit_rank - d.size();
  for (auto& x : d)
    if (x >= 2) res.torsion.push_back(x);
  return res;
}

IntVec scale_to_integer(const std::vector<Rational>& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].get_num() * (den / v[i].get_den());
  Integer g = vec_gcd(r);
  if (g > 1)
    for (auto& x : r) x /= g;
  return r;
}

}  // namespace polylc
