#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mfx/error.hpp"
#include "mfx/rings.hpp"
#include "mfx/series.hpp"

namespace mfx {

// Row convention throughout: an operator matrix M satisfies
//   Op(basis_i) = sum_j M[i][j] basis_j,
// a form with coordinate row v maps to v*M, and "Op1 then Op2" is M1*M2.
// Kernels of operators are left kernels {v : v*M = 0}.

template <class Ctx>
struct Mat {
  using E = typename Ctx::E;
  Ctx R;
  int rows = 0, cols = 0;
  std::vector<E> a;

  Mat() = default;
  Mat(Ctx ring, int r, int c) : R(std::move(ring)), rows(r), cols(c), a((size_t)r * c, R.zero()) {}

  E& at(int i, int j) { return a[(size_t)i * cols + j]; }
  const E& at(int i, int j) const { return a[(size_t)i * cols + j]; }

  static Mat identity(Ctx ring, int n) {
    Mat m(ring, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = m.R.one();
    return m;
  }

  std::vector<E> row(int i) const { return std::vector<E>(a.begin() + (size_t)i * cols, a.begin() + (size_t)(i + 1) * cols); }
  void set_row(int i, const std::vector<E>& v) {
    require((int)v.size() == cols, errc::internal, "row size");
    std::copy(v.begin(), v.end(), a.begin() + (size_t)i * cols);
  }

  Mat transpose() const {
    Mat t(R, cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : a)
      if (!R.is_zero(v)) return false;
    return true;
  }
  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

using MatQ = Mat<Qq>;
using MatF = Mat<Fq>;

template <class Ctx>
Mat<Ctx> mat_mul(const Mat<Ctx>& A, const Mat<Ctx>& B) {
  require(A.cols == B.rows, errc::internal, "matmul shape");
  Mat<Ctx> C(A.R, A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      if (A.R.is_zero(A.at(i, k))) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = C.R.add(C.at(i, j), A.R.mul(A.at(i, k), B.at(k, j)));
    }
  return C;
}

template <class Ctx>
Mat<Ctx> mat_add(const Mat<Ctx>& A, const Mat<Ctx>& B) {
  require(A.rows == B.rows && A.cols == B.cols, errc::internal, "matadd shape");
  Mat<Ctx> C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = C.R.add(C.a[i], B.a[i]);
  return C;
}

template <class Ctx>
Mat<Ctx> mat_sub(const Mat<Ctx>& A, const Mat<Ctx>& B) {
  require(A.rows == B.rows && A.cols == B.cols, errc::internal, "matsub shape");
  Mat<Ctx> C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = C.R.sub(C.a[i], B.a[i]);
  return C;
}

template <class Ctx>
Mat<Ctx> mat_scale(const Mat<Ctx>& A, const typename Ctx::E& s) {
  Mat<Ctx> C = A;
  for (auto& v : C.a) v = C.R.mul(v, s);
  return C;
}

template <class Ctx>
Mat<Ctx> mat_pow(const Mat<Ctx>& A, unsigned e) {
  require(A.rows == A.cols, errc::internal, "matpow square");
  Mat<Ctx> r = Mat<Ctx>::identity(A.R, A.rows), b = A;
  while (e) {
    if (e & 1) r = mat_mul(r, b);
    b = mat_mul(b, b);
    e >>= 1;
  }
  return r;
}

template <class Ctx>
std::vector<typename Ctx::E> vec_mat(const std::vector<typename Ctx::E>& v, const Mat<Ctx>& M) {
  require((int)v.size() == M.rows, errc::internal, "vec_mat shape");
  std::vector<typename Ctx::E> out(M.cols, M.R.zero());
  for (int i = 0; i < M.rows; ++i) {
    if (M.R.is_zero(v[i])) continue;
    for (int j = 0; j < M.cols; ++j) out[j] = M.R.add(out[j], M.R.mul(v[i], M.at(i, j)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// field elimination (Ctx must be a field: Qq or Fq)

template <class Ctx>
typename Ctx::E field_inv(const Ctx& R, const typename Ctx::E& x);

inline Rat field_inv(const Qq& R, const Rat& x) {
  require(x != 0, errc::non_unit, "division by zero");
  return Rat(1) / x;
}
inline FqElem field_inv(const Fq& R, const FqElem& x) { return R.inv(x); }
inline Int field_inv(const Zpb& R, const Int& x) { return R.inv(x); }

template <class Ctx>
struct Rref {
  Mat<Ctx> r;              // reduced rows (rank of them)
  std::vector<int> pivots; // pivot column per rref row
  Mat<Ctx> T;              // r = T * input (rank x input.rows)
};

template <class Ctx>
Rref<Ctx> rref_t(const Mat<Ctx>& M) {
  int m = M.rows, n = M.cols;
  Mat<Ctx> rows = M;
  Mat<Ctx> T = Mat<Ctx>::identity(M.R, m);
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    int pr = -1;
    for (int i = r; i < m; ++i)
      if (!M.R.is_zero(rows.at(i, c))) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    for (int j = 0; j < n; ++j) std::swap(rows.at(r, j), rows.at(pr, j));
    for (int j = 0; j < m; ++j) std::swap(T.at(r, j), T.at(pr, j));
    auto inv = field_inv(M.R, rows.at(r, c));
    for (int j = 0; j < n; ++j) rows.at(r, j) = M.R.mul(rows.at(r, j), inv);
    for (int j = 0; j < m; ++j) T.at(r, j) = M.R.mul(T.at(r, j), inv);
    for (int i = 0; i < m; ++i) {
      if (i == r || M.R.is_zero(rows.at(i, c))) continue;
      auto f = rows.at(i, c);
      for (int j = 0; j < n; ++j) rows.at(i, j) = M.R.sub(rows.at(i, j), M.R.mul(f, rows.at(r, j)));
      for (int j = 0; j < m; ++j) T.at(i, j) = M.R.sub(T.at(i, j), M.R.mul(f, T.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  Rref<Ctx> out;
  out.pivots = pivots;
  out.r = Mat<Ctx>(M.R, r, n);
  out.T = Mat<Ctx>(M.R, r, m);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) out.r.at(i, j) = rows.at(i, j);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < m; ++j) out.T.at(i, j) = T.at(i, j);
  return out;
}

template <class Ctx>
int rank_of(const Mat<Ctx>& M) {
  return rref_t(M).r.rows;
}

// Coordinates of vec in the row space of the ORIGINAL matrix underlying rr.
// Only the first valid_cols entries of vec are meaningful; all pivots must
// fall inside that window and the residual is checked there only.
template <class Ctx>
std::optional<std::vector<typename Ctx::E>> coords_in(const Rref<Ctx>& rr,
                                                      const std::vector<typename Ctx::E>& vec,
                                                      int valid_cols = -1) {
  const Ctx& R = rr.r.R;
  int n = rr.r.cols;
  int vp = valid_cols < 0 ? n : valid_cols;
  require((int)vec.size() >= vp, errc::precision_too_low, "vector shorter than valid window");
  for (int p : rr.pivots)
    require(p < vp, errc::precision_too_low, "pivot beyond valid window");
  std::vector<typename Ctx::E> v(vec.begin(), vec.begin() + vp);
  std::vector<typename Ctx::E> cs(rr.r.rows, R.zero());
  for (int i = 0; i < rr.r.rows; ++i) {
    auto c = v[rr.pivots[i]];
    cs[i] = c;
    if (R.is_zero(c)) continue;
    for (int j = 0; j < vp; ++j) v[j] = R.sub(v[j], R.mul(c, rr.r.at(i, j)));
  }
  for (int j = 0; j < vp; ++j)
    if (!R.is_zero(v[j])) return std::nullopt;
  // back to original-row coordinates: cs * T
  std::vector<typename Ctx::E> out(rr.T.cols, R.zero());
  for (int i = 0; i < rr.T.rows; ++i) {
    if (R.is_zero(cs[i])) continue;
    for (int j = 0; j < rr.T.cols; ++j) out[j] = R.add(out[j], R.mul(cs[i], rr.T.at(i, j)));
  }
  return out;
}

// basis of {v : v*M = 0}
template <class Ctx>
Mat<Ctx> left_kernel(const Mat<Ctx>& M) {
  auto rr = rref_t(M.transpose());
  // kernel of M^T columns: standard rref nullspace of M^T gives right kernel of M^T = left kernel of M
  // Use free columns of rref(M^T): variables indexed by M.rows
  int n = M.rows;
  const auto& R = rr.r;
  std::vector<int> piv_of_col(n, -1);
  for (int i = 0; i < (int)rr.pivots.size(); ++i) piv_of_col[rr.pivots[i]] = i;
  std::vector<std::vector<typename Ctx::E>> rows;
  for (int c = 0; c < n; ++c) {
    if (piv_of_col[c] >= 0) continue;
    std::vector<typename Ctx::E> v(n, M.R.zero());
    v[c] = M.R.one();
    for (int i = 0; i < R.rows; ++i) v[rr.pivots[i]] = M.R.neg(R.at(i, c));
    rows.push_back(std::move(v));
  }
  Mat<Ctx> K(M.R, (int)rows.size(), n);
  for (int i = 0; i < (int)rows.size(); ++i) K.set_row(i, rows[i]);
  return K;
}

template <class Ctx>
Mat<Ctx> mat_inverse(const Mat<Ctx>& M) {
  require(M.rows == M.cols, errc::internal, "inverse of non-square");
  auto rr = rref_t(M);
  require(rr.r.rows == M.rows, errc::non_unit, "singular matrix");
  return rr.T;  // T * M = I
}

// intersection of two row spaces (bases as matrix rows)
template <class Ctx>
Mat<Ctx> rowspace_intersect(const Mat<Ctx>& A, const Mat<Ctx>& B) {
  require(A.cols == B.cols, errc::internal, "intersect shape");
  Mat<Ctx> stacked(A.R, A.rows + B.rows, A.cols);
  for (int i = 0; i < A.rows; ++i) stacked.set_row(i, A.row(i));
  for (int i = 0; i < B.rows; ++i) stacked.set_row(A.rows + i, B.row(i));
  Mat<Ctx> K = left_kernel(stacked);
  // each kernel row (a | b) gives a*A in the intersection
  Mat<Ctx> cand(A.R, K.rows, A.cols);
  for (int i = 0; i < K.rows; ++i) {
    auto krow = K.row(i);
    std::vector<typename Ctx::E> acoef(krow.begin(), krow.begin() + A.rows);
    cand.set_row(i, vec_mat(acoef, A));
  }
  auto rr = rref_t(cand);
  return rr.r;
}

template <class Ctx>
bool same_rowspace(const Mat<Ctx>& A, const Mat<Ctx>& B) {
  auto ra = rref_t(A), rb = rref_t(B);
  return ra.r == rb.r;
}

// ---------------------------------------------------------------------------
// characteristic polynomial over a field (Hessenberg method)

template <class Ctx>
std::vector<typename Ctx::E> charpoly(const Mat<Ctx>& M) {
  using E = typename Ctx::E;
  const Ctx& R = M.R;
  int n = M.rows;
  require(n == M.cols, errc::internal, "charpoly of non-square");
  Mat<Ctx> H = M;
  // reduce to upper Hessenberg by similarity
  for (int c = 0; c + 2 < n; ++c) {
    int pr = -1;
    for (int i = c + 1; i < n; ++i)
      if (!R.is_zero(H.at(i, c))) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != c + 1) {
      for (int j = 0; j < n; ++j) std::swap(H.at(pr, j), H.at(c + 1, j));
      for (int i = 0; i < n; ++i) std::swap(H.at(i, pr), H.at(i, c + 1));
    }
    E inv = field_inv(R, H.at(c + 1, c));
    for (int i = c + 2; i < n; ++i) {
      if (R.is_zero(H.at(i, c))) continue;
      E f = R.mul(H.at(i, c), inv);
      for (int j = 0; j < n; ++j) H.at(i, j) = R.sub(H.at(i, j), R.mul(f, H.at(c + 1, j)));
      for (int j = 0; j < n; ++j) H.at(j, c + 1) = R.add(H.at(j, c + 1), R.mul(f, H.at(j, i)));
    }
  }
  // p_m via the Hessenberg recurrence
  std::vector<std::vector<E>> p(n + 1);
  p[0] = {R.one()};
  for (int m = 1; m <= n; ++m) {
    // p_m = (x - H[m-1][m-1]) p_{m-1}
    p[m].assign(m + 1, R.zero());
    for (int i = 0; i < m; ++i) {
      p[m][i + 1] = R.add(p[m][i + 1], p[m - 1][i]);
      p[m][i] = R.sub(p[m][i], R.mul(H.at(m - 1, m - 1), p[m - 1][i]));
    }
    E t = R.one();
    for (int i = 1; i < m; ++i) {
      t = R.mul(t, H.at(m - i, m - i - 1));
      E coef = R.mul(t, H.at(m - i - 1, m - 1));
      if (R.is_zero(coef)) continue;
      for (int j = 0; j < m - i; ++j) p[m][j] = R.sub(p[m][j], R.mul(coef, p[m - i - 1][j]));
    }
  }
  return p[n];
}

// ---------------------------------------------------------------------------
// integer lattice algorithms (exact, desk scale)

using ZMat = std::vector<std::vector<Int>>;

struct HnfResult {
  ZMat H;  // row HNF (same shape as input)
  ZMat U;  // unimodular, U * input = H
  int rank = 0;
};

inline HnfResult hnf_with_transform(const ZMat& A) {
  int m = (int)A.size();
  int n = m ? (int)A[0].size() : 0;
  HnfResult res;
  res.H = A;
  res.U.assign(m, std::vector<Int>(m, 0));
  for (int i = 0; i < m; ++i) res.U[i][i] = 1;
  auto& H = res.H;
  auto& U = res.U;
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    while (true) {
      int best = -1;
      for (int i = r; i < m; ++i)
        if (H[i][c] != 0 && (best < 0 || abs(H[i][c]) < abs(H[best][c]))) best = i;
      if (best < 0) break;
      std::swap(H[r], H[best]);
      std::swap(U[r], U[best]);
      bool done = true;
      for (int i = r + 1; i < m; ++i) {
        if (H[i][c] == 0) continue;
        Int q = H[i][c] / H[r][c];
        if (q != 0) {
          for (int j = 0; j < n; ++j) H[i][j] -= q * H[r][j];
          for (int j = 0; j < m; ++j) U[i][j] -= q * U[r][j];
        }
        if (H[i][c] != 0) done = false;
      }
      if (done) break;
    }
    bool have = H[r][c] != 0;
    if (!have) continue;
    if (H[r][c] < 0) {
      for (auto& v : H[r]) v = -v;
      for (auto& v : U[r]) v = -v;
    }
    for (int i = 0; i < r; ++i) {
      Int q = H[i][c] / H[r][c];
      if ((H[i][c] % H[r][c] != 0) && (H[i][c] < 0)) q -= 1;  // floor division for canonical HNF
      if (q != 0) {
        for (int j = 0; j < n; ++j) H[i][j] -= q * H[r][j];
        for (int j = 0; j < m; ++j) U[i][j] -= q * U[r][j];
      }
    }
    ++r;
  }
  res.rank = r;
  return res;
}

// basis of {x in Z^m : x * A = 0}; complete (saturated) by unimodularity
inline ZMat z_left_kernel(const ZMat& A) {
  auto h = hnf_with_transform(A);
  return ZMat(h.U.begin() + h.rank, h.U.end());
}

// saturation of the row lattice of A inside Z^n (uses all columns given)
inline ZMat saturate_rows(const ZMat& A) {
  ZMat nz;
  for (const auto& r : A) {
    bool z = true;
    for (const auto& v : r)
      if (v != 0) {
        z = false;
        break;
      }
    if (!z) nz.push_back(r);
  }
  if (nz.empty()) return {};
  int m = (int)nz.size(), n = (int)nz[0].size();
  // right Q-kernel of nz as integer matrix: left kernel of transpose
  ZMat tr(n, std::vector<Int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) tr[j][i] = nz[i][j];
  ZMat K = z_left_kernel(tr);  // rows in Z^n orthogonal to the row space
  if (K.empty()) {
    ZMat id(n, std::vector<Int>(n, 0));
    for (int i = 0; i < n; ++i) id[i][i] = 1;
    return id;
  }
  ZMat Kt((int)K[0].size(), std::vector<Int>((int)K.size()));
  for (size_t i = 0; i < K.size(); ++i)
    for (size_t j = 0; j < K[0].size(); ++j) Kt[j][i] = K[i][j];
  return z_left_kernel(Kt);
}

// elementary divisors d_1 | d_2 | ... of an integer matrix
inline std::vector<Int> smith_divisors(ZMat A) {
  int m = (int)A.size();
  int n = m ? (int)A[0].size() : 0;
  std::vector<Int> divs;
  int top = 0;
  while (top < std::min(m, n)) {
    int bi = -1, bj = -1;
    for (int i = top; i < m; ++i)
      for (int j = top; j < n; ++j)
        if (A[i][j] != 0 && (bi < 0 || abs(A[i][j]) < abs(A[bi][bj]))) {
          bi = i;
          bj = j;
        }
    if (bi < 0) break;
    std::swap(A[top], A[bi]);
    for (int i = 0; i < m; ++i) std::swap(A[i][top], A[i][bj]);
    bool again = false;
    for (int i = top + 1; i < m && !again; ++i)
      if (A[i][top] % A[top][top] != 0) again = true;
    if (!again)
      for (int j = top + 1; j < n && !again; ++j)
        if (A[top][j] % A[top][top] != 0) again = true;
    for (int i = top + 1; i < m; ++i) {
      Int q = A[i][top] / A[top][top];
      if (q != 0)
        for (int j = 0; j < n; ++j) A[i][j] -= q * A[top][j];
    }
    for (int j = top + 1; j < n; ++j) {
      Int q = A[top][j] / A[top][top];
      if (q != 0)
        for (int i = 0; i < m; ++i) A[i][j] -= q * A[i][top];
    }
    if (again) continue;
    bool clean = true;
    for (int i = top + 1; i < m && clean; ++i)
      if (A[i][top] != 0) clean = false;
    for (int j = top + 1; j < n && clean; ++j)
      if (A[top][j] != 0) clean = false;
    if (!clean) continue;
    Int d = abs(A[top][top]);
    int bad = -1;
    for (int i = top + 1; i < m && bad < 0; ++i)
      for (int j = top + 1; j < n; ++j)
        if (A[i][j] % d != 0) {
          bad = i;
          break;
        }
    if (bad >= 0) {
      for (int j = 0; j < n; ++j) A[top][j] += A[bad][j];
      continue;
    }
    divs.push_back(d);
    ++top;
  }
  return divs;
}

// determinant by fraction-free Bareiss elimination
inline Int bareiss_det(ZMat A) {
  int n = (int)A.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (A[k][k] == 0) {
      int sw = -1;
      for (int i = k + 1; i < n; ++i)
        if (A[i][k] != 0) {
          sw = i;
          break;
        }
      if (sw < 0) return 0;
      std::swap(A[k], A[sw]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
    prev = A[k][k];
  }
  return sign > 0 ? A[n - 1][n - 1] : -A[n - 1][n - 1];
}

}  // namespace mfx
