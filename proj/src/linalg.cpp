#include "r2sf/linalg.hpp"

#include <utility>

#include "r2sf/error.hpp"

namespace r2sf {

std::uint32_t fp_inv(std::uint32_t a, unsigned p) {
  // p is prime: a^{p-2}
  std::uint64_t r = 1, b = a % p;
  unsigned e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

void FpMatrix::append_row(const std::vector<std::uint32_t>& row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) throw InvalidArgument("row length mismatch");
  a_.insert(a_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<std::size_t> FpMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t piv = r;
    while (piv < rows_ && (*this)(piv, c) == 0) ++piv;
    if (piv == rows_) continue;
    if (piv != r)
      for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(piv, k), (*this)(r, k));
    const std::uint64_t iv = fp_inv((*this)(r, c), p_);
    for (std::size_t k = c; k < cols_; ++k) (*this)(r, k) = static_cast<std::uint32_t>((*this)(r, k) * iv % p_);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const std::uint64_t f = (*this)(i, c);
      if (f == 0) continue;
      for (std::size_t k = c; k < cols_; ++k) {
        const std::uint64_t t = f * (*this)(r, k) % p_;
        (*this)(i, k) = static_cast<std::uint32_t>(((*this)(i, k) + p_ - t) % p_);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t FpMatrix::rank() const {
  FpMatrix m = *this;
  return m.rref().size();
}

std::vector<std::vector<std::uint32_t>> FpMatrix::kernel() const {
  FpMatrix m = *this;
  const auto pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<std::uint32_t>> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint32_t> v(cols_, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = (p_ - m(i, free)) % p_;
    basis.push_back(std::move(v));
  }
  return basis;
}

FpMatrix FpMatrix::identity(std::size_t n, unsigned p) {
  FpMatrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::inverse() const {
  if (rows_ != cols_) throw InvalidArgument("inverse of a non-square matrix");
  const std::size_t n = rows_;
  FpMatrix aug(n, 2 * n, p_);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  const auto pivots = aug.rref();
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw InvalidArgument("matrix is singular");
  FpMatrix inv(n, n, p_);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::vector<std::uint32_t> FpMatrix::apply(const std::vector<std::uint32_t>& v) const {
  std::vector<std::uint32_t> out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += std::uint64_t{(*this)(i, j)} * v[j] % p_;
    out[i] = static_cast<std::uint32_t>(s % p_);
  }
  return out;
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
  FpMatrix out(rows_, o.cols_, p_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint64_t a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        out(i, j) = static_cast<std::uint32_t>((out(i, j) + a * o(k, j)) % p_);
    }
  return out;
}

std::vector<std::uint32_t> FpSpan::reduce(std::vector<std::uint32_t> v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::uint64_t f = v[pivots_[i]];
    if (f == 0) continue;
    for (std::size_t k = 0; k < dim_; ++k)
      v[k] = static_cast<std::uint32_t>((v[k] + p_ - f * rows_[i][k] % p_) % p_);
  }
  return v;
}

bool FpSpan::contains(const std::vector<std::uint32_t>& v) const {
  const auto r = reduce(v);
  for (auto x : r)
    if (x != 0) return false;
  return true;
}

bool FpSpan::insert(std::vector<std::uint32_t> v) {
  v = reduce(std::move(v));
  std::size_t piv = 0;
  while (piv < dim_ && v[piv] == 0) ++piv;
  if (piv == dim_) return false;
  const std::uint64_t iv = fp_inv(v[piv], p_);
  for (auto& x : v) x = static_cast<std::uint32_t>(x * iv % p_);
  // keep existing rows reduced at the new pivot
  for (auto& row : rows_) {
    const std::uint64_t f = row[piv];
    if (f == 0) continue;
    for (std::size_t k = 0; k < dim_; ++k)
      row[k] = static_cast<std::uint32_t>((row[k] + p_ - f * v[k] % p_) % p_);
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(piv);
  return true;
}

// ---------------------------------------------------------------------------

std::size_t frref(const Field& F, FMat& m, std::vector<std::size_t>* pivots) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    const Elem iv = F.inv(m[r][c]);
    for (std::size_t k = c; k < cols; ++k) m[r][k] = F.mul(m[r][k], iv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      const Elem f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] = F.sub(m[i][k], F.mul(f, m[r][k]));
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return r;
}

std::size_t frank(const Field& F, FMat m) { return frref(F, m); }

std::vector<std::vector<Elem>> fkernel(const Field& F, FMat m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  frref(F, m, &pivots);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Elem> v(cols);
    v[free] = F.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(m[i][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Elem> fsolve(const Field& F, FMat m, std::vector<Elem> b) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) m[i].push_back(b[i]);
  std::vector<std::size_t> pivots;
  frref(F, m, &pivots);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw InvalidArgument("singular system");
  std::vector<Elem> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
  return x;
}

Elem fdet2(const Field& F, Elem a, Elem b, Elem c, Elem d) {
  return F.sub(F.mul(a, d), F.mul(b, c));
}

}  // namespace r2sf
