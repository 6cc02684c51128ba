#pragma once

// Dense linear algebra over F_p (for F_q-linear maps written in base-p
// coordinates) and small dense matrices over F_{q^n}.

#include <cstdint>
#include <vector>

#include "r2sf/ffield.hpp"

namespace r2sf {

class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols, unsigned p)
      : rows_(rows), cols_(cols), p_(p), a_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  unsigned p() const { return p_; }

  std::uint32_t& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  void append_row(const std::vector<std::uint32_t>& row);

  // Reduced row echelon form in place; returns pivot columns.
  std::vector<std::size_t> rref();
  std::size_t rank() const;
  // Basis of {v : A v = 0}.
  std::vector<std::vector<std::uint32_t>> kernel() const;
  // Throws InvalidArgument when singular.
  FpMatrix inverse() const;
  std::vector<std::uint32_t> apply(const std::vector<std::uint32_t>& v) const;
  FpMatrix operator*(const FpMatrix& o) const;
  bool operator==(const FpMatrix& o) const = default;

  static FpMatrix identity(std::size_t n, unsigned p);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  unsigned p_ = 2;
  std::vector<std::uint32_t> a_;
};

std::uint32_t fp_inv(std::uint32_t a, unsigned p);

// Incremental membership test for an F_p-subspace of F_p^dim.
class FpSpan {
 public:
  FpSpan(std::size_t dim, unsigned p) : dim_(dim), p_(p) {}
  // Returns true when v was independent of the current span (and adds it).
  bool insert(std::vector<std::uint32_t> v);
  // Residue of v modulo the span; all-zero iff v lies in the span.
  std::vector<std::uint32_t> reduce(std::vector<std::uint32_t> v) const;
  bool contains(const std::vector<std::uint32_t>& v) const;
  std::size_t dim() const { return rows_.size(); }

 private:
  std::size_t dim_;
  unsigned p_;
  std::vector<std::vector<std::uint32_t>> rows_;  // each normalized, pivot at pivots_[i]
  std::vector<std::size_t> pivots_;
};

// Small matrices over F_{q^n}, row-major.
using FMat = std::vector<std::vector<Elem>>;

// Reduced row echelon form in place; returns the rank.
std::size_t frref(const Field& F, FMat& m, std::vector<std::size_t>* pivots = nullptr);
std::size_t frank(const Field& F, FMat m);
// Basis of the right null space {v : m v = 0}.
std::vector<std::vector<Elem>> fkernel(const Field& F, FMat m, std::size_t cols);
// Solves m x = b for square nonsingular m; throws when singular.
std::vector<Elem> fsolve(const Field& F, FMat m, std::vector<Elem> b);
Elem fdet2(const Field& F, Elem a, Elem b, Elem c, Elem d);

}  // namespace r2sf
