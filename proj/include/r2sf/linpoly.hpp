#pragma once

// F_q-linear maps of F_{q^n} in q-polynomial form x -> sum a_i x^{q^i}.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "r2sf/ffield.hpp"
#include "r2sf/linalg.hpp"

namespace r2sf {

class LinPoly {
 public:
  LinPoly() = default;
  // Coefficients a_0..a_{n-1}; a shorter vector is zero-padded.
  LinPoly(FieldPtr F, std::vector<Elem> coeffs);

  static LinPoly zero(FieldPtr F);
  static LinPoly identity(FieldPtr F);
  // c * x^{q^i}, i reduced mod n.
  static LinPoly monomial(FieldPtr F, Elem c, long long i);

  const Field& field() const { return *F_; }
  const FieldPtr& field_ptr() const { return F_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  Elem coeff(unsigned i) const { return c_[i]; }
  bool is_zero() const;
  bool is_monomial() const;

  Elem eval(Elem x) const;

  LinPoly operator+(const LinPoly& o) const;
  LinPoly operator-(const LinPoly& o) const;
  LinPoly scaled(Elem c) const;  // c * f(x)
  bool operator==(const LinPoly& o) const;

  // Matrix over F_p acting on base-p digit vectors; column j is the image of
  // the basis element with code p^j.
  FpMatrix fp_matrix() const;
  // F_q-rank of the map.
  unsigned rank() const;
  bool is_bijective() const { return rank() == F_->n(); }

  std::string to_string() const;
  static LinPoly parse(FieldPtr F, std::string_view text);

 private:
  void check_same(const LinPoly& o) const;

  FieldPtr F_;
  std::vector<Elem> c_;
};

// F_q-basis {g^0, ..., g^{n-1}} of F_{q^n} used for tabulation.
std::vector<Elem> fq_basis(const Field& F);

// Unique q-polynomial with f(basis[j]) = values[j] for the basis above.
LinPoly lp_interpolate_basis(const FieldPtr& F, const std::vector<Elem>& values);
// Interpolates an arbitrary F_q-linear function, then verifies it on every
// element (fields up to verify_cap) or on a deterministic sample above.
LinPoly lp_interpolate(const FieldPtr& F, const std::function<Elem(Elem)>& fn,
                       std::uint64_t verify_cap = 1u << 16);

LinPoly lp_compose(const LinPoly& f, const LinPoly& g);
// Throws InvalidArgument naming the kernel dimension when f is singular.
LinPoly lp_inverse(const LinPoly& f);
LinPoly lp_adjoint(const LinPoly& f);
// F_q-basis of the kernel.
std::vector<Elem> lp_kernel(const LinPoly& f);

// x^{q^r} - a x^{q^{-r}}
LinPoly family_A(const FieldPtr& F, Elem a, long long r);
// x - b x^{q^r}
LinPoly family_H(const FieldPtr& F, Elem b, long long r);
// 2 H_{b,r}^{-1}(x) - x; requires odd characteristic.
LinPoly family_B(const FieldPtr& F, Elem b, long long r);

// Images of the basis elements with codes p^0..p^{hn-1}; f(x) is the digit
// combination of these. Used by enumeration hot loops.
std::vector<Elem> digit_images(const LinPoly& f);

}  // namespace r2sf
