#pragma once

// Rank-two presemifields given by spread-set maps
//   (u,v) * (x,y) = (u,v) M(x,y),   M(x,y) = [[m11, m12], [m21, m22]],
// where every entry is fx(x) + gy(y) for q-polynomials fx, gy.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "r2sf/ffield.hpp"
#include "r2sf/linalg.hpp"
#include "r2sf/linpoly.hpp"

namespace r2sf {

struct Mat2 {
  Elem a, b, c, d;  // [[a, b], [c, d]]
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 mat_mul(const Field& F, const Mat2& A, const Mat2& B);
Elem mat_det(const Field& F, const Mat2& A);
Mat2 mat_inv(const Field& F, const Mat2& A);  // throws on singular
Mat2 mat_identity(const Field& F);

struct SpreadEntry {
  LinPoly fx;  // applied to x
  LinPoly gy;  // applied to y
};

// F1, F2, xi of the shape [[x, y], [F1(y), xi F2(x)]].
struct DempwolffForm {
  LinPoly F1, F2;
  Elem xi;
};

class SpreadMap {
 public:
  // Entry order m11, m12, m21, m22.
  SpreadMap(FieldPtr F, std::array<SpreadEntry, 4> entries, std::string family = "custom");

  const Field& field() const { return *F_; }
  const FieldPtr& field_ptr() const { return F_; }
  const SpreadEntry& entry(int i) const { return m_[static_cast<std::size_t>(i)]; }
  const std::string& family() const { return family_; }

  Elem value(int i, Elem x, Elem y) const;
  Mat2 at(Elem x, Elem y) const;
  // (u,v) * (x,y)
  std::pair<Elem, Elem> multiply(Elem u, Elem v, Elem x, Elem y) const;

  // Shape (x, y, f(y), g(x)): m11 = x, m12 = y, m21 = f(y), m22 = g(x).
  bool has_fg_shape() const;
  LinPoly shape_f() const { return m_[2].gy; }
  LinPoly shape_g() const { return m_[3].fx; }

  const std::optional<DempwolffForm>& dempwolff() const { return demp_; }
  void set_dempwolff(DempwolffForm d) { demp_ = std::move(d); }
  void set_family(std::string f) { family_ = std::move(f); }

 private:
  FieldPtr F_;
  std::array<SpreadEntry, 4> m_;
  std::string family_;
  std::optional<DempwolffForm> demp_;
  // Value tables of every fx / gy when the field is small.
  std::vector<std::uint32_t> tab_;
  std::uint64_t stride_ = 0;
};

// [[x, y], [F1(y), xi F2(x)]]
SpreadMap dempwolff_map(const FieldPtr& F, const LinPoly& F1, const LinPoly& F2, Elem xi,
                        std::string family = "custom");

struct FamilySpec {
  std::string family = "dA";  // dA, dB, dAB, k17, k19, gd, gtf
  unsigned p = 3, h = 1, n = 3;
  long long r = 1, s = 1, t = 1;
  // Element text in the field syntax; gtf's c uses "e0|e1". Empty = unset.
  std::string a, b, c, f, g, xi;
};

// Builds the family, enforcing its parameter constraints
// (ConstraintViolation / InvalidArgument on failure).
SpreadMap build_family(const FieldPtr& F, const FamilySpec& spec);
SpreadMap build_family(const FamilySpec& spec);

Elem default_xi(const Field& F);

// x -> y x - c y^{q^t} x^{q^n} on F_{q^{2n}} = F_{q^n}(w), as the matrix of
// x -> x * y in the basis {1, w}; parameters (y0, y1) of y = y0 + y1 w.
SpreadMap gtf_spread(const QuadExt& E, QElem c, long long t);
// c is nonzero and avoids every value y^{1-q^t} x^{1-q^n}; equivalent to c lying outside the
// subgroup of index q-1. Cross-checked on random samples.
bool gtf_parameter_valid(const QuadExt& E, QElem c, long long t, std::uint64_t seed = 0);

struct DempwolffCheck {
  std::uint64_t image1 = 0, image2 = 0, expected = 0;
  bool disjoint = false;
  bool holds() const { return image1 == expected && image2 == expected && disjoint; }
};
// |P_F1(F*)|, |P_F2(F*)| with P_F(x) = F(x) x, and P_F1 n xi P_F2 empty.
DempwolffCheck dempwolff_condition(const LinPoly& F1, const LinPoly& F2, Elem xi);

// det M(x,y) != 0 for every (x,y) != (0,0).
bool zero_divisor_check(const SpreadMap& S, unsigned workers = 1);

// F_p-basis of the spread set: images of (p^k, 0) and (0, p^k).
std::vector<Mat2> spread_basis(const SpreadMap& S);
// M0^{-1} M(x,y) with M0 = M(x0,y0) (default (1,0)).
SpreadMap normalize_spread(const SpreadMap& S, Elem x0, Elem y0);
SpreadMap normalize_spread(const SpreadMap& S);
bool contains_identity(const SpreadMap& S);

SpreadMap transpose_spread(const SpreadMap& S);

struct NucleiReport {
  std::uint64_t left = 0, middle = 0, right = 0, center = 0;
  std::string method;  // bruteforce, spreadset, sampled
  bool operator==(const NucleiReport& o) const {
    return left == o.left && middle == o.middle && right == o.right && center == o.center;
  }
};

// Matrix-containment characterizations on the normalized spread set.
NucleiReport nuclei_spreadset(const SpreadMap& S);
// Associativity on the full product table of x o y = R_e^{-1}(x) * L_e^{-1}(y),
// e = (1,0). Throws CapExceeded when q^{2n} > cap.
NucleiReport nuclei_bruteforce(const SpreadMap& S, std::uint64_t cap = 729, unsigned workers = 1);
// Same product, associators filtered by random probes then verified on all
// pairs of F_p-basis elements.
NucleiReport nuclei_sampled(const SpreadMap& S, std::uint64_t seed = 0, int probes = 64);

}  // namespace r2sf
