#pragma once

// Exact arithmetic in F_{q^n}, q = p^h, with F_q and F_p as subfields.
//
// Elements are stored as integer codes: the residue a(x) = sum c_i x^i modulo
// the field's modulus is encoded as sum c_i p^i. Contexts are immutable after
// construction and may be shared freely between threads.

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace r2sf {

struct Elem {
  std::uint32_t code = 0;

  constexpr bool is_zero() const { return code == 0; }
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  // Fields up to this size use log/exp/Zech tables; larger ones fall back to
  // schoolbook polynomial arithmetic.
  static constexpr std::uint64_t kDefaultTableCap = std::uint64_t{1} << 20;
  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 31;

  // Builds F_{p^{hn}} with the first monic primitive polynomial of degree hn
  // (coefficient vectors ordered from the leading end) and g = class of x.
  static FieldPtr make(unsigned p, unsigned h, unsigned n,
                       std::uint64_t table_cap = kDefaultTableCap);

  unsigned p() const { return p_; }
  unsigned h() const { return h_; }
  unsigned n() const { return n_; }
  unsigned degree() const { return h_ * n_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t order() const { return size_ - 1; }
  bool tabled() const { return tabled_; }

  // Coefficients c_0..c_d of the monic modulus (c_d = 1).
  const std::vector<unsigned>& modulus() const { return modulus_; }

  Elem zero() const { return {}; }
  Elem one() const { return {1}; }
  Elem gen() const { return gen_; }
  Elem from_int(long long v) const;
  Elem from_code(std::uint64_t code) const;
  Elem from_digits(const std::vector<unsigned>& digits) const;
  std::vector<unsigned> digits(Elem x) const;
  unsigned digit(Elem x, unsigned i) const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, long long e) const;
  Elem pow_u(Elem a, std::uint64_t e) const;
  // c * a for an integer scalar c (taken mod p).
  Elem scale(long long c, Elem a) const { return mul(from_int(c), a); }

  // x^{q^r}, with r reduced mod n (negative r allowed).
  Elem frob(Elem x, long long r) const;
  Elem trace(Elem x) const;  // Tr_{q^n/q}
  Elem norm(Elem x) const;   // N_{q^n/q}

  // x lies in F_{q^m}; m must divide n.
  bool in_subfield(Elem x, unsigned m) const;
  bool in_base(Elem x) const { return in_subfield(x, 1); }
  bool is_square(Elem x) const;
  // Square test inside F_q for an element of F_q.
  bool is_square_in_base(Elem x) const;

  // dlog(g^k) = k in [0, q^n - 1). Throws on zero.
  std::uint64_t dlog(Elem x) const;
  Elem exp_g(std::uint64_t k) const;

  // 0, g^0, g^1, ..., g^{q^n-2}.
  std::vector<Elem> elements() const;
  // Elements of F_q in the same order.
  std::vector<Elem> base_elements() const;
  // Least (by code) non-square of F_q.
  Elem base_nonsquare() const;
  // Least (by code) non-square of F_{q^n}; requires q odd.
  Elem least_nonsquare() const;

  // Element text: "0", "g^k", or "[c0,c1,...]" (base-p coefficients, low first).
  std::string format(Elem x) const;
  std::string format_coeffs(Elem x) const;
  Elem parse(std::string_view text) const;

  std::string modulus_string() const;

  bool same_as(const Field& other) const {
    return p_ == other.p_ && h_ == other.h_ && n_ == other.n_;
  }

 private:
  Field() = default;

  std::vector<unsigned> poly_mulmod(const std::vector<unsigned>& a,
                                    const std::vector<unsigned>& b) const;
  Elem mul_schoolbook(Elem a, Elem b) const;
  Elem add_digits(Elem a, Elem b) const;
  std::uint64_t dlog_bsgs(Elem x) const;

  unsigned p_ = 0, h_ = 0, n_ = 0;
  std::uint64_t q_ = 0, size_ = 0;
  bool tabled_ = false;
  std::vector<unsigned> modulus_;
  std::vector<std::uint64_t> pw_;  // p^i for i <= degree
  std::vector<std::uint64_t> q_pow_mod_;  // q^r mod (size-1), r < n
  Elem gen_;

  std::vector<std::uint32_t> log_;   // by code; log_[0] unused
  std::vector<std::uint32_t> exp_;   // length 2*(size-1)
  std::vector<std::int64_t> zech_;   // 1 + g^k = g^{zech_[k]}, -1 when zero
  std::uint32_t half_order_ = 0;
};

// Integer helpers shared across modules.
std::uint64_t ipow(std::uint64_t base, unsigned e);
bool is_prime(std::uint64_t v);
std::vector<std::uint64_t> prime_factors(std::uint64_t v);
long long mod_floor(long long a, long long m);

// F_{q^{2n}} realized as F_{q^n}(w), w^2 = s with s a non-square of F_{q^n}.
struct QElem {
  Elem a0, a1;  // a0 + a1 * w
  friend constexpr bool operator==(QElem, QElem) = default;
};

class QuadExt {
 public:
  explicit QuadExt(FieldPtr base);

  const Field& base() const { return *base_; }
  const FieldPtr& base_ptr() const { return base_; }
  Elem s() const { return s_; }
  std::uint64_t size() const { return base_->size() * base_->size(); }

  QElem add(QElem a, QElem b) const;
  QElem sub(QElem a, QElem b) const;
  QElem mul(QElem a, QElem b) const;
  QElem inv(QElem a) const;
  QElem pow_u(QElem a, std::uint64_t e) const;
  // a^{q^k}; k may exceed n.
  QElem frob(QElem a, unsigned k) const;
  // a^{q^n}: the conjugation fixing F_{q^n}.
  QElem conj(QElem a) const { return {a.a0, base_->neg(a.a1)}; }
  bool is_base(QElem a) const { return a.a1.is_zero(); }
  QElem embed(Elem a) const { return {a, Elem{}}; }
  // a^{(q^{2n}-1)/d} == 1, i.e. a lies in the subgroup of index d.
  bool in_index_subgroup(QElem a, std::uint64_t d) const;

  std::string format(QElem a) const;
  QElem parse(std::string_view text) const;

 private:
  FieldPtr base_;
  Elem s_;
};

}  // namespace r2sf
