#include "r2sf/ffield.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "r2sf/error.hpp"

namespace r2sf {

std::uint64_t ipow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

long long mod_floor(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

namespace {

using Poly = std::vector<unsigned>;  // low degree first, fixed length d

// a*b mod f over F_p, where f is monic of degree d = f.size()-1.
Poly poly_mulmod_raw(const Poly& a, const Poly& b, const Poly& f, unsigned p) {
  const std::size_t d = f.size() - 1;
  std::vector<std::uint64_t> prod(2 * d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  }
  for (std::size_t k = 2 * d - 1; k >= d; --k) {
    const std::uint64_t c = prod[k] % p;
    if (c != 0) {
      for (std::size_t i = 0; i < d; ++i) {
        // subtract c * f_i * x^{k-d+i}
        const std::uint64_t t = (c * f[i]) % p;
        prod[k - d + i] = (prod[k - d + i] + p - t) % p;
      }
    }
    prod[k] = 0;
    if (k == d) break;
  }
  Poly r(d);
  for (std::size_t i = 0; i < d; ++i) r[i] = static_cast<unsigned>(prod[i] % p);
  return r;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, unsigned p) {
  const std::size_t d = f.size() - 1;
  Poly r(d, 0);
  r[0] = 1;
  while (e > 0) {
    if (e & 1) r = poly_mulmod_raw(r, base, f, p);
    base = poly_mulmod_raw(base, base, f, p);
    e >>= 1;
  }
  return r;
}

bool is_one(const Poly& a) {
  if (a.empty() || a[0] != 1) return false;
  return std::all_of(a.begin() + 1, a.end(), [](unsigned c) { return c == 0; });
}

// x has multiplicative order p^d - 1 modulo f.
bool is_primitive(const Poly& f, unsigned p) {
  const std::size_t d = f.size() - 1;
  if (f[0] == 0) return false;
  const std::uint64_t order = ipow(p, static_cast<unsigned>(d)) - 1;
  Poly x(d, 0);
  if (d == 1) {
    x[0] = (p - f[0]) % p;  // x = -f_0 mod (x + f_0)
  } else {
    x[1] = 1;
  }
  if (!is_one(poly_powmod(x, order, f, p))) return false;
  for (std::uint64_t r : prime_factors(order))
    if (is_one(poly_powmod(x, order / r, f, p))) return false;
  return true;
}

}  // namespace

FieldPtr Field::make(unsigned p, unsigned h, unsigned n, std::uint64_t table_cap) {
  if (!is_prime(p)) throw InvalidArgument("characteristic " + std::to_string(p) + " is not prime");
  if (p > 65521) throw InvalidArgument("characteristic too large (limit 65521)");
  if (h == 0 || n == 0) throw InvalidArgument("h and n must be positive");
  const unsigned d = h * n;
  long double approx = 1;
  for (unsigned i = 0; i < d; ++i) approx *= p;
  if (approx > static_cast<long double>(kMaxSize))
    throw CapExceeded("field size " + std::to_string(p) + "^" + std::to_string(d) +
                      " exceeds the implementation cap 2^31");

  auto F = std::shared_ptr<Field>(new Field());
  F->p_ = p;
  F->h_ = h;
  F->n_ = n;
  F->q_ = ipow(p, h);
  F->size_ = ipow(p, d);
  F->pw_.resize(d + 1);
  for (unsigned i = 0; i <= d; ++i) F->pw_[i] = ipow(p, i);

  // Monic polynomials x^d + c_{d-1}x^{d-1} + ... + c_0 in lexicographic order
  // of (c_{d-1}, ..., c_0), i.e. increasing integer value of sum c_i p^i.
  Poly f(d + 1, 0);
  f[d] = 1;
  bool found = false;
  for (std::uint64_t k = 0; k < F->size_; ++k) {
    std::uint64_t t = k;
    for (unsigned i = 0; i < d; ++i) {
      f[i] = static_cast<unsigned>(t % p);
      t /= p;
    }
    if (is_primitive(f, p)) {
      found = true;
      break;
    }
  }
  if (!found) throw InternalError("no primitive polynomial found");
  F->modulus_ = f;

  // g = x mod f
  if (d == 1) {
    F->gen_ = Elem{static_cast<std::uint32_t>((p - f[0]) % p)};
  } else {
    F->gen_ = Elem{p};
  }

  const std::uint64_t N = F->size_ - 1;
  F->q_pow_mod_.resize(n);
  for (unsigned r = 0; r < n; ++r) F->q_pow_mod_[r] = N == 0 ? 0 : ipow(F->q_, r) % N;

  F->tabled_ = F->size_ <= table_cap;
  if (F->tabled_) {
    F->log_.assign(F->size_, 0);
    F->exp_.assign(2 * N, 0);
    std::vector<unsigned> cur(d, 0);
    cur[0] = 1;
    for (std::uint64_t k = 0; k < N; ++k) {
      const Elem e = F->from_digits(cur);
      F->exp_[k] = e.code;
      F->exp_[k + N] = e.code;
      F->log_[e.code] = static_cast<std::uint32_t>(k);
      // cur *= x
      const unsigned top = cur[d - 1];
      for (unsigned i = d - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top != 0) {
        for (unsigned i = 0; i < d; ++i) cur[i] = static_cast<unsigned>((cur[i] + std::uint64_t{p - top} * f[i]) % p);
      }
    }
    F->zech_.assign(N, -1);
    for (std::uint64_t k = 0; k < N; ++k) {
      const Elem s = F->add_digits(F->one(), Elem{F->exp_[k]});
      F->zech_[k] = s.is_zero() ? -1 : static_cast<std::int64_t>(F->log_[s.code]);
    }
    F->half_order_ = static_cast<std::uint32_t>(N / 2);
  }
  return F;
}

Elem Field::from_int(long long v) const {
  return Elem{static_cast<std::uint32_t>(mod_floor(v, p_))};
}

Elem Field::from_code(std::uint64_t code) const {
  if (code >= size_) throw InvalidArgument("element code out of range");
  return Elem{static_cast<std::uint32_t>(code)};
}

Elem Field::from_digits(const std::vector<unsigned>& digits) const {
  std::uint64_t code = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (i >= degree() && digits[i] % p_ != 0) throw InvalidArgument("too many coefficients");
    if (i < degree()) code = code * p_ + digits[i] % p_;
  }
  return Elem{static_cast<std::uint32_t>(code)};
}

std::vector<unsigned> Field::digits(Elem x) const {
  std::vector<unsigned> out(degree());
  std::uint32_t c = x.code;
  for (unsigned i = 0; i < degree(); ++i) {
    out[i] = c % p_;
    c /= p_;
  }
  return out;
}

unsigned Field::digit(Elem x, unsigned i) const {
  return static_cast<unsigned>((x.code / pw_[i]) % p_);
}

Elem Field::add_digits(Elem a, Elem b) const {
  if (p_ == 2) return Elem{a.code ^ b.code};
  std::uint64_t ca = a.code, cb = b.code, out = 0;
  for (unsigned i = 0; i < degree(); ++i) {
    const std::uint64_t s = (ca % p_ + cb % p_) % p_;
    out += s * pw_[i];
    ca /= p_;
    cb /= p_;
  }
  return Elem{static_cast<std::uint32_t>(out)};
}

Elem Field::add(Elem a, Elem b) const {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (!tabled_) return add_digits(a, b);
  const std::uint64_t N = size_ - 1;
  const std::uint64_t la = log_[a.code], lb = log_[b.code];
  const std::uint64_t d = lb >= la ? lb - la : lb + N - la;
  const std::int64_t z = zech_[d];
  if (z < 0) return Elem{};
  return Elem{exp_[la + static_cast<std::uint64_t>(z)]};
}

Elem Field::neg(Elem a) const {
  if (a.is_zero() || p_ == 2) return a;
  if (tabled_) return Elem{exp_[log_[a.code] + half_order_]};
  std::uint64_t c = a.code, out = 0;
  for (unsigned i = 0; i < degree(); ++i) {
    out += ((p_ - c % p_) % p_) * pw_[i];
    c /= p_;
  }
  return Elem{static_cast<std::uint32_t>(out)};
}

std::vector<unsigned> Field::poly_mulmod(const std::vector<unsigned>& a,
                                         const std::vector<unsigned>& b) const {
  return poly_mulmod_raw(a, b, modulus_, p_);
}

Elem Field::mul_schoolbook(Elem a, Elem b) const {
  return from_digits(poly_mulmod(digits(a), digits(b)));
}

Elem Field::mul(Elem a, Elem b) const {
  if (a.is_zero() || b.is_zero()) return Elem{};
  if (tabled_) return Elem{exp_[log_[a.code] + log_[b.code]]};
  return mul_schoolbook(a, b);
}

Elem Field::inv(Elem a) const {
  if (a.is_zero()) throw InvalidArgument("inverse of zero");
  const std::uint64_t N = size_ - 1;
  if (tabled_) return Elem{exp_[(N - log_[a.code]) % N]};
  return pow_u(a, N - 1);
}

Elem Field::pow_u(Elem a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a.is_zero()) return Elem{};
  const std::uint64_t N = size_ - 1;
  if (tabled_) {
    const unsigned __int128 t = static_cast<unsigned __int128>(log_[a.code]) * (e % N);
    return Elem{exp_[static_cast<std::uint64_t>(t % N)]};
  }
  Elem r = one(), b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

Elem Field::pow(Elem a, long long e) const {
  if (e >= 0) return pow_u(a, static_cast<std::uint64_t>(e));
  return pow_u(inv(a), static_cast<std::uint64_t>(-e));
}

Elem Field::frob(Elem x, long long r) const {
  if (x.is_zero()) return x;
  const auto rr = static_cast<unsigned>(mod_floor(r, n_));
  if (rr == 0) return x;
  if (tabled_) {
    const std::uint64_t N = size_ - 1;
    return Elem{exp_[(std::uint64_t{log_[x.code]} * q_pow_mod_[rr]) % N]};
  }
  return pow_u(x, ipow(q_, rr));
}

Elem Field::trace(Elem x) const {
  Elem s{};
  for (unsigned i = 0; i < n_; ++i) s = add(s, frob(x, i));
  return s;
}

Elem Field::norm(Elem x) const {
  return pow_u(x, (size_ - 1) / (q_ - 1));
}

bool Field::in_subfield(Elem x, unsigned m) const {
  if (m == 0 || n_ % m != 0)
    throw InvalidArgument("subfield level " + std::to_string(m) + " does not divide n = " + std::to_string(n_));
  return frob(x, m) == x;
}

bool Field::is_square(Elem x) const {
  if (x.is_zero() || p_ == 2) return true;
  if (tabled_) return log_[x.code] % 2 == 0;
  return pow_u(x, (size_ - 1) / 2) == one();
}

bool Field::is_square_in_base(Elem x) const {
  if (!in_base(x)) throw InvalidArgument("element is not in F_q");
  if (x.is_zero() || p_ == 2) return true;
  return pow_u(x, (q_ - 1) / 2) == one();
}

std::uint64_t Field::dlog(Elem x) const {
  if (x.is_zero()) throw InvalidArgument("discrete log of zero");
  if (tabled_) return log_[x.code];
  return dlog_bsgs(x);
}

std::uint64_t Field::dlog_bsgs(Elem x) const {
  const std::uint64_t N = size_ - 1;
  std::uint64_t m = 1;
  while (m * m < N) ++m;
  std::unordered_map<std::uint32_t, std::uint64_t> baby;
  Elem cur = one();
  for (std::uint64_t j = 0; j < m; ++j) {
    baby.emplace(cur.code, j);
    cur = mul(cur, gen_);
  }
  const Elem giant = inv(pow_u(gen_, m));
  Elem y = x;
  for (std::uint64_t i = 0; i <= m; ++i) {
    if (auto it = baby.find(y.code); it != baby.end()) return (i * m + it->second) % N;
    y = mul(y, giant);
  }
  throw InternalError("discrete log not found");
}

Elem Field::exp_g(std::uint64_t k) const {
  const std::uint64_t N = size_ - 1;
  if (tabled_) return Elem{exp_[k % N]};
  return pow_u(gen_, k % N);
}

std::vector<Elem> Field::elements() const {
  std::vector<Elem> out;
  out.reserve(size_);
  out.push_back(zero());
  Elem cur = one();
  for (std::uint64_t k = 0; k + 1 < size_; ++k) {
    out.push_back(cur);
    cur = mul(cur, gen_);
  }
  return out;
}

std::vector<Elem> Field::base_elements() const {
  std::vector<Elem> out{zero()};
  const Elem w = pow_u(gen_, (size_ - 1) / (q_ - 1));
  Elem cur = one();
  for (std::uint64_t k = 0; k + 1 < q_; ++k) {
    out.push_back(cur);
    cur = mul(cur, w);
  }
  return out;
}

Elem Field::base_nonsquare() const {
  if (p_ == 2) throw InvalidArgument("no non-squares in characteristic 2");
  auto base = base_elements();
  std::sort(base.begin(), base.end());
  for (Elem x : base)
    if (!x.is_zero() && !is_square_in_base(x)) return x;
  throw InternalError("F_q has no non-square");
}

Elem Field::least_nonsquare() const {
  if (p_ == 2) throw InvalidArgument("no non-squares in characteristic 2");
  for (std::uint64_t c = 1; c < size_; ++c)
    if (!is_square(Elem{static_cast<std::uint32_t>(c)})) return Elem{static_cast<std::uint32_t>(c)};
  throw InternalError("F_{q^n} has no non-square");
}

std::string Field::format(Elem x) const {
  if (x.is_zero()) return "0";
  return "g^" + std::to_string(dlog(x));
}

std::string Field::format_coeffs(Elem x) const {
  std::string s = "[";
  auto d = digits(x);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(d[i]);
  }
  return s + "]";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

long long parse_int(std::string_view s) {
  s = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument("bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

Elem Field::parse(std::string_view text) const {
  const std::string_view t = trim(text);
  if (t.empty()) throw InvalidArgument("empty element text");
  if (t.front() == '[') {
    if (t.back() != ']') throw InvalidArgument("unterminated coefficient list '" + std::string(t) + "'");
    std::string_view body = t.substr(1, t.size() - 2);
    std::vector<unsigned> d;
    while (!trim(body).empty()) {
      const auto comma = body.find(',');
      const long long v = parse_int(body.substr(0, comma));
      if (v < 0 || v >= static_cast<long long>(p_))
        throw InvalidArgument("coefficient " + std::to_string(v) + " outside [0, p)");
      d.push_back(static_cast<unsigned>(v));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    if (d.size() > degree()) throw InvalidArgument("too many coefficients in '" + std::string(t) + "'");
    return from_digits(d);
  }
  if (t.size() >= 2 && t[0] == 'g' && t[1] == '^') {
    const long long k = parse_int(t.substr(2));
    return pow(gen_, k);
  }
  if (t == "g") return gen_;
  const long long v = parse_int(t);
  return from_int(v);
}

std::string Field::modulus_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = modulus_.size(); i-- > 0;) {
    if (modulus_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (modulus_[i] != 1 || i == 0) os << modulus_[i];
    if (i > 0) {
      if (modulus_[i] != 1) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

QuadExt::QuadExt(FieldPtr base) : base_(std::move(base)) {
  if (base_->p() == 2) throw InvalidArgument("quadratic extension requires q odd");
  s_ = base_->least_nonsquare();
}

QElem QuadExt::add(QElem a, QElem b) const {
  const Field& F = *base_;
  return {F.add(a.a0, b.a0), F.add(a.a1, b.a1)};
}

QElem QuadExt::sub(QElem a, QElem b) const {
  const Field& F = *base_;
  return {F.sub(a.a0, b.a0), F.sub(a.a1, b.a1)};
}

QElem QuadExt::mul(QElem a, QElem b) const {
  const Field& F = *base_;
  const Elem r0 = F.add(F.mul(a.a0, b.a0), F.mul(s_, F.mul(a.a1, b.a1)));
  const Elem r1 = F.add(F.mul(a.a0, b.a1), F.mul(a.a1, b.a0));
  return {r0, r1};
}

QElem QuadExt::inv(QElem a) const {
  const Field& F = *base_;
  const Elem nrm = F.sub(F.mul(a.a0, a.a0), F.mul(s_, F.mul(a.a1, a.a1)));
  if (nrm.is_zero()) throw InvalidArgument("inverse of zero");
  const Elem ni = F.inv(nrm);
  return {F.mul(a.a0, ni), F.neg(F.mul(a.a1, ni))};
}

QElem QuadExt::pow_u(QElem a, std::uint64_t e) const {
  QElem r{base_->one(), Elem{}};
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

QElem QuadExt::frob(QElem a, unsigned k) const {
  const Field& F = *base_;
  // w^{q^k} = w * s^{(q^k - 1)/2}
  const std::uint64_t N = F.order();
  std::uint64_t qk_mod = 1;
  for (unsigned i = 0; i < k; ++i) qk_mod = (qk_mod * F.q()) % (2 * N);
  const std::uint64_t e = ((qk_mod + 2 * N - 1) % (2 * N)) / 2;
  const Elem kappa = F.pow_u(s_, e);
  return {F.frob(a.a0, k), F.mul(F.frob(a.a1, k), kappa)};
}

bool QuadExt::in_index_subgroup(QElem a, std::uint64_t d) const {
  if (a.a0.is_zero() && a.a1.is_zero()) return false;
  const std::uint64_t total = size() - 1;
  if (d == 0 || total % d != 0) throw InvalidArgument("index does not divide the group order");
  const QElem r = pow_u(a, total / d);
  return r.a0 == base_->one() && r.a1.is_zero();
}

std::string QuadExt::format(QElem a) const {
  return base_->format(a.a0) + "|" + base_->format(a.a1);
}

QElem QuadExt::parse(std::string_view text) const {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) return embed(base_->parse(text));
  return {base_->parse(text.substr(0, bar)), base_->parse(text.substr(bar + 1))};
}

}  // namespace r2sf
