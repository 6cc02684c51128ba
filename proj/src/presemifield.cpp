#include "r2sf/presemifield.hpp"

#include <numeric>
#include <random>

#include "r2sf/error.hpp"
#include "r2sf/parallel.hpp"

namespace r2sf {

Mat2 mat_mul(const Field& F, const Mat2& A, const Mat2& B) {
  return {F.add(F.mul(A.a, B.a), F.mul(A.b, B.c)), F.add(F.mul(A.a, B.b), F.mul(A.b, B.d)),
          F.add(F.mul(A.c, B.a), F.mul(A.d, B.c)), F.add(F.mul(A.c, B.b), F.mul(A.d, B.d))};
}

Elem mat_det(const Field& F, const Mat2& A) { return fdet2(F, A.a, A.b, A.c, A.d); }

Mat2 mat_inv(const Field& F, const Mat2& A) {
  const Elem det = mat_det(F, A);
  if (det.is_zero()) throw InvalidArgument("singular 2x2 matrix");
  const Elem di = F.inv(det);
  return {F.mul(A.d, di), F.neg(F.mul(A.b, di)), F.neg(F.mul(A.c, di)), F.mul(A.a, di)};
}

Mat2 mat_identity(const Field& F) { return {F.one(), F.zero(), F.zero(), F.one()}; }

// ---------------------------------------------------------------------------

SpreadMap::SpreadMap(FieldPtr F, std::array<SpreadEntry, 4> entries, std::string family)
    : F_(std::move(F)), m_(std::move(entries)), family_(std::move(family)) {
  for (const auto& e : m_)
    if (!e.fx.field().same_as(*F_) || !e.gy.field().same_as(*F_))
      throw InvalidArgument("spread entry over a different field");
  if (F_->size() <= (1u << 20)) {
    stride_ = F_->size();
    tab_.resize(8 * stride_);
    for (int i = 0; i < 4; ++i) {
      const auto fx = digit_images(m_[i].fx);
      const auto gy = digit_images(m_[i].gy);
      // value on code c is the digit combination of the basis images
      for (std::uint64_t c = 0; c < stride_; ++c) {
        Elem sx{}, sy{};
        std::uint64_t t = c;
        for (unsigned k = 0; k < F_->degree(); ++k, t /= F_->p()) {
          const unsigned d = static_cast<unsigned>(t % F_->p());
          if (d == 0) continue;
          const Elem dd = F_->from_int(d);
          sx = F_->add(sx, F_->mul(dd, fx[k]));
          sy = F_->add(sy, F_->mul(dd, gy[k]));
        }
        tab_[(2 * i) * stride_ + c] = sx.code;
        tab_[(2 * i + 1) * stride_ + c] = sy.code;
      }
    }
  }
}

Elem SpreadMap::value(int i, Elem x, Elem y) const {
  if (stride_ != 0)
    return F_->add(Elem{tab_[(2 * i) * stride_ + x.code]}, Elem{tab_[(2 * i + 1) * stride_ + y.code]});
  return F_->add(m_[i].fx.eval(x), m_[i].gy.eval(y));
}

Mat2 SpreadMap::at(Elem x, Elem y) const {
  return {value(0, x, y), value(1, x, y), value(2, x, y), value(3, x, y)};
}

std::pair<Elem, Elem> SpreadMap::multiply(Elem u, Elem v, Elem x, Elem y) const {
  const Mat2 M = at(x, y);
  const Field& F = *F_;
  return {F.add(F.mul(u, M.a), F.mul(v, M.c)), F.add(F.mul(u, M.b), F.mul(v, M.d))};
}

bool SpreadMap::has_fg_shape() const {
  const auto id = LinPoly::identity(F_);
  return m_[0].fx == id && m_[0].gy.is_zero() && m_[1].fx.is_zero() && m_[1].gy == id &&
         m_[2].fx.is_zero() && m_[3].gy.is_zero();
}

SpreadMap dempwolff_map(const FieldPtr& F, const LinPoly& F1, const LinPoly& F2, Elem xi, std::string family) {
  const auto id = LinPoly::identity(F), z = LinPoly::zero(F);
  SpreadMap S(F, {SpreadEntry{id, z}, SpreadEntry{z, id}, SpreadEntry{z, F1}, SpreadEntry{F2.scaled(xi), z}},
              std::move(family));
  S.set_dempwolff({F1, F2, xi});
  return S;
}

// ---------------------------------------------------------------------------

Elem default_xi(const Field& F) { return F.base_nonsquare(); }

namespace {

Elem require_elem(const Field& F, const std::string& text, const char* name) {
  if (text.empty()) throw InvalidArgument(std::string("missing parameter ") + name);
  return F.parse(text);
}

void require_gcd1(long long r, unsigned n, const char* name) {
  if (std::gcd(mod_floor(r, n), static_cast<long long>(n)) != 1)
    throw ConstraintViolation(std::string("gcd(") + name + ", n) = " +
                              std::to_string(std::gcd(mod_floor(r, n), static_cast<long long>(n))) + " != 1");
}

Elem resolve_xi(const Field& F, const std::string& text) {
  if (text.empty()) return default_xi(F);
  const Elem xi = F.parse(text);
  if (!F.in_base(xi) || xi.is_zero() || F.is_square_in_base(xi))
    throw ConstraintViolation("xi = " + text + " is not a non-square of F_q");
  return xi;
}

void require_dempwolff_field(const Field& F) {
  if (F.p() == 2) throw ConstraintViolation("Dempwolff families need q odd");
  if (F.n() % 2 == 0 || F.n() < 3) throw ConstraintViolation("Dempwolff families need n >= 3 odd, got n = " + std::to_string(F.n()));
}

void require_norm_not_pm1(const Field& F, Elem b) {
  if (b.is_zero()) throw ConstraintViolation("b must be nonzero");
  if (F.q() == 3) throw ConstraintViolation("N_q(b) ∈ {±1} for all b when q=3");
  const Elem nb = F.norm(b);
  if (nb == F.one() || nb == F.neg(F.one()))
    throw ConstraintViolation("N_q(b) = " + F.format(nb) + " is ±1");
}

// x^{q^r+1} + g x - f != 0 for every x.
void require_knuth(const Field& F, long long r, Elem f, Elem g) {
  for (std::uint64_t c = 0; c < F.size(); ++c) {
    const Elem x{static_cast<std::uint32_t>(c)};
    const Elem v = F.sub(F.add(F.mul(F.frob(x, r), x), F.mul(g, x)), f);
    if (v.is_zero())
      throw ConstraintViolation("x^{q^r+1} + g x - f vanishes at x = " + F.format(x));
  }
}

// x^{q^s+1} - f y^{q^t+1} != 0 for (x,y) != (0,0): scan both value sets.
void require_dickson(const Field& F, long long s, long long t, Elem f) {
  if (f.is_zero()) throw ConstraintViolation("f must be nonzero");
  std::vector<bool> xs(F.size(), false);
  for (std::uint64_t c = 1; c < F.size(); ++c) {
    const Elem x{static_cast<std::uint32_t>(c)};
    xs[F.mul(F.frob(x, s), x).code] = true;
  }
  for (std::uint64_t c = 1; c < F.size(); ++c) {
    const Elem y{static_cast<std::uint32_t>(c)};
    const Elem v = F.mul(f, F.mul(F.frob(y, t), y));
    if (xs[v.code]) throw ConstraintViolation("x^{q^s+1} - f y^{q^t+1} vanishes for y = " + F.format(y));
  }
}

}  // namespace

SpreadMap build_family(const FamilySpec& spec) {
  return build_family(Field::make(spec.p, spec.h, spec.n), spec);
}

SpreadMap build_family(const FieldPtr& Fp, const FamilySpec& spec) {
  const Field& F = *Fp;
  if (F.p() != spec.p || F.h() != spec.h || F.n() != spec.n) throw InvalidArgument("field does not match the spec");
  const unsigned n = F.n();
  const auto id = LinPoly::identity(Fp), z = LinPoly::zero(Fp);
  const std::string& fam = spec.family;

  if (fam == "dA") {
    require_dempwolff_field(F);
    require_gcd1(spec.r, n, "r");
    const Elem a = require_elem(F, spec.a, "a");
    if (a.is_zero()) throw ConstraintViolation("a must be nonzero");
    if (F.norm(a) == F.one()) throw ConstraintViolation("N_q(a) = 1");
    const Elem xi = resolve_xi(F, spec.xi);
    const auto A = family_A(Fp, a, spec.r);
    return dempwolff_map(Fp, A, A, xi, "dA");
  }
  if (fam == "dB") {
    require_dempwolff_field(F);
    require_gcd1(spec.r, n, "r");
    const Elem b = require_elem(F, spec.b, "b");
    require_norm_not_pm1(F, b);
    const Elem xi = resolve_xi(F, spec.xi);
    const auto B = family_B(Fp, b, spec.r);
    return dempwolff_map(Fp, B, B, xi, "dB");
  }
  if (fam == "dAB") {
    require_dempwolff_field(F);
    require_gcd1(spec.r, n, "r");
    const Elem b = require_elem(F, spec.b, "b");
    require_norm_not_pm1(F, b);
    const Elem xi = resolve_xi(F, spec.xi);
    return dempwolff_map(Fp, family_A(Fp, F.mul(b, b), spec.r), family_B(Fp, b, -spec.r), xi, "dAB");
  }
  if (fam == "k17" || fam == "k19") {
    require_gcd1(spec.r, n, "r");
    const Elem f = require_elem(F, spec.f, "f");
    const Elem g = spec.g.empty() ? F.zero() : F.parse(spec.g);
    require_knuth(F, spec.r, f, g);
    const auto xr = LinPoly::monomial(Fp, F.one(), spec.r);
    if (fam == "k17")
      return SpreadMap(Fp, {SpreadEntry{id, z}, SpreadEntry{z, id}, SpreadEntry{z, LinPoly::monomial(Fp, f, spec.r)},
                            SpreadEntry{xr, LinPoly::monomial(Fp, g, spec.r)}},
                       "k17");
    return SpreadMap(Fp, {SpreadEntry{id, z}, SpreadEntry{z, id}, SpreadEntry{z, LinPoly::monomial(Fp, f, -spec.r)},
                          SpreadEntry{xr, LinPoly::monomial(Fp, g, 0)}},
                     "k19");
  }
  if (fam == "gd") {
    if (spec.s < 0 || spec.t < 0 || spec.s >= n || spec.t >= n)
      throw ConstraintViolation("s and t must lie in {0, ..., n-1}");
    if (spec.s == 0 && spec.t == 0) throw ConstraintViolation("(s,t) = (0,0)");
    if (std::gcd(std::gcd(spec.s, spec.t), static_cast<long long>(n)) != 1)
      throw ConstraintViolation("gcd(s,t,n) != 1");
    const Elem f = require_elem(F, spec.f, "f");
    require_dickson(F, spec.s, spec.t, f);
    return SpreadMap(Fp, {SpreadEntry{id, z}, SpreadEntry{z, id}, SpreadEntry{z, LinPoly::monomial(Fp, f, spec.t)},
                          SpreadEntry{LinPoly::monomial(Fp, F.one(), spec.s), z}},
                     "gd");
  }
  if (fam == "gtf") {
    if (F.p() == 2) throw ConstraintViolation("gtf needs q odd");
    require_gcd1(spec.t, n, "t");
    QuadExt E(Fp);
    if (spec.c.empty()) throw InvalidArgument("missing parameter c");
    const QElem c = E.parse(spec.c);
    if (!gtf_parameter_valid(E, c, spec.t))
      throw ConstraintViolation("c = " + spec.c + " equals some y^{1-q^t} x^{1-q^n}");
    return gtf_spread(E, c, spec.t);
  }
  throw InvalidArgument("unknown family '" + fam + "'");
}

// ---------------------------------------------------------------------------

namespace {

QElem gtf_star(const QuadExt& E, QElem c, long long t, QElem x, QElem y) {
  const unsigned tt = static_cast<unsigned>(mod_floor(t, 2 * E.base().n()));
  return E.sub(E.mul(y, x), E.mul(c, E.mul(E.frob(y, tt), E.conj(x))));
}

}  // namespace

SpreadMap gtf_spread(const QuadExt& E, QElem c, long long t) {
  const FieldPtr& Fp = E.base_ptr();
  const Field& F = *Fp;
  const QElem one = E.embed(F.one()), w{F.zero(), F.one()};
  std::array<SpreadEntry, 4> m;
  for (int i = 0; i < 4; ++i) {
    const QElem row = i < 2 ? one : w;
    const bool second = (i % 2) == 1;
    auto coord = [&](QElem y) {
      const QElem v = gtf_star(E, c, t, row, y);
      return second ? v.a1 : v.a0;
    };
    m[i].fx = lp_interpolate(Fp, [&](Elem y0) { return coord({y0, F.zero()}); });
    m[i].gy = lp_interpolate(Fp, [&](Elem y1) { return coord({F.zero(), y1}); });
  }
  return SpreadMap(Fp, std::move(m), "gtf");
}

bool gtf_parameter_valid(const QuadExt& E, QElem c, long long t, std::uint64_t seed) {
  const Field& F = E.base();
  const std::uint64_t idx = F.q() - 1;
  const unsigned tt = static_cast<unsigned>(mod_floor(t, 2 * F.n()));
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 256; ++k) {
    const QElem x{Elem{static_cast<std::uint32_t>(rng() % F.size())}, Elem{static_cast<std::uint32_t>(rng() % F.size())}};
    const QElem y{Elem{static_cast<std::uint32_t>(rng() % F.size())}, Elem{static_cast<std::uint32_t>(rng() % F.size())}};
    if ((x.a0.is_zero() && x.a1.is_zero()) || (y.a0.is_zero() && y.a1.is_zero())) continue;
    const QElem v = E.mul(E.mul(y, E.inv(E.frob(y, tt))), E.mul(x, E.inv(E.conj(x))));
    if (!E.in_index_subgroup(v, idx)) throw InternalError("gtf value outside the index-(q-1) subgroup");
  }
  // c = 0 gives the field F_{q^{2n}} itself, not a twisted field.
  if (c.a0.is_zero() && c.a1.is_zero()) return false;
  return !E.in_index_subgroup(c, idx);
}

DempwolffCheck dempwolff_condition(const LinPoly& F1, const LinPoly& F2, Elem xi) {
  const Field& F = F1.field();
  std::vector<bool> im1(F.size(), false), im2(F.size(), false);
  DempwolffCheck out;
  out.expected = (F.size() - 1) / 2;
  for (std::uint64_t c = 1; c < F.size(); ++c) {
    const Elem x{static_cast<std::uint32_t>(c)};
    const Elem p1 = F.mul(F1.eval(x), x), p2 = F.mul(F2.eval(x), x);
    if (!im1[p1.code]) ++out.image1;
    if (!im2[p2.code]) ++out.image2;
    im1[p1.code] = true;
    im2[p2.code] = true;
  }
  out.disjoint = true;
  for (std::uint64_t c = 0; c < F.size() && out.disjoint; ++c)
    if (im2[c] && im1[F.mul(xi, Elem{static_cast<std::uint32_t>(c)}).code]) out.disjoint = false;
  return out;
}

bool zero_divisor_check(const SpreadMap& S, unsigned workers) {
  const Field& F = S.field();
  const std::uint64_t Q = F.size();
  std::vector<char> bad(chunk_count(Q), 0);
  parallel_chunks(Q, workers, [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t xc = b; xc < e; ++xc)
      for (std::uint64_t yc = 0; yc < Q; ++yc) {
        if (xc == 0 && yc == 0) continue;
        if (mat_det(F, S.at(Elem{static_cast<std::uint32_t>(xc)}, Elem{static_cast<std::uint32_t>(yc)})).is_zero()) {
          bad[chunk] = 1;
          return;
        }
      }
  });
  for (char c : bad)
    if (c) return false;
  return true;
}

// ---------------------------------------------------------------------------

std::vector<Mat2> spread_basis(const SpreadMap& S) {
  const Field& F = S.field();
  std::vector<Mat2> out;
  std::uint64_t code = 1;
  for (unsigned k = 0; k < F.degree(); ++k, code *= F.p()) out.push_back(S.at(F.from_code(code), F.zero()));
  code = 1;
  for (unsigned k = 0; k < F.degree(); ++k, code *= F.p()) out.push_back(S.at(F.zero(), F.from_code(code)));
  return out;
}

SpreadMap normalize_spread(const SpreadMap& S) {
  return normalize_spread(S, S.field().one(), S.field().zero());
}

SpreadMap normalize_spread(const SpreadMap& S, Elem x0, Elem y0) {
  const Field& F = S.field();
  const Mat2 M0 = S.at(x0, y0);
  if (mat_det(F, M0).is_zero()) throw InvalidArgument("spread set has zero divisors (M0 singular)");
  const Mat2 I = mat_inv(F, M0);
  auto comb = [&](Elem s, const SpreadEntry& u, Elem t, const SpreadEntry& v) {
    return SpreadEntry{u.fx.scaled(s) + v.fx.scaled(t), u.gy.scaled(s) + v.gy.scaled(t)};
  };
  std::array<SpreadEntry, 4> m{comb(I.a, S.entry(0), I.b, S.entry(2)), comb(I.a, S.entry(1), I.b, S.entry(3)),
                               comb(I.c, S.entry(0), I.d, S.entry(2)), comb(I.c, S.entry(1), I.d, S.entry(3))};
  return SpreadMap(S.field_ptr(), std::move(m), S.family());
}

SpreadMap transpose_spread(const SpreadMap& S) {
  return SpreadMap(S.field_ptr(), {S.entry(0), S.entry(2), S.entry(1), S.entry(3)}, S.family() + "^t");
}

namespace {

using Vec = std::vector<std::uint32_t>;

Vec mat_vec(const Field& F, const Mat2& M) {
  Vec v;
  v.reserve(4 * F.degree());
  for (Elem e : {M.a, M.b, M.c, M.d})
    for (unsigned k = 0; k < F.degree(); ++k) v.push_back(F.digit(e, k));
  return v;
}

// Matrix over F_p of the map v -> v M on V = F_{q^n}^2 (column convention).
FpMatrix phi(const Field& F, const Mat2& M) {
  const unsigned d = F.degree();
  FpMatrix out(2 * d, 2 * d, F.p());
  std::uint64_t code = 1;
  for (unsigned k = 0; k < d; ++k, code *= F.p()) {
    const Elem e = F.from_code(code);
    // (e, 0) M = (e a, e b);  (0, e) M = (e c, e d)
    const Elem r0[2] = {F.mul(e, M.a), F.mul(e, M.b)};
    const Elem r1[2] = {F.mul(e, M.c), F.mul(e, M.d)};
    for (unsigned i = 0; i < d; ++i) {
      out(i, k) = F.digit(r0[0], i);
      out(d + i, k) = F.digit(r0[1], i);
      out(i, d + k) = F.digit(r1[0], i);
      out(d + i, d + k) = F.digit(r1[1], i);
    }
  }
  return out;
}

std::uint64_t size_from_dim(const Field& F, std::size_t dim) {
  if (dim % F.h() != 0) throw InternalError("nucleus dimension is not a multiple of h");
  return ipow(F.p(), static_cast<unsigned>(dim));
}

}  // namespace

bool contains_identity(const SpreadMap& S) {
  const Field& F = S.field();
  FpSpan span(4 * F.degree(), F.p());
  for (const auto& B : spread_basis(S)) span.insert(mat_vec(F, B));
  return span.contains(mat_vec(F, mat_identity(F)));
}

NucleiReport nuclei_spreadset(const SpreadMap& S) {
  const Field& F = S.field();
  const unsigned p = F.p();
  const auto B = spread_basis(S);
  const std::size_t D = B.size();
  const std::size_t W = 4 * F.degree();
  FpSpan span(W, p);
  for (const auto& M : B)
    if (!span.insert(mat_vec(F, M))) throw InvalidArgument("spread set has zero divisors (dependent basis)");
  if (!span.contains(mat_vec(F, mat_identity(F)))) throw InvalidArgument("spread set is not normalized (I not in S)");

  // Residues of products B_i B_j modulo S; columns indexed by i.
  auto containment = [&](bool left_factor) {
    FpMatrix m(D * W, D, p);
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j) {
        const Mat2 P = left_factor ? mat_mul(F, B[i], B[j]) : mat_mul(F, B[j], B[i]);
        const Vec r = span.reduce(mat_vec(F, P));
        for (std::size_t k = 0; k < W; ++k) m(j * W + k, i) = r[k];
      }
    return m;
  };
  const FpMatrix mid = containment(true);
  const FpMatrix rig = containment(false);
  // Commutators B_i B_j - B_j B_i.
  FpMatrix com(D * W, D, p);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) {
      const Vec a = mat_vec(F, mat_mul(F, B[i], B[j])), b = mat_vec(F, mat_mul(F, B[j], B[i]));
      for (std::size_t k = 0; k < W; ++k) com(j * W + k, i) = (a[k] + p - b[k]) % p;
    }

  NucleiReport out;
  out.method = "spreadset";
  out.middle = size_from_dim(F, D - mid.rank());
  out.right = size_from_dim(F, D - rig.rank());
  FpMatrix all(0, D, p);
  for (const FpMatrix* m : {&mid, &rig, static_cast<const FpMatrix*>(&com)})
    for (std::size_t r = 0; r < m->rows(); ++r) {
      Vec row(D);
      for (std::size_t c = 0; c < D; ++c) row[c] = (*m)(r, c);
      all.append_row(row);
    }
  out.center = size_from_dim(F, D - all.rank());

  // Centralizer of S in End_{F_p}(V): T Phi_j = Phi_j T.
  const std::size_t V = 2 * F.degree();
  std::vector<FpMatrix> ph;
  for (const auto& M : B) ph.push_back(phi(F, M));
  FpMatrix cen(D * V * V, V * V, p);
  for (std::size_t j = 0; j < D; ++j)
    for (std::size_t r = 0; r < V; ++r)
      for (std::size_t c = 0; c < V; ++c) {
        const std::size_t row = (j * V + r) * V + c;
        for (std::size_t k = 0; k < V; ++k) {
          // (T Phi)[r][c] = sum_k T[r][k] Phi[k][c];  (Phi T)[r][c] = sum_k Phi[r][k] T[k][c]
          auto& x = cen(row, r * V + k);
          x = (x + ph[j](k, c)) % p;
          auto& y = cen(row, k * V + c);
          y = (y + p - ph[j](r, k)) % p;
        }
      }
  out.left = size_from_dim(F, V * V - cen.rank());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// x o y = R_e^{-1}(x) * L_e^{-1}(y) with e = (1,0), on F_p-coordinates.
class Unitized {
 public:
  explicit Unitized(const SpreadMap& S) : S_(S), F_(S.field()) {
    d_ = F_.degree();
    M0inv_ = mat_inv(F_, S.at(F_.one(), F_.zero()));
    // L_e(x,y) = first row of M(x,y); invert it over F_p.
    FpMatrix le(2 * d_, 2 * d_, F_.p());
    for (unsigned k = 0; k < 2 * d_; ++k) {
      const auto [x, y] = unit(k);
      const Mat2 M = S.at(x, y);
      for (unsigned i = 0; i < d_; ++i) {
        le(i, k) = F_.digit(M.a, i);
        le(d_ + i, k) = F_.digit(M.b, i);
      }
    }
    le_inv_ = le.inverse();
  }

  std::pair<Elem, Elem> unit(unsigned k) const {
    const Elem e = F_.from_code(ipow(F_.p(), k % d_));
    return k < d_ ? std::pair{e, F_.zero()} : std::pair{F_.zero(), e};
  }

  Vec coords(std::pair<Elem, Elem> v) const {
    Vec out(2 * d_);
    for (unsigned i = 0; i < d_; ++i) {
      out[i] = F_.digit(v.first, i);
      out[d_ + i] = F_.digit(v.second, i);
    }
    return out;
  }

  std::pair<Elem, Elem> from_coords(const Vec& c) const {
    std::vector<unsigned> a(c.begin(), c.begin() + d_), b(c.begin() + d_, c.end());
    return {F_.from_digits(a), F_.from_digits(b)};
  }

  std::pair<Elem, Elem> circ(std::pair<Elem, Elem> x, std::pair<Elem, Elem> y) const {
    // R_e(u,v) = (u,v) M0, so R_e^{-1}(x) = x M0^{-1}
    const Elem u = F_.add(F_.mul(x.first, M0inv_.a), F_.mul(x.second, M0inv_.c));
    const Elem v = F_.add(F_.mul(x.first, M0inv_.b), F_.mul(x.second, M0inv_.d));
    const auto yy = from_coords(le_inv_.apply(coords(y)));
    return S_.multiply(u, v, yy.first, yy.second);
  }

 private:
  const SpreadMap& S_;
  const Field& F_;
  unsigned d_;
  Mat2 M0inv_;
  FpMatrix le_inv_;
};

}  // namespace

NucleiReport nuclei_bruteforce(const SpreadMap& S, std::uint64_t cap, unsigned workers) {
  const Field& F = S.field();
  const std::uint64_t Q = F.size(), E = Q * Q;
  if (E > cap)
    throw CapExceeded("brute-force nuclei need q^{2n} <= " + std::to_string(cap) + ", got " + std::to_string(E));
  const Unitized U(S);
  auto pair_of = [&](std::uint64_t i) {
    return std::pair{Elem{static_cast<std::uint32_t>(i % Q)}, Elem{static_cast<std::uint32_t>(i / Q)}};
  };
  auto index_of = [&](std::pair<Elem, Elem> v) { return std::uint64_t{v.first.code} + Q * v.second.code; };
  std::vector<std::uint32_t> tab(E * E);
  parallel_chunks(E, workers, [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i)
      for (std::uint64_t j = 0; j < E; ++j)
        tab[i * E + j] = static_cast<std::uint32_t>(index_of(U.circ(pair_of(i), pair_of(j))));
  });
  auto m = [&](std::uint64_t i, std::uint64_t j) -> std::uint64_t { return tab[i * E + j]; };

  std::vector<char> in_l(E), in_m(E), in_r(E);
  parallel_chunks(E, workers, [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t a = b; a < e; ++a) {
      bool l = true, mi = true, r = true;
      for (std::uint64_t x = 0; x < E && (l || mi || r); ++x)
        for (std::uint64_t y = 0; y < E && (l || mi || r); ++y) {
          if (l && m(m(a, x), y) != m(a, m(x, y))) l = false;
          if (mi && m(m(x, a), y) != m(x, m(a, y))) mi = false;
          if (r && m(m(x, y), a) != m(x, m(y, a))) r = false;
        }
      in_l[a] = l;
      in_m[a] = mi;
      in_r[a] = r;
    }
  });
  NucleiReport out;
  out.method = "bruteforce";
  for (std::uint64_t a = 0; a < E; ++a) {
    out.left += in_l[a];
    out.middle += in_m[a];
    out.right += in_r[a];
    if (in_l[a] && in_m[a] && in_r[a]) {
      bool comm = true;
      for (std::uint64_t x = 0; x < E && comm; ++x) comm = m(a, x) == m(x, a);
      out.center += comm;
    }
  }
  return out;
}

NucleiReport nuclei_sampled(const SpreadMap& S, std::uint64_t seed, int probes) {
  const Field& F = S.field();
  const unsigned p = F.p();
  const Unitized U(S);
  const unsigned D = 2 * F.degree();
  std::vector<std::pair<Elem, Elem>> basis(D);
  for (unsigned k = 0; k < D; ++k) basis[k] = U.unit(k);
  auto sub = [&](std::pair<Elem, Elem> a, std::pair<Elem, Elem> b) {
    return std::pair{F.sub(a.first, b.first), F.sub(a.second, b.second)};
  };
  // Linear-in-a defect for each nucleus kind.
  enum Kind { kLeft, kMiddle, kRight, kComm };
  auto defect = [&](Kind kind, std::pair<Elem, Elem> a, std::pair<Elem, Elem> x, std::pair<Elem, Elem> y) {
    switch (kind) {
      case kLeft: return sub(U.circ(U.circ(a, x), y), U.circ(a, U.circ(x, y)));
      case kMiddle: return sub(U.circ(U.circ(x, a), y), U.circ(x, U.circ(a, y)));
      case kRight: return sub(U.circ(U.circ(x, y), a), U.circ(x, U.circ(y, a)));
      default: return sub(U.circ(a, x), U.circ(x, a));
    }
  };
  auto append = [&](FpMatrix& m, Kind kind, const std::vector<Vec>& cand, std::pair<Elem, Elem> x,
                    std::pair<Elem, Elem> y) {
    std::vector<Vec> cols;
    for (const auto& c : cand) cols.push_back(U.coords(defect(kind, U.from_coords(c), x, y)));
    for (unsigned i = 0; i < D; ++i) {
      Vec row(cand.size());
      for (std::size_t j = 0; j < cand.size(); ++j) row[j] = cols[j][i];
      m.append_row(row);
    }
  };
  // Kernel of the defect map restricted to span(cand), as vectors.
  auto solve = [&](const FpMatrix& m, const std::vector<Vec>& cand) {
    std::vector<Vec> out;
    for (const auto& k : m.kernel()) {
      Vec v(D, 0);
      for (std::size_t j = 0; j < cand.size(); ++j)
        for (unsigned i = 0; i < D; ++i) v[i] = static_cast<std::uint32_t>((v[i] + std::uint64_t{k[j]} * cand[j][i]) % p);
      out.push_back(v);
    }
    return out;
  };

  std::vector<Vec> full;
  for (unsigned k = 0; k < D; ++k) {
    Vec v(D, 0);
    v[k] = 1;
    full.push_back(v);
  }
  std::mt19937_64 rng(seed);
  auto random_elem = [&] {
    return std::pair{Elem{static_cast<std::uint32_t>(rng() % F.size())}, Elem{static_cast<std::uint32_t>(rng() % F.size())}};
  };
  std::vector<std::pair<std::pair<Elem, Elem>, std::pair<Elem, Elem>>> probe_pairs;
  for (int t = 0; t < probes; ++t) probe_pairs.push_back({random_elem(), random_elem()});

  auto nucleus = [&](std::vector<Kind> kinds) {
    // filter
    std::vector<Vec> cand = full;
    for (Kind kind : kinds) {
      FpMatrix m(0, cand.size(), p);
      for (const auto& [x, y] : probe_pairs) append(m, kind, cand, x, y);
      if (m.rows() > 0) cand = solve(m, cand);
      if (cand.empty()) break;
    }
    // verify on all basis pairs; trilinearity makes this exact
    for (Kind kind : kinds) {
      if (cand.empty()) break;
      FpMatrix m(0, cand.size(), p);
      for (const auto& x : basis) {
        if (kind == kComm) {
          append(m, kind, cand, x, x);
          continue;
        }
        for (const auto& y : basis) append(m, kind, cand, x, y);
      }
      cand = solve(m, cand);
    }
    return size_from_dim(F, cand.size());
  };
  NucleiReport out;
  out.method = "sampled";
  out.left = nucleus({kLeft});
  out.middle = nucleus({kMiddle});
  out.right = nucleus({kRight});
  out.center = nucleus({kLeft, kMiddle, kRight, kComm});
  return out;
}

}  // namespace r2sf
