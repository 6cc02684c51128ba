#include "r2sf/linpoly.hpp"

#include <random>

#include "r2sf/error.hpp"

namespace r2sf {

LinPoly::LinPoly(FieldPtr F, std::vector<Elem> coeffs) : F_(std::move(F)), c_(std::move(coeffs)) {
  if (c_.size() > F_->n()) throw InvalidArgument("q-polynomial has more than n coefficients");
  c_.resize(F_->n());
}

LinPoly LinPoly::zero(FieldPtr F) {
  const unsigned n = F->n();
  return LinPoly(std::move(F), std::vector<Elem>(n));
}

LinPoly LinPoly::identity(FieldPtr F) {
  return monomial(std::move(F), Elem{1}, 0);
}

LinPoly LinPoly::monomial(FieldPtr F, Elem c, long long i) {
  std::vector<Elem> v(F->n());
  v[static_cast<std::size_t>(mod_floor(i, F->n()))] = c;
  return LinPoly(std::move(F), std::move(v));
}

bool LinPoly::is_zero() const {
  for (Elem e : c_)
    if (!e.is_zero()) return false;
  return true;
}

bool LinPoly::is_monomial() const {
  unsigned nz = 0;
  for (Elem e : c_) nz += e.is_zero() ? 0 : 1;
  return nz == 1;
}

void LinPoly::check_same(const LinPoly& o) const {
  if (!F_->same_as(*o.F_)) throw InvalidArgument("q-polynomials over different fields");
}

Elem LinPoly::eval(Elem x) const {
  Elem s{};
  if (x.is_zero()) return s;
  for (unsigned i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) s = F_->add(s, F_->mul(c_[i], F_->frob(x, i)));
  return s;
}

LinPoly LinPoly::operator+(const LinPoly& o) const {
  check_same(o);
  std::vector<Elem> v(c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = F_->add(c_[i], o.c_[i]);
  return LinPoly(F_, std::move(v));
}

LinPoly LinPoly::operator-(const LinPoly& o) const {
  check_same(o);
  std::vector<Elem> v(c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = F_->sub(c_[i], o.c_[i]);
  return LinPoly(F_, std::move(v));
}

LinPoly LinPoly::scaled(Elem c) const {
  std::vector<Elem> v(c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = F_->mul(c, c_[i]);
  return LinPoly(F_, std::move(v));
}

bool LinPoly::operator==(const LinPoly& o) const {
  return F_->same_as(*o.F_) && c_ == o.c_;
}

std::vector<Elem> digit_images(const LinPoly& f) {
  const Field& F = f.field();
  std::vector<Elem> out(F.degree());
  std::uint64_t code = 1;
  for (unsigned j = 0; j < F.degree(); ++j, code *= F.p()) out[j] = f.eval(F.from_code(code));
  return out;
}

FpMatrix LinPoly::fp_matrix() const {
  const unsigned d = F_->degree();
  FpMatrix m(d, d, F_->p());
  const auto img = digit_images(*this);
  for (unsigned j = 0; j < d; ++j)
    for (unsigned i = 0; i < d; ++i) m(i, j) = F_->digit(img[j], i);
  return m;
}

unsigned LinPoly::rank() const {
  return static_cast<unsigned>(fp_matrix().rank() / F_->h());
}

std::string LinPoly::to_string() const {
  std::string s;
  for (unsigned i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    if (c_[i] != F_->one()) s += F_->format(c_[i]) + "*";
    s += "X^[" + std::to_string(i) + "]";
  }
  return s.empty() ? "0" : s;
}

LinPoly LinPoly::parse(FieldPtr F, std::string_view text) {
  std::vector<Elem> v(F->n());
  std::vector<std::string_view> terms;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[') ++depth;
    if (text[i] == ']') --depth;
    if (text[i] == '+' && depth == 0) {
      terms.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  terms.push_back(text.substr(start));
  for (auto t : terms) {
    while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
    while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
    if (t == "0") continue;
    const auto xpos = t.rfind("X^[");
    if (xpos == std::string_view::npos || t.back() != ']')
      throw InvalidArgument("bad q-polynomial term '" + std::string(t) + "'");
    const std::string idx(t.substr(xpos + 3, t.size() - xpos - 4));
    long long i = 0;
    try {
      i = std::stoll(idx);
    } catch (const std::exception&) {
      throw InvalidArgument("bad q-degree '" + idx + "'");
    }
    Elem c = F->one();
    if (xpos > 0) {
      auto ct = t.substr(0, xpos);
      if (ct.back() != '*') throw InvalidArgument("bad q-polynomial term '" + std::string(t) + "'");
      c = F->parse(ct.substr(0, ct.size() - 1));
    }
    auto& slot = v[static_cast<std::size_t>(mod_floor(i, F->n()))];
    slot = F->add(slot, c);
  }
  return LinPoly(std::move(F), std::move(v));
}

// ---------------------------------------------------------------------------

std::vector<Elem> fq_basis(const Field& F) {
  std::vector<Elem> b(F.n());
  for (unsigned j = 0; j < F.n(); ++j) b[j] = F.exp_g(j);
  return b;
}

LinPoly lp_interpolate_basis(const FieldPtr& F, const std::vector<Elem>& values) {
  const unsigned n = F->n();
  if (values.size() != n) throw InvalidArgument("interpolation needs one value per basis element");
  const auto basis = fq_basis(*F);
  // Moore system: sum_i a_i b_j^{q^i} = v_j
  FMat m(n, std::vector<Elem>(n));
  for (unsigned j = 0; j < n; ++j)
    for (unsigned i = 0; i < n; ++i) m[j][i] = F->frob(basis[j], i);
  return LinPoly(F, fsolve(*F, std::move(m), values));
}

LinPoly lp_interpolate(const FieldPtr& F, const std::function<Elem(Elem)>& fn, std::uint64_t verify_cap) {
  const auto basis = fq_basis(*F);
  std::vector<Elem> vals(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) vals[j] = fn(basis[j]);
  LinPoly f = lp_interpolate_basis(F, vals);
  auto check = [&](Elem x) {
    if (f.eval(x) != fn(x))
      throw InvalidArgument("table is not F_q-linear (mismatch at " + F->format(x) + ")");
  };
  if (F->size() <= verify_cap) {
    for (std::uint64_t c = 0; c < F->size(); ++c) check(Elem{static_cast<std::uint32_t>(c)});
  } else {
    std::mt19937_64 rng(0);
    for (int k = 0; k < 4096; ++k) check(Elem{static_cast<std::uint32_t>(rng() % F->size())});
  }
  return f;
}

LinPoly lp_compose(const LinPoly& f, const LinPoly& g) {
  const Field& F = f.field();
  if (!F.same_as(g.field())) throw InvalidArgument("q-polynomials over different fields");
  const unsigned n = F.n();
  std::vector<Elem> c(n);
  for (unsigned i = 0; i < n; ++i) {
    if (f.coeff(i).is_zero()) continue;
    for (unsigned j = 0; j < n; ++j) {
      if (g.coeff(j).is_zero()) continue;
      auto& slot = c[(i + j) % n];
      slot = F.add(slot, F.mul(f.coeff(i), F.frob(g.coeff(j), i)));
    }
  }
  return LinPoly(f.field_ptr(), std::move(c));
}

LinPoly lp_inverse(const LinPoly& f) {
  const Field& F = f.field();
  const FpMatrix m = f.fp_matrix();
  const std::size_t rk = m.rank();
  if (rk != F.degree())
    throw InvalidArgument("q-polynomial is singular (kernel of F_q-dimension " +
                          std::to_string((F.degree() - rk) / F.h()) + ")");
  const FpMatrix mi = m.inverse();
  const auto basis = fq_basis(F);
  std::vector<Elem> vals(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto d = F.digits(basis[j]);
    const auto img = mi.apply(std::vector<std::uint32_t>(d.begin(), d.end()));
    vals[j] = F.from_digits(std::vector<unsigned>(img.begin(), img.end()));
  }
  return lp_interpolate_basis(f.field_ptr(), vals);
}

LinPoly lp_adjoint(const LinPoly& f) {
  const Field& F = f.field();
  const unsigned n = F.n();
  std::vector<Elem> c(n);
  for (unsigned i = 0; i < n; ++i) {
    const unsigned k = (n - i) % n;
    c[k] = F.frob(f.coeff(i), k);
  }
  return LinPoly(f.field_ptr(), std::move(c));
}

std::vector<Elem> lp_kernel(const LinPoly& f) {
  const Field& F = f.field();
  const auto ker = f.fp_matrix().kernel();
  // F_p-basis of the kernel, thinned to an F_q-basis.
  std::vector<Elem> out;
  FpSpan span(F.degree(), F.p());
  const auto base = F.base_elements();
  for (const auto& v : ker) {
    const Elem x = F.from_digits(std::vector<unsigned>(v.begin(), v.end()));
    const auto d = F.digits(x);
    if (span.contains(std::vector<std::uint32_t>(d.begin(), d.end()))) continue;
    out.push_back(x);
    for (Elem l : base) {
      const auto dl = F.digits(F.mul(l, x));
      span.insert(std::vector<std::uint32_t>(dl.begin(), dl.end()));
    }
  }
  return out;
}

LinPoly family_A(const FieldPtr& F, Elem a, long long r) {
  const unsigned n = F->n();
  std::vector<Elem> c(n);
  c[static_cast<std::size_t>(mod_floor(r, n))] = F->one();
  auto& s = c[static_cast<std::size_t>(mod_floor(-r, n))];
  s = F->sub(s, a);
  return LinPoly(F, std::move(c));
}

LinPoly family_H(const FieldPtr& F, Elem b, long long r) {
  const unsigned n = F->n();
  std::vector<Elem> c(n);
  c[0] = F->one();
  auto& s = c[static_cast<std::size_t>(mod_floor(r, n))];
  s = F->sub(s, b);
  return LinPoly(F, std::move(c));
}

LinPoly family_B(const FieldPtr& F, Elem b, long long r) {
  if (F->p() == 2) throw InvalidArgument("B_{b,r} needs odd characteristic");
  const LinPoly hi = lp_inverse(family_H(F, b, r));
  return hi.scaled(F->from_int(2)) - LinPoly::identity(F);
}

}  // namespace r2sf
