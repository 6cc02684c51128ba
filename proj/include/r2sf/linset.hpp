#pragma once

// F_q-linear sets of PG(1,q^n) and PG(3,q^n): enumeration, weights, long
// lines, pseudoregulus tests and relations with Q: X0 X3 - X1 X2 = 0.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "r2sf/ffield.hpp"
#include "r2sf/linpoly.hpp"
#include "r2sf/presemifield.hpp"

namespace r2sf {

using Vec4 = std::array<Elem, 4>;

// First nonzero coordinate scaled to 1 (the first `dim` coordinates are used).
Vec4 normalize_point(const Field& F, Vec4 v, unsigned dim = 4);

// Canonical reduced echelon 2x4 basis of a line.
struct ProjLine {
  Vec4 r0, r1;
  friend bool operator==(const ProjLine&, const ProjLine&) = default;
  friend auto operator<=>(const ProjLine&, const ProjLine&) = default;
};

ProjLine line_through(const Field& F, const Vec4& a, const Vec4& b);
// All q^n + 1 points of the line, normalized.
std::vector<Vec4> line_points(const Field& F, const ProjLine& l);
bool point_on_line(const Field& F, const ProjLine& l, const Vec4& p);
bool lines_meet(const Field& F, const ProjLine& a, const ProjLine& b);
std::string format_point(const Field& F, const Vec4& p, unsigned dim = 4);
std::string format_line(const Field& F, const ProjLine& l);

// r1: X1 = X2 = 0 and its polar r1^perp: X0 = X3 = 0.
ProjLine line_r1(const Field& F);
ProjLine line_r1_perp(const Field& F);

class LinearSet {
 public:
  // U is the F_p-span of `basis` (vectors of length dim in {2,4}); the basis
  // must be F_p-independent and of size divisible by h.
  static LinearSet from_basis(FieldPtr F, unsigned dim, std::vector<Vec4> basis, unsigned workers = 1);

  const Field& field() const { return *F_; }
  const FieldPtr& field_ptr() const { return F_; }
  unsigned dim() const { return dim_; }
  unsigned rank() const { return static_cast<unsigned>(basis_.size() / F_->h()); }
  const std::vector<Vec4>& basis() const { return basis_; }

  std::uint64_t size() const { return keys_.size(); }
  Vec4 point(std::size_t i) const { return decode(keys_[i]); }
  unsigned weight(std::size_t i) const { return weights_[i]; }
  // Weight of a point (any representative); 0 when it is not in L.
  unsigned weight_of(const Vec4& v) const;
  std::optional<std::size_t> index_of(const Vec4& v) const;

  // x_1..x_n (index 0 unused).
  std::vector<std::uint64_t> spectrum() const;
  unsigned max_weight() const;
  bool scattered() const { return max_weight() <= 1; }

  std::uint64_t key(const Vec4& normalized) const;
  Vec4 decode(std::uint64_t key) const;

 private:
  FieldPtr F_;
  unsigned dim_ = 4;
  std::vector<Vec4> basis_;
  std::vector<std::uint64_t> keys_;  // sorted
  std::vector<std::uint8_t> weights_;
};

LinearSet build_linear_set(const SpreadMap& S, unsigned workers = 1);
// {(x, x^{q^s}, y, y^{q^t})}
LinearSet build_Lst(const FieldPtr& F, long long s, long long t, unsigned workers = 1);
// {(x, G(x))} on PG(1,q^n)
LinearSet build_line_graph(const LinPoly& G);

// x_1..x_n; throws InternalError unless sum_w x_w (q^w - 1) = q^k - 1 and
// |L| = 1 mod q.
std::vector<std::uint64_t> weight_spectrum(const LinearSet& L);

// U n W for the line's 2-space W, in the line's pivot coordinates.
LinearSet restrict_to_line(const LinearSet& L, const ProjLine& l);

struct LineInfo {
  ProjLine line;
  unsigned weight = 0;
  std::uint64_t points = 0;  // |L n line|
};

// Weight and point count of a line by lookup of its q^n + 1 points.
LineInfo line_weight(const LinearSet& L, const ProjLine& l);

struct LongLines {
  std::string mode;               // exhaustive | candidates
  std::vector<LineInfo> long_lines;  // weight exactly n
  std::vector<LineInfo> heavy;       // weight > n
  std::uint64_t contained = 0;       // lines with every point in L
};

// Every line through two points of L, by projection from each point.
LongLines long_lines_exhaustive(const LinearSet& L, std::uint64_t cap = 100000000ull, unsigned workers = 1);
// r1, r1^perp, lines through pairs of points of weight >= 2, lines through
// points of weight n, and the supplied extra lines.
LongLines long_lines_candidates(const LinearSet& L, const std::vector<ProjLine>& extra = {});

// ----- pseudoregulus tests on a line -----

struct LinePR {
  std::string verdict;  // pseudoregulus | not_pseudoregulus | not_scattered
  unsigned m = 0;
  Mat2 witness{};       // [[alpha, beta], [gamma, delta]]
  // Transversal points in the line's 2-coordinates.
  std::array<Elem, 2> t1{}, t2{};
  bool accepted() const { return verdict == "pseudoregulus"; }
};

// L = {(x, G(x))}: solve G(alpha z + beta z^{q^m}) = gamma z + delta z^{q^m}.
LinePR line_pr_test_graph(const LinPoly& G);
// Over pairs of points outside L, tests whether U is {lambda w + rho lambda^{q^m} v}.
LinePR line_pr_test_oracle(const LinearSet& Lline);

struct LineGraph {
  LinPoly G;
  // Original 2-vector = x' b1 + y' b2 for graph coordinates (x', y').
  std::array<Elem, 2> b1{}, b2{};
};
// Rewrites a rank-n linear set of a line as a graph, changing coordinates by
// a point outside L when (0,1) lies in L.
LineGraph line_graph(const LinearSet& Lline);
// Both tests on L n l; throws InternalError if they disagree.
LinePR line_pr_test(const LinearSet& L, const ProjLine& l);

// ----- 3-space -----

struct SpacePR {
  bool accepted = false;
  std::string reason;
  std::vector<ProjLine> transversals;
  bool witness_consistent = true;  // long-line transversal points lie on T1, T2
};
SpacePR space_pr_test(const LinearSet& L, const LongLines& ll);

// ----- quadric -----

enum class QuadricClass { external, tangent, secant, contained };
std::string to_string(QuadricClass c);
bool on_quadric(const Field& F, const Vec4& p);
QuadricClass classify_line(const Field& F, const ProjLine& l);
// b(X,Y) = X0 Y3 - X1 Y2 - X2 Y1 + X3 Y0
Elem bilinear(const Field& F, const Vec4& x, const Vec4& y);
ProjLine perp_line(const Field& F, const ProjLine& l);
// Coefficients of the plane perp to a point.
Vec4 perp_point(const Field& F, const Vec4& p);
bool disjoint_from_quadric(const LinearSet& L);

// (x, y, f(y), g(x)) -> (x, y, f^(y), g^(x)).
SpreadMap translation_dual(const SpreadMap& S);

// Coordinate swap X1 <-> X2.
Vec4 swap12(const Vec4& v);

// F_{q^n}-dimension of the span of L.
unsigned span_dimension(const LinearSet& L);
// Lines entirely contained in L (exact; see long_lines_candidates).
std::vector<ProjLine> contained_lines(const LinearSet& L);

// ----- signature -----

struct SignatureOptions {
  std::string mode = "exhaustive";  // exhaustive | candidates | auto
  std::string nuclei = "spreadset";  // spreadset | bruteforce | sampled
  std::uint64_t exhaustive_cap = 100000000ull;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::vector<ProjLine> extra_lines;
};

struct Signature {
  std::uint64_t q = 0;
  unsigned n = 0, rank = 0;
  NucleiReport nuclei;
  std::uint64_t size = 0;
  std::vector<std::uint64_t> spectrum;  // x_1..x_n
  bool scattered = false;
  std::string mode;
  std::uint64_t long_line_count = 0;     // exact in exhaustive mode, lower bound otherwise
  std::uint64_t long_lines_pr = 0;       // long lines of pseudoregulus type
  std::uint64_t long_lines_not_pr = 0;
  bool long_lines_disjoint = false;
  std::string pseudoregulus = "unknown";  // yes | no | unknown
  std::vector<std::string> transversal_classes;  // sorted
  std::optional<bool> transversals_polar;
  bool disjoint_from_q = false;
  unsigned span_dim = 0;
  std::uint64_t contained_lines = 0;
  std::uint64_t half_weight_points = 0;  // weight (n+1)/2, n odd
  bool pseudoregulus_consistent = true;

  // Fields compared for isotopy-invariant agreement.
  bool matches(const Signature& o) const;
};

struct SignatureRun {
  Signature sig;
  LongLines lines;
  SpacePR space;
};

SignatureRun signature(const SpreadMap& S, const SignatureOptions& opt = {});
// Linear-set part only (nuclei left empty).
SignatureRun signature_of_set(const LinearSet& L, const SignatureOptions& opt = {});

}  // namespace r2sf
