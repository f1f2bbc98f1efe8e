#include "pminimal/prepare.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "pminimal/error.hpp"

namespace pminimal {

// ---------------------------------------------------------------- SplitPoly

SplitPoly::SplitPoly(Rational unit, std::vector<RootFactor> factors) : unit_(std::move(unit)) {
  if (unit_ == 0) throw Error(ErrorKind::kInvalidArgument, "split polynomial needs a nonzero unit");
  std::map<Rational, long> merged;
  for (const auto& f : factors) {
    if (f.multiplicity < 1) throw Error(ErrorKind::kInvalidArgument, "multiplicity must be >= 1");
    merged[f.root] += f.multiplicity;
  }
  for (const auto& [root, mult] : merged) factors_.push_back({root, mult});
}

long SplitPoly::degree() const {
  long d = 0;
  for (const auto& f : factors_) d += f.multiplicity;
  return d;
}

long SplitPoly::multiplicity(const Rational& root) const {
  for (const auto& f : factors_) {
    if (f.root == root) return f.multiplicity;
  }
  return 0;
}

Rational SplitPoly::operator()(const Rational& t) const {
  Rational acc = unit_;
  for (const auto& f : factors_) {
    const Rational d = t - f.root;
    for (long i = 0; i < f.multiplicity; ++i) acc *= d;
  }
  return acc;
}

Poly SplitPoly::expand() const {
  std::vector<Rational> c{unit_};
  for (const auto& f : factors_) {
    for (long i = 0; i < f.multiplicity; ++i) {
      std::vector<Rational> next(c.size() + 1, Rational(0));
      for (std::size_t j = 0; j < c.size(); ++j) {
        next[j + 1] += c[j];
        next[j] -= c[j] * f.root;
      }
      c = std::move(next);
    }
  }
  return Poly(std::move(c));
}

namespace {

std::vector<Integer> positive_divisors(Integer n) {
  n = abs(n);
  const Integer limit("1000000000000");
  if (n > limit) throw Error(ErrorKind::kUnsupportedPolynomial, "coefficients too large to search for rational roots");
  std::vector<Integer> small;
  std::vector<Integer> large;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// Synthetic division by (t - r); returns quotient, requires f(r) = 0.
std::vector<Rational> deflate(const std::vector<Rational>& c, const Rational& r) {
  std::vector<Rational> q(c.size() - 1, Rational(0));
  Rational carry = 0;
  for (std::size_t i = c.size() - 1; i >= 1; --i) {
    carry = c[i] + carry * r;
    q[i - 1] = carry;
  }
  return q;
}

}  // namespace

SplitPoly split(const Poly& f) {
  if (f.degree() < 0) throw Error(ErrorKind::kUnsupportedPolynomial, "zero polynomial");
  std::vector<Rational> c = f.coeffs();
  std::vector<RootFactor> roots;
  while (c.size() > 1 && c.front() == 0) {
    c.erase(c.begin());
    roots.push_back({0, 1});
  }
  while (c.size() > 1) {
    Integer den_lcm = 1;
    for (const auto& x : c) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den_mpz_t());
    const Integer a0 = Integer(c.front() * den_lcm);
    const Integer an = Integer(c.back() * den_lcm);
    std::optional<Rational> found;
    for (const auto& num : positive_divisors(a0)) {
      for (const auto& den : positive_divisors(an)) {
        for (int sign : {1, -1}) {
          Rational r(num * sign, den);
          r.canonicalize();
          if (Poly(c)(r) == 0) {
            found = r;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) throw Error(ErrorKind::kUnsupportedPolynomial, "polynomial does not split over Q");
    roots.push_back({*found, 1});
    c = deflate(c, *found);
  }
  return SplitPoly(c.front(), std::move(roots));
}

// ------------------------------------------------------------- PreparedCell

long PreparedCell::exponent(std::size_t j) const {
  if (cell.is_point()) return 0;
  return functions.at(j).a / cell.n;
}

Rational PreparedCell::coefficient(std::size_t j) const {
  const long a = exponent(j);
  if (a == 0) return functions.at(j).h;
  Rational lam_pow = 1;
  for (long i = 0; i < a; ++i) lam_pow *= cell.lambda;
  return functions.at(j).h / lam_pow;
}

long PreparedCell::valuation_at_level(std::size_t j, long k) const {
  return valuation_p(coefficient(j), cell.prime) + exponent(j) * k;
}

// ------------------------------------------------------------------ prepare

namespace {

// f_j ~ coefficient * (t - gamma)^exponent on a cell before coset refinement.
struct Monomial {
  Rational coefficient;
  long exponent = 0;
};

struct RawCell {
  Cell cell;
  std::vector<Monomial> monomials;
};

long sphere_coset_modulus(long p, long s) {
  // Unit classes mod p^s are single cosets of U^N for this N; 0 if none.
  if (p != 2) {
    long n = p - 1;
    for (long i = 1; i < s; ++i) n *= p;
    return n;
  }
  if (s == 1) return 1;
  if (s == 2) return 0;
  return 1L << (s - 2);
}

class Preparer {
 public:
  Preparer(const std::vector<SplitPoly>& fs, long p, long certificate_precision)
      : fs_(fs), p_(p), e_(certificate_precision) {
    std::vector<Rational> all;
    for (const auto& f : fs_) {
      for (const auto& r : f.factors()) all.push_back(r.root);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    roots_ = std::move(all);
  }

  std::vector<RawCell> run() {
    explore(roots_.empty() ? Rational(0) : roots_.front(), std::nullopt);
    return std::move(out_);
  }

 private:
  long v(const Rational& x) const { return valuation_p(x, p_); }

  void emit_point(const Rational& gamma) {
    RawCell raw{Cell::point(p_, gamma), {}};
    for (const auto& f : fs_) raw.monomials.push_back({f(gamma), 0});
    out_.push_back(std::move(raw));
  }

  // Monomial data for the annulus level k around gamma, k outside every
  // critical window |k - v(c - gamma)| < e.
  std::vector<Monomial> annulus_monomials(const Rational& gamma, long k) const {
    std::vector<Monomial> result;
    for (const auto& f : fs_) {
      Monomial m{f.unit(), 0};
      for (const auto& factor : f.factors()) {
        if (factor.root == gamma) {
          m.exponent += factor.multiplicity;
          continue;
        }
        const long d = v(factor.root - gamma);
        if (k >= d + e_) {
          Rational base = gamma - factor.root;
          for (long i = 0; i < factor.multiplicity; ++i) m.coefficient *= base;
        } else {
          m.exponent += factor.multiplicity;
        }
      }
      result.push_back(std::move(m));
    }
    return result;
  }

  // Covers the ball {v(t - gamma) >= r} (all of Q_p when r is absent).
  void explore(const Rational& gamma, std::optional<long> r) {
    emit_point(gamma);
    std::vector<long> critical;
    for (const auto& c : roots_) {
      if (c == gamma) continue;
      const long d = v(c - gamma);
      for (long k = d - e_ + 1; k <= d + e_ - 1; ++k) {
        if (!r || k >= *r) critical.push_back(k);
      }
    }
    std::sort(critical.begin(), critical.end());
    critical.erase(std::unique(critical.begin(), critical.end()), critical.end());

    // Maximal runs of non-critical levels become annuli.
    std::optional<long> start = r;
    auto emit_annulus = [&](std::optional<long> first, std::optional<long> last) {
      if (first && last && *first > *last) return;
      const long sample = first ? *first : (last ? *last : 0);
      Cell cell{p_, gamma, std::nullopt, std::nullopt, 1, 1};
      if (first) cell.hi = *first - 1;
      if (last) cell.lo = *last + 1;
      out_.push_back({cell, annulus_monomials(gamma, sample)});
    };
    for (long k : critical) {
      emit_annulus(start, k - 1);
      start = k + 1;
    }
    emit_annulus(start, std::nullopt);

    for (long k : critical) {
      for (long digit = 1; digit < p_; ++digit) classify(gamma, k, Integer(digit), 1);
    }
  }

  // The ball {v(t - g) >= k + s}, g = gamma + p^k * residue, a unit class mod p^s
  // inside the sphere {v(t - gamma) = k}.
  void classify(const Rational& gamma, long k, const Integer& residue, long s) {
    const Rational g = gamma + power_of(p_, k) * Rational(residue);
    const long radius = k + s;
    std::optional<Rational> inner;
    bool certified = true;
    for (const auto& c : roots_) {
      if (c == g || v(c - g) >= radius) {
        if (!inner) inner = c;
        continue;
      }
      if (radius < v(g - c) + e_) certified = false;
    }
    if (inner) {
      explore(*inner, radius);
      return;
    }
    const long n = sphere_coset_modulus(p_, s);
    if (certified && n > 0) {
      Cell cell{p_, gamma, k + 1, k - 1, power_of(p_, k) * Rational(residue), n};
      std::vector<Monomial> monomials;
      for (const auto& f : fs_) monomials.push_back({f(g), 0});
      out_.push_back({cell, std::move(monomials)});
      return;
    }
    const Integer step = ipow(p_, static_cast<unsigned long>(s));
    for (long i = 0; i < p_; ++i) classify(gamma, k, residue + step * i, s + 1);
  }

  const std::vector<SplitPoly>& fs_;
  long p_;
  long e_;
  std::vector<Rational> roots_;
  std::vector<RawCell> out_;
};

PreparedCell finish(const RawCell& raw, const Cell& cell, long e) {
  PreparedCell out{cell, {}};
  for (const auto& m : raw.monomials) {
    FunctionPreparation fp;
    fp.e = e;
    if (cell.is_point()) {
      fp.h = m.coefficient;
      fp.a = 0;
      fp.unit = m.coefficient == 0 ? 0 : 1;
    } else {
      Rational lam_pow = 1;
      for (long i = 0; i < m.exponent; ++i) lam_pow *= cell.lambda;
      fp.h = m.coefficient * lam_pow;
      fp.a = m.exponent * cell.n;
      fp.unit = 1;
    }
    out.functions.push_back(std::move(fp));
  }
  return out;
}

void sort_prepared(std::vector<PreparedCell>& cells) {
  std::stable_sort(cells.begin(), cells.end(), [](const PreparedCell& a, const PreparedCell& b) {
    return canonical_compare(a.cell, b.cell) < 0;
  });
}

}  // namespace

std::vector<PreparedCell> prepare(const std::vector<SplitPoly>& fs, long p, long coset_modulus) {
  if (!is_prime(p)) throw Error(ErrorKind::kInvalidArgument, "not a prime: " + std::to_string(p));
  if (coset_modulus < 1) throw Error(ErrorKind::kInvalidArgument, "coset modulus must be >= 1");
  if (fs.empty()) throw Error(ErrorKind::kInvalidArgument, "prepare needs at least one function");
  const long e = power_test_exponent(coset_modulus, p);
  std::vector<PreparedCell> out;
  for (const auto& raw : Preparer(fs, p, e).run()) {
    if (raw.cell.is_point()) {
      out.push_back(finish(raw, raw.cell, e));
      continue;
    }
    for (const auto& sub : refine_by_coset(raw.cell, coset_modulus)) out.push_back(finish(raw, sub, e));
  }
  sort_prepared(out);
  return out;
}

// ------------------------------------------------------------------ Formula

Formula Formula::abs_lt(SplitPoly f, SplitPoly g) {
  Formula x;
  x.kind_ = Kind::kAbsLt;
  x.f_ = std::move(f);
  x.g_ = std::move(g);
  return x;
}

Formula Formula::abs_le(SplitPoly f, SplitPoly g) {
  Formula x = abs_lt(std::move(f), std::move(g));
  x.kind_ = Kind::kAbsLe;
  return x;
}

Formula Formula::pow(long m, SplitPoly f) {
  if (m < 1) throw Error(ErrorKind::kInvalidArgument, "pow needs m >= 1");
  Formula x;
  x.kind_ = Kind::kPow;
  x.m_ = m;
  x.f_ = std::move(f);
  return x;
}

Formula Formula::eqz(SplitPoly f) {
  Formula x;
  x.kind_ = Kind::kEqz;
  x.f_ = std::move(f);
  return x;
}

Formula Formula::conj(Formula a, Formula b) {
  Formula x;
  x.kind_ = Kind::kAnd;
  x.children_ = {std::move(a), std::move(b)};
  return x;
}

Formula Formula::disj(Formula a, Formula b) {
  Formula x = conj(std::move(a), std::move(b));
  x.kind_ = Kind::kOr;
  return x;
}

Formula Formula::negation(Formula a) {
  Formula x;
  x.kind_ = Kind::kNot;
  x.children_ = {std::move(a)};
  return x;
}

namespace {

// |x| < |y| on exact rationals.
bool abs_less(const Rational& x, const Rational& y, long p) {
  if (y == 0) return false;
  if (x == 0) return true;
  return valuation_p(x, p) > valuation_p(y, p);
}

bool abs_less_equal(const Rational& x, const Rational& y, long p) {
  if (x == 0) return true;
  if (y == 0) return false;
  return valuation_p(x, p) >= valuation_p(y, p);
}

// Generic formula walk with atom callbacks.
bool walk(const Formula& phi, const std::function<bool(const Formula&)>& atom) {
  switch (phi.kind()) {
    case Formula::Kind::kAnd: return walk(phi.children()[0], atom) && walk(phi.children()[1], atom);
    case Formula::Kind::kOr: return walk(phi.children()[0], atom) || walk(phi.children()[1], atom);
    case Formula::Kind::kNot: return !walk(phi.children()[0], atom);
    default: return atom(phi);
  }
}

void for_each_atom(const Formula& phi, const std::function<void(const Formula&)>& visit) {
  if (phi.children().empty()) {
    visit(phi);
    return;
  }
  for (const auto& c : phi.children()) for_each_atom(c, visit);
}

void collect_atoms(const Formula& phi, std::vector<SplitPoly>& polys, long& modulus) {
  auto add = [&](const SplitPoly& f) {
    if (std::find(polys.begin(), polys.end(), f) == polys.end()) polys.push_back(f);
  };
  switch (phi.kind()) {
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr:
    case Formula::Kind::kNot:
      for (const auto& c : phi.children()) collect_atoms(c, polys, modulus);
      return;
    case Formula::Kind::kAbsLt:
    case Formula::Kind::kAbsLe:
      add(phi.f());
      add(phi.g());
      return;
    case Formula::Kind::kPow:
      modulus = lcm(modulus, phi.m());
      add(phi.f());
      return;
    case Formula::Kind::kEqz:
      add(phi.f());
      return;
  }
}

std::size_t index_of(const std::vector<SplitPoly>& polys, const SplitPoly& f) {
  return static_cast<std::size_t>(std::find(polys.begin(), polys.end(), f) - polys.begin());
}

// Some admissible level of the cell, if any.
std::optional<long> any_level(const Cell& cell) {
  if (cell_is_empty(cell)) return std::nullopt;
  if (auto first = first_level(cell)) return first;
  if (auto last = last_level(cell)) return last;
  return valuation_p(cell.lambda, cell.prime);
}

}  // namespace

bool evaluate(const Formula& phi, const Rational& t, long p) {
  return walk(phi, [&](const Formula& a) {
    switch (a.kind()) {
      case Formula::Kind::kAbsLt: return abs_less(a.f()(t), a.g()(t), p);
      case Formula::Kind::kAbsLe: return abs_less_equal(a.f()(t), a.g()(t), p);
      case Formula::Kind::kPow: {
        const Rational x = a.f()(t);
        return x != 0 && is_nth_power(x, a.m(), p);
      }
      case Formula::Kind::kEqz: return a.f()(t) == 0;
      default: return false;
    }
  });
}

std::vector<Cell> split_window(const Cell& cell, std::vector<long> cuts) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Cell> out;
  Cell current = cell;
  for (long c : cuts) {
    // c splits levels < c from levels >= c; only cuts strictly inside the window matter.
    if (cell.hi && c <= *cell.hi + 1) continue;
    if (cell.lo && c >= *cell.lo) continue;
    Cell below = current;
    below.lo = c;
    if (!cell_is_empty(below)) out.push_back(below);
    current.hi = c - 1;
  }
  if (!cell_is_empty(current)) out.push_back(current);
  return out;
}

std::vector<Cell> decompose(const Formula& phi, long p) {
  std::vector<SplitPoly> polys;
  long modulus = 1;
  collect_atoms(phi, polys, modulus);
  const auto prepared = prepare(polys, p, modulus);

  std::vector<Cell> out;
  for (const auto& pc : prepared) {
    if (pc.cell.is_point()) {
      if (evaluate(phi, pc.cell.center, p)) out.push_back(pc.cell);
      continue;
    }
    // Norm comparisons are affine in the level k; they can only change truth
    // value at the crossing levels.
    std::vector<long> cuts;
    for_each_atom(phi, [&](const Formula& a) {
      if (a.kind() == Formula::Kind::kAbsLt || a.kind() == Formula::Kind::kAbsLe) {
        const std::size_t i = index_of(polys, a.f());
        const std::size_t j = index_of(polys, a.g());
        const long slope = pc.exponent(i) - pc.exponent(j);
        if (slope != 0) {
          const long offset = valuation_p(pc.coefficient(i), p) - valuation_p(pc.coefficient(j), p);
          // offset + slope * k = 0 at k = -offset / slope.
          const long fl = floor_div(-offset, slope);
          cuts.push_back(fl);
          cuts.push_back(fl + 1);
        }
      }
    });

    std::optional<Cell> run;
    for (const auto& piece : split_window(pc.cell, cuts)) {
      const long k = *any_level(piece);
      const bool truth = walk(phi, [&](const Formula& a) {
        switch (a.kind()) {
          case Formula::Kind::kAbsLt:
            return pc.valuation_at_level(index_of(polys, a.f()), k) > pc.valuation_at_level(index_of(polys, a.g()), k);
          case Formula::Kind::kAbsLe:
            return pc.valuation_at_level(index_of(polys, a.f()), k) >=
                   pc.valuation_at_level(index_of(polys, a.g()), k);
          case Formula::Kind::kPow:
            return is_nth_power(pc.functions[index_of(polys, a.f())].h, a.m(), p);
          case Formula::Kind::kEqz:
            return false;  // no roots inside (1)-cells
          default:
            return false;
        }
      });
      if (truth) {
        if (run) {
          run->lo = piece.lo;
        } else {
          run = piece;
        }
      } else if (run) {
        out.push_back(*run);
        run.reset();
      }
    }
    if (run) out.push_back(*run);
  }
  sort_canonical(out);
  return out;
}

std::vector<RefinedCell> refine_against(const std::vector<SplitPoly>& fs, const std::vector<Cell>& targets, long p,
                                        long coset_modulus) {
  std::vector<SplitPoly> polys = fs;
  long modulus = coset_modulus;
  for (const auto& t : targets) {
    t.validate();
    if (t.prime != p) throw Error(ErrorKind::kFieldMismatch, "target cell over a different prime");
    polys.push_back(SplitPoly::linear(t.center));
    if (!t.is_point()) modulus = lcm(modulus, t.n);
  }
  if (polys.empty()) return {};
  const std::size_t base = fs.size();

  std::vector<RefinedCell> out;
  for (const auto& pc : prepare(polys, p, modulus)) {
    if (pc.cell.is_point()) {
      RefinedCell rc{pc, {}};
      for (const auto& t : targets) rc.inside.push_back(cell_contains(t, pc.cell.center));
      out.push_back(std::move(rc));
      continue;
    }
    // Level of t - center_i is offset_i + slope_i * k, slope_i in {0, 1}.
    std::vector<long> cuts;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const auto& t = targets[i];
      if (t.is_point() || pc.exponent(base + i) == 0) continue;
      const long offset = valuation_p(pc.coefficient(base + i), p);
      if (t.hi) cuts.push_back(*t.hi + 1 - offset);
      if (t.lo) cuts.push_back(*t.lo - offset);
    }
    for (const auto& piece : split_window(pc.cell, cuts)) {
      RefinedCell rc{pc, {}};
      rc.prepared.cell = piece;
      const long k = *any_level(piece);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& t = targets[i];
        if (t.is_point()) {
          rc.inside.push_back(false);
          continue;
        }
        const long level = rc.prepared.valuation_at_level(base + i, k);
        const bool bounds = (!t.hi || level > *t.hi) && (!t.lo || level < *t.lo);
        const bool coset = bounds && coset_of(rc.prepared.functions[base + i].h, t.n, p) == coset_of(t.lambda, t.n, p);
        rc.inside.push_back(bounds && coset);
      }
      out.push_back(std::move(rc));
    }
  }
  return out;
}

}  // namespace pminimal
