#include "gnnv/qfpa.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "gnnv/errors.hpp"

namespace gnnv::arith {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "sat";
    case Verdict::Unsat: return "unsat";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

LinearConstraint& LinearConstraint::add(std::size_t var, const BigInt& coeff) {
  if (coeff == 0) return *this;
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    if (it->first == var) {
      it->second += coeff;
      if (it->second == 0) terms.erase(it);
      return *this;
    }
  }
  terms.emplace_back(var, coeff);
  return *this;
}

BigInt LinearConstraint::eval(const std::vector<BigInt>& x) const {
  BigInt v = constant;
  for (const auto& [j, a] : terms) v += a * x[j];
  return v;
}

QfpaFormula QfpaFormula::equal(const LinearConstraint& diff) {
  LinearConstraint neg;
  neg.constant = -diff.constant;
  for (const auto& [j, a] : diff.terms) neg.terms.emplace_back(j, -a);
  return all({of(diff), of(std::move(neg))});
}

bool QfpaFormula::eval(const std::vector<BigInt>& x) const {
  switch (kind) {
    case Kind::Atom: return atom.eval(x) >= 0;
    case Kind::And:
      return std::all_of(children.begin(), children.end(), [&](const QfpaFormula& c) { return c.eval(x); });
    case Kind::Or:
      return std::any_of(children.begin(), children.end(), [&](const QfpaFormula& c) { return c.eval(x); });
  }
  return false;
}

std::size_t QfpaProblem::add_var(std::string name, bool non_negative) {
  var_names.push_back(std::move(name));
  nonneg.push_back(non_negative ? 1 : 0);
  return var_names.size() - 1;
}

namespace {

using Bound = std::optional<Rational>;

/// General simplex in the style of Dutertre and de Moura: a fixed set of row
/// definitions s_r = sum a_rj x_j, bounds on every variable, Bland's rule.
class Simplex {
 public:
  Simplex(std::size_t n, const std::vector<LinearConstraint>& rows)
      : n_(n), m_(rows.size()), N_(n + rows.size()), T_(rows.size(), std::vector<Rational>(n + rows.size())),
        basic_(rows.size()), row_of_(n + rows.size(), -1), lo_(N_), hi_(N_), val_(N_) {
    for (std::size_t r = 0; r < m_; ++r) {
      for (const auto& [j, a] : rows[r].terms) T_[r][j] += Rational(a);
      basic_[r] = n_ + r;
      row_of_[n_ + r] = static_cast<long>(r);
      lo_[n_ + r] = Rational(-rows[r].constant);
    }
  }

  std::size_t original_count() const { return n_; }
  const Rational& value(std::size_t j) const { return val_[j]; }
  std::vector<Bound>& lower() { return lo_; }
  std::vector<Bound>& upper() { return hi_; }

  /// Re-establishes nonbasic values inside their bounds after bound edits.
  /// Returns false on an empty interval.
  bool settle() {
    for (std::size_t j = 0; j < N_; ++j) {
      if (lo_[j] && hi_[j] && *lo_[j] > *hi_[j]) return false;
      if (row_of_[j] >= 0) continue;
      if (lo_[j] && val_[j] < *lo_[j]) update(j, *lo_[j]);
      else if (hi_[j] && val_[j] > *hi_[j]) update(j, *hi_[j]);
    }
    return true;
  }

  bool check() {
    if (!settle()) return false;
    while (true) {
      long row = -1;
      std::size_t best = N_;
      for (std::size_t r = 0; r < m_; ++r) {
        std::size_t b = basic_[r];
        if (b < best && violated(b)) {
          best = b;
          row = static_cast<long>(r);
        }
      }
      if (row < 0) return true;
      const std::size_t r = static_cast<std::size_t>(row);
      const bool increase = lo_[best] && val_[best] < *lo_[best];
      std::size_t pick = N_;
      for (std::size_t j = 0; j < N_; ++j) {
        if (row_of_[j] >= 0) continue;
        const int sign = sgn(T_[r][j]);
        if (sign == 0) continue;
        const bool up = (sign > 0) == increase;
        if (up ? (!hi_[j] || val_[j] < *hi_[j]) : (!lo_[j] || val_[j] > *lo_[j])) {
          pick = j;
          break;
        }
      }
      if (pick == N_) return false;
      pivot_and_update(r, pick, increase ? *lo_[best] : *hi_[best]);
    }
  }

 private:
  bool violated(std::size_t j) const {
    return (lo_[j] && val_[j] < *lo_[j]) || (hi_[j] && val_[j] > *hi_[j]);
  }

  void update(std::size_t j, const Rational& v) {
    Rational delta = v - val_[j];
    for (std::size_t r = 0; r < m_; ++r) {
      if (sgn(T_[r][j]) != 0) val_[basic_[r]] += T_[r][j] * delta;
    }
    val_[j] = v;
  }

  void pivot_and_update(std::size_t r, std::size_t j, const Rational& v) {
    const std::size_t b = basic_[r];
    Rational theta = (v - val_[b]) / T_[r][j];
    val_[b] = v;
    val_[j] += theta;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k != r && sgn(T_[k][j]) != 0) val_[basic_[k]] += T_[k][j] * theta;
    }
    // Row r: b = a_j x_j + rest  =>  x_j = b / a_j - rest / a_j.
    Rational inv = 1 / T_[r][j];
    auto& row = T_[r];
    for (std::size_t k = 0; k < N_; ++k) {
      if (sgn(row[k]) != 0) row[k] = -row[k] * inv;
    }
    row[j] = 0;
    row[b] = inv;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == r || sgn(T_[k][j]) == 0) continue;
      Rational c = T_[k][j];
      T_[k][j] = 0;
      for (std::size_t col = 0; col < N_; ++col) {
        if (sgn(row[col]) != 0) T_[k][col] += c * row[col];
      }
    }
    basic_[r] = j;
    row_of_[j] = static_cast<long>(r);
    row_of_[b] = -1;
  }

  std::size_t n_, m_, N_;
  std::vector<std::vector<Rational>> T_;
  std::vector<std::size_t> basic_;
  std::vector<long> row_of_;
  std::vector<Bound> lo_, hi_;
  std::vector<Rational> val_;
};

/// Divides by the gcd of the coefficients and floors the constant, which is
/// exact over the integers. Returns false if the constraint is trivially false.
bool tighten(LinearConstraint& c) {
  BigInt g = 0;
  for (const auto& [j, a] : c.terms) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  if (g == 0) return c.constant >= 0;
  if (g != 1) {
    for (auto& [j, a] : c.terms) a /= g;
    mpz_fdiv_q(c.constant.get_mpz_t(), c.constant.get_mpz_t(), g.get_mpz_t());
  }
  return true;
}

inline constexpr std::size_t kMaxBranchDepth = 4000;

class BranchAndBound {
 public:
  BranchAndBound(std::size_t n, const std::vector<char>& nonneg, const std::vector<LinearConstraint>& rows,
                 const QfpaOptions& opts, std::size_t& nodes)
      : simplex_(n, rows), nonneg_(nonneg), cap_(opts.magnitude_cap), budget_(opts.node_budget), nodes_(nodes) {
    for (std::size_t j = 0; j < n; ++j) {
      if (nonneg[j]) simplex_.lower()[j] = Rational(0);
    }
    structural_lo_ = simplex_.lower();
    structural_hi_ = simplex_.upper();
    for (std::size_t j = 0; j < n; ++j) {
      if (!nonneg[j]) simplex_.lower()[j] = Rational(-cap_);
      simplex_.upper()[j] = Rational(cap_);
    }
  }

  Verdict run(std::vector<BigInt>& out) { return search(out, 0); }

 private:
  Verdict search(std::vector<BigInt>& out, std::size_t depth) {
    if (++nodes_ > budget_) return Verdict::Unknown;
    if (!simplex_.check()) return boxed_infeasibility(out);
    const std::size_t n = simplex_.original_count();
    std::size_t frac = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (simplex_.value(j).get_den() != 1) {
        frac = j;
        break;
      }
    }
    if (frac == n) {
      out.resize(n);
      for (std::size_t j = 0; j < n; ++j) out[j] = simplex_.value(j).get_num();
      return Verdict::Sat;
    }
    if (depth >= kMaxBranchDepth) return Verdict::Unknown;
    const Rational v = simplex_.value(frac);
    const BigInt fl = floor_div(v);
    Verdict result = Verdict::Unsat;
    for (int side = 0; side < 2; ++side) {
      auto saved_lo = simplex_.lower()[frac];
      auto saved_hi = simplex_.upper()[frac];
      auto saved_slo = structural_lo_[frac];
      auto saved_shi = structural_hi_[frac];
      if (side == 0) {
        simplex_.upper()[frac] = Rational(fl);
        structural_hi_[frac] = Rational(fl);
      } else {
        simplex_.lower()[frac] = Rational(fl + 1);
        structural_lo_[frac] = Rational(fl + 1);
      }
      Verdict sub = search(out, depth + 1);
      simplex_.lower()[frac] = saved_lo;
      simplex_.upper()[frac] = saved_hi;
      structural_lo_[frac] = saved_slo;
      structural_hi_[frac] = saved_shi;
      if (sub == Verdict::Sat) return sub;
      if (sub == Verdict::Unknown) result = Verdict::Unknown;
      if (nodes_ > budget_) return Verdict::Unknown;
    }
    return result;
  }

  // The node is infeasible under the magnitude cap. It counts as Unsat only if
  // the branching bounds alone already exclude every solution, and as Sat if
  // the uncapped relaxation happens to be integral.
  Verdict boxed_infeasibility(std::vector<BigInt>& out) {
    auto lo = simplex_.lower();
    auto hi = simplex_.upper();
    const std::size_t n = simplex_.original_count();
    for (std::size_t j = 0; j < n; ++j) {
      simplex_.lower()[j] = structural_lo_[j];
      simplex_.upper()[j] = structural_hi_[j];
    }
    const bool feasible = simplex_.check();
    Verdict v = feasible ? Verdict::Unknown : Verdict::Unsat;
    if (feasible) {
      std::vector<BigInt> x(n);
      bool integral = true;
      for (std::size_t j = 0; j < n && integral; ++j) {
        integral = simplex_.value(j).get_den() == 1;
        if (integral) x[j] = simplex_.value(j).get_num();
      }
      if (integral) {
        out = std::move(x);
        v = Verdict::Sat;
      }
    }
    simplex_.lower() = lo;
    simplex_.upper() = hi;
    return v;
  }

  Simplex simplex_;
  const std::vector<char>& nonneg_;
  BigInt cap_;
  std::size_t budget_;
  std::size_t& nodes_;
  std::vector<Bound> structural_lo_, structural_hi_;
};

class BooleanSearch {
 public:
  BooleanSearch(const QfpaProblem& p, const QfpaOptions& opts) : p_(p), opts_(opts) {}

  QfpaResult run() {
    QfpaResult res;
    std::vector<const QfpaFormula*> pending{&p_.formula};
    std::vector<LinearConstraint> atoms;
    res.verdict = search(pending, atoms, res.assignment);
    res.nodes = nodes_;
    if (res.verdict == Verdict::Unknown) {
      res.reason = nodes_ > opts_.node_budget ? "node budget exhausted"
                                              : "solutions may exceed the magnitude cap " + opts_.magnitude_cap.get_str();
    }
    return res;
  }

 private:
  Verdict search(std::vector<const QfpaFormula*> pending, std::vector<LinearConstraint> atoms,
                 std::vector<BigInt>& out) {
    if (++nodes_ > opts_.node_budget) return Verdict::Unknown;
    while (!pending.empty()) {
      const QfpaFormula* f = pending.back();
      pending.pop_back();
      switch (f->kind) {
        case QfpaFormula::Kind::Atom: {
          LinearConstraint c = f->atom;
          if (!tighten(c)) return Verdict::Unsat;
          if (!c.terms.empty()) atoms.push_back(std::move(c));
          break;
        }
        case QfpaFormula::Kind::And:
          for (auto it = f->children.rbegin(); it != f->children.rend(); ++it) pending.push_back(&*it);
          break;
        case QfpaFormula::Kind::Or: {
          if (!lp_feasible(p_.var_count(), p_.nonneg, atoms)) return Verdict::Unsat;
          Verdict result = Verdict::Unsat;
          for (const auto& child : f->children) {
            auto next = pending;
            next.push_back(&child);
            Verdict sub = search(std::move(next), atoms, out);
            if (sub == Verdict::Sat) return sub;
            if (sub == Verdict::Unknown) result = Verdict::Unknown;
            if (nodes_ > opts_.node_budget) return Verdict::Unknown;
          }
          return result;
        }
      }
    }
    BranchAndBound bb(p_.var_count(), p_.nonneg, atoms, opts_, nodes_);
    Verdict v = bb.run(out);
    if (v == Verdict::Sat && !p_.formula.eval(out)) {
      throw std::logic_error("qfpa: assignment failed the exact check");
    }
    return v;
  }

  const QfpaProblem& p_;
  const QfpaOptions& opts_;
  std::size_t nodes_ = 0;
};

}  // namespace

bool lp_feasible(std::size_t var_count, const std::vector<char>& nonneg, const std::vector<LinearConstraint>& rows) {
  Simplex s(var_count, rows);
  for (std::size_t j = 0; j < var_count; ++j) {
    if (nonneg[j]) s.lower()[j] = Rational(0);
  }
  return s.check();
}

QfpaResult qfpa_sat(const QfpaProblem& p, const QfpaOptions& opts) {
  if (p.nonneg.size() != p.var_names.size()) throw InputError("qfpa: inconsistent variable table");
  QfpaResult r = BooleanSearch(p, opts).run();
  return r;
}

std::vector<BigInt> reduce_support(const std::vector<std::vector<long>>& vectors, std::vector<BigInt> mult,
                                   std::size_t budget) {
  if (vectors.size() != mult.size()) throw InputError("reduce_support: size mismatch");
  std::size_t work = 0;
  while (true) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < mult.size(); ++i) {
      if (mult[i] > 0) support.push_back(i);
    }
    const std::size_t k = support.size();
    if (k < 2) return mult;
    const std::size_t dim = vectors[support[0]].size();
    // Subsets of size s are enumerated as index combinations, sums hashed.
    std::map<std::vector<long>, std::vector<std::size_t>> seen;
    std::vector<std::size_t> a_set, b_set;
    bool found = false;
    for (std::size_t size = 1; size <= k && !found; ++size) {
      std::vector<std::size_t> idx(size);
      for (std::size_t i = 0; i < size; ++i) idx[i] = i;
      while (true) {
        if (++work > budget) return mult;
        std::vector<long> sum(dim, 0);
        for (std::size_t i : idx) {
          for (std::size_t c = 0; c < dim; ++c) sum[c] += vectors[support[i]][c];
        }
        auto [it, inserted] = seen.emplace(sum, idx);
        if (!inserted) {
          std::vector<std::size_t> a = it->second, b = idx;
          std::vector<std::size_t> ca, cb;
          std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ca));
          std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(cb));
          if (!ca.empty() && !cb.empty()) {
            for (auto i : ca) a_set.push_back(support[i]);
            for (auto i : cb) b_set.push_back(support[i]);
            found = true;
            break;
          }
        }
        // Next combination in lexicographic order.
        std::size_t pos = size;
        while (pos > 0 && idx[pos - 1] == k - size + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
    if (!found) return mult;
    BigInt lambda = mult[a_set[0]];
    for (auto i : a_set) lambda = std::min(lambda, mult[i]);
    for (auto i : a_set) mult[i] -= lambda;
    for (auto i : b_set) mult[i] += lambda;
  }
}

std::size_t caratheodory_bound(std::size_t d, std::size_t m) {
  if (d == 0) return 0;
  // N >= 2 d log2(4 d m)  <=>  2^N >= (4 d m)^(2 d).
  BigInt base = BigInt(static_cast<unsigned long>(4 * d * m));
  BigInt rhs;
  mpz_pow_ui(rhs.get_mpz_t(), base.get_mpz_t(), 2 * d);
  std::size_t bits = mpz_sizeinbase(rhs.get_mpz_t(), 2);  // 2^(bits-1) <= rhs < 2^bits
  BigInt pow2 = BigInt(1) << static_cast<unsigned>(bits - 1);
  return pow2 == rhs ? bits - 1 : bits;
}

}  // namespace gnnv::arith
