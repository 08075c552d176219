#include "tropfan/enumeration.hpp"

#include "tropfan/errors.hpp"
#include "tropfan/lattice.hpp"
#include "tropfan/linalg.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

namespace tropfan {

namespace {

using i128 = __int128;

Integer to_integer_128(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<std::uint64_t>(u >> 64));
  Integer out = (hi << 64) + Integer(static_cast<std::uint64_t>(u));
  return neg ? Integer(-out) : out;
}

bool fits_ll(const Rational& q, long long& out) {
  if (denominator_of(q) != 1) return false;
  const Integer z = numerator_of(q);
  if (abs(z) > Integer(std::numeric_limits<long long>::max() / 4)) return false;
  out = z.convert_to<long long>();
  return true;
}

// Fraction-free elimination of the n x (n+1) system `m`, skipping columns
// without a pivot. For a unique solution `det` holds the determinant up to
// sign and y_j = det * x_j.
enum class Small { Unique, Inconsistent, Degenerate, Overflow };

Small solve_small(std::vector<i128>& m, int n, i128& det, std::vector<i128>& y) {
  const int w = n + 1;
  auto at = [&](int i, int j) -> i128& { return m[static_cast<std::size_t>(i * w + j)]; };
  i128 prev = 1;
  int rk = 0;
  for (int k = 0; k < n && rk < n; ++k) {
    int p = rk;
    while (p < n && at(p, k) == 0) ++p;
    if (p == n) continue;
    if (p != rk)
      for (int j = k; j < w; ++j) std::swap(at(p, j), at(rk, j));
    for (int i = rk + 1; i < n; ++i) {
      for (int j = k + 1; j < w; ++j) {
        i128 a, b, c;
        if (__builtin_mul_overflow(at(i, j), at(rk, k), &a)) return Small::Overflow;
        if (__builtin_mul_overflow(at(i, k), at(rk, j), &b)) return Small::Overflow;
        if (__builtin_sub_overflow(a, b, &c)) return Small::Overflow;
        if (c % prev != 0) return Small::Overflow;
        at(i, j) = c / prev;
      }
      at(i, k) = 0;
    }
    prev = at(rk, k);
    ++rk;
  }
  if (rk < n) {
    for (int i = rk; i < n; ++i)
      if (at(i, n) != 0) return Small::Inconsistent;
    return Small::Degenerate;
  }
  det = at(n - 1, n - 1);
  y.assign(static_cast<std::size_t>(n), 0);
  for (int j = n - 1; j >= 0; --j) {
    i128 acc;
    if (__builtin_mul_overflow(det, at(j, n), &acc)) return Small::Overflow;
    for (int k = j + 1; k < n; ++k) {
      i128 t;
      if (__builtin_mul_overflow(at(j, k), y[static_cast<std::size_t>(k)], &t)) return Small::Overflow;
      if (__builtin_sub_overflow(acc, t, &acc)) return Small::Overflow;
    }
    if (acc % at(j, j) != 0) return Small::Overflow;
    y[static_cast<std::size_t>(j)] = acc / at(j, j);
  }
  return Small::Unique;
}

// Row echelon of the rows x (cols+1) system; true if it is inconsistent.
// Overflow counts as consistent, which only disables pruning.
bool small_inconsistent(std::vector<i128>& m, int rows, int cols) {
  const int w = cols + 1;
  auto at = [&](int i, int j) -> i128& { return m[static_cast<std::size_t>(i * w + j)]; };
  i128 prev = 1;
  int rk = 0;
  for (int k = 0; k < cols && rk < rows; ++k) {
    int p = rk;
    while (p < rows && at(p, k) == 0) ++p;
    if (p == rows) continue;
    if (p != rk)
      for (int j = k; j < w; ++j) std::swap(at(p, j), at(rk, j));
    for (int i = rk + 1; i < rows; ++i) {
      for (int j = k + 1; j < w; ++j) {
        i128 a, b, c;
        if (__builtin_mul_overflow(at(i, j), at(rk, k), &a)) return false;
        if (__builtin_mul_overflow(at(i, k), at(rk, j), &b)) return false;
        if (__builtin_sub_overflow(a, b, &c)) return false;
        if (c % prev != 0) return false;
        at(i, j) = c / prev;
      }
      at(i, k) = 0;
    }
    prev = at(rk, k);
    ++rk;
  }
  for (int i = rk; i < rows; ++i)
    if (at(i, cols) != 0) return true;
  return false;
}

struct Row {
  IntVec form;  // quotient form on R^r
  Rational rhs;
  int end = 0;
};

class Counter {
 public:
  Counter(const CountProblem& p) : p_(p) {
    big_n_ = p.ends();
    r_ = static_cast<int>(p.delta.r);
    edges_ = big_n_ - 3;
    unknowns_ = edges_ + r_;
    dir_.assign(static_cast<std::size_t>(big_n_ * r_), 0);
    for (int k = 0; k < static_cast<int>(p.delta.size()); ++k)
      for (int c = 0; c < r_; ++c)
        dir_[static_cast<std::size_t>((p.n + k) * r_ + c)] =
            p.delta.entries[static_cast<std::size_t>(k)](c).convert_to<long long>();
    for (const auto& con : p.constraints) {
      IntMat q;
      if (con.directions.cols() == 0) {
        q = IntMat::Identity(r_, r_);
      } else {
        q = annihilator(IntMat(con.directions.transpose()));
      }
      for (Eigen::Index i = 0; i < q.rows(); ++i) {
        Row row{q.row(i).transpose(), 0, con.end};
        for (int c = 0; c < r_; ++c) row.rhs += Rational(row.form(c)) * con.point(c);
        rows_.push_back(std::move(row));
      }
    }
    fast_ = true;
    for (const auto& row : rows_) {
      long long v;
      fast_ = fast_ && fits_ll(row.rhs, v);
      std::vector<long long> f(static_cast<std::size_t>(r_));
      for (int c = 0; c < r_; ++c) f[static_cast<std::size_t>(c)] = row.form(c).convert_to<long long>();
      forms_ll_.push_back(std::move(f));
      rhs_ll_.push_back(fast_ ? v : 0);
    }
    if (p.cross_ratio) {
      cross_ = p.cross_ratio->split;
      long long v;
      fast_ = fast_ && fits_ll(p.cross_ratio->length, v);
      cross_ll_ = fast_ ? v : 0;
    }
  }

  void run_naive() {
    for_each_trivalent_type(big_n_, [&](const TreeType& t) {
      ++result_.types_checked;
      solve_exact(t.splits);
    });
  }

  // Labels are inserted non-contracted first: from then on every edge
  // direction is final, since contracted ends add nothing to the sums.
  void run_pruned(unsigned threads) {
    order_.clear();
    for (int k = p_.n; k < big_n_; ++k) order_.push_back(k);
    for (int k = 0; k < p_.n; ++k) order_.push_back(k);
    dir_final_at_ = std::max(3, big_n_ - p_.n);
    std::vector<Split> bounded;
    if (threads <= 1) {
      insert(3, bounded);
      return;
    }
    // Shards are the branches at the first level with enough choices.
    std::vector<std::pair<int, std::vector<Split>>> shards;
    collect(3, bounded, shards, threads * 4);
    std::vector<Counter> workers(threads, *this);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t s = w; s < shards.size(); s += threads)
            workers[w].insert(shards[s].first, shards[s].second);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& w : workers) {
      result_.types_checked += w.result_.types_checked;
      for (auto& s : w.result_.solutions) result_.solutions.push_back(std::move(s));
    }
  }

  CountResult finish() {
    std::sort(result_.solutions.begin(), result_.solutions.end(),
              [](const CurveSolution& a, const CurveSolution& b) { return a.curve.type < b.curve.type; });
    result_.labeled = 0;
    for (const auto& s : result_.solutions) result_.labeled += Rational(s.multiplicity);
    result_.group_order = group_order(p_.delta);
    result_.unlabeled = result_.labeled / Rational(result_.group_order);
    return std::move(result_);
  }

 private:
  Split inserted_mask(int k) const {
    Split m = 0;
    for (int j = 0; j < k; ++j) m |= Split{1} << order_[static_cast<std::size_t>(j)];
    return m;
  }

  bool contracted(int bit) const { return bit < p_.n; }

  bool zero_direction(Split t) const {
    for (int c = 0; c < r_; ++c) {
      long long s = 0;
      for (Split m = t; m; m &= m - 1) s += dir_[static_cast<std::size_t>(std::countr_zero(m) * r_ + c)];
      if (s != 0) return false;
    }
    return true;
  }

  // A zero direction on a bounded edge gives a zero column unless the
  // cross-ratio row sees that edge, so such branches are cut without one.
  bool prunable(const std::vector<Split>& bounded, int k) {
    if (k < dir_final_at_) return false;
    if (!cross_)
      for (auto t : bounded)
        if (zero_direction(t)) return true;
    return fast_ && partial_inconsistent(bounded, k);
  }

  // Rows of the ends inserted so far only see sums of the final pieces of
  // the current edges, so an inconsistent partial system stays inconsistent.
  bool partial_inconsistent(const std::vector<Split>& bounded, int k) {
    const Split full = inserted_mask(k);
    if (!(full & 1)) return false;
    int rows = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (full & label_bit(rows_[i].end)) ++rows;
    const int e_count = static_cast<int>(bounded.size());
    const int cols = e_count + r_, w = cols + 1;
    if (rows < 2) return false;
    std::vector<long long> dirs(static_cast<std::size_t>(e_count * r_), 0);
    for (int e = 0; e < e_count; ++e) {
      const Split t = bounded[static_cast<std::size_t>(e)];
      const Split away = (t & 1) ? (full ^ t) : t;
      for (Split m = away; m; m &= m - 1) {
        const int b = std::countr_zero(m);
        for (int c = 0; c < r_; ++c)
          dirs[static_cast<std::size_t>(e * r_ + c)] += dir_[static_cast<std::size_t>(b * r_ + c)];
      }
    }
    part_.assign(static_cast<std::size_t>(rows * w), 0);
    int row = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Split end = label_bit(rows_[i].end);
      if (!(full & end)) continue;
      const auto& f = forms_ll_[i];
      for (int e = 0; e < e_count; ++e) {
        const Split t = bounded[static_cast<std::size_t>(e)];
        if (((t & 1) != 0) == ((t & end) != 0)) continue;
        long long s = 0;
        for (int c = 0; c < r_; ++c)
          s += f[static_cast<std::size_t>(c)] * dirs[static_cast<std::size_t>(e * r_ + c)];
        part_[static_cast<std::size_t>(row * w + e)] = s;
      }
      for (int c = 0; c < r_; ++c) part_[static_cast<std::size_t>(row * w + e_count + c)] = f[static_cast<std::size_t>(c)];
      part_[static_cast<std::size_t>(row * w + cols)] = rhs_ll_[i];
      ++row;
    }
    return small_inconsistent(part_, rows, cols);
  }

  template <typename Visit>
  void branches(int k, const std::vector<Split>& bounded, Visit&& visit) const {
    const Split full = inserted_mask(k);
    const Split bit = Split{1} << order_[static_cast<std::size_t>(k)];
    auto grow = [&](Split x) {
      std::vector<Split> next;
      next.reserve(bounded.size() + 1);
      for (auto t : bounded) {
        const bool beside = (x & ~t) == 0 || ((full ^ x) & ~t) == 0;
        next.push_back(beside ? (t | bit) : t);
      }
      return next;
    };
    const bool new_contracted = contracted(order_[static_cast<std::size_t>(k)]);
    for (int j = 0; j < k; ++j) {
      const int label = order_[static_cast<std::size_t>(j)];
      if (!cross_ && k >= dir_final_at_ && new_contracted && contracted(label)) continue;
      const Split x = Split{1} << label;
      auto next = grow(x);
      next.push_back(x | bit);
      visit(std::move(next));
    }
    for (auto x : bounded) {
      auto next = grow(x);
      next.push_back(x);
      visit(std::move(next));
    }
  }

  void collect(int k, const std::vector<Split>& bounded,
               std::vector<std::pair<int, std::vector<Split>>>& out, std::size_t want) {
    if (k == big_n_ || prunable(bounded, k)) {
      out.emplace_back(k, bounded);
      return;
    }
    std::vector<std::vector<Split>> level;
    branches(k, bounded, [&](std::vector<Split> next) { level.push_back(std::move(next)); });
    if (level.size() >= want || k + 1 == big_n_) {
      for (auto& b : level) out.emplace_back(k + 1, std::move(b));
      return;
    }
    for (auto& b : level) collect(k + 1, b, out, (want + level.size() - 1) / level.size());
  }

  void insert(int k, const std::vector<Split>& bounded) {
    if (prunable(bounded, k)) return;
    if (k == big_n_) {
      ++result_.types_checked;
      std::vector<Split> splits;
      splits.reserve(bounded.size());
      for (auto t : bounded) splits.push_back(canonical_split(t, big_n_));
      if (!fast_ || !solve_fast(splits)) solve_exact(splits);
      return;
    }
    branches(k, bounded, [&](std::vector<Split> next) { insert(k + 1, next); });
  }

  // Column of the cross-ratio row: 1 on edges restricting to the target
  // split of {1,2,3,4}. False if the type maps elsewhere in M_{0,4}.
  bool cross_row(const std::vector<Split>& splits, std::vector<int>& coef) const {
    coef.assign(splits.size(), 0);
    bool hit = false;
    for (std::size_t e = 0; e < splits.size(); ++e) {
      const Split four = splits[e] & Split{15};
      if (std::popcount(four) != 2) continue;
      if (four != cross_) return false;
      coef[e] = 1;
      hit = true;
    }
    return hit;
  }

  // Returns false if the exact path must decide.
  bool solve_fast(const std::vector<Split>& splits) {
    std::vector<int> coef;
    if (cross_ && !cross_row(splits, coef)) return true;
    const int e_count = static_cast<int>(splits.size());
    const int n = unknowns_, w = n + 1;
    std::vector<long long> dirs(static_cast<std::size_t>(e_count * r_), 0);
    for (int e = 0; e < e_count; ++e) {
      const Split away = full_mask(big_n_) ^ splits[static_cast<std::size_t>(e)];
      for (Split m = away; m; m &= m - 1) {
        const int b = std::countr_zero(m);
        for (int c = 0; c < r_; ++c)
          dirs[static_cast<std::size_t>(e * r_ + c)] += dir_[static_cast<std::size_t>(b * r_ + c)];
      }
    }
    mat_.assign(static_cast<std::size_t>(n * w), 0);
    int row = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i, ++row) {
      const Split end = label_bit(rows_[i].end);
      const auto& f = forms_ll_[i];
      for (int e = 0; e < e_count; ++e) {
        if (splits[static_cast<std::size_t>(e)] & end) continue;
        long long s = 0;
        for (int c = 0; c < r_; ++c)
          s += f[static_cast<std::size_t>(c)] * dirs[static_cast<std::size_t>(e * r_ + c)];
        mat_[static_cast<std::size_t>(row * w + e)] = s;
      }
      for (int c = 0; c < r_; ++c) mat_[static_cast<std::size_t>(row * w + e_count + c)] = f[static_cast<std::size_t>(c)];
      mat_[static_cast<std::size_t>(row * w + n)] = rhs_ll_[i];
    }
    if (cross_) {
      for (int e = 0; e < e_count; ++e) mat_[static_cast<std::size_t>(row * w + e)] = coef[static_cast<std::size_t>(e)];
      mat_[static_cast<std::size_t>(row * w + n)] = cross_ll_;
    }
    i128 det;
    const Small s = solve_small(mat_, n, det, y_);
    if (s == Small::Overflow) return false;
    if (s == Small::Inconsistent) return true;
    if (s == Small::Degenerate)
      throw Error(Errc::NotGeneric, "constraints lie in the image of a degenerate cone");
    const int sign = det > 0 ? 1 : -1;
    for (int e = 0; e < e_count; ++e) {
      const i128 v = y_[static_cast<std::size_t>(e)] * sign;
      if (v < 0) return true;
      if (v == 0) throw Error(Errc::NotGeneric, "a solution has an edge of length 0");
    }
    const Rational d(to_integer_128(det));
    std::vector<Rational> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = Rational(to_integer_128(y_[static_cast<std::size_t>(j)])) / d;
    record(splits, x, abs(to_integer_128(det)));
    return true;
  }

  void solve_exact(const std::vector<Split>& splits) {
    std::vector<int> coef;
    if (cross_ && !cross_row(splits, coef)) return;
    const int e_count = static_cast<int>(splits.size());
    TreeType t{big_n_, splits};
    const auto dirs = directions(t, p_.n, p_.delta);
    const int n = unknowns_;
    RatMat a = RatMat::Zero(n, n);
    RatVec b(n);
    int row = 0;
    for (const auto& rw : rows_) {
      const Split end = label_bit(rw.end);
      for (int e = 0; e < e_count; ++e)
        if (!(splits[static_cast<std::size_t>(e)] & end))
          a(row, e) = Rational(dot(rw.form, dirs[static_cast<std::size_t>(e)]));
      for (int c = 0; c < r_; ++c) a(row, e_count + c) = Rational(rw.form(c));
      b(row) = rw.rhs;
      ++row;
    }
    if (cross_) {
      for (int e = 0; e < e_count; ++e) a(row, e) = coef[static_cast<std::size_t>(e)];
      b(row) = p_.cross_ratio->length;
    }
    const Rational det = determinant(a);
    const auto sol = solve_affine(a, b);
    if (det == 0) {
      if (sol) throw Error(Errc::NotGeneric, "constraints lie in the image of a degenerate cone");
      return;
    }
    for (int e = 0; e < e_count; ++e) {
      if (sol->particular(e) < 0) return;
      if (sol->particular(e) == 0) throw Error(Errc::NotGeneric, "a solution has an edge of length 0");
    }
    std::vector<Rational> x(sol->particular.data(), sol->particular.data() + n);
    record(splits, x, numerator_of(abs(det)));
  }

  void record(const std::vector<Split>& splits, const std::vector<Rational>& x, Integer mult) {
    std::vector<std::pair<Split, Rational>> edges;
    for (std::size_t e = 0; e < splits.size(); ++e) edges.emplace_back(splits[e], x[e]);
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    CurveSolution s;
    s.curve.type.n = big_n_;
    for (auto& [sp, len] : edges) {
      s.curve.type.splits.push_back(sp);
      s.curve.lengths.push_back(len);
    }
    s.root = RatVec(r_);
    for (int c = 0; c < r_; ++c) s.root(c) = x[splits.size() + static_cast<std::size_t>(c)];
    s.multiplicity = std::move(mult);
    result_.solutions.push_back(std::move(s));
  }

  const CountProblem& p_;
  int big_n_ = 0, r_ = 0, edges_ = 0, unknowns_ = 0, dir_final_at_ = 3;
  std::vector<long long> dir_;
  std::vector<Row> rows_;
  std::vector<std::vector<long long>> forms_ll_;
  std::vector<long long> rhs_ll_;
  Split cross_ = 0;
  long long cross_ll_ = 0;
  bool fast_ = true;
  std::vector<int> order_;
  std::vector<i128> mat_, y_, part_;
  CountResult result_;
};

}  // namespace

Constraint Constraint::at_point(int end, RatVec p) {
  Constraint c;
  c.end = end;
  c.directions = IntMat(p.size(), 0);
  c.point = std::move(p);
  return c;
}

Constraint Constraint::on_subspace(int end, RatVec base, IntMat directions) {
  if (directions.rows() != base.size())
    throw Error(Errc::DimensionMismatch, "subspace directions do not live in R^r");
  if (rank(directions) != directions.cols())
    throw Error(Errc::BadRange, "subspace directions are dependent");
  Constraint c;
  c.end = end;
  c.point = std::move(base);
  c.directions = std::move(directions);
  return c;
}

void CountProblem::validate() const {
  const int big_n = ends();
  if (n < 1) throw Error(Errc::BadRange, "counting needs at least one contracted end");
  if (big_n < 3) throw Error(Errc::BadRange, "curves need at least three ends");
  if (delta.r < 1) throw Error(Errc::BadRange, "r must be positive");
  Split seen = 0;
  Eigen::Index codim = 0;
  for (const auto& c : constraints) {
    if (c.end < 1 || c.end > n) throw Error(Errc::BadRange, "constraint on a non-contracted end");
    if (seen & label_bit(c.end)) throw Error(Errc::BadRange, "two constraints on one end");
    seen |= label_bit(c.end);
    if (c.point.size() != delta.r || c.directions.rows() != delta.r)
      throw Error(Errc::DimensionMismatch, "constraint does not live in R^r");
    if (rank(c.directions) != c.directions.cols())
      throw Error(Errc::BadRange, "subspace directions are dependent");
    codim += c.codim();
  }
  if (cross_ratio) {
    if (n < 4) throw Error(Errc::WrongDimension, "a cross-ratio needs four contracted ends");
    const Split s = cross_ratio->split;
    if (s != 0b0011 && s != 0b0101 && s != 0b1001)
      throw Error(Errc::BadRange, "cross-ratio split must be {1,2}, {1,3} or {1,4}");
    if (cross_ratio->length <= 0) throw Error(Errc::BadRange, "cross-ratio length must be positive");
    ++codim;
  }
  if (codim != delta.r + big_n - 3)
    throw Error(Errc::DimensionMismatch, "constraint codimensions do not add up to r + N - 3 (" +
                                             std::to_string(codim) + " vs " +
                                             std::to_string(delta.r + big_n - 3) + ")");
}

Integer group_order(const Degree& delta) {
  std::map<std::vector<std::string>, int> mult;
  for (const auto& v : delta.entries) {
    std::vector<std::string> key;
    for (Eigen::Index i = 0; i < v.size(); ++i) key.push_back(v(i).str());
    ++mult[key];
  }
  Integer g = 1;
  for (const auto& [k, m] : mult)
    for (int i = 2; i <= m; ++i) g *= i;
  return g;
}

CountResult count(const CountProblem& problem, const CountOptions& opts) {
  problem.validate();
  Counter c(problem);
  if (opts.naive) c.run_naive();
  else c.run_pruned(std::max(1u, opts.threads));
  return c.finish();
}

Rational kontsevich_degree(const CountProblem& problem, const CountOptions& opts) {
  if (!problem.cross_ratio) throw Error(Errc::WrongDimension, "no cross-ratio condition given");
  return count(problem, opts).labeled;
}

std::vector<Constraint> sample_generic_constraints(const std::vector<ConstraintShape>& shape, int r,
                                                   std::uint64_t seed, long long bound) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> coord(-bound, bound);
  std::vector<Constraint> out;
  for (const auto& s : shape) {
    RatVec p(r);
    for (int c = 0; c < r; ++c) p(c) = coord(rng);
    if (s.directions.cols() == 0) out.push_back(Constraint::at_point(s.end, std::move(p)));
    else out.push_back(Constraint::on_subspace(s.end, std::move(p), s.directions));
  }
  return out;
}

std::vector<Constraint> sample_generic_constraints(int r, const Degree& delta, int n,
                                                   std::uint64_t seed, long long bound) {
  if (delta.r != r) throw Error(Errc::DimensionMismatch, "degree lives in another R^r");
  std::vector<ConstraintShape> shape;
  for (int i = 1; i <= n; ++i) shape.push_back({i, IntMat(r, 0)});
  return sample_generic_constraints(shape, r, seed, bound);
}

CountResult count_generic(CountProblem problem, std::uint64_t seed, int retries,
                          const CountOptions& opts) {
  std::vector<ConstraintShape> shape;
  for (const auto& c : problem.constraints) shape.push_back({c.end, c.directions});
  for (int attempt = 0; attempt < retries; ++attempt) {
    problem.constraints = sample_generic_constraints(shape, static_cast<int>(problem.delta.r),
                                                     seed + static_cast<std::uint64_t>(attempt));
    try {
      CountResult res = count(problem, opts);
      res.seed = seed + static_cast<std::uint64_t>(attempt);
      return res;
    } catch (const Error& e) {
      if (e.code() != Errc::NotGeneric) throw;
    }
  }
  throw Error(Errc::RetriesExhausted, "no generic constraints after " + std::to_string(retries) + " samples");
}

namespace {

const QnSpace& cached_space(int n) {
  static std::mutex lock;
  static std::map<int, std::unique_ptr<QnSpace>> spaces;
  std::lock_guard<std::mutex> guard(lock);
  auto& slot = spaces[n];
  if (!slot) slot = std::make_unique<QnSpace>(n);
  return *slot;
}

}  // namespace

Rational lattice_multiplicity_of(const CountProblem& problem, const CurveSolution& s) {
  const int big_n = problem.ends();
  const Eigen::Index r = problem.delta.r;
  const QnSpace& q = cached_space(big_n);
  const Eigen::Index d = q.dim(), amb = d + r;

  // sigma lives in its saturated span lattice, with coordinates in a Z-basis
  std::vector<IntVec> gens;
  for (auto sp : s.curve.type.splits) {
    IntVec v = IntVec::Zero(amb);
    v.head(d) = q.ray(sp);
    gens.push_back(v);
  }
  for (Eigen::Index c = 0; c < r; ++c) {
    IntVec e = IntVec::Zero(amb);
    e(d + c) = 1;
    gens.push_back(e);
  }
  const Lattice span = saturate(gens, amb);
  const Eigen::Index k = span.rank();
  std::vector<IntVec> rays, lin, coords;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    coords.push_back(to_integer(*span.coordinates(to_rational(gens[g]))));
    (g < s.curve.type.splits.size() ? rays : lin).push_back(coords.back());
  }
  const Cone sigma = Cone::simplicial(rays, lin, k);
  const Integer omega = lattice_index(coords, sigma.span_lattice());

  std::vector<IntMat> blocks;
  for (const auto& c : problem.constraints) {
    const IntMat quot = c.directions.cols() == 0 ? IntMat(IntMat::Identity(r, r))
                                                 : annihilator(IntMat(c.directions.transpose()));
    blocks.push_back(quot * ev_matrix(q, c.end, problem.n, problem.delta));
  }
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  WeightedFan target;
  const QnSpace& q4 = cached_space(4);
  if (problem.cross_ratio) {
    blocks.push_back(ft4_matrix(q, q4, r));
    const ModuliFan m04 = build_m0n(4);
    target = product_weighted(WeightedFan::unit(full_space_fan(rows)), marked_to_weighted(m04.fan));
  } else {
    target = WeightedFan::unit(full_space_fan(rows));
  }
  IntMat pi(rows + (problem.cross_ratio ? q4.dim() : 0), amb);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    pi.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  pi = IntMat(pi * span.basis().transpose());

  const Fan src = Fan::from_cones({sigma}, k, FanValidation{FanValidation::Mode::Trusted});
  const auto i = src.find(sigma);
  const auto f = FanMorphism::trusted(WeightedFan(src, {omega}), target.fan(), pi, target.weights());

  RatVec full(amb);
  full.head(d) = q.to_lattice(dist_vector(s.curve));
  full.tail(r) = s.root;
  const auto point = span.coordinates(full);
  if (!point) throw Error(Errc::NotContained, "solution point outside the span of its cone");
  const RatVec image = to_rational(pi) * *point;
  const auto j = locate_point(target.fan(), image);
  if (!i || !j || target.fan().cone(*j).dim() != target.dim())
    throw Error(Errc::NotGeneric, "solution does not map into a maximal target cone");
  return lattice_multiplicity(f, *i, *j);
}

}  // namespace tropfan
