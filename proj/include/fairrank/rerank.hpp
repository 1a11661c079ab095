#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairrank/fairness.hpp"

namespace fairrank {

// Absolute slack on the DCG floor; absorbs floating-point noise without
// admitting genuinely infeasible rankings.
inline constexpr double kDcgFloorTolerance = 1e-12;

// Optimality slack of the value search: branches proven within this band of
// the incumbent are not chased further, so the reported optimum is exact to
// one part in 1e9 of the objective. Heavy noise inflates every coefficient
// by a common mass that carries no ranking information, which is why the
// band scales with the objective instead of being absolute.
inline constexpr double kCostTieRelative = 1e-9;

inline double cost_tie_band(double value) {
  return kCostTieRelative * std::max(1.0, std::abs(value));
}

// Tie width for picking the reported permutation: wide enough that one
// mathematical value reached by different floating summation paths still
// counts as the same cost, far too narrow to admit genuinely different cost
// levels. Permutations inside it are ties and the lexicographically smallest
// one is returned.
inline double cost_float_guard(double value) {
  return 1e-12 * (1.0 + std::abs(value));
}

enum class ScalingMode { none, literal, argmin_preserving };

// Client-side preprocessing of the revealed gap vector. `literal` multiplies
// by epsilon / users; `none` and `argmin_preserving` leave the vector alone
// (any whole-objective scaling happens downstream and cannot change the
// minimizer).
inline std::vector<double> apply_scaling(std::vector<double> gap,
                                         ScalingMode mode, double epsilon,
                                         double users) {
  if (mode == ScalingMode::literal) {
    if (epsilon <= 0.0 || users <= 0.0)
      throw std::invalid_argument(
          "apply_scaling: literal mode needs positive epsilon and user count");
    const double factor = epsilon / users;
    for (auto& x : gap) x *= factor;
  }
  return gap;
}

// A reranked list: position_to_item[j] is the item shown at position j.
struct Reranking {
  std::vector<int> position_to_item;
  double cost = 0.0;
};

// Scatters position weights back onto items: result[i] is the attention item
// i receives under the reranking.
inline std::vector<double> attention_for_items(std::span<const int> position_to_item,
                                               std::span<const double> attention) {
  if (position_to_item.size() != attention.size())
    throw std::invalid_argument("attention_for_items: length mismatch");
  std::vector<double> out(attention.size(), 0.0);
  for (std::size_t j = 0; j < attention.size(); ++j)
    out[std::size_t(position_to_item[j])] = attention[j];
  return out;
}

// One user's assignment instance: place each item at exactly one position,
// minimizing the summed |gap_i + attention_j - relevance_i| coefficients,
// subject to the first k positions retaining at least `dcg_floor` DCG.
struct RerankProblem {
  std::size_t n = 0;
  std::vector<double> gap;        // revealed attention-relevance gap per item
  std::vector<double> relevance;  // normalized relevance per item
  std::vector<double> attention;  // normalized position weights
  double theta = 0.0;
  std::size_t k = 0;
  double dcg_floor = 0.0;
  std::vector<double> cost;       // row-major: cost[item * n + position]
  std::vector<double> item_gain;  // 2^relevance - 1
  std::vector<double> discount;   // position discounts for j < k
};

inline RerankProblem build_problem(std::span<const double> gap,
                                   std::span<const double> relevance,
                                   std::span<const double> attention,
                                   double theta, std::size_t k,
                                   std::span<const int> current_ranking) {
  const std::size_t n = gap.size();
  if (n == 0) throw std::invalid_argument("build_problem: empty instance");
  if (relevance.size() != n || attention.size() != n ||
      current_ranking.size() != n)
    throw std::invalid_argument("build_problem: vector length mismatch");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("build_problem: theta must be in [0, 1]");
  if (k < 1 || k > n)
    throw std::invalid_argument("build_problem: k must be in [1, n]");

  RerankProblem p;
  p.n = n;
  p.gap.assign(gap.begin(), gap.end());
  p.relevance.assign(relevance.begin(), relevance.end());
  p.attention.assign(attention.begin(), attention.end());
  p.theta = theta;
  p.k = k;
  p.dcg_floor = theta * dcg_at_k(relevance, current_ranking, k);
  p.cost.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      p.cost[i * n + j] = std::abs(gap[i] + attention[j] - relevance[i]);
  p.item_gain.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.item_gain[i] = position_gain(relevance[i]);
  p.discount.resize(k);
  for (std::size_t j = 0; j < k; ++j) p.discount[j] = position_discount(j);
  return p;
}

namespace detail {

// Reusable buffers for the assignment solver; sized once, shared across the
// many small subproblems a branch-and-bound run generates.
struct HungarianScratch {
  std::vector<double> u, v, minv;
  std::vector<std::size_t> match, way;
  std::vector<char> used;

  void reset(std::size_t n) {
    u.assign(n + 1, 0.0);
    v.assign(n + 1, 0.0);
    minv.resize(n + 1);
    match.assign(n + 1, 0);
    way.assign(n + 1, 0);
    used.resize(n + 1);
  }
};

// Jonker-Volgenant style shortest augmenting paths, O(n^3), arbitrary finite
// costs. On return scratch.match[j] holds the row matched to column j and
// the potentials satisfy u[i] + v[j] <= cost[i][j] (1-based) with equality
// on matched edges. Returns the optimal total, summed over columns in
// ascending order.
inline double hungarian(HungarianScratch& s, const double* cost, std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  s.reset(n);
  for (std::size_t i = 1; i <= n; ++i) {
    s.match[0] = i;
    std::size_t j0 = 0;
    std::fill(s.minv.begin(), s.minv.end(), kInf);
    std::fill(s.used.begin(), s.used.end(), 0);
    do {
      s.used[j0] = 1;
      const std::size_t i0 = s.match[j0];
      std::size_t j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (s.used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - s.u[i0] - s.v[j];
        if (cur < s.minv[j]) {
          s.minv[j] = cur;
          s.way[j] = j0;
        }
        if (s.minv[j] < delta) {
          delta = s.minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (s.used[j]) {
          s.u[s.match[j]] += delta;
          s.v[j] -= delta;
        } else {
          s.minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (s.match[j0] != 0);
    do {
      const std::size_t j1 = s.way[j0];
      s.match[j0] = s.match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j)
    total += cost[(s.match[j] - 1) * n + (j - 1)];
  return total;
}

}  // namespace detail

// Exact minimum-cost assignment over a row-major n x n matrix. Fills
// position_to_item (column -> row) when requested, and the dual potentials
// when requested: row_potential[i] + col_potential[j] <= cost[i][j] with
// equality on matched edges.
inline double min_cost_assignment(std::span<const double> cost, std::size_t n,
                                  std::vector<int>* position_to_item = nullptr,
                                  std::vector<double>* row_potential = nullptr,
                                  std::vector<double>* col_potential = nullptr) {
  if (n == 0) {
    if (position_to_item) position_to_item->clear();
    if (row_potential) row_potential->clear();
    if (col_potential) col_potential->clear();
    return 0.0;
  }
  if (cost.size() != n * n)
    throw std::invalid_argument("min_cost_assignment: matrix size mismatch");

  detail::HungarianScratch scratch;
  const double total = detail::hungarian(scratch, cost.data(), n);
  if (position_to_item) {
    position_to_item->resize(n);
    for (std::size_t j = 1; j <= n; ++j)
      (*position_to_item)[j - 1] = int(scratch.match[j] - 1);
  }
  if (row_potential)
    row_potential->assign(scratch.u.begin() + 1, scratch.u.end());
  if (col_potential)
    col_potential->assign(scratch.v.begin() + 1, scratch.v.end());
  return total;
}

namespace detail {

// Exact search in two passes.
//
// Pass 1 computes the exact optimal value with a best-bound-first branch and
// bound: children are expanded cheapest bound first, and whenever the node
// relaxation's own matching satisfies the quality floor its true cost becomes
// an incumbent, so the search dives straight to strong incumbents instead of
// crawling through the huge near-optimal plateaus these cost matrices have.
//
// Pass 2 re-walks the tree in item order and returns the lexicographically
// smallest feasible permutation whose cost ties the found optimum (within
// the float guard). The factorial oracle implements the identical two-pass
// rule, which keeps solver and oracle outcome-identical including ties.
//
// Lower bound: a Lagrangian assignment relaxation. The quality constraint
// sum(gain_i * disc_j * X_ij) >= floor is priced into the cost matrix with a
// nonnegative multiplier, which keeps the relaxation a valid bound at every
// node while closing the gap a plain assignment bound leaves once the floor
// binds. The multiplier adapts per node, warm-started from the parent; the
// assignment polytope is integral, so a well-priced relaxation matches the
// LP bound of the remaining subproblem.
class RerankSearch {
 public:
  explicit RerankSearch(const RerankProblem& p)
      : p_(p),
        n_(p.n),
        used_(p.n, 0),
        perm_(p.n, -1),
        sub_(p.n * p.n),
        rows_at_(p.n),
        dual_at_(p.n),
        match_at_(p.n),
        order_at_(p.n) {
    for (std::size_t d = 0; d < n_; ++d) {
      rows_at_[d].reserve(n_);
      dual_at_[d].resize(n_);
      match_at_[d].resize(n_);
      order_at_[d].reserve(n_);
    }
    double max_coeff = 0.0, lo = p_.cost[0], hi = p_.cost[0];
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        max_coeff = std::max(max_coeff, constraint_coeff(i, j));
        lo = std::min(lo, p_.cost[i * n_ + j]);
        hi = std::max(hi, p_.cost[i * n_ + j]);
      }
    lambda_seed_ = max_coeff > 0.0 ? std::max((hi - lo) / max_coeff, 1e-6) : 0.0;
  }

  Reranking run() {
    best_value_ = std::numeric_limits<double>::infinity();
    value_found_ = false;
    optimize_value(0, 0.0, 0.0, 0.0);
    if (!value_found_)
      throw std::logic_error(
          "rerank solve: no feasible permutation; the relevance-sorted list "
          "always satisfies the floor for theta <= 1");

    target_ = best_value_ + cost_float_guard(best_value_);
    target_guard_ = cost_float_guard(target_);
    found_cost_ = 0.0;
    if (!lex_reconstruct(0, 0.0, 0.0, 0.0))
      throw std::logic_error("rerank solve: optimum vanished on reconstruction");
    return Reranking{perm_, found_cost_};
  }

 private:
  struct NodeBound {
    double value = 0.0;   // lower bound on any feasible completion
    double lambda = 0.0;  // multiplier the duals belong to
    double v0 = 0.0;      // first-column potential (m >= 3)
    std::size_t m = 0;
    bool exact_feasible = false;  // relaxation matching is feasible at lambda=0
    double matching_cost = 0.0;   // true cost of that matching, position order
  };

  // gain_i * disc_j, zero beyond the constrained prefix.
  double constraint_coeff(std::size_t item, std::size_t pos) const {
    return pos < p_.k ? p_.item_gain[item] * p_.discount[pos] : 0.0;
  }

  // Largest DCG the positions [next_pos, k) can still collect: pair the
  // largest unused gains with the largest remaining discounts.
  double max_remaining_dcg(std::size_t next_pos) {
    if (next_pos >= p_.k) return 0.0;
    gain_scratch_.clear();
    for (std::size_t i = 0; i < n_; ++i)
      if (!used_[i]) gain_scratch_.push_back(p_.item_gain[i]);
    const std::size_t m = p_.k - next_pos;
    std::partial_sort(gain_scratch_.begin(),
                      gain_scratch_.begin() + std::min(m, gain_scratch_.size()),
                      gain_scratch_.end(), std::greater<>());
    double total = 0.0;
    for (std::size_t t = 0; t < m && t < gain_scratch_.size(); ++t)
      total += gain_scratch_[t] * p_.discount[next_pos + t];
    return total;
  }

  // Assignment value of the priced submatrix plus the priced-out floor mass:
  // a valid lower bound on any feasible completion for every lambda >= 0.
  // Leaves duals and matching for this matrix in hung_.
  double eval_bound(double lambda, const std::vector<std::size_t>& rows,
                    std::size_t depth, double floor_rem, double* relax_dcg) {
    const std::size_t m = rows.size();
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c)
        sub_[r * m + c] = p_.cost[rows[r] * n_ + (depth + c)] -
                          lambda * constraint_coeff(rows[r], depth + c);
    const double value = hungarian(hung_, sub_.data(), m);
    double dcg = 0.0;
    for (std::size_t c = 1; c <= m; ++c)
      dcg += constraint_coeff(rows[hung_.match[c] - 1], depth + (c - 1));
    *relax_dcg = dcg;
    return value + lambda * floor_rem;
  }

  // Bounds the node, leaving per-child screen data in dual_at_/match_at_.
  // `cutoff`: once the bound reaches it the caller prunes, so multiplier
  // probing stops early.
  NodeBound bound_node(std::size_t depth, double dcg_so_far, double lambda_in,
                       double cost_so_far, double cutoff) {
    auto& rows = rows_at_[depth];
    auto& dual = dual_at_[depth];
    const std::size_t m = rows.size();
    const double floor_rem =
        std::max(0.0, p_.dcg_floor - kDcgFloorTolerance - dcg_so_far);

    NodeBound nb;
    nb.m = m;
    nb.lambda = lambda_in;
    if (m == 1) {
      nb.value = p_.cost[rows[0] * n_ + depth];
      nb.lambda = 0.0;
      dual[0] = nb.value;
      return nb;
    }
    if (m == 2) {
      // Exact per-child completion costs, no solver needed at the bottom.
      const double a = p_.cost[rows[0] * n_ + depth];
      const double b = p_.cost[rows[0] * n_ + depth + 1];
      const double c = p_.cost[rows[1] * n_ + depth];
      const double d = p_.cost[rows[1] * n_ + depth + 1];
      const double keep = a + d, swap = c + b;
      nb.value = std::min(keep, swap);
      nb.lambda = 0.0;
      // Encode the exact child bounds through the reduced-cost screen.
      dual[0] = a - (keep - nb.value);
      dual[1] = c - (swap - nb.value);
      return nb;
    }

    double lambda = lambda_in;
    double relax_dcg = 0.0;
    double value = eval_bound(lambda, rows, depth, floor_rem, &relax_dcg);
    nb.v0 = hung_.v[1];
    for (std::size_t r = 0; r < m; ++r) dual[r] = hung_.u[r + 1];
    for (std::size_t c = 0; c < m; ++c) match_at_[depth][c] = hung_.match[c + 1] - 1;

    // Climb the concave dual. The sign of (floor_rem - relax_dcg) is its
    // slope, so keep an infeasible/feasible bracket and probe geometric
    // midpoints; the root gets more probes since children warm-start from
    // the parent's multiplier.
    if (floor_rem > 0.0) {
      double best_relax_dcg = relax_dcg;
      double lo = -1.0, hi = -1.0;  // bracket: dual rising at lo, falling at hi
      if (relax_dcg >= floor_rem)
        hi = lambda;
      else
        lo = lambda;
      const int max_probes = depth == 0 ? 12 : 6;
      for (int probe = 0; probe < max_probes; ++probe) {
        if (cost_so_far + value >= cutoff) break;
        double next;
        if (hi < 0.0)
          next = lo > 0.0 ? lo * 8.0 : lambda_seed_ / 512.0;
        else if (hi == 0.0)
          break;  // feasible with no price at all
        else if (lo < 0.0 || lo == 0.0)
          next = hi / 8.0;
        else
          next = std::sqrt(lo * hi);
        if (!(next > 0.0) || !std::isfinite(next)) break;
        double next_dcg = 0.0;
        const double cand = eval_bound(next, rows, depth, floor_rem, &next_dcg);
        if (cand > value) {
          lambda = next;
          value = cand;
          best_relax_dcg = next_dcg;
          nb.v0 = hung_.v[1];
          for (std::size_t r = 0; r < m; ++r) dual[r] = hung_.u[r + 1];
          for (std::size_t c = 0; c < m; ++c)
            match_at_[depth][c] = hung_.match[c + 1] - 1;
        }
        if (next_dcg >= floor_rem)
          hi = next;
        else
          lo = next;
      }
      relax_dcg = best_relax_dcg;
    }
    nb.value = value;
    nb.lambda = lambda;

    if (relax_dcg >= floor_rem) {
      // The relaxation's matching already satisfies the floor, so its true
      // cost is achievable; accumulate it in position order so the value is
      // bit-identical to the equivalent left-to-right leaf evaluation.
      double true_cost = cost_so_far;
      for (std::size_t c = 0; c < m; ++c)
        true_cost += p_.cost[rows[match_at_[depth][c]] * n_ + (depth + c)];
      nb.matching_cost = true_cost;
      nb.exact_feasible = lambda == 0.0;
      matching_feasible_ = true;
    } else {
      matching_feasible_ = false;
    }
    return nb;
  }

  // Swaps the relaxation matching toward the floor, cheapest gain first, and
  // offers the repaired completion as an incumbent. The relaxation often ties
  // the true optimum in value while its own matching misses the floor; a
  // repaired matching hands the search a near-optimal incumbent immediately
  // instead of letting it surface many levels down.
  void repair_dive(std::size_t depth, double cost_so_far, double floor_rem) {
    auto& rows = rows_at_[depth];
    const std::size_t m = rows.size();
    repair_.assign(match_at_[depth].begin(), match_at_[depth].begin() + m);

    double mass = 0.0;
    for (std::size_t c = 0; c < m; ++c)
      mass += constraint_coeff(rows[repair_[c]], depth + c);

    for (std::size_t pass = 0; pass < 3 * m && mass < floor_rem; ++pass) {
      double best_ratio = std::numeric_limits<double>::infinity();
      double best_gain = 0.0;
      std::size_t b1 = 0, b2 = 0;
      for (std::size_t c1 = 0; c1 + 1 < m; ++c1)
        for (std::size_t c2 = c1 + 1; c2 < m; ++c2) {
          const std::size_t i1 = rows[repair_[c1]], i2 = rows[repair_[c2]];
          const double dmass = constraint_coeff(i2, depth + c1) +
                               constraint_coeff(i1, depth + c2) -
                               constraint_coeff(i1, depth + c1) -
                               constraint_coeff(i2, depth + c2);
          if (!(dmass > 1e-15)) continue;
          const double dcost = p_.cost[i2 * n_ + (depth + c1)] +
                               p_.cost[i1 * n_ + (depth + c2)] -
                               p_.cost[i1 * n_ + (depth + c1)] -
                               p_.cost[i2 * n_ + (depth + c2)];
          const double ratio = std::max(dcost, 0.0) / dmass;
          if (ratio < best_ratio ||
              (ratio == best_ratio && dmass > best_gain)) {
            best_ratio = ratio;
            best_gain = dmass;
            b1 = c1;
            b2 = c2;
          }
        }
      if (!(best_gain > 0.0)) return;  // no swap lifts the mass further
      std::swap(repair_[b1], repair_[b2]);
      mass = 0.0;
      for (std::size_t c = 0; c < m; ++c)
        mass += constraint_coeff(rows[repair_[c]], depth + c);
    }
    if (mass < floor_rem) return;

    double candidate = cost_so_far;
    for (std::size_t c = 0; c < m; ++c)
      candidate += p_.cost[rows[repair_[c]] * n_ + (depth + c)];
    if (candidate < best_value_) {
      best_value_ = candidate;
      value_found_ = true;
    }
  }

  double child_screen(std::size_t depth, const NodeBound& nb, std::size_t r,
                      std::size_t item) const {
    const double edge = p_.cost[item * n_ + depth];
    if (nb.m <= 2) return edge - dual_at_[depth][r];
    return edge - nb.lambda * constraint_coeff(item, depth) -
           dual_at_[depth][r] - nb.v0;
  }

  // Pass 1: exact optimal value, cheapest-bound-first exploration.
  void optimize_value(std::size_t depth, double cost_so_far, double dcg_so_far,
                      double lambda_in) {
    if (depth == n_) {
      if (cost_so_far < best_value_) {
        best_value_ = cost_so_far;
        value_found_ = true;
      }
      return;
    }

    auto& rows = rows_at_[depth];
    rows.clear();
    for (std::size_t i = 0; i < n_; ++i)
      if (!used_[i]) rows.push_back(i);

    const double cutoff = best_value_ - cost_tie_band(best_value_);
    const NodeBound nb =
        bound_node(depth, dcg_so_far, lambda_in, cost_so_far, cutoff);
    if (cost_so_far + nb.value >= cutoff) return;

    if (nb.m > 2 && matching_feasible_) {
      if (nb.matching_cost < best_value_) {
        best_value_ = nb.matching_cost;
        value_found_ = true;
      }
      // With an unpriced matrix the matching is the exact subtree optimum.
      if (nb.exact_feasible) return;
    } else if (nb.m > 2 && depth <= 4) {
      repair_dive(depth, cost_so_far,
                  std::max(0.0, p_.dcg_floor - kDcgFloorTolerance - dcg_so_far));
    }

    auto& order = order_at_[depth];
    order.clear();
    for (std::size_t r = 0; r < nb.m; ++r)
      order.emplace_back(child_screen(depth, nb, r, rows[r]), r);
    std::sort(order.begin(), order.end());

    for (const auto& [screen, r] : order) {
      const std::size_t item = rows[r];
      const double c2 = cost_so_far + p_.cost[item * n_ + depth];
      if (c2 >= best_value_ - cost_tie_band(best_value_)) continue;
      if (cost_so_far + nb.value + screen >=
          best_value_ - cost_tie_band(best_value_))
        continue;

      const double dcg2 =
          dcg_so_far +
          (depth < p_.k ? p_.item_gain[item] * p_.discount[depth] : 0.0);
      used_[item] = 1;
      perm_[depth] = int(item);
      if (dcg2 + max_remaining_dcg(depth + 1) >=
          p_.dcg_floor - kDcgFloorTolerance) {
        optimize_value(depth + 1, c2, dcg2, nb.lambda);
      }
      used_[item] = 0;
    }
  }

  // Pass 2: first permutation in item order that ties the optimal value.
  // Stops at the first hit.
  bool lex_reconstruct(std::size_t depth, double cost_so_far, double dcg_so_far,
                       double lambda_in) {
    if (depth == n_) {
      if (cost_so_far <= target_) {
        found_cost_ = cost_so_far;
        return true;
      }
      return false;
    }

    auto& rows = rows_at_[depth];
    rows.clear();
    for (std::size_t i = 0; i < n_; ++i)
      if (!used_[i]) rows.push_back(i);

    const NodeBound nb = bound_node(depth, dcg_so_far, lambda_in, cost_so_far,
                                    target_ + target_guard_);
    if (cost_so_far + nb.value > target_ + target_guard_) return false;

    for (std::size_t r = 0; r < nb.m; ++r) {
      const std::size_t item = rows[r];
      const double c2 = cost_so_far + p_.cost[item * n_ + depth];
      if (c2 > target_) continue;  // completions only add nonnegative costs
      if (cost_so_far + nb.value + child_screen(depth, nb, r, item) >
          target_ + target_guard_)
        continue;

      const double dcg2 =
          dcg_so_far +
          (depth < p_.k ? p_.item_gain[item] * p_.discount[depth] : 0.0);
      used_[item] = 1;
      perm_[depth] = int(item);
      if (dcg2 + max_remaining_dcg(depth + 1) >=
          p_.dcg_floor - kDcgFloorTolerance) {
        if (lex_reconstruct(depth + 1, c2, dcg2, nb.lambda)) return true;
      }
      used_[item] = 0;
    }
    return false;
  }

  const RerankProblem& p_;
  std::size_t n_;
  std::vector<char> used_;
  std::vector<int> perm_;

  double best_value_ = 0.0;
  bool value_found_ = false;
  double target_ = 0.0;
  double target_guard_ = 0.0;
  double found_cost_ = 0.0;
  bool matching_feasible_ = false;

  double lambda_seed_ = 0.0;
  std::vector<double> sub_, gain_scratch_;
  std::vector<std::size_t> repair_;
  std::vector<std::vector<std::size_t>> rows_at_;
  std::vector<std::vector<double>> dual_at_;
  std::vector<std::vector<std::size_t>> match_at_;
  std::vector<std::vector<std::pair<double, std::size_t>>> order_at_;
  HungarianScratch hung_;
};

}  // namespace detail

// Exact solve. Returns the feasible permutation of minimum cost; among
// minimizers, the lexicographically smallest one.
inline Reranking solve(const RerankProblem& p) {
  detail::RerankSearch search(p);
  return search.run();
}

// Factorial enumeration oracle, same two-pass rule as solve(): exact optimal
// value first, then the first permutation in lexicographic order within the
// tie band. Refuses n > 8.
inline Reranking brute_force(const RerankProblem& p) {
  if (p.n > 8)
    throw std::invalid_argument("brute_force: n > 8 is not enumerable");

  const auto evaluate = [&p](const std::vector<int>& perm, double& cost,
                             double& dcg_value) {
    cost = 0.0;
    dcg_value = 0.0;
    for (std::size_t j = 0; j < p.n; ++j) {
      cost += p.cost[std::size_t(perm[j]) * p.n + j];
      if (j < p.k) dcg_value += p.item_gain[std::size_t(perm[j])] * p.discount[j];
    }
  };

  std::vector<int> perm(p.n);
  for (std::size_t i = 0; i < p.n; ++i) perm[i] = int(i);
  double best_cost = std::numeric_limits<double>::infinity();
  bool found = false;
  do {
    double cost, dcg_value;
    evaluate(perm, cost, dcg_value);
    if (dcg_value >= p.dcg_floor - kDcgFloorTolerance && cost < best_cost) {
      best_cost = cost;
      found = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (!found)
    throw std::logic_error("brute_force: no feasible permutation");

  const double target = best_cost + cost_float_guard(best_cost);
  for (std::size_t i = 0; i < p.n; ++i) perm[i] = int(i);
  do {
    double cost, dcg_value;
    evaluate(perm, cost, dcg_value);
    if (dcg_value >= p.dcg_floor - kDcgFloorTolerance && cost <= target)
      return Reranking{perm, cost};
  } while (std::next_permutation(perm.begin(), perm.end()));
  throw std::logic_error("brute_force: optimum vanished on reconstruction");
}

}  // namespace fairrank
