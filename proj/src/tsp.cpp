#include "pdstsp/tsp.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace pdstsp {

Sequence nearest_neighbor(const TimeMatrix& t, std::span<const int> subset) {
  std::vector<int> left(subset.begin(), subset.end());
  std::sort(left.begin(), left.end());
  Sequence seq;
  seq.order.reserve(left.size());
  int current = 0;
  while (!left.empty()) {
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < left.size(); ++idx) {
      if (t(current, left[idx]) < t(current, left[best])) best = idx;
    }
    current = left[best];
    seq.order.push_back(current);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return seq;
}

namespace {

bool listed_pure(Reconnect kind, int len_b, int len_c) {
  switch (kind) {
    case Reconnect::swap: return !(len_b == 1 && len_c == 1);
    case Reconnect::swap_rev_b:
    case Reconnect::swap_rev_c:
    case Reconnect::reverse_both: return len_b >= 2 && len_c >= 2;
    case Reconnect::reverse_b: return false;
  }
  return false;
}

constexpr Reconnect kPureKinds[] = {Reconnect::swap, Reconnect::swap_rev_b,
                                    Reconnect::swap_rev_c,
                                    Reconnect::reverse_both};

bool allowed_by(const MoveSet& moves, Reconnect kind, int len_b, int len_c) {
  if (kind == Reconnect::reverse_b) return moves.has(Move::two_opt);
  if (moves.has(Move::three_opt)) return true;
  if (!moves.has(Move::or_opt)) return false;
  // Or-opt relocates one segment of at most three customers, possibly
  // reversed; reverse_both relocates nothing.
  switch (kind) {
    case Reconnect::swap: return std::min(len_b, len_c) <= 3;
    case Reconnect::swap_rev_b: return len_b <= 3;
    case Reconnect::swap_rev_c: return len_c <= 3;
    default: return false;
  }
}

// Closed tour 0, s..., 0 with prefix sums for O(1) move evaluation on
// asymmetric matrices.
class TourState {
 public:
  TourState(const TimeMatrix& t, const std::vector<int>& order) : t_(t) {
    reset(order);
  }

  void reset(const std::vector<int>& order) {
    p_.clear();
    p_.push_back(0);
    p_.insert(p_.end(), order.begin(), order.end());
    p_.push_back(0);
    fwd_.assign(p_.size(), 0.0);
    rev_.assign(p_.size(), 0.0);
    for (std::size_t u = 1; u < p_.size(); ++u) {
      fwd_[u] = fwd_[u - 1] + t_(p_[u - 1], p_[u]);
      rev_[u] = rev_[u - 1] + t_(p_[u], p_[u - 1]);
    }
  }

  int m() const { return static_cast<int>(p_.size()) - 2; }
  int node(int pos) const { return p_[pos]; }
  std::vector<int> order() const {
    return std::vector<int>(p_.begin() + 1, p_.end() - 1);
  }

  // Move indices are sequence indices; sequence index x is tour position x+1.
  double delta(const SequenceMove& mv) const {
    const int a = p_[mv.i];
    const int b1 = p_[mv.i + 1];
    const int b2 = p_[mv.j];
    const double fb = fwd_[mv.j] - fwd_[mv.i + 1];
    const double rb = rev_[mv.j] - rev_[mv.i + 1];
    if (mv.kind == Reconnect::reverse_b) {
      const int d = p_[mv.j + 1];
      const double before = t_(a, b1) + fb + t_(b2, d);
      const double after = t_(a, b2) + rb + t_(b1, d);
      return after - before;
    }
    const int c1 = p_[mv.j + 1];
    const int c2 = p_[mv.k];
    const int d = p_[mv.k + 1];
    const double fc = fwd_[mv.k] - fwd_[mv.j + 1];
    const double rc = rev_[mv.k] - rev_[mv.j + 1];
    const double before = t_(a, b1) + fb + t_(b2, c1) + fc + t_(c2, d);
    double after = 0.0;
    switch (mv.kind) {
      case Reconnect::swap:
        after = t_(a, c1) + fc + t_(c2, b1) + fb + t_(b2, d);
        break;
      case Reconnect::swap_rev_b:
        after = t_(a, c1) + fc + t_(c2, b2) + rb + t_(b1, d);
        break;
      case Reconnect::swap_rev_c:
        after = t_(a, c2) + rc + t_(c1, b1) + fb + t_(b2, d);
        break;
      case Reconnect::reverse_both:
        after = t_(a, b2) + rb + t_(b1, c2) + rc + t_(c1, d);
        break;
      case Reconnect::reverse_b: break;
    }
    return after - before;
  }

  // Nodes whose incident edges change under the move.
  std::array<int, 6> touched(const SequenceMove& mv) const {
    if (mv.kind == Reconnect::reverse_b) {
      return {p_[mv.i], p_[mv.i + 1], p_[mv.j], p_[mv.j + 1], p_[mv.j + 1],
              p_[mv.j + 1]};
    }
    return {p_[mv.i],     p_[mv.i + 1], p_[mv.j],
            p_[mv.j + 1], p_[mv.k],     p_[mv.k + 1]};
  }

 private:
  const TimeMatrix& t_;
  std::vector<int> p_;
  std::vector<double> fwd_;
  std::vector<double> rev_;
};

// Scans every move whose segment B starts at sequence index i. Returns true
// and fills `found` at the first improving move.
bool scan_anchor(const TourState& tour, const MoveSet& moves, int i,
                 SequenceMove& found) {
  const int m = tour.m();
  for (int j = i + 1; j <= m; ++j) {
    for (int k = j; k <= m; ++k) {
      const int len_b = j - i;
      const int len_c = k - j;
      if (len_c == 0) {
        if (len_b < 2 || !moves.has(Move::two_opt)) continue;
        SequenceMove mv{i, j, k, Reconnect::reverse_b};
        if (tour.delta(mv) < -kTimeTolerance) {
          found = mv;
          return true;
        }
        continue;
      }
      for (Reconnect kind : kPureKinds) {
        if (!listed_pure(kind, len_b, len_c)) continue;
        if (!allowed_by(moves, kind, len_b, len_c)) continue;
        SequenceMove mv{i, j, k, kind};
        if (tour.delta(mv) < -kTimeTolerance) {
          found = mv;
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

Sequence local_search(const TimeMatrix& t, Sequence seq,
                      const LocalSearchOptions& options) {
  if (seq.size() < 2 || options.moves.empty()) return seq;
  TourState tour(t, seq.order);
  std::vector<char> dont_look(t.rows(), 0);
  std::size_t applied = 0;

  auto apply = [&](const SequenceMove& mv) {
    for (int node : tour.touched(mv)) dont_look[node] = 0;
    tour.reset(apply_move(tour.order(), mv));
    ++applied;
  };

  while (applied < options.budget) {
    bool improved = false;
    const int m = tour.m();
    for (int i = 0; i < m && applied < options.budget; ++i) {
      const int anchor = tour.node(i);
      if (dont_look[anchor]) continue;
      SequenceMove mv;
      if (scan_anchor(tour, options.moves, i, mv)) {
        apply(mv);
        improved = true;
        i = -1;
      } else {
        dont_look[anchor] = 1;
      }
    }
    if (improved || applied >= options.budget) continue;
    // Verification pass ignoring the bits: an asymmetric reversal changes the
    // value of moves anchored away from the touched nodes.
    SequenceMove mv;
    bool found = false;
    for (int i = 0; i < tour.m() && !found; ++i) {
      found = scan_anchor(tour, options.moves, i, mv);
    }
    if (!found) break;
    std::fill(dont_look.begin(), dont_look.end(), 0);
    apply(mv);
  }
  return Sequence{tour.order()};
}

namespace {

// dp[mask * k + j]: cheapest path from the depot through `mask` ending at j.
std::vector<double> held_karp_table(const TimeMatrix& t,
                                    std::span<const int> c) {
  const int k = static_cast<int>(c.size());
  const std::size_t full = std::size_t{1} << k;
  std::vector<double> dp(full * k, std::numeric_limits<double>::infinity());
  for (int j = 0; j < k; ++j) dp[(std::size_t{1} << j) * k + j] = t(0, c[j]);
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (int j = 0; j < k; ++j) {
      if (!(mask >> j & 1)) continue;
      const double here = dp[mask * k + j];
      if (here == std::numeric_limits<double>::infinity()) continue;
      for (int nxt = 0; nxt < k; ++nxt) {
        if (mask >> nxt & 1) continue;
        const std::size_t to = mask | (std::size_t{1} << nxt);
        const double cand = here + t(c[j], c[nxt]);
        if (cand < dp[to * k + nxt]) dp[to * k + nxt] = cand;
      }
    }
  }
  return dp;
}

void check_size(std::size_t k) {
  if (k > static_cast<std::size_t>(kHeldKarpMaxCustomers)) {
    throw std::invalid_argument("held_karp: subset of " + std::to_string(k) +
                                " customers exceeds the limit of " +
                                std::to_string(kHeldKarpMaxCustomers));
  }
}

}  // namespace

HeldKarpResult held_karp(const TimeMatrix& t, std::span<const int> subset) {
  check_size(subset.size());
  HeldKarpResult result;
  const int k = static_cast<int>(subset.size());
  if (k == 0) return result;
  const auto dp = held_karp_table(t, subset);
  const std::size_t full = (std::size_t{1} << k) - 1;

  int last = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    const double cand = dp[full * k + j] + t(subset[j], 0);
    if (cand < best) {
      best = cand;
      last = j;
    }
  }
  result.cost = best;

  std::vector<int> rev;
  std::size_t mask = full;
  int j = last;
  while (true) {
    rev.push_back(subset[j]);
    const std::size_t prev_mask = mask & ~(std::size_t{1} << j);
    if (prev_mask == 0) break;
    const double target = dp[mask * k + j];
    int prev = -1;
    for (int i = 0; i < k; ++i) {
      if (!(prev_mask >> i & 1)) continue;
      if (dp[prev_mask * k + i] + t(subset[i], subset[j]) == target) {
        prev = i;
        break;
      }
    }
    mask = prev_mask;
    j = prev;
  }
  result.tour.order.assign(rev.rbegin(), rev.rend());
  return result;
}

std::vector<double> held_karp_all_subsets(const TimeMatrix& t,
                                          std::span<const int> customers) {
  check_size(customers.size());
  const int k = static_cast<int>(customers.size());
  const std::size_t full = std::size_t{1} << k;
  std::vector<double> cost(full, 0.0);
  if (k == 0) return cost;
  const auto dp = held_karp_table(t, customers);
  for (std::size_t mask = 1; mask < full; ++mask) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      if (!(mask >> j & 1)) continue;
      best = std::min(best, dp[mask * k + j] + t(customers[j], 0));
    }
    cost[mask] = best;
  }
  return cost;
}

Sequence held_karp_tour(const TimeMatrix& t, std::span<const int> customers,
                        std::uint32_t mask) {
  std::vector<int> subset;
  for (std::size_t j = 0; j < customers.size(); ++j) {
    if (mask >> j & 1u) subset.push_back(customers[j]);
  }
  return held_karp(t, subset).tour;
}

TimeMatrix perturb_matrix(const TimeMatrix& t, double gamma_pct, Rng& rng) {
  if (gamma_pct < 0.0) {
    throw std::invalid_argument("perturb_matrix: gamma_pct must be >= 0");
  }
  TimeMatrix out = t;
  const double spread = gamma_pct / 100.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (i == j) continue;
      out(i, j) = t(i, j) * (1.0 + spread * rng.uniform01());
    }
  }
  return out;
}

Sequence LocalSearchOptimizer::optimize(const TimeMatrix& t,
                                        std::span<const int> customers) const {
  return local_search(t, nearest_neighbor(t, customers), options_);
}

Sequence LocalSearchOptimizer::improve(const TimeMatrix& t,
                                       Sequence start) const {
  return local_search(t, std::move(start), options_);
}

const TourOptimizer& default_tour_optimizer() {
  static const LocalSearchOptimizer optimizer;
  return optimizer;
}

std::vector<SequenceMove> two_opt_moves(int m) {
  std::vector<SequenceMove> moves;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 2; j <= m; ++j) {
      moves.push_back({i, j, j, Reconnect::reverse_b});
    }
  }
  return moves;
}

std::vector<SequenceMove> three_opt_moves(int m) {
  std::vector<SequenceMove> moves;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      for (int k = j; k <= m; ++k) {
        const int len_b = j - i;
        const int len_c = k - j;
        if (len_c == 0) {
          if (len_b >= 2) moves.push_back({i, j, k, Reconnect::reverse_b});
          continue;
        }
        for (Reconnect kind : kPureKinds) {
          if (listed_pure(kind, len_b, len_c)) moves.push_back({i, j, k, kind});
        }
      }
    }
  }
  return moves;
}

std::vector<int> apply_move(const std::vector<int>& order,
                            const SequenceMove& mv) {
  std::vector<int> out;
  out.reserve(order.size());
  const auto begin = order.begin();
  auto push = [&](int from, int to, bool reversed) {
    if (reversed) {
      for (int x = to - 1; x >= from; --x) out.push_back(order[x]);
    } else {
      out.insert(out.end(), begin + from, begin + to);
    }
  };
  push(0, mv.i, false);
  switch (mv.kind) {
    case Reconnect::reverse_b:
      push(mv.i, mv.j, true);
      push(mv.j, mv.k, false);
      break;
    case Reconnect::swap:
      push(mv.j, mv.k, false);
      push(mv.i, mv.j, false);
      break;
    case Reconnect::swap_rev_b:
      push(mv.j, mv.k, false);
      push(mv.i, mv.j, true);
      break;
    case Reconnect::swap_rev_c:
      push(mv.j, mv.k, true);
      push(mv.i, mv.j, false);
      break;
    case Reconnect::reverse_both:
      push(mv.i, mv.j, true);
      push(mv.j, mv.k, true);
      break;
  }
  push(mv.k, static_cast<int>(order.size()), false);
  return out;
}

}  // namespace pdstsp
