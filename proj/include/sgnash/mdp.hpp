#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgnash/game.hpp"
#include "sgnash/matrix.hpp"
#include "sgnash/rational_function.hpp"
#include "sgnash/scalar.hpp"

namespace sgnash {

struct EnumerationCapExceeded : std::runtime_error {
  explicit EnumerationCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Finite discrete-time MDP with jagged action sets and exact data. These
/// arise as one player's decision problem once the other player's strategy is
/// fixed, and as uniformized continuous-time processes.
class Dtmdp {
 public:
  Dtmdp(int states, std::vector<int> action_counts)
      : states_(states), actions_(std::move(action_counts)) {
    if (states <= 0) throw std::invalid_argument("Dtmdp: need at least one state");
    if (static_cast<int>(actions_.size()) != states)
      throw std::invalid_argument("Dtmdp: one action count per state");
    rows_.resize(states);
    rewards_.resize(states);
    for (int s = 0; s < states; ++s) {
      if (actions_[s] <= 0) throw std::invalid_argument("Dtmdp: empty action set");
      rewards_[s].assign(actions_[s], Rational(0));
      rows_[s].assign(actions_[s], std::vector<Rational>(states, Rational(0)));
    }
  }

  int states() const { return states_; }
  int actions(int s) const { return actions_.at(s); }

  const Rational& reward(int s, int a) const { return rewards_.at(s).at(a); }
  void set_reward(int s, int a, const Rational& r) { rewards_.at(s).at(a) = r; }

  const std::vector<Rational>& row(int s, int a) const { return rows_.at(s).at(a); }
  const Rational& transition(int s, int a, int s2) const { return rows_.at(s).at(a).at(s2); }
  void set_transition(int s, int a, int s2, const Rational& p) { rows_.at(s).at(a).at(s2) = p; }

  std::vector<Violation> validate() const {
    std::vector<Violation> out;
    for (int s = 0; s < states_; ++s)
      for (int a = 0; a < actions_[s]; ++a) {
        Rational sum(0);
        for (int s2 = 0; s2 < states_; ++s2) {
          if (rows_[s][a][s2].sign() < 0)
            out.push_back({"negative transition probability", s, a});
          sum += rows_[s][a][s2];
        }
        if (sum != Rational(1)) out.push_back({"row sum " + sum.to_string() + " != 1", s, a});
      }
    return out;
  }

  /// Number of deterministic policies, saturating at cap+1.
  size_t policy_count(size_t cap) const {
    size_t n = 1;
    for (int s = 0; s < states_; ++s) {
      n *= static_cast<size_t>(actions_[s]);
      if (n > cap) return cap + 1;
    }
    return n;
  }

 private:
  int states_;
  std::vector<int> actions_;
  std::vector<std::vector<Rational>> rewards_;
  std::vector<std::vector<std::vector<Rational>>> rows_;
};

/// Chain and one-period rewards induced by a deterministic policy.
inline std::pair<DenseMatrix<Rational>, std::vector<Rational>> induced(const Dtmdp& m,
                                                                       const PureStrategy& d) {
  const int n = m.states();
  DenseMatrix<Rational> p(n, n);
  std::vector<Rational> r(n);
  for (int s = 0; s < n; ++s) {
    const int a = d.at(s);
    r[s] = m.reward(s, a);
    for (int s2 = 0; s2 < n; ++s2) p(s, s2) = m.transition(s, a, s2);
  }
  return {std::move(p), std::move(r)};
}

/// Chain and rewards induced by a randomized policy.
inline std::pair<DenseMatrix<Rational>, std::vector<Rational>> induced(const Dtmdp& m,
                                                                       const StationaryStrategy& d) {
  const int n = m.states();
  if (d.states() != n) throw std::invalid_argument("induced: policy state count mismatch");
  DenseMatrix<Rational> p(n, n);
  std::vector<Rational> r(n, Rational(0));
  for (int s = 0; s < n; ++s) {
    if (static_cast<int>(d.row(s).size()) != m.actions(s))
      throw std::invalid_argument("induced: policy action count mismatch");
    for (int a = 0; a < m.actions(s); ++a) {
      const Rational& w = d.probability(s, a);
      if (w.is_zero()) continue;
      r[s] += w * m.reward(s, a);
      for (int s2 = 0; s2 < n; ++s2) p(s, s2) += w * m.transition(s, a, s2);
    }
  }
  return {std::move(p), std::move(r)};
}

/// v = (I - beta P_d)^{-1} r_d over any scalar field; pass the field's own
/// beta (a RationalFunction variable gives the exact parametric value).
template <Scalar F, class Pol>
std::vector<F> policy_value(const Dtmdp& m, const Pol& d, const F& beta) {
  const auto [p, r] = induced(m, d);
  const int n = m.states();
  DenseMatrix<F> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      F entry = scalar_traits<F>::zero() - beta * scalar_traits<F>::from_rational(p(i, j));
      if (i == j) entry = entry + scalar_traits<F>::one();
      a(i, j) = entry;
    }
  std::vector<F> b(n);
  for (int i = 0; i < n; ++i) b[i] = scalar_traits<F>::from_rational(r[i]);
  return solve_linear(std::move(a), std::move(b));
}

template <class Pol>
std::vector<RationalFunction> policy_value_symbolic(const Dtmdp& m, const Pol& d) {
  return policy_value(m, d, RationalFunction::variable());
}

template <Scalar F>
struct OptimalPolicyResult {
  PureStrategy policy;
  std::vector<F> value;
};

/// Howard policy iteration from the all-zeros action profile. Improvement
/// keeps the incumbent action when it is within tol of the state's best
/// action value, otherwise switches to the lowest best index.
template <Scalar F>
OptimalPolicyResult<F> optimal_policy(const Dtmdp& m, const F& beta,
                                      const F& tol = scalar_traits<F>::default_tolerance()) {
  const int n = m.states();
  PureStrategy d{std::vector<int>(n, 0)};
  while (true) {
    std::vector<F> v = policy_value(m, d, beta);
    bool changed = false;
    for (int s = 0; s < n; ++s) {
      std::vector<F> q(m.actions(s));
      for (int a = 0; a < m.actions(s); ++a) {
        F acc = scalar_traits<F>::from_rational(m.reward(s, a));
        for (int s2 = 0; s2 < n; ++s2)
          acc = acc + beta * scalar_traits<F>::from_rational(m.transition(s, a, s2)) * v[s2];
        q[a] = acc;
      }
      int best = 0;
      for (int a = 1; a < m.actions(s); ++a)
        if (q[best] < q[a]) best = a;
      // keep the incumbent when it is within tol of the best; otherwise the
      // lowest index within tol
      int chosen = d.action[s];
      if (q[chosen] < q[best] - tol) {
        chosen = 0;
        while (q[chosen] < q[best] - tol) ++chosen;
      }
      if (chosen != d.action[s]) {
        d.action[s] = chosen;
        changed = true;
      }
    }
    if (!changed) return {std::move(d), std::move(v)};
  }
}

/// Cesaro limit P* of a stochastic matrix, computed structurally: recurrent
/// classes from the reachability graph, one stationary row per class by a
/// linear solve, absorption weights for transient states. Exact over exact
/// fields and immune to periodicity.
template <Scalar F>
DenseMatrix<F> cesaro_limit(const DenseMatrix<F>& p) {
  const int n = p.rows();
  if (p.cols() != n) throw std::invalid_argument("cesaro_limit: matrix not square");

  // Strongly connected components (Tarjan).
  std::vector<int> comp(n, -1), low(n), num(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0, comp_count = 0;
  auto strongconnect = [&](auto&& self, int v) -> void {
    num[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w = 0; w < n; ++w) {
      if (scalar_traits<F>::is_zero(p(v, w))) continue;
      if (num[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], num[w]);
      }
    }
    if (low[v] == num[v]) {
      while (true) {
        const int w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comp_count;
        if (w == v) break;
      }
      ++comp_count;
    }
  };
  for (int v = 0; v < n; ++v)
    if (num[v] < 0) strongconnect(strongconnect, v);

  // A component is recurrent iff no edge leaves it.
  std::vector<bool> closed(comp_count, true);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (!scalar_traits<F>::is_zero(p(v, w)) && comp[w] != comp[v]) closed[comp[v]] = false;

  std::vector<std::vector<int>> classes;
  std::vector<int> class_of(n, -1);
  for (int c = 0; c < comp_count; ++c) {
    if (!closed[c]) continue;
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (comp[v] == c) members.push_back(v);
    for (int v : members) class_of[v] = static_cast<int>(classes.size());
    classes.push_back(std::move(members));
  }
  std::vector<int> transient;
  for (int v = 0; v < n; ++v)
    if (class_of[v] < 0) transient.push_back(v);

  // Stationary row per recurrent class: pi (P_C - I) = 0 with sum pi = 1,
  // one redundant equation replaced by the normalization.
  std::vector<std::vector<F>> stationary(classes.size());
  for (size_t k = 0; k < classes.size(); ++k) {
    const auto& members = classes[k];
    const int c = static_cast<int>(members.size());
    DenseMatrix<F> a(c, c);
    std::vector<F> b(c, scalar_traits<F>::zero());
    for (int r = 0; r + 1 < c; ++r)
      for (int i = 0; i < c; ++i) {
        F entry = p(members[i], members[r]);
        if (i == r) entry = entry - scalar_traits<F>::one();
        a(r, i) = entry;
      }
    for (int i = 0; i < c; ++i) a(c - 1, i) = scalar_traits<F>::one();
    b[c - 1] = scalar_traits<F>::one();
    stationary[k] = solve_linear(std::move(a), std::move(b));
  }

  // Absorption probabilities from each transient state into each class.
  const int t = static_cast<int>(transient.size());
  std::vector<std::vector<F>> absorb(t, std::vector<F>(classes.size(), scalar_traits<F>::zero()));
  if (t > 0) {
    DenseMatrix<F> it(t, t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j) {
        F entry = scalar_traits<F>::zero() - p(transient[i], transient[j]);
        if (i == j) entry = entry + scalar_traits<F>::one();
        it(i, j) = entry;
      }
    for (size_t k = 0; k < classes.size(); ++k) {
      std::vector<F> b(t, scalar_traits<F>::zero());
      for (int i = 0; i < t; ++i)
        for (int v : classes[k]) b[i] = b[i] + p(transient[i], v);
      const std::vector<F> x = solve_linear(it, std::move(b));
      for (int i = 0; i < t; ++i) absorb[i][k] = x[i];
    }
  }

  DenseMatrix<F> star(n, n);
  for (int v = 0; v < n; ++v) {
    if (class_of[v] >= 0) {
      const auto& members = classes[class_of[v]];
      const auto& pi = stationary[class_of[v]];
      for (size_t i = 0; i < members.size(); ++i) star(v, members[i]) = pi[i];
    } else {
      const int ti = static_cast<int>(std::find(transient.begin(), transient.end(), v) -
                                      transient.begin());
      for (size_t k = 0; k < classes.size(); ++k) {
        const auto& members = classes[k];
        const auto& pi = stationary[k];
        for (size_t i = 0; i < members.size(); ++i)
          star(v, members[i]) = star(v, members[i]) + absorb[ti][k] * pi[i];
      }
    }
  }
  return star;
}

/// Expected long-run average reward P*_d r_d.
template <Scalar F = Rational, class Pol>
std::vector<F> average_value(const Dtmdp& m, const Pol& d) {
  const auto [p, r] = induced(m, d);
  const DenseMatrix<F> star = cesaro_limit(p.template cast<F>());
  std::vector<F> rf(r.size());
  for (size_t i = 0; i < r.size(); ++i) rf[i] = scalar_traits<F>::from_rational(r[i]);
  return star.apply(rf);
}

/// Outcome of comparing the selected policy against one competitor, state by
/// state, as germs at the discount limit.
struct PolicyComparison {
  PureStrategy other;
  std::vector<Ordering> per_state;  // selected vs. other
};

struct BlackwellCertificate {
  PureStrategy policy;
  std::vector<RationalFunction> value;  // exact parametric value of `policy`
  std::vector<PolicyComparison> comparisons;
  /// The policy is discount-optimal for every discount factor in [beta0, 1).
  Rational beta0;
};

namespace detail {

inline std::vector<PureStrategy> enumerate_policies(const Dtmdp& m, size_t cap) {
  if (m.policy_count(cap) > cap)
    throw EnumerationCapExceeded("policy enumeration exceeds cap of " + std::to_string(cap));
  std::vector<PureStrategy> out;
  PureStrategy d{std::vector<int>(m.states(), 0)};
  while (true) {
    out.push_back(d);
    int s = m.states() - 1;
    while (s >= 0) {
      if (++d.action[s] < m.actions(s)) break;
      d.action[s] = 0;
      --s;
    }
    if (s < 0) return out;
  }
}

}  // namespace detail

/// Blackwell-optimal policy by exhaustive symbolic enumeration: every
/// deterministic policy's exact parametric value is compared per state as a
/// germ at the discount limit. The certificate's beta0 is a sound (not
/// necessarily minimal) threshold past which the winner is optimal, from a
/// root-free-radius bound on each value difference.
inline BlackwellCertificate blackwell_optimal(const Dtmdp& m, size_t cap = 4096) {
  const std::vector<PureStrategy> policies = detail::enumerate_policies(m, cap);
  std::vector<std::vector<RationalFunction>> values(policies.size());
  for (size_t i = 0; i < policies.size(); ++i) values[i] = policy_value_symbolic(m, policies[i]);

  const int n = m.states();
  std::vector<size_t> max_holder(n, 0);
  for (size_t i = 1; i < policies.size(); ++i)
    for (int s = 0; s < n; ++s)
      if (compare_near_limit(values[i][s], values[max_holder[s]][s]) == Ordering::Greater)
        max_holder[s] = i;

  size_t winner = policies.size();
  for (size_t i = 0; i < policies.size() && winner == policies.size(); ++i) {
    bool dominant = true;
    for (int s = 0; s < n && dominant; ++s)
      if (compare_near_limit(values[i][s], values[max_holder[s]][s]) != Ordering::Equal)
        dominant = false;
    if (dominant) winner = i;
  }
  if (winner == policies.size())
    throw std::logic_error("blackwell_optimal: no per-state dominant policy found");

  BlackwellCertificate cert;
  cert.policy = policies[winner];
  cert.value = values[winner];
  cert.beta0 = Rational(0);
  for (size_t i = 0; i < policies.size(); ++i) {
    if (i == winner) continue;
    PolicyComparison cmp{policies[i], {}};
    cmp.per_state.resize(n);
    for (int s = 0; s < n; ++s) {
      const RationalFunction diff = values[winner][s] - values[i][s];
      cmp.per_state[s] = compare_near_limit(values[winner][s], values[i][s]);
      if (!diff.is_zero()) {
        const Rational b = limit_sign_threshold(diff);
        if (b > cert.beta0) cert.beta0 = b;
      }
    }
    cert.comparisons.push_back(std::move(cmp));
  }
  return cert;
}

}  // namespace sgnash
