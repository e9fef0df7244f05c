#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgnash/game.hpp"
#include "sgnash/matrix.hpp"
#include "sgnash/mdp.hpp"
#include "sgnash/scalar.hpp"

namespace sgnash {

namespace detail {

template <class F>
F field_abs(const F& x) {
  if constexpr (std::is_same_v<F, double>) return std::abs(x);
  else return abs(x);
}

}  // namespace detail

/// The decision process one player faces once the opponent's stationary
/// strategy is fixed: rewards and transitions marginalized over the
/// opponent's distribution.
inline Dtmdp best_response_mdp(const DiscreteGame& game, const StationaryStrategy& opponent,
                               Player player) {
  const Player other = opponent_of(player);
  if (!opponent.validate_for(game, other).empty())
    throw std::invalid_argument("best_response_mdp: opponent strategy does not fit the game");
  const int n = game.states();
  std::vector<int> counts(n);
  for (int s = 0; s < n; ++s) counts[s] = game.actions(player, s);
  Dtmdp m(n, counts);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < counts[s]; ++a) {
      Rational r(0);
      std::vector<Rational> row(n, Rational(0));
      for (int b = 0; b < game.actions(other, s); ++b) {
        const Rational& w = opponent.probability(s, b);
        if (w.is_zero()) continue;
        const int a1 = player == Player::One ? a : b;
        const int a2 = player == Player::One ? b : a;
        r += w * game.reward(player, s, a1, a2);
        for (int s2 = 0; s2 < n; ++s2) row[s2] += w * game.entry(s, a1, a2, s2);
      }
      m.set_reward(s, a, r);
      for (int s2 = 0; s2 < n; ++s2) m.set_transition(s, a, s2, row[s2]);
    }
  return m;
}

/// Per-state optimality assessment of one player's fixed strategy against
/// the best response.
template <Scalar F>
struct StateAssessment {
  F value;             // value of the fixed pair at this state
  F best_action_value; // max one-step lookahead over own actions
  F deviation_gap;     // best_action_value - value; <= tol at equilibrium
  F support_gap;       // max |q(a) - best| over supported actions
  int best_action;
};

struct DeviationWitness {
  Player player;
  int state;
  int action;
};

template <Scalar F>
struct NashReport {
  bool is_nash = false;
  std::array<std::vector<StateAssessment<F>>, 2> players;
  std::optional<DeviationWitness> witness;
};

namespace detail {

/// Bellman assessment of `strategy` inside its best-response MDP, given the
/// pair's value vector.
template <Scalar F>
std::vector<StateAssessment<F>> assess_player(const Dtmdp& br, const StationaryStrategy& strategy,
                                              const std::vector<F>& value, const F& beta) {
  const int n = br.states();
  std::vector<StateAssessment<F>> out(n);
  for (int s = 0; s < n; ++s) {
    std::vector<F> q(br.actions(s));
    for (int a = 0; a < br.actions(s); ++a) {
      F acc = scalar_traits<F>::from_rational(br.reward(s, a));
      for (int s2 = 0; s2 < n; ++s2)
        acc = acc + beta * scalar_traits<F>::from_rational(br.transition(s, a, s2)) * value[s2];
      q[a] = acc;
    }
    int best = 0;
    for (int a = 1; a < br.actions(s); ++a)
      if (q[best] < q[a]) best = a;
    F support_gap = scalar_traits<F>::zero();
    for (int a : strategy_support(strategy, s)) {
      const F dev = field_abs(q[a] - q[best]);
      if (support_gap < dev) support_gap = dev;
    }
    out[s] = {value[s], q[best], q[best] - value[s], support_gap, best};
  }
  return out;
}

template <Scalar F>
NashReport<F> finish_report(std::vector<StateAssessment<F>> p1, std::vector<StateAssessment<F>> p2,
                            const F& tol) {
  NashReport<F> report;
  report.players = {std::move(p1), std::move(p2)};
  report.is_nash = true;
  for (int pi = 0; pi < 2; ++pi)
    for (int s = 0; s < static_cast<int>(report.players[pi].size()); ++s) {
      const auto& a = report.players[pi][s];
      if (tol < a.deviation_gap || tol < a.support_gap) {
        report.is_nash = false;
        if (!report.witness)
          report.witness = DeviationWitness{pi == 0 ? Player::One : Player::Two, s, a.best_action};
      }
    }
  return report;
}

}  // namespace detail

/// Checks that each player's strategy attains the optimal value of its
/// best-response MDP at discount factor beta. Mixed strategies are verified
/// through per-action Bellman gaps: supported actions must be within tol of
/// the state's best action value.
template <Scalar F>
NashReport<F> verify_nash(const DiscreteGame& game, const StationaryStrategy& f,
                          const StationaryStrategy& g, const F& beta,
                          const F& tol = scalar_traits<F>::default_tolerance()) {
  detail::require_valid_pair(game, f, g);
  const DenseMatrix<Rational> p = induced_transition(game, f, g);
  const int n = game.states();
  std::array<std::vector<F>, 2> value;
  for (int pi = 0; pi < 2; ++pi) {
    const std::vector<Rational> r =
        induced_rewards(game, f, g, pi == 0 ? Player::One : Player::Two);
    DenseMatrix<F> a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        F entry = scalar_traits<F>::zero() - beta * scalar_traits<F>::from_rational(p(i, j));
        if (i == j) entry = entry + scalar_traits<F>::one();
        a(i, j) = entry;
      }
    std::vector<F> b(n);
    for (int i = 0; i < n; ++i) b[i] = scalar_traits<F>::from_rational(r[i]);
    value[pi] = solve_linear(std::move(a), std::move(b));
  }
  auto p1 = detail::assess_player(best_response_mdp(game, g, Player::One), f, value[0], beta);
  auto p2 = detail::assess_player(best_response_mdp(game, f, Player::Two), g, value[1], beta);
  return detail::finish_report(std::move(p1), std::move(p2), tol);
}

namespace detail {

inline std::vector<PureStrategy> enumerate_pure(const DiscreteGame& game, Player p) {
  PureStrategy d{std::vector<int>(game.states(), 0)};
  std::vector<PureStrategy> out;
  while (true) {
    out.push_back(d);
    int s = game.states() - 1;
    while (s >= 0) {
      if (++d.action[s] < game.actions(p, s)) break;
      d.action[s] = 0;
      --s;
    }
    if (s < 0) return out;
  }
}

}  // namespace detail

/// All pure strategy pairs that verify as Nash equilibria at beta, in
/// lexicographic order of (f, g) action indices. Exact arithmetic.
inline std::vector<std::pair<PureStrategy, PureStrategy>> enumerate_pure_nash(
    const DiscreteGame& game, const Rational& beta, size_t cap = 4096) {
  size_t count1 = 1, count2 = 1;
  for (int s = 0; s < game.states(); ++s) {
    count1 *= static_cast<size_t>(game.actions(Player::One, s));
    count2 *= static_cast<size_t>(game.actions(Player::Two, s));
    if (count1 > cap || count2 > cap || count1 * count2 > cap)
      throw EnumerationCapExceeded("pure profile count exceeds cap of " + std::to_string(cap));
  }
  std::vector<std::pair<PureStrategy, PureStrategy>> found;
  for (const PureStrategy& f : detail::enumerate_pure(game, Player::One)) {
    const StationaryStrategy fm = f.to_mixed(game, Player::One);
    for (const PureStrategy& g : detail::enumerate_pure(game, Player::Two)) {
      const StationaryStrategy gm = g.to_mixed(game, Player::Two);
      if (verify_nash(game, fm, gm, beta, Rational(0)).is_nash) found.emplace_back(f, g);
    }
  }
  return found;
}

/// Objective and per-constraint residuals of the feasibility program whose
/// zero-objective feasible points are exactly the stationary equilibria with
/// their values. Inequality residuals are feasible when <= 0, equality
/// residuals when = 0.
template <Scalar F>
struct OpResidual {
  F objective;
  std::vector<std::vector<F>> best_reply_1;  // (i)  per (s, a1)
  std::vector<std::vector<F>> best_reply_2;  // (ii) per (s, a2)
  std::vector<F> simplex_1, simplex_2;       // (iii), (iv) per s
  std::vector<std::vector<F>> nonneg_1, nonneg_2;  // (v), (vi) per (s, a)

  bool feasible(const F& tol) const {
    auto le = [&tol](const F& x) { return !(tol < x); };
    for (const auto& row : best_reply_1)
      for (const F& x : row)
        if (!le(x)) return false;
    for (const auto& row : best_reply_2)
      for (const F& x : row)
        if (!le(x)) return false;
    for (const F& x : simplex_1)
      if (!le(detail::field_abs(x))) return false;
    for (const F& x : simplex_2)
      if (!le(detail::field_abs(x))) return false;
    for (const auto& row : nonneg_1)
      for (const F& x : row)
        if (!le(x)) return false;
    for (const auto& row : nonneg_2)
      for (const F& x : row)
        if (!le(x)) return false;
    return true;
  }
};

template <Scalar F>
OpResidual<F> op_evaluate(const DiscreteGame& game, const F& beta, const std::vector<F>& v1,
                          const std::vector<F>& v2, const StationaryStrategy& f,
                          const StationaryStrategy& g) {
  detail::require_valid_pair(game, f, g);
  const int n = game.states();
  if (static_cast<int>(v1.size()) != n || static_cast<int>(v2.size()) != n)
    throw std::invalid_argument("op_evaluate: value vector size mismatch");
  OpResidual<F> out;

  const DenseMatrix<Rational> p = induced_transition(game, f, g);
  out.objective = scalar_traits<F>::zero();
  for (int pi = 0; pi < 2; ++pi) {
    const std::vector<Rational> r =
        induced_rewards(game, f, g, pi == 0 ? Player::One : Player::Two);
    const std::vector<F>& v = pi == 0 ? v1 : v2;
    for (int s = 0; s < n; ++s) {
      F acc = v[s] - scalar_traits<F>::from_rational(r[s]);
      for (int s2 = 0; s2 < n; ++s2)
        acc = acc - beta * scalar_traits<F>::from_rational(p(s, s2)) * v[s2];
      out.objective = out.objective + acc;
    }
  }

  out.best_reply_1.resize(n);
  out.best_reply_2.resize(n);
  out.simplex_1.resize(n);
  out.simplex_2.resize(n);
  out.nonneg_1.resize(n);
  out.nonneg_2.resize(n);
  for (int s = 0; s < n; ++s) {
    const int n1 = game.actions(Player::One, s);
    const int n2 = game.actions(Player::Two, s);
    out.best_reply_1[s].resize(n1);
    for (int a1 = 0; a1 < n1; ++a1) {
      F acc = scalar_traits<F>::zero() - v1[s];
      for (int a2 = 0; a2 < n2; ++a2) {
        const Rational& w = g.probability(s, a2);
        if (w.is_zero()) continue;
        F term = scalar_traits<F>::from_rational(game.reward(Player::One, s, a1, a2));
        for (int s2 = 0; s2 < n; ++s2)
          term = term + beta * scalar_traits<F>::from_rational(game.entry(s, a1, a2, s2)) * v1[s2];
        acc = acc + scalar_traits<F>::from_rational(w) * term;
      }
      out.best_reply_1[s][a1] = acc;
    }
    out.best_reply_2[s].resize(n2);
    for (int a2 = 0; a2 < n2; ++a2) {
      F acc = scalar_traits<F>::zero() - v2[s];
      for (int a1 = 0; a1 < n1; ++a1) {
        const Rational& w = f.probability(s, a1);
        if (w.is_zero()) continue;
        F term = scalar_traits<F>::from_rational(game.reward(Player::Two, s, a1, a2));
        for (int s2 = 0; s2 < n; ++s2)
          term = term + beta * scalar_traits<F>::from_rational(game.entry(s, a1, a2, s2)) * v2[s2];
        acc = acc + scalar_traits<F>::from_rational(w) * term;
      }
      out.best_reply_2[s][a2] = acc;
    }
    Rational sum1(0), sum2(0);
    out.nonneg_1[s].resize(n1);
    out.nonneg_2[s].resize(n2);
    for (int a1 = 0; a1 < n1; ++a1) {
      sum1 += f.probability(s, a1);
      out.nonneg_1[s][a1] = scalar_traits<F>::zero() - scalar_traits<F>::from_rational(f.probability(s, a1));
    }
    for (int a2 = 0; a2 < n2; ++a2) {
      sum2 += g.probability(s, a2);
      out.nonneg_2[s][a2] = scalar_traits<F>::zero() - scalar_traits<F>::from_rational(g.probability(s, a2));
    }
    out.simplex_1[s] = scalar_traits<F>::from_rational(sum1 - Rational(1));
    out.simplex_2[s] = scalar_traits<F>::from_rational(sum2 - Rational(1));
  }
  return out;
}

/// Limit-average Nash verification. The optimal average value of each
/// best-response MDP is obtained through a Blackwell-optimal policy (which is
/// average optimal); only value attainment is compared, so support_gap is 0.
inline NashReport<Rational> verify_average_nash(const DiscreteGame& game,
                                                const StationaryStrategy& f,
                                                const StationaryStrategy& g,
                                                const Rational& tol = Rational(0),
                                                size_t cap = 4096) {
  detail::require_valid_pair(game, f, g);
  const DenseMatrix<Rational> pstar = cesaro_limit(induced_transition(game, f, g));
  NashReport<Rational> report;
  report.is_nash = true;
  for (int pi = 0; pi < 2; ++pi) {
    const Player player = pi == 0 ? Player::One : Player::Two;
    const std::vector<Rational> own = pstar.apply(induced_rewards(game, f, g, player));
    const Dtmdp br = best_response_mdp(game, pi == 0 ? g : f, player);
    const BlackwellCertificate cert = blackwell_optimal(br, cap);
    const std::vector<Rational> opt = average_value(br, cert.policy);
    auto& states = report.players[pi];
    states.resize(game.states());
    for (int s = 0; s < game.states(); ++s) {
      states[s] = {own[s], opt[s], opt[s] - own[s], Rational(0), cert.policy.at(s)};
      if (tol < states[s].deviation_gap) {
        report.is_nash = false;
        if (!report.witness) report.witness = DeviationWitness{player, s, cert.policy.at(s)};
      }
    }
  }
  return report;
}

enum class MixedNeStatus { Ok, NotSingleController, NoInteriorSolution, CandidateNotEquilibrium };

inline std::string to_string(MixedNeStatus s) {
  switch (s) {
    case MixedNeStatus::Ok: return "ok";
    case MixedNeStatus::NotSingleController: return "not-single-controller";
    case MixedNeStatus::NoInteriorSolution: return "no-interior-solution";
    case MixedNeStatus::CandidateNotEquilibrium: return "candidate-not-equilibrium";
  }
  return "?";
}

struct MixedNeResult {
  MixedNeStatus status;
  StationaryStrategy f, g;  // meaningful when status == Ok
  Rational p, q;            // computed mixing weights on action 0 of the 2x2 state
  int mixing_state = -1;
};

namespace detail {

/// Shared closed-form solver for player-2-controlled games with one 2x2
/// state and singleton actions elsewhere. `p2_value_of_pure` returns
/// player 2's value vector for a pure continuation against a pure player-1
/// strategy; the discounting model is the caller's.
template <TimeModel M, class ValueFn, class VerifyFn>
MixedNeResult mixed_ne_2x2_impl(const BasicGame<M>& game, ValueFn&& p2_value_of_pure,
                                VerifyFn&& verify) {
  MixedNeResult out;
  const Controller c = single_controller(game);
  if (c != Controller::Player2 && c != Controller::Both) {
    out.status = MixedNeStatus::NotSingleController;
    return out;
  }
  int hot = -1;
  for (int s = 0; s < game.states(); ++s) {
    const int n1 = game.actions(Player::One, s);
    const int n2 = game.actions(Player::Two, s);
    if (n1 == 2 && n2 == 2) {
      if (hot >= 0) throw std::invalid_argument("mixed_ne_2x2: more than one 2x2 state");
      hot = s;
    } else if (n1 != 1 || n2 != 1) {
      throw std::invalid_argument("mixed_ne_2x2: state is neither 2x2 nor 1x1");
    }
  }
  if (hot < 0) throw std::invalid_argument("mixed_ne_2x2: no 2x2 state");
  out.mixing_state = hot;

  // Player 1 is indifferent at the 2x2 state (transitions are not his), so q
  // solves an affine one-period-reward equation.
  const Rational r00 = game.reward(Player::One, hot, 0, 0);
  const Rational r01 = game.reward(Player::One, hot, 0, 1);
  const Rational r10 = game.reward(Player::One, hot, 1, 0);
  const Rational r11 = game.reward(Player::One, hot, 1, 1);
  const Rational q_coeff = r00 - r10 - r01 + r11;
  if (q_coeff.is_zero()) {
    out.status = MixedNeStatus::NoInteriorSolution;
    return out;
  }
  out.q = (r11 - r01) / q_coeff;
  if (out.q < Rational(0) || out.q > Rational(1)) {
    out.status = MixedNeStatus::NoInteriorSolution;
    return out;
  }

  // Player 2 is indifferent between his two pure continuations; the value is
  // affine in p because rewards are affine in p and transitions are p-free.
  PureStrategy f_p1{std::vector<int>(game.states(), 0)};     // p = 1 plays action 0
  PureStrategy f_p0{std::vector<int>(game.states(), 0)};
  f_p0.action[hot] = 1;
  PureStrategy g_first{std::vector<int>(game.states(), 0)};
  PureStrategy g_second{std::vector<int>(game.states(), 0)};
  g_second.action[hot] = 1;
  const Rational d0 = p2_value_of_pure(f_p0, g_first)[hot] - p2_value_of_pure(f_p0, g_second)[hot];
  const Rational d1 = p2_value_of_pure(f_p1, g_first)[hot] - p2_value_of_pure(f_p1, g_second)[hot];
  if (d0 == d1) {
    out.status = MixedNeStatus::NoInteriorSolution;
    return out;
  }
  out.p = d0 / (d0 - d1);
  if (out.p < Rational(0) || out.p > Rational(1)) {
    out.status = MixedNeStatus::NoInteriorSolution;
    return out;
  }

  std::vector<std::vector<Rational>> frows(game.states()), grows(game.states());
  for (int s = 0; s < game.states(); ++s) {
    frows[s].assign(game.actions(Player::One, s), Rational(0));
    grows[s].assign(game.actions(Player::Two, s), Rational(0));
    if (s == hot) {
      frows[s] = {out.p, Rational(1) - out.p};
      grows[s] = {out.q, Rational(1) - out.q};
    } else {
      frows[s][0] = Rational(1);
      grows[s][0] = Rational(1);
    }
  }
  out.f = StationaryStrategy(std::move(frows));
  out.g = StationaryStrategy(std::move(grows));
  out.status = verify(out.f, out.g) ? MixedNeStatus::Ok : MixedNeStatus::CandidateNotEquilibrium;
  return out;
}

}  // namespace detail

/// Closed-form mixed equilibrium for player-2-controlled games with exactly
/// one 2x2 state and singleton actions elsewhere: q from player-1
/// indifference, p from player-2 value indifference between its two pure
/// continuations. The output is verified before being reported Ok.
inline MixedNeResult mixed_ne_single_controller_2x2(const DiscreteGame& game, const Rational& beta) {
  auto p2_value = [&](const PureStrategy& f, const PureStrategy& g) {
    return policy_value(best_response_mdp(game, f.to_mixed(game, Player::One), Player::Two),
                        g.to_mixed(game, Player::Two), beta);
  };
  auto verify = [&](const StationaryStrategy& f, const StationaryStrategy& g) {
    return verify_nash(game, f, g, beta, Rational(0)).is_nash;
  };
  return detail::mixed_ne_2x2_impl(game, p2_value, verify);
}

}  // namespace sgnash
