#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgnash/blackwell.hpp"
#include "sgnash/equilibrium.hpp"
#include "sgnash/game.hpp"
#include "sgnash/mdp.hpp"

namespace sgnash {

struct ZeroRates : std::runtime_error {
  explicit ZeroRates(const std::string& what) : std::runtime_error(what) {}
};

/// Continuous-time MDP: one player's decision process with transition rates.
/// Off-diagonal rates are nonnegative and each diagonal entry balances its
/// row to zero.
class Ctmdp {
 public:
  Ctmdp(int states, std::vector<int> action_counts)
      : states_(states), actions_(std::move(action_counts)) {
    if (states <= 0) throw std::invalid_argument("Ctmdp: need at least one state");
    if (static_cast<int>(actions_.size()) != states)
      throw std::invalid_argument("Ctmdp: one action count per state");
    rewards_.resize(states);
    rows_.resize(states);
    for (int s = 0; s < states; ++s) {
      if (actions_[s] <= 0) throw std::invalid_argument("Ctmdp: empty action set");
      rewards_[s].assign(actions_[s], Rational(0));
      rows_[s].assign(actions_[s], std::vector<Rational>(states, Rational(0)));
    }
  }

  int states() const { return states_; }
  int actions(int s) const { return actions_.at(s); }

  const Rational& reward(int s, int a) const { return rewards_.at(s).at(a); }
  void set_reward(int s, int a, const Rational& r) { rewards_.at(s).at(a) = r; }

  const std::vector<Rational>& row(int s, int a) const { return rows_.at(s).at(a); }
  const Rational& rate(int s, int a, int s2) const { return rows_.at(s).at(a).at(s2); }
  void set_rate(int s, int a, int s2, const Rational& r) { rows_.at(s).at(a).at(s2) = r; }

  std::vector<Violation> validate() const {
    std::vector<Violation> out;
    for (int s = 0; s < states_; ++s)
      for (int a = 0; a < actions_[s]; ++a) {
        Rational offdiag(0);
        for (int s2 = 0; s2 < states_; ++s2) {
          if (s2 == s) continue;
          if (rows_[s][a][s2].sign() < 0) out.push_back({"negative off-diagonal rate", s, a});
          offdiag += rows_[s][a][s2];
        }
        if (rows_[s][a][s] != -offdiag)
          out.push_back({"diagonal rate does not balance the row", s, a});
      }
    return out;
  }

 private:
  int states_;
  std::vector<int> actions_;
  std::vector<std::vector<Rational>> rewards_;
  std::vector<std::vector<std::vector<Rational>>> rows_;
};

/// Sup over all states and action profiles of the off-diagonal rate row sum.
/// The game is static when this is zero, which makes uniformization
/// undefined; that case is an error.
inline Rational mu_norm(const ContinuousGame& game) {
  Rational best(0);
  for (int s = 0; s < game.states(); ++s)
    for (int a1 = 0; a1 < game.actions(Player::One, s); ++a1)
      for (int a2 = 0; a2 < game.actions(Player::Two, s); ++a2) {
        Rational sum(0);
        for (int s2 = 0; s2 < game.states(); ++s2)
          if (s2 != s) sum += game.entry(s, a1, a2, s2);
        if (sum > best) best = sum;
      }
  if (best.is_zero()) throw ZeroRates("mu_norm: all transition rates are zero");
  return best;
}

inline Rational mu_norm(const Ctmdp& m) {
  Rational best(0);
  for (int s = 0; s < m.states(); ++s)
    for (int a = 0; a < m.actions(s); ++a) {
      Rational sum(0);
      for (int s2 = 0; s2 < m.states(); ++s2)
        if (s2 != s) sum += m.rate(s, a, s2);
      if (sum > best) best = sum;
    }
  if (best.is_zero()) throw ZeroRates("mu_norm: all transition rates are zero");
  return best;
}

/// The discrete-time process equivalent to a continuous-time one at discount
/// rate alpha: rewards scaled by 1/(mu + alpha), transitions mu-row/mu +
/// identity, discount factor mu/(alpha + mu).
struct UniformizationResult {
  Dtmdp dtmdp;
  Rational beta;
  Rational mu;
  Rational alpha;
};

inline UniformizationResult uniformize(const Ctmdp& m, const Rational& alpha,
                                       std::optional<Rational> mu_override = std::nullopt) {
  if (!(alpha > Rational(0))) throw std::invalid_argument("uniformize: alpha must be positive");
  const Rational mu = mu_override ? *mu_override : mu_norm(m);
  if (!(mu > Rational(0))) throw ZeroRates("uniformize: rate norm must be positive");
  std::vector<int> counts(m.states());
  for (int s = 0; s < m.states(); ++s) counts[s] = m.actions(s);
  Dtmdp dt(m.states(), counts);
  const Rational scale = Rational(1) / (mu + alpha);
  for (int s = 0; s < m.states(); ++s)
    for (int a = 0; a < m.actions(s); ++a) {
      dt.set_reward(s, a, m.reward(s, a) * scale);
      for (int s2 = 0; s2 < m.states(); ++s2) {
        Rational p = m.rate(s, a, s2) / mu;
        if (s2 == s) p += Rational(1);
        if (p.sign() < 0)
          throw std::invalid_argument("uniformize: rate norm smaller than a row's exit rate");
        dt.set_transition(s, a, s2, p);
      }
    }
  return {std::move(dt), mu / (alpha + mu), mu, alpha};
}

/// v = (alpha I - Q_d)^{-1} r_d, the continuous-time discounted value,
/// computed directly without uniformization. With a RationalFunction alpha
/// this is the exact parametric value in the discount rate.
template <Scalar F, class Pol>
std::vector<F> ct_policy_value(const Ctmdp& m, const Pol& d, const F& alpha) {
  const int n = m.states();
  DenseMatrix<Rational> q(n, n);
  std::vector<Rational> r(n, Rational(0));
  if constexpr (std::is_same_v<Pol, PureStrategy>) {
    for (int s = 0; s < n; ++s) {
      r[s] = m.reward(s, d.at(s));
      for (int s2 = 0; s2 < n; ++s2) q(s, s2) = m.rate(s, d.at(s), s2);
    }
  } else {
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < m.actions(s); ++a) {
        const Rational& w = d.probability(s, a);
        if (w.is_zero()) continue;
        r[s] += w * m.reward(s, a);
        for (int s2 = 0; s2 < n; ++s2) q(s, s2) += w * m.rate(s, a, s2);
      }
  }
  DenseMatrix<F> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      F entry = scalar_traits<F>::zero() - scalar_traits<F>::from_rational(q(i, j));
      if (i == j) entry = entry + alpha;
      a(i, j) = entry;
    }
  std::vector<F> b(n);
  for (int i = 0; i < n; ++i) b[i] = scalar_traits<F>::from_rational(r[i]);
  return solve_linear(std::move(a), std::move(b));
}

template <class Pol>
std::vector<RationalFunction> ct_policy_value_symbolic(const Ctmdp& m, const Pol& d) {
  return ct_policy_value(m, d, RationalFunction::variable());
}

/// The continuous-time decision process one player faces once the opponent's
/// stationary strategy is fixed.
inline Ctmdp best_response_ctmdp(const ContinuousGame& game, const StationaryStrategy& opponent,
                                 Player player) {
  const Player other = opponent_of(player);
  if (!opponent.validate_for(game, other).empty())
    throw std::invalid_argument("best_response_ctmdp: opponent strategy does not fit the game");
  const int n = game.states();
  std::vector<int> counts(n);
  for (int s = 0; s < n; ++s) counts[s] = game.actions(player, s);
  Ctmdp m(n, counts);
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
      for (int s2 = 0; s2 < n; ++s2) m.set_rate(s, a, s2, row[s2]);
    }
  return m;
}

/// Nash verification at discount rate alpha: each player's CTMDP is
/// uniformized at the game-wide rate norm and the discrete Bellman check
/// runs at the induced beta. The uniformized value equals the
/// continuous-time value, so the reported values and gaps are already in
/// value units; multiplying a gap by (alpha + mu) converts it to
/// reward-rate units.
inline NashReport<Rational> verify_nash_ct(const ContinuousGame& game, const StationaryStrategy& f,
                                           const StationaryStrategy& g, const Rational& alpha,
                                           const Rational& tol = Rational(0)) {
  if (!(alpha > Rational(0))) throw std::invalid_argument("verify_nash_ct: alpha must be positive");
  detail::require_valid_pair(game, f, g);
  const Rational mu = mu_norm(game);
  std::array<std::vector<StateAssessment<Rational>>, 2> assessed;
  for (int pi = 0; pi < 2; ++pi) {
    const Player player = pi == 0 ? Player::One : Player::Two;
    const StationaryStrategy& own = pi == 0 ? f : g;
    const StationaryStrategy& opp = pi == 0 ? g : f;
    const UniformizationResult uni = uniformize(best_response_ctmdp(game, opp, player), alpha, mu);
    const std::vector<Rational> value = policy_value(uni.dtmdp, own, uni.beta);
    assessed[pi] = detail::assess_player(uni.dtmdp, own, value, uni.beta);
  }
  return detail::finish_report(std::move(assessed[0]), std::move(assessed[1]), tol);
}

/// Continuous-time single-controller additive-reward equilibrium: myopic
/// argmax for player 1, Blackwell-optimal response for player 2 on the
/// uniformized process (one shared transition law across every alpha, so
/// the symbolic comparison in beta covers all discount rates at once).
struct ScArBneContinuous {
  ScArStatus status = ScArStatus::NotScAr;
  std::string witness;
  std::optional<RectangleWitness> rectangle;
  PureStrategy f, g;
  Rational beta0;
  /// Pair certified for alpha in (0, alpha0]; nullopt means every alpha > 0.
  std::optional<Rational> alpha0;
};

inline ScArBneContinuous sc_ar_bne_ct(const ContinuousGame& game, size_t cap = 4096) {
  ScArBneContinuous out;
  const Controller c = single_controller(game);
  if (c != Controller::Player2 && c != Controller::Both) {
    out.witness = "transition rates depend on player 1's actions (controller: " + to_string(c) + ")";
    return out;
  }
  const AdditiveCheckResult add = check_additive_reward(game, Player::One);
  if (!add.feasible()) {
    out.witness = "player 1 rewards are not additive: " + add.witness->describe();
    out.rectangle = add.witness;
    return out;
  }
  const Rational mu = mu_norm(game);
  out.f.action.resize(game.states(), 0);
  for (int s = 0; s < game.states(); ++s) {
    const auto& part = add.decomposition->part1[s];
    for (int a = 1; a < static_cast<int>(part.size()); ++a)
      if (part[a] > part[out.f.action[s]]) out.f.action[s] = a;
  }
  // Player 2's uniformized process with unscaled rewards: the 1/(mu+alpha)
  // reward factor is a positive constant per alpha and cannot change the
  // optimal-policy ordering.
  const Ctmdp br = best_response_ctmdp(game, out.f.to_mixed(game, Player::One), Player::Two);
  std::vector<int> counts(game.states());
  for (int s = 0; s < game.states(); ++s) counts[s] = br.actions(s);
  Dtmdp dt(game.states(), counts);
  for (int s = 0; s < game.states(); ++s)
    for (int a = 0; a < br.actions(s); ++a) {
      dt.set_reward(s, a, br.reward(s, a));
      for (int s2 = 0; s2 < game.states(); ++s2) {
        Rational p = br.rate(s, a, s2) / mu;
        if (s2 == s) p += Rational(1);
        dt.set_transition(s, a, s2, p);
      }
    }
  const BlackwellCertificate cert = blackwell_optimal(dt, cap);
  out.g = cert.policy;
  out.beta0 = cert.beta0;
  if (cert.beta0.sign() > 0) out.alpha0 = mu * (Rational(1) - cert.beta0) / cert.beta0;
  out.status = ScArStatus::Ok;
  return out;
}

namespace detail {

inline CertInputs cert_inputs_continuous(const ContinuousGame& game, const PureStrategy& f,
                                         const PureStrategy& g, const Rational& mu, bool sit_form,
                                         const std::vector<Rational>* weights) {
  CertInputs in;
  in.states = game.states();
  for (int player = 0; player < 2; ++player) {
    in.action_counts[player].resize(in.states);
    in.eq_action[player].resize(in.states);
    in.eq_reward[player].resize(in.states);
    in.dev_reward[player].resize(in.states);
    in.dev_row[player].resize(in.states);
  }
  auto probability_like = [&](int s, int a1, int a2) {
    std::vector<Rational> row(in.states);
    for (int s2 = 0; s2 < in.states; ++s2) {
      row[s2] = game.entry(s, a1, a2, s2) / mu;
      if (s2 == s) row[s2] += Rational(1);
    }
    return row;
  };
  for (int s = 0; s < in.states; ++s) {
    const int a1s = f.at(s);
    const int a2s = g.at(s);
    in.eq_action[0][s] = a1s;
    in.eq_action[1][s] = a2s;
    in.action_counts[0][s] = game.actions(Player::One, s);
    in.action_counts[1][s] = game.actions(Player::Two, s);
    in.eq_reward[0][s] = game.reward(Player::One, s, a1s, a2s);
    in.eq_reward[1][s] = game.reward(Player::Two, s, a1s, a2s);
    in.dev_reward[0][s].resize(in.action_counts[0][s]);
    in.dev_row[0][s].resize(in.action_counts[0][s]);
    for (int a = 0; a < in.action_counts[0][s]; ++a) {
      in.dev_reward[0][s][a] = game.reward(Player::One, s, a, a2s);
      in.dev_row[0][s][a] = probability_like(s, a, a2s);
    }
    in.dev_reward[1][s].resize(in.action_counts[1][s]);
    in.dev_row[1][s].resize(in.action_counts[1][s]);
    for (int a = 0; a < in.action_counts[1][s]; ++a) {
      in.dev_reward[1][s][a] = game.reward(Player::Two, s, a1s, a);
      in.dev_row[1][s][a] = probability_like(s, a1s, a);
    }
  }
  if (sit_form) {
    if (!weights) throw std::logic_error("cert_inputs_continuous: SIT form needs weights");
    in.sit_weights = *weights;
  }
  return in;
}

/// Checks Q = c (SIT - I) for some positive c; used to report near-misses of
/// the SIT rate condition when c differs from the rate norm.
inline std::optional<Rational> sit_rate_scale(const DenseMatrix<Rational>& q) {
  const int n = q.rows();
  if (n == 1) return -q(0, 0);
  std::optional<Rational> c;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (t == s) continue;
      const Rational candidate = q(t, s) - q(s, s);
      if (!c) c = candidate;
      else if (*c != candidate) return std::nullopt;
    }
  if (!c || !(*c > Rational(0))) return std::nullopt;
  // rows of Q/c + I must coincide
  for (int s = 1; s < n; ++s)
    for (int s2 = 0; s2 < n; ++s2) {
      Rational r0 = q(0, s2) / *c;
      Rational rs = q(s, s2) / *c;
      if (s2 == 0) r0 += Rational(1);
      if (s2 == s) rs += Rational(1);
      if (r0 != rs) return std::nullopt;
    }
  return c;
}

}  // namespace detail

/// M/N certification for continuous-time games. M2 requires the induced rate
/// matrix to be exactly mu-norm scaled (SIT - I); N2 requires it to vanish
/// (all states absorbing). The per-deviation beta bounds convert to the rate
/// threshold alpha0 = (1 - beta0) mu / beta0.
inline CertificationReport certify_bne_ct(const ContinuousGame& game, const PureStrategy& f,
                                          const PureStrategy& g, const Rational& alpha_hat,
                                          ConditionSet set) {
  if (set != ConditionSet::M && set != ConditionSet::N)
    throw std::invalid_argument("certify_bne_ct: condition set must be M or N");
  if (!(alpha_hat > Rational(0)))
    throw std::invalid_argument("certify_bne_ct: alpha_hat must be positive");
  CertificationReport report;
  report.set = set;
  report.reference_discount = alpha_hat;

  const Rational mu = mu_norm(game);
  const StationaryStrategy fm = f.to_mixed(game, Player::One);
  const StationaryStrategy gm = g.to_mixed(game, Player::Two);
  const NashReport<Rational> nash = verify_nash_ct(game, fm, gm, alpha_hat, Rational(0));
  report.nash_at_reference.passed = nash.is_nash;
  if (!nash.is_nash && nash.witness)
    report.nash_at_reference.detail =
        "deviation for player " + std::to_string(player_index(nash.witness->player) + 1) +
        " at state " + std::to_string(nash.witness->state) + ", action " +
        std::to_string(nash.witness->action);

  const DenseMatrix<Rational> q = induced_rate_matrix(game, fm, gm);
  const int n = game.states();
  DenseMatrix<Rational> pbar(n, n);
  bool q_zero = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!q(i, j).is_zero()) q_zero = false;
      pbar(i, j) = q(i, j) / mu;
      if (i == j) pbar(i, j) += Rational(1);
    }
  report.chain_is_sit = is_sit(pbar);
  report.chain_is_identity = q_zero;
  report.chain_condition.passed = set == ConditionSet::M ? report.chain_is_sit : q_zero;
  if (!report.chain_condition.passed) {
    report.chain_condition.detail = set == ConditionSet::M
                                        ? "induced rate matrix is not mu-norm scaled (SIT - I)"
                                        : "induced rate matrix is not zero";
    if (set == ConditionSet::M) {
      if (const auto c = detail::sit_rate_scale(q); c && *c != mu)
        report.remarks.push_back("near miss: rate matrix equals " + c->to_string() +
                                 " * (SIT - I), but the rate norm is " + mu.to_string());
    }
  }

  std::vector<Rational> weights(n);
  for (int s2 = 0; s2 < n; ++s2) weights[s2] = pbar(0, s2);
  const detail::CertInputs inputs = detail::cert_inputs_continuous(
      game, f, g, mu, set == ConditionSet::M, set == ConditionSet::M ? &weights : nullptr);
  report.reward_condition = detail::reward_condition_verdict(inputs);

  if (report.nash_at_reference.passed && report.chain_condition.passed &&
      report.reward_condition.passed) {
    Beta0Result b = detail::bounds_from(inputs);
    report.bounds = std::move(b.bounds);
    report.beta0 = b.beta0;
    Rational per_player[2] = {Rational(0), Rational(0)};
    for (const auto& entry : report.bounds)
      if (const auto bd = entry.bound(); bd && *bd > per_player[player_index(entry.player)])
        per_player[player_index(entry.player)] = *bd;
    for (int pi = 0; pi < 2; ++pi)
      report.remarks.push_back("player " + std::to_string(pi + 1) + " discount-factor threshold: " +
                               per_player[pi].to_string());
    if (b.beta0.sign() > 0)
      report.alpha0 = mu * (Rational(1) - b.beta0) / b.beta0;
    else
      report.alpha0_unbounded = true;
    report.certified = true;
  }
  return report;
}

/// Continuous-time analog of the 2x2 closed-form solver: same player-1
/// indifference, player-2 indifference through the (alpha I - Q)^{-1}
/// resolvent.
inline MixedNeResult mixed_ne_single_controller_2x2_ct(const ContinuousGame& game,
                                                       const Rational& alpha) {
  if (!(alpha > Rational(0)))
    throw std::invalid_argument("mixed_ne_single_controller_2x2_ct: alpha must be positive");
  auto p2_value = [&](const PureStrategy& f, const PureStrategy& g) {
    return ct_policy_value(best_response_ctmdp(game, f.to_mixed(game, Player::One), Player::Two), g,
                           alpha);
  };
  auto verify = [&](const StationaryStrategy& f, const StationaryStrategy& g) {
    return verify_nash_ct(game, f, g, alpha, Rational(0)).is_nash;
  };
  return detail::mixed_ne_2x2_impl(game, p2_value, verify);
}

}  // namespace sgnash
