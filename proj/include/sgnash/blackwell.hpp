#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgnash/equilibrium.hpp"
#include "sgnash/game.hpp"
#include "sgnash/mdp.hpp"

namespace sgnash {

enum class ConditionSet { C, D, M, N };

inline std::string to_string(ConditionSet s) {
  switch (s) {
    case ConditionSet::C: return "C";
    case ConditionSet::D: return "D";
    case ConditionSet::M: return "M";
    case ConditionSet::N: return "N";
  }
  return "?";
}

struct InvalidCertificate : std::runtime_error {
  explicit InvalidCertificate(const std::string& what) : std::runtime_error(what) {}
};

/// One deviation constraint theta(beta) <= 0, reduced to numerator - beta *
/// denominator (after clearing the positive 1/(1-beta) factors). A zero
/// denominator makes the constraint discount-independent; otherwise the
/// constraint holds for beta >= numerator/denominator.
struct BoundEntry {
  Player player;
  int state;
  int action;
  Rational numerator;
  Rational denominator;

  bool beta_independent() const { return denominator.is_zero(); }
  std::optional<Rational> bound() const {
    if (beta_independent()) return std::nullopt;
    return numerator / denominator;
  }
};

struct Beta0Result {
  Rational beta0;
  std::vector<BoundEntry> bounds;
};

struct ConditionVerdict {
  bool passed = false;
  std::string detail;
};

/// Outcome of a C/D (discrete) or M/N (continuous) certification: the three
/// condition verdicts with witnesses, the per-deviation bounds, and the
/// certified threshold. Both chain-shape memberships are always reported,
/// since for single-state chains the two coincide.
struct CertificationReport {
  ConditionSet set = ConditionSet::C;
  Rational reference_discount;  // beta_hat for C/D, alpha_hat for M/N
  ConditionVerdict nash_at_reference;
  ConditionVerdict chain_condition;
  ConditionVerdict reward_condition;
  bool chain_is_sit = false;
  bool chain_is_identity = false;
  std::vector<BoundEntry> bounds;
  std::optional<Rational> beta0;
  std::optional<Rational> alpha0;   // continuous sets only
  bool alpha0_unbounded = false;    // continuous sets: every alpha > 0 certified
  bool certified = false;
  std::vector<std::string> remarks;
};

namespace detail {

/// Inputs shared by all four bound computations: equilibrium-path rewards,
/// the deviation rewards, and a probability-like row per deviation (a
/// transition row in discrete time, mu/||mu|| + delta in continuous time).
struct CertInputs {
  int states = 0;
  std::array<std::vector<int>, 2> action_counts;
  std::array<std::vector<int>, 2> eq_action;
  std::array<std::vector<Rational>, 2> eq_reward;                      // [player][s]
  std::array<std::vector<std::vector<Rational>>, 2> dev_reward;        // [player][s][a]
  std::array<std::vector<std::vector<std::vector<Rational>>>, 2> dev_row;  // [player][s][a][s']
  std::optional<std::vector<Rational>> sit_weights;  // common row; set for C/M
};

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational acc(0);
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// The (numerator, denominator) pieces of one deviation constraint.
/// sit_form: D = sum_s' w_s' re(s') - sum_s' row(s') re(s')   (C and M)
/// otherwise: D = r(s, dev) - sum_s' row(s') re(s')           (D and N)
inline std::pair<Rational, Rational> theta_pieces(const CertInputs& in, int player, int s, int a) {
  const Rational n = in.dev_reward[player][s][a] - in.eq_reward[player][s];
  const Rational pulled = dot(in.dev_row[player][s][a], in.eq_reward[player]);
  Rational d;
  if (in.sit_weights)
    d = dot(*in.sit_weights, in.eq_reward[player]) - pulled;
  else
    d = in.dev_reward[player][s][a] - pulled;
  return {n, d};
}

inline Beta0Result bounds_from(const CertInputs& in) {
  Beta0Result out;
  out.beta0 = Rational(0);
  for (int player = 0; player < 2; ++player)
    for (int s = 0; s < in.states; ++s)
      for (int a = 0; a < in.action_counts[player][s]; ++a) {
        if (a == in.eq_action[player][s]) continue;
        const auto [n, d] = theta_pieces(in, player, s, a);
        BoundEntry entry{player == 0 ? Player::One : Player::Two, s, a, n, d};
        const std::string where = "player " + std::to_string(player + 1) + ", state " +
                                  std::to_string(s) + ", action " + std::to_string(a);
        if (d.is_zero()) {
          if (n.sign() > 0)
            throw InvalidCertificate("discount-independent constraint with positive surplus at " +
                                     where);
        } else if (d.sign() < 0) {
          throw InvalidCertificate("negative constraint denominator at " + where +
                                   " (reward condition does not hold)");
        } else {
          const Rational b = n / d;
          if (b >= Rational(1))
            throw InvalidCertificate("constraint bound " + b.to_string() + " >= 1 at " + where +
                                     " (pair is not an equilibrium below the limit)");
          if (b > out.beta0) out.beta0 = b;
        }
        out.bounds.push_back(std::move(entry));
      }
  return out;
}

inline CertInputs cert_inputs_discrete(const DiscreteGame& game, const PureStrategy& f,
                                       const PureStrategy& g, bool sit_form,
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
      in.dev_row[0][s][a] = game.row(s, a, a2s);
    }
    in.dev_reward[1][s].resize(in.action_counts[1][s]);
    in.dev_row[1][s].resize(in.action_counts[1][s]);
    for (int a = 0; a < in.action_counts[1][s]; ++a) {
      in.dev_reward[1][s][a] = game.reward(Player::Two, s, a1s, a);
      in.dev_row[1][s][a] = game.row(s, a1s, a);
    }
  }
  if (sit_form) {
    if (!weights) throw std::logic_error("cert_inputs_discrete: SIT form needs weights");
    in.sit_weights = *weights;
  }
  return in;
}

/// Condition 3 of each family is exactly "every deviation denominator >= 0".
inline ConditionVerdict reward_condition_verdict(const CertInputs& in) {
  ConditionVerdict v;
  v.passed = true;
  for (int player = 0; player < 2 && v.passed; ++player)
    for (int s = 0; s < in.states && v.passed; ++s)
      for (int a = 0; a < in.action_counts[player][s] && v.passed; ++a) {
        if (a == in.eq_action[player][s]) continue;
        const auto [n, d] = theta_pieces(in, player, s, a);
        (void)n;
        if (d.sign() < 0) {
          v.passed = false;
          v.detail = "violated at player " + std::to_string(player + 1) + ", state " +
                     std::to_string(s) + ", action " + std::to_string(a) +
                     " (margin " + d.to_string() + ")";
        }
      }
  return v;
}

/// True when the transition law is visibly state-independent: all states
/// share the same action counts and every cell row coincides across states.
inline bool sit_game(const DiscreteGame& game) {
  for (int s = 1; s < game.states(); ++s)
    if (game.actions(Player::One, s) != game.actions(Player::One, 0) ||
        game.actions(Player::Two, s) != game.actions(Player::Two, 0))
      return false;
  for (int s = 1; s < game.states(); ++s)
    for (int a1 = 0; a1 < game.actions(Player::One, 0); ++a1)
      for (int a2 = 0; a2 < game.actions(Player::Two, 0); ++a2)
        if (game.row(s, a1, a2) != game.row(0, a1, a2)) return false;
  return true;
}

}  // namespace detail

/// Per-deviation bounds and threshold for the SIT condition family;
/// preconditions: the pair is a pure equilibrium at some reference discount
/// and the induced chain is SIT.
inline Beta0Result beta0_C(const DiscreteGame& game, const PureStrategy& f, const PureStrategy& g) {
  const DenseMatrix<Rational> p =
      induced_transition(game, f.to_mixed(game, Player::One), g.to_mixed(game, Player::Two));
  if (!is_sit(p)) throw InvalidCertificate("beta0_C: induced chain is not SIT");
  std::vector<Rational> weights(game.states());
  for (int s2 = 0; s2 < game.states(); ++s2) weights[s2] = p(0, s2);
  return detail::bounds_from(detail::cert_inputs_discrete(game, f, g, true, &weights));
}

/// Bounds and threshold for the identity-chain condition family.
inline Beta0Result beta0_D(const DiscreteGame& game, const PureStrategy& f, const PureStrategy& g) {
  const DenseMatrix<Rational> p =
      induced_transition(game, f.to_mixed(game, Player::One), g.to_mixed(game, Player::Two));
  if (!(p == DenseMatrix<Rational>::identity(game.states())))
    throw InvalidCertificate("beta0_D: induced chain is not the identity");
  return detail::bounds_from(detail::cert_inputs_discrete(game, f, g, false, nullptr));
}

namespace detail {

inline CertificationReport check_conditions_discrete(const DiscreteGame& game, const PureStrategy& f,
                                                     const PureStrategy& g, const Rational& beta_hat,
                                                     ConditionSet set) {
  if (beta_hat < Rational(0) || beta_hat >= Rational(1))
    throw std::invalid_argument("check_conditions: beta_hat must lie in [0,1)");
  CertificationReport report;
  report.set = set;
  report.reference_discount = beta_hat;

  const StationaryStrategy fm = f.to_mixed(game, Player::One);
  const StationaryStrategy gm = g.to_mixed(game, Player::Two);
  const NashReport<Rational> nash = verify_nash(game, fm, gm, beta_hat, Rational(0));
  report.nash_at_reference.passed = nash.is_nash;
  if (!nash.is_nash && nash.witness)
    report.nash_at_reference.detail =
        "deviation for player " + std::to_string(player_index(nash.witness->player) + 1) +
        " at state " + std::to_string(nash.witness->state) + ", action " +
        std::to_string(nash.witness->action);

  const DenseMatrix<Rational> p = induced_transition(game, fm, gm);
  report.chain_is_sit = is_sit(p);
  report.chain_is_identity = p == DenseMatrix<Rational>::identity(game.states());
  report.chain_condition.passed =
      set == ConditionSet::C ? report.chain_is_sit : report.chain_is_identity;
  if (!report.chain_condition.passed)
    report.chain_condition.detail =
        set == ConditionSet::C ? "induced chain rows differ" : "induced chain is not the identity";

  std::vector<Rational> weights(game.states());
  for (int s2 = 0; s2 < game.states(); ++s2) weights[s2] = p(0, s2);
  const CertInputs inputs =
      cert_inputs_discrete(game, f, g, set == ConditionSet::C, set == ConditionSet::C ? &weights : nullptr);
  report.reward_condition = reward_condition_verdict(inputs);

  if (set == ConditionSet::C && sit_game(game))
    report.remarks.push_back(
        "game has state-independent transitions: any pure equilibrium satisfies the first two "
        "conditions automatically");

  if (report.nash_at_reference.passed && report.chain_condition.passed &&
      report.reward_condition.passed) {
    Beta0Result b = bounds_from(inputs);
    report.bounds = std::move(b.bounds);
    report.beta0 = b.beta0;
    report.certified = true;
  }
  return report;
}

}  // namespace detail

/// C1 (pure equilibrium at beta_hat), C2 (SIT chain), C3 (reward dominance
/// along the SIT row); certifies a threshold beta0 when all three hold.
inline CertificationReport check_conditions_C(const DiscreteGame& game, const PureStrategy& f,
                                              const PureStrategy& g, const Rational& beta_hat) {
  return detail::check_conditions_discrete(game, f, g, beta_hat, ConditionSet::C);
}

/// D1 (pure equilibrium at beta_hat), D2 (identity chain), D3 (one-period
/// reward dominance); certifies a threshold beta0 when all three hold.
inline CertificationReport check_conditions_D(const DiscreteGame& game, const PureStrategy& f,
                                              const PureStrategy& g, const Rational& beta_hat) {
  return detail::check_conditions_discrete(game, f, g, beta_hat, ConditionSet::D);
}

enum class ScArStatus { Ok, NotScAr };

/// Constructive equilibrium for single-controller additive-reward games:
/// the non-controlling player plays the myopic argmax of his separable
/// reward part, the controller plays a Blackwell-optimal response.
struct ScArBneDiscrete {
  ScArStatus status = ScArStatus::NotScAr;
  std::string witness;  // structural reason when NotScAr
  std::optional<RectangleWitness> rectangle;
  PureStrategy f, g;
  Rational beta0;  // pair is an equilibrium for every beta in [beta0, 1)
};

inline ScArBneDiscrete sc_ar_bne_discrete(const DiscreteGame& game, size_t cap = 4096) {
  ScArBneDiscrete out;
  const Controller c = single_controller(game);
  if (c != Controller::Player2 && c != Controller::Both) {
    out.witness = "transitions depend on player 1's actions (controller: " + to_string(c) + ")";
    return out;
  }
  const AdditiveCheckResult add = check_additive_reward(game, Player::One);
  if (!add.feasible()) {
    out.witness = "player 1 rewards are not additive: " + add.witness->describe();
    out.rectangle = add.witness;
    return out;
  }
  out.f.action.resize(game.states(), 0);
  for (int s = 0; s < game.states(); ++s) {
    const auto& part = add.decomposition->part1[s];
    for (int a = 1; a < static_cast<int>(part.size()); ++a)
      if (part[a] > part[out.f.action[s]]) out.f.action[s] = a;
  }
  const BlackwellCertificate cert =
      blackwell_optimal(best_response_mdp(game, out.f.to_mixed(game, Player::One), Player::Two), cap);
  out.g = cert.policy;
  out.beta0 = cert.beta0;
  out.status = ScArStatus::Ok;
  return out;
}

}  // namespace sgnash
