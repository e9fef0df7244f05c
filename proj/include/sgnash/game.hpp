#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgnash/matrix.hpp"
#include "sgnash/rational.hpp"

namespace sgnash {

enum class Player { One, Two };

inline Player opponent_of(Player p) { return p == Player::One ? Player::Two : Player::One; }
inline int player_index(Player p) { return p == Player::One ? 0 : 1; }

/// One invariant violation, located by (state, action, action) where that
/// makes sense. Violations are data, not exceptions: validate() collects all
/// of them.
struct Violation {
  std::string message;
  int state = -1;
  int a1 = -1;
  int a2 = -1;
};

enum class TimeModel { Discrete, Continuous };

/// Finite two-player stochastic game. Action sets are jagged (per state),
/// all quantities exact rationals. The table entry per (s, a1, a2) is a
/// transition-probability row in discrete time and a transition-rate row in
/// continuous time.
template <TimeModel Model>
class BasicGame {
 public:
  BasicGame(int states, std::vector<std::pair<int, int>> action_counts)
      : states_(states), actions_(std::move(action_counts)) {
    if (states <= 0) throw std::invalid_argument("BasicGame: need at least one state");
    if (static_cast<int>(actions_.size()) != states)
      throw std::invalid_argument("BasicGame: one action-count pair per state");
    cells_.resize(states);
    for (int s = 0; s < states; ++s) {
      const auto [n1, n2] = actions_[s];
      if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("BasicGame: empty action set");
      cells_[s].assign(static_cast<size_t>(n1) * n2,
                       Cell{Rational(0), Rational(0), std::vector<Rational>(states, Rational(0))});
    }
  }

  static constexpr TimeModel time_model = Model;

  int states() const { return states_; }
  int actions(Player p, int s) const {
    return p == Player::One ? actions_[s].first : actions_[s].second;
  }

  const Rational& reward(Player p, int s, int a1, int a2) const {
    return p == Player::One ? cell(s, a1, a2).r1 : cell(s, a1, a2).r2;
  }
  void set_reward(Player p, int s, int a1, int a2, const Rational& value) {
    (p == Player::One ? cell(s, a1, a2).r1 : cell(s, a1, a2).r2) = value;
  }

  /// Row of transition probabilities (discrete) or rates (continuous) out of
  /// state s under the action pair.
  const std::vector<Rational>& row(int s, int a1, int a2) const { return cell(s, a1, a2).next; }
  const Rational& entry(int s, int a1, int a2, int s2) const { return cell(s, a1, a2).next.at(s2); }
  void set_entry(int s, int a1, int a2, int s2, const Rational& value) {
    cell(s, a1, a2).next.at(s2) = value;
  }

  /// Builds a game from nested tables indexed rewards[s][a1][a2] and
  /// table[s][a1][a2][s'].
  static BasicGame from_tables(const std::vector<std::vector<std::vector<Rational>>>& rewards1,
                               const std::vector<std::vector<std::vector<Rational>>>& rewards2,
                               const std::vector<std::vector<std::vector<std::vector<Rational>>>>& table) {
    const int n = static_cast<int>(rewards1.size());
    std::vector<std::pair<int, int>> counts(n);
    for (int s = 0; s < n; ++s) {
      counts[s] = {static_cast<int>(rewards1[s].size()),
                   rewards1[s].empty() ? 0 : static_cast<int>(rewards1[s][0].size())};
    }
    BasicGame g(n, counts);
    for (int s = 0; s < n; ++s)
      for (int a1 = 0; a1 < counts[s].first; ++a1)
        for (int a2 = 0; a2 < counts[s].second; ++a2) {
          g.set_reward(Player::One, s, a1, a2, rewards1.at(s).at(a1).at(a2));
          g.set_reward(Player::Two, s, a1, a2, rewards2.at(s).at(a1).at(a2));
          for (int s2 = 0; s2 < n; ++s2) g.set_entry(s, a1, a2, s2, table.at(s).at(a1).at(a2).at(s2));
        }
    return g;
  }

  std::vector<Violation> validate() const {
    std::vector<Violation> out;
    for (int s = 0; s < states_; ++s)
      for (int a1 = 0; a1 < actions_[s].first; ++a1)
        for (int a2 = 0; a2 < actions_[s].second; ++a2) {
          const auto& next = row(s, a1, a2);
          if constexpr (Model == TimeModel::Discrete) {
            Rational sum(0);
            for (int s2 = 0; s2 < states_; ++s2) {
              if (next[s2].sign() < 0)
                out.push_back({"negative transition probability " + next[s2].to_string(), s, a1, a2});
              sum += next[s2];
            }
            if (sum != Rational(1))
              out.push_back({"row sum " + sum.to_string() + " != 1", s, a1, a2});
          } else {
            Rational offdiag(0);
            for (int s2 = 0; s2 < states_; ++s2) {
              if (s2 == s) continue;
              if (next[s2].sign() < 0)
                out.push_back({"negative off-diagonal rate " + next[s2].to_string(), s, a1, a2});
              offdiag += next[s2];
            }
            if (next[s] != -offdiag)
              out.push_back({"diagonal rate " + next[s].to_string() + " != -(off-diagonal sum " +
                                 offdiag.to_string() + ")",
                             s, a1, a2});
          }
        }
    return out;
  }

 private:
  struct Cell {
    Rational r1, r2;
    std::vector<Rational> next;
  };

  Cell& cell(int s, int a1, int a2) {
    return cells_.at(s).at(static_cast<size_t>(a1) * actions_[s].second + a2);
  }
  const Cell& cell(int s, int a1, int a2) const {
    return cells_.at(s).at(static_cast<size_t>(a1) * actions_[s].second + a2);
  }

  int states_;
  std::vector<std::pair<int, int>> actions_;
  std::vector<std::vector<Cell>> cells_;
};

using DiscreteGame = BasicGame<TimeModel::Discrete>;
using ContinuousGame = BasicGame<TimeModel::Continuous>;

/// Per-state probability rows over the owner's actions.
class StationaryStrategy {
 public:
  StationaryStrategy() = default;
  explicit StationaryStrategy(std::vector<std::vector<Rational>> rows) : rows_(std::move(rows)) {}

  int states() const { return static_cast<int>(rows_.size()); }
  const std::vector<Rational>& row(int s) const { return rows_.at(s); }
  const Rational& probability(int s, int a) const { return rows_.at(s).at(a); }

  friend bool operator==(const StationaryStrategy& a, const StationaryStrategy& b) {
    return a.rows_ == b.rows_;
  }

  template <TimeModel M>
  std::vector<Violation> validate_for(const BasicGame<M>& game, Player p) const {
    std::vector<Violation> out;
    if (states() != game.states()) {
      out.push_back({"strategy has " + std::to_string(states()) + " states, game has " +
                     std::to_string(game.states())});
      return out;
    }
    for (int s = 0; s < states(); ++s) {
      if (static_cast<int>(rows_[s].size()) != game.actions(p, s)) {
        out.push_back({"strategy row has wrong action count", s});
        continue;
      }
      Rational sum(0);
      for (const auto& w : rows_[s]) {
        if (w.sign() < 0) out.push_back({"negative strategy weight " + w.to_string(), s});
        sum += w;
      }
      if (sum != Rational(1)) out.push_back({"strategy row sum " + sum.to_string() + " != 1", s});
    }
    return out;
  }

 private:
  std::vector<std::vector<Rational>> rows_;
};

/// One action index per state.
struct PureStrategy {
  std::vector<int> action;

  int at(int s) const { return action.at(s); }

  friend bool operator==(const PureStrategy& a, const PureStrategy& b) { return a.action == b.action; }
  friend bool operator<(const PureStrategy& a, const PureStrategy& b) { return a.action < b.action; }

  template <TimeModel M>
  StationaryStrategy to_mixed(const BasicGame<M>& game, Player p) const {
    std::vector<std::vector<Rational>> rows(game.states());
    for (int s = 0; s < game.states(); ++s) {
      rows[s].assign(game.actions(p, s), Rational(0));
      rows[s].at(action.at(s)) = Rational(1);
    }
    return StationaryStrategy(std::move(rows));
  }
};

namespace detail {

template <TimeModel M>
void require_valid_pair(const BasicGame<M>& game, const StationaryStrategy& f,
                        const StationaryStrategy& g) {
  if (!f.validate_for(game, Player::One).empty() || !g.validate_for(game, Player::Two).empty())
    throw std::invalid_argument("strategy does not match the game's shape");
}

}  // namespace detail

/// P(f,g) or Q(f,g): the bilinear mix of the per-cell rows.
template <TimeModel M>
DenseMatrix<Rational> induced_row_matrix(const BasicGame<M>& game, const StationaryStrategy& f,
                                         const StationaryStrategy& g) {
  detail::require_valid_pair(game, f, g);
  const int n = game.states();
  DenseMatrix<Rational> m(n, n);
  for (int s = 0; s < n; ++s)
    for (int a1 = 0; a1 < game.actions(Player::One, s); ++a1) {
      if (f.probability(s, a1).is_zero()) continue;
      for (int a2 = 0; a2 < game.actions(Player::Two, s); ++a2) {
        const Rational w = f.probability(s, a1) * g.probability(s, a2);
        if (w.is_zero()) continue;
        for (int s2 = 0; s2 < n; ++s2) m(s, s2) += w * game.entry(s, a1, a2, s2);
      }
    }
  return m;
}

inline DenseMatrix<Rational> induced_transition(const DiscreteGame& game, const StationaryStrategy& f,
                                                const StationaryStrategy& g) {
  return induced_row_matrix(game, f, g);
}

inline DenseMatrix<Rational> induced_rate_matrix(const ContinuousGame& game,
                                                 const StationaryStrategy& f,
                                                 const StationaryStrategy& g) {
  return induced_row_matrix(game, f, g);
}

/// r^i(f,g): per-state expected one-period reward of `p`.
template <TimeModel M>
std::vector<Rational> induced_rewards(const BasicGame<M>& game, const StationaryStrategy& f,
                                      const StationaryStrategy& g, Player p) {
  detail::require_valid_pair(game, f, g);
  std::vector<Rational> r(game.states(), Rational(0));
  for (int s = 0; s < game.states(); ++s)
    for (int a1 = 0; a1 < game.actions(Player::One, s); ++a1)
      for (int a2 = 0; a2 < game.actions(Player::Two, s); ++a2)
        r[s] += f.probability(s, a1) * game.reward(p, s, a1, a2) * g.probability(s, a2);
  return r;
}

enum class Controller { Player1, Player2, Neither, Both };

/// Which player's actions the transitions (or rates) actually depend on.
/// "Both" means they depend on neither, and is kept distinct so degenerate
/// games do not silently pick a controller.
template <TimeModel M>
Controller single_controller(const BasicGame<M>& game) {
  bool independent_of_1 = true;  // then player 2 controls
  bool independent_of_2 = true;  // then player 1 controls
  for (int s = 0; s < game.states(); ++s) {
    const int n1 = game.actions(Player::One, s);
    const int n2 = game.actions(Player::Two, s);
    for (int a1 = 1; a1 < n1 && independent_of_1; ++a1)
      for (int a2 = 0; a2 < n2 && independent_of_1; ++a2)
        if (game.row(s, a1, a2) != game.row(s, 0, a2)) independent_of_1 = false;
    for (int a2 = 1; a2 < n2 && independent_of_2; ++a2)
      for (int a1 = 0; a1 < n1 && independent_of_2; ++a1)
        if (game.row(s, a1, a2) != game.row(s, a1, 0)) independent_of_2 = false;
  }
  if (independent_of_1 && independent_of_2) return Controller::Both;
  if (independent_of_1) return Controller::Player2;
  if (independent_of_2) return Controller::Player1;
  return Controller::Neither;
}

inline std::string to_string(Controller c) {
  switch (c) {
    case Controller::Player1: return "player1";
    case Controller::Player2: return "player2";
    case Controller::Neither: return "neither";
    case Controller::Both: return "both";
  }
  return "?";
}

/// r(s,a1,a2) = part1(s,a1) + part2(s,a2), gauge part2(s, action 0) = 0.
struct AdditiveDecomposition {
  std::vector<std::vector<Rational>> part1;  // per (s, a1)
  std::vector<std::vector<Rational>> part2;  // per (s, a2)
};

/// A violated additivity rectangle: r(a1,a2) + r(b1,b2) != r(a1,b2) + r(b1,a2).
struct RectangleWitness {
  int state;
  int a1, b1;
  int a2, b2;
  Rational r_a1a2, r_b1b2, r_a1b2, r_b1a2;

  std::string describe() const {
    return "state " + std::to_string(state) + ": " + r_a1a2.to_string() + "+" + r_b1b2.to_string() +
           " != " + r_a1b2.to_string() + "+" + r_b1a2.to_string() + " (actions " + std::to_string(a1) +
           "," + std::to_string(b1) + " x " + std::to_string(a2) + "," + std::to_string(b2) + ")";
  }
};

struct AdditiveCheckResult {
  std::optional<AdditiveDecomposition> decomposition;
  std::optional<RectangleWitness> witness;
  bool feasible() const { return decomposition.has_value(); }
};

/// Decides whether player p's rewards split as part1(s,a1) + part2(s,a2), by
/// the rectangle test over all action pairs per state.
template <TimeModel M>
AdditiveCheckResult check_additive_reward(const BasicGame<M>& game, Player p) {
  AdditiveCheckResult result;
  for (int s = 0; s < game.states(); ++s) {
    const int n1 = game.actions(Player::One, s);
    const int n2 = game.actions(Player::Two, s);
    for (int a1 = 0; a1 < n1; ++a1)
      for (int b1 = a1 + 1; b1 < n1; ++b1)
        for (int a2 = 0; a2 < n2; ++a2)
          for (int b2 = a2 + 1; b2 < n2; ++b2) {
            const Rational& raa = game.reward(p, s, a1, a2);
            const Rational& rbb = game.reward(p, s, b1, b2);
            const Rational& rab = game.reward(p, s, a1, b2);
            const Rational& rba = game.reward(p, s, b1, a2);
            if (raa + rbb != rab + rba) {
              result.witness = RectangleWitness{s, a1, b1, a2, b2, raa, rbb, rab, rba};
              return result;
            }
          }
  }
  AdditiveDecomposition d;
  d.part1.resize(game.states());
  d.part2.resize(game.states());
  for (int s = 0; s < game.states(); ++s) {
    const int n1 = game.actions(Player::One, s);
    const int n2 = game.actions(Player::Two, s);
    d.part1[s].resize(n1);
    d.part2[s].resize(n2);
    for (int a1 = 0; a1 < n1; ++a1) d.part1[s][a1] = game.reward(p, s, a1, 0);
    for (int a2 = 0; a2 < n2; ++a2) d.part2[s][a2] = game.reward(p, s, 0, a2) - game.reward(p, s, 0, 0);
  }
  result.decomposition = std::move(d);
  return result;
}

/// State-independent transitions: all rows identical.
template <Scalar T>
bool is_sit(const DenseMatrix<T>& p) {
  for (int r = 1; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c)
      if (!scalar_traits<T>::is_zero(p(r, c) - p(0, c))) return false;
  return true;
}

/// Actions played with positive probability at state s.
inline std::vector<int> strategy_support(const StationaryStrategy& strategy, int s) {
  std::vector<int> support;
  const auto& row = strategy.row(s);
  for (int a = 0; a < static_cast<int>(row.size()); ++a)
    if (row[a].sign() > 0) support.push_back(a);
  return support;
}

}  // namespace sgnash
