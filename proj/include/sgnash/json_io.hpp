#pragma once

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sgnash/game.hpp"
#include "sgnash/rational.hpp"

namespace sgnash {

using GameVariant = std::variant<DiscreteGame, ContinuousGame>;

/// Accepts integers, finite-decimal JSON numbers, and the string forms
/// "num/den" / "4.4" / "7". Doubles are converted through their shortest
/// round-trip decimal rendering, so a literal like 4.4 means 22/5.
inline Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<int64_t>()));
  if (j.is_number_unsigned()) return Rational(static_cast<long>(j.get<uint64_t>()));
  if (j.is_number_float()) return Rational::parse(j.dump());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw std::invalid_argument("expected a number or a rational string, got " + j.dump());
}

/// Exact string form used inside game files; round-trips losslessly.
inline nlohmann::json rational_to_json(const Rational& r) {
  if (r.is_integer() && abs(r) <= Rational(1000000000L)) {
    return nlohmann::json(static_cast<int64_t>(r.numerator().get_si()));
  }
  return nlohmann::json(r.to_string());
}

/// Report rendering: exact value plus a decimal approximation.
inline nlohmann::json value_to_json(const Rational& r) {
  return nlohmann::json{{"exact", r.to_string()}, {"approx", r.to_double()}};
}

namespace detail {

template <TimeModel M>
BasicGame<M> game_from_json_impl(const nlohmann::json& j) {
  const int states = j.at("states").get<int>();
  const auto& actions = j.at("actions");
  if (!actions.is_array() || static_cast<int>(actions.size()) != states)
    throw std::invalid_argument("'actions' must list one [a1,a2] pair per state");
  std::vector<std::pair<int, int>> counts(states);
  for (int s = 0; s < states; ++s)
    counts[s] = {actions[s].at(0).get<int>(), actions[s].at(1).get<int>()};
  BasicGame<M> game(states, counts);

  const char* table_key = M == TimeModel::Discrete ? "transitions" : "rates";
  const auto& rewards = j.at("rewards");
  const auto& table = j.at(table_key);
  for (int s = 0; s < states; ++s)
    for (int a1 = 0; a1 < counts[s].first; ++a1)
      for (int a2 = 0; a2 < counts[s].second; ++a2) {
        game.set_reward(Player::One, s, a1, a2, rational_from_json(rewards.at("p1").at(s).at(a1).at(a2)));
        game.set_reward(Player::Two, s, a1, a2, rational_from_json(rewards.at("p2").at(s).at(a1).at(a2)));
        const auto& row = table.at(s).at(a1).at(a2);
        if (static_cast<int>(row.size()) != states)
          throw std::invalid_argument(std::string(table_key) + " row must have one entry per state");
        for (int s2 = 0; s2 < states; ++s2)
          game.set_entry(s, a1, a2, s2, rational_from_json(row.at(s2)));
      }

  const std::vector<Violation> violations = game.validate();
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "game file violates model invariants:";
    for (const auto& v : violations) {
      msg << " [" << v.message;
      if (v.state >= 0) msg << " at state " << v.state;
      if (v.a1 >= 0) msg << ", actions (" << v.a1 << "," << v.a2 << ")";
      msg << "]";
    }
    throw std::invalid_argument(msg.str());
  }
  return game;
}

}  // namespace detail

inline GameVariant game_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "discrete") return detail::game_from_json_impl<TimeModel::Discrete>(j);
  if (kind == "continuous") return detail::game_from_json_impl<TimeModel::Continuous>(j);
  throw std::invalid_argument("'kind' must be \"discrete\" or \"continuous\"");
}

template <TimeModel M>
nlohmann::json game_to_json(const BasicGame<M>& game) {
  nlohmann::json j;
  j["kind"] = M == TimeModel::Discrete ? "discrete" : "continuous";
  j["states"] = game.states();
  nlohmann::json actions = nlohmann::json::array();
  nlohmann::json r1 = nlohmann::json::array(), r2 = nlohmann::json::array();
  nlohmann::json table = nlohmann::json::array();
  for (int s = 0; s < game.states(); ++s) {
    const int n1 = game.actions(Player::One, s);
    const int n2 = game.actions(Player::Two, s);
    actions.push_back({n1, n2});
    nlohmann::json r1s = nlohmann::json::array(), r2s = nlohmann::json::array();
    nlohmann::json ts = nlohmann::json::array();
    for (int a1 = 0; a1 < n1; ++a1) {
      nlohmann::json r1row = nlohmann::json::array(), r2row = nlohmann::json::array();
      nlohmann::json trow = nlohmann::json::array();
      for (int a2 = 0; a2 < n2; ++a2) {
        r1row.push_back(rational_to_json(game.reward(Player::One, s, a1, a2)));
        r2row.push_back(rational_to_json(game.reward(Player::Two, s, a1, a2)));
        nlohmann::json dest = nlohmann::json::array();
        for (int s2 = 0; s2 < game.states(); ++s2)
          dest.push_back(rational_to_json(game.entry(s, a1, a2, s2)));
        trow.push_back(std::move(dest));
      }
      r1s.push_back(std::move(r1row));
      r2s.push_back(std::move(r2row));
      ts.push_back(std::move(trow));
    }
    r1.push_back(std::move(r1s));
    r2.push_back(std::move(r2s));
    table.push_back(std::move(ts));
  }
  j["actions"] = std::move(actions);
  j["rewards"] = {{"p1", std::move(r1)}, {"p2", std::move(r2)}};
  j[M == TimeModel::Discrete ? "transitions" : "rates"] = std::move(table);
  return j;
}

inline nlohmann::json game_to_json(const GameVariant& game) {
  return std::visit([](const auto& g) { return game_to_json(g); }, game);
}

/// Strategy argument syntax: per-state rows separated by ';', entries by ','.
/// Example: "2/3,1/3;1".
inline StationaryStrategy parse_strategy(const std::string& text) {
  std::vector<std::vector<Rational>> rows;
  std::stringstream states(text);
  std::string state_part;
  while (std::getline(states, state_part, ';')) {
    std::vector<Rational> row;
    std::stringstream entries(state_part);
    std::string entry;
    while (std::getline(entries, entry, ',')) row.push_back(Rational::parse(entry));
    if (row.empty()) throw std::invalid_argument("strategy row is empty in '" + text + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("strategy string is empty");
  return StationaryStrategy(std::move(rows));
}

inline std::string strategy_to_string(const StationaryStrategy& s) {
  std::string out;
  for (int i = 0; i < s.states(); ++i) {
    if (i) out += ";";
    const auto& row = s.row(i);
    for (size_t a = 0; a < row.size(); ++a) {
      if (a) out += ",";
      out += row[a].to_string();
    }
  }
  return out;
}

inline nlohmann::json strategy_to_json(const StationaryStrategy& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < s.states(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& w : s.row(i)) row.push_back(value_to_json(w));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Requires every row to put probability one on a single action.
inline PureStrategy to_pure(const StationaryStrategy& s) {
  PureStrategy out;
  out.action.resize(s.states());
  for (int i = 0; i < s.states(); ++i) {
    const auto& row = s.row(i);
    int chosen = -1;
    for (int a = 0; a < static_cast<int>(row.size()); ++a) {
      if (row[a] == Rational(1)) chosen = a;
      else if (!row[a].is_zero())
        throw std::invalid_argument("strategy is not pure at state " + std::to_string(i));
    }
    if (chosen < 0) throw std::invalid_argument("strategy is not pure at state " + std::to_string(i));
    out.action[i] = chosen;
  }
  return out;
}

}  // namespace sgnash
