#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "test_util.hpp"

using namespace sgnash;
using testutil::load_discrete;
using testutil::pure;
using testutil::rat;
using testutil::rows;

namespace {

StationaryStrategy example1_f(const Rational& p) { return rows({{p, rat(1) - p}, {rat(1)}}); }
StationaryStrategy example1_g(const Rational& q) { return rows({{q, rat(1) - q}, {rat(1)}}); }

/// Exhaustive one-state-deviation oracle: a pure pair is an equilibrium iff
/// no single-state switch of either player improves that player's value
/// anywhere. Uses only direct resolvent solves.
bool oracle_is_pure_nash(const DiscreteGame& game, const PureStrategy& f, const PureStrategy& g,
                         const Rational& beta) {
  const auto v1 = testutil::pair_value(game, f, g, Player::One, beta);
  const auto v2 = testutil::pair_value(game, f, g, Player::Two, beta);
  for (int s = 0; s < game.states(); ++s) {
    for (int a = 0; a < game.actions(Player::One, s); ++a) {
      if (a == f.at(s)) continue;
      PureStrategy dev = f;
      dev.action[s] = a;
      const auto vd = testutil::pair_value(game, dev, g, Player::One, beta);
      for (int t = 0; t < game.states(); ++t)
        if (vd[t] > v1[t]) return false;
    }
    for (int a = 0; a < game.actions(Player::Two, s); ++a) {
      if (a == g.at(s)) continue;
      PureStrategy dev = g;
      dev.action[s] = a;
      const auto vd = testutil::pair_value(game, f, dev, Player::Two, beta);
      for (int t = 0; t < game.states(); ++t)
        if (vd[t] > v2[t]) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("best-response process of the single-controller example") {
  const auto game = load_discrete("ex1-discrete.json");
  for (const Rational& p : {rat(0), rat(2, 5), rat(1)}) {
    const auto m = best_response_mdp(game, example1_f(p), Player::Two);
    CHECK(m.reward(0, 0) == rat(4) + rat(5) * p);
    CHECK(m.reward(0, 1) == rat(5) - rat(2) * p);
    CHECK(m.reward(1, 0) == rat(7));
    CHECK(m.transition(0, 0, 0) == rat(1));
    CHECK(m.transition(0, 1, 1) == rat(1));
    CHECK(m.transition(1, 0, 0) == rat(1));
  }
  for (const Rational& q : {rat(0), rat(1, 2), rat(1)}) {
    const auto m = best_response_mdp(game, example1_g(q), Player::One);
    CHECK(m.reward(0, 0) == rat(6) - rat(2) * q);
    CHECK(m.reward(0, 1) == rat(4) + q);
  }
  // pure opponent slices the table
  const auto slice = best_response_mdp(game, pure({1, 0}).to_mixed(game, Player::Two), Player::One);
  CHECK(slice.reward(0, 0) == rat(6));
  CHECK(slice.reward(0, 1) == rat(4));
}

TEST_CASE("verify_nash accepts the second example's equilibrium at beta 3/5") {
  const auto game = load_discrete("ex-sec-set.json");
  const auto report = verify_nash(game, pure({0, 0}).to_mixed(game, Player::One),
                                  pure({0, 0}).to_mixed(game, Player::Two), rat(3, 5), rat(0));
  CHECK(report.is_nash);
  for (int pi = 0; pi < 2; ++pi)
    for (const auto& a : report.players[pi]) {
      CHECK(a.deviation_gap == rat(0));
      CHECK(a.support_gap == rat(0));
    }
}

TEST_CASE("verify_nash rejects the pure first-action pair of the single-controller example") {
  const auto game = load_discrete("ex1-discrete.json");
  const auto report = verify_nash(game, example1_f(rat(1)), example1_g(rat(1)), rat(1, 2), rat(0));
  CHECK_FALSE(report.is_nash);
  REQUIRE(report.witness.has_value());
  // player 2's response to p=1 is its first action, so the deviation is player 1's
  CHECK(report.witness->player == Player::One);
  CHECK(report.witness->state == 0);
  CHECK(report.players[0][0].deviation_gap > rat(0));
}

TEST_CASE("verify_nash accepts the parametric mixed equilibrium with zero support gaps") {
  const auto game = load_discrete("ex1-discrete.json");
  const Rational beta(1, 2);
  const Rational p = (rat(3) * beta + rat(1)) / (rat(7) + rat(5) * beta);
  const auto report =
      verify_nash(game, example1_f(p), example1_g(rat(2, 3)), beta, rat(0));
  CHECK(report.is_nash);
  for (int pi = 0; pi < 2; ++pi)
    for (const auto& a : report.players[pi]) CHECK(a.support_gap == rat(0));
}

TEST_CASE("pure equilibrium enumeration on the bundled games") {
  const auto sec = load_discrete("ex-sec-set.json");
  const auto found = enumerate_pure_nash(sec, rat(3, 5));
  bool has_equilibrium_pair = false;
  for (const auto& [f, g] : found)
    if (f.action == std::vector<int>{0, 0} && g.action == std::vector<int>{0, 0})
      has_equilibrium_pair = true;
  CHECK(has_equilibrium_pair);

  const auto ex1 = load_discrete("ex1-discrete.json");
  CHECK(enumerate_pure_nash(ex1, rat(1, 2)).empty());
}

TEST_CASE("dominant actions are the unique pure equilibrium in a one-state game") {
  DiscreteGame game(1, {{2, 2}});
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      game.set_reward(Player::One, 0, a1, a2, rat(a1 == 0 ? 2 : 1));
      game.set_reward(Player::Two, 0, a1, a2, rat(a2 == 1 ? 2 : 1));
      game.set_entry(0, a1, a2, 0, rat(1));
    }
  const auto found = enumerate_pure_nash(game, rat(1, 2));
  REQUIRE(found.size() == 1);
  CHECK(found[0].first.action == std::vector<int>{0});
  CHECK(found[0].second.action == std::vector<int>{1});
}

TEST_CASE("enumeration cap is enforced") {
  DiscreteGame game(4, {{4, 4}, {4, 4}, {4, 4}, {4, 4}});
  for (int s = 0; s < 4; ++s)
    for (int a1 = 0; a1 < 4; ++a1)
      for (int a2 = 0; a2 < 4; ++a2) game.set_entry(s, a1, a2, s, rat(1));
  CHECK_THROWS_AS(enumerate_pure_nash(game, rat(1, 2), 1000), EnumerationCapExceeded);
}

TEST_CASE("feasibility program: equilibrium point has zero objective and feasible constraints") {
  const auto game = load_discrete("ex-sec-set.json");
  const Rational beta(3, 5);
  const auto f = pure({0, 0}).to_mixed(game, Player::One);
  const auto g = pure({0, 0}).to_mixed(game, Player::Two);
  const auto v1 = testutil::pair_value(game, f, g, Player::One, beta);
  const auto v2 = testutil::pair_value(game, f, g, Player::Two, beta);
  const auto res = op_evaluate(game, beta, v1, v2, f, g);
  CHECK(res.objective == rat(0));
  CHECK(res.feasible(rat(0)));
}

TEST_CASE("feasibility program: objective telescopes for any pair at its own values") {
  testutil::Rng rng(808);
  for (int iter = 0; iter < 15; ++iter) {
    const auto game = testutil::random_discrete_game(rng, 3, 3);
    std::vector<std::vector<Rational>> fr(game.states()), gr(game.states());
    for (int s = 0; s < game.states(); ++s) {
      fr[s] = rng.stochastic_row(game.actions(Player::One, s));
      gr[s] = rng.stochastic_row(game.actions(Player::Two, s));
    }
    const auto f = rows(fr), g = rows(gr);
    const Rational beta(rng.uniform(0, 9), 10);
    const auto v1 = testutil::pair_value(game, f, g, Player::One, beta);
    const auto v2 = testutil::pair_value(game, f, g, Player::Two, beta);
    CHECK(op_evaluate(game, beta, v1, v2, f, g).objective == rat(0));
  }
}

TEST_CASE("feasibility program: non-equilibrium pure pair violates a best-reply constraint") {
  const auto game = load_discrete("ex1-discrete.json");
  const Rational beta(1, 2);
  const auto f = pure({0, 0}).to_mixed(game, Player::One);
  const auto g = pure({0, 0}).to_mixed(game, Player::Two);
  const auto v1 = testutil::pair_value(game, f, g, Player::One, beta);
  const auto v2 = testutil::pair_value(game, f, g, Player::Two, beta);
  const auto res = op_evaluate(game, beta, v1, v2, f, g);
  CHECK(res.objective == rat(0));
  CHECK_FALSE(res.feasible(rat(0)));
  Rational worst(0);
  for (const auto& row : res.best_reply_1)
    for (const auto& x : row)
      if (x > worst) worst = x;
  CHECK(worst > rat(0));
}

TEST_CASE("limit-average verification of the single-controller example") {
  const auto game = load_discrete("ex1-discrete.json");
  CHECK(verify_average_nash(game, example1_f(rat(1, 3)), example1_g(rat(2, 3))).is_nash);

  // player 2 mixing is not an average best response to p = 1
  const auto bad = verify_average_nash(game, example1_f(rat(1)), example1_g(rat(2, 3)));
  CHECK_FALSE(bad.is_nash);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->player == Player::Two);

  // identical rewards make any pair optimal
  DiscreteGame flat(2, {{2, 2}, {1, 1}});
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      flat.set_reward(Player::One, 0, a1, a2, rat(3));
      flat.set_reward(Player::Two, 0, a1, a2, rat(4));
      flat.set_entry(0, a1, a2, 1, rat(1));
    }
  flat.set_reward(Player::One, 1, 0, 0, rat(3));
  flat.set_reward(Player::Two, 1, 0, 0, rat(4));
  flat.set_entry(1, 0, 0, 0, rat(1));
  CHECK(verify_average_nash(flat, example1_f(rat(1, 2)), example1_g(rat(1, 2))).is_nash);
}

TEST_CASE("closed-form mixed equilibrium of the single-controller example") {
  const auto game = load_discrete("ex1-discrete.json");
  for (const Rational& beta : {rat(0), rat(1, 4), rat(1, 2), rat(3, 4), rat(9, 10)}) {
    const auto res = mixed_ne_single_controller_2x2(game, beta);
    REQUIRE(res.status == MixedNeStatus::Ok);
    CHECK(res.p == (rat(3) * beta + rat(1)) / (rat(7) + rat(5) * beta));
    CHECK(res.q == rat(2, 3));
    CHECK(res.mixing_state == 0);
  }
  CHECK(mixed_ne_single_controller_2x2(game, rat(0)).p == rat(1, 7));
}

TEST_CASE("mixed solver verifies its output across sampled discount factors") {
  const auto game = load_discrete("ex1-discrete.json");
  for (int k = 1; k <= 20; ++k) {
    const Rational beta(k, 21);
    const auto res = mixed_ne_single_controller_2x2(game, beta);
    REQUIRE(res.status == MixedNeStatus::Ok);
    const auto report = verify_nash(game, res.f, res.g, beta, rat(0));
    CHECK(report.is_nash);
    for (int pi = 0; pi < 2; ++pi)
      for (const auto& a : report.players[pi]) CHECK(a.support_gap == rat(0));
  }
}

TEST_CASE("mixed solver reports degenerate and non-single-controller inputs") {
  // all player-1 rewards equal: the indifference equation degenerates
  DiscreteGame flat(1, {{2, 2}});
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      flat.set_reward(Player::One, 0, a1, a2, rat(1));
      flat.set_reward(Player::Two, 0, a1, a2, rat(a2));
      flat.set_entry(0, a1, a2, 0, rat(1));
    }
  CHECK(mixed_ne_single_controller_2x2(flat, rat(1, 2)).status ==
        MixedNeStatus::NoInteriorSolution);

  const auto sec = load_discrete("ex-sec-set.json");
  CHECK(mixed_ne_single_controller_2x2(sec, rat(1, 2)).status ==
        MixedNeStatus::NotSingleController);

  DiscreteGame wrong_shape(1, {{3, 2}});
  for (int a1 = 0; a1 < 3; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) wrong_shape.set_entry(0, a1, a2, 0, rat(1));
  CHECK_THROWS_AS(mixed_ne_single_controller_2x2(wrong_shape, rat(1, 2)), std::invalid_argument);
}

TEST_CASE("pure-equilibrium enumeration agrees with the one-deviation oracle") {
  testutil::Rng rng(160);
  for (int iter = 0; iter < 30; ++iter) {
    const auto game = testutil::random_discrete_game(rng, 3, 3);
    const Rational beta(rng.uniform(1, 9), 10);
    const auto found = enumerate_pure_nash(game, beta);
    std::set<std::pair<std::vector<int>, std::vector<int>>> via_library;
    for (const auto& [f, g] : found) via_library.insert({f.action, g.action});

    for (const auto& f : detail::enumerate_pure(game, Player::One))
      for (const auto& g : detail::enumerate_pure(game, Player::Two)) {
        const bool oracle = oracle_is_pure_nash(game, f, g, beta);
        const bool library = via_library.count({f.action, g.action}) > 0;
        CHECK(oracle == library);
      }
  }
}

TEST_CASE("best-response values shift by c/(1-beta) under constant reward shifts") {
  testutil::Rng rng(271);
  for (int iter = 0; iter < 10; ++iter) {
    auto game = testutil::random_discrete_game(rng, 3, 2);
    std::vector<std::vector<Rational>> gr(game.states());
    for (int s = 0; s < game.states(); ++s)
      gr[s] = rng.stochastic_row(game.actions(Player::Two, s));
    const auto g = rows(gr);
    const Rational beta(rng.uniform(1, 9), 10);
    const Rational shift = rng.signed_rational(5, 2);

    const auto before = optimal_policy(best_response_mdp(game, g, Player::One), beta);
    auto shifted = game;
    for (int s = 0; s < game.states(); ++s)
      for (int a1 = 0; a1 < game.actions(Player::One, s); ++a1)
        for (int a2 = 0; a2 < game.actions(Player::Two, s); ++a2)
          shifted.set_reward(Player::One, s, a1, a2,
                             game.reward(Player::One, s, a1, a2) + shift);
    const auto after = optimal_policy(best_response_mdp(shifted, g, Player::One), beta);
    CHECK(after.policy.action == before.policy.action);
    for (int s = 0; s < game.states(); ++s)
      CHECK(after.value[s] == before.value[s] + shift / (rat(1) - beta));
  }
}

TEST_CASE("equilibrium implies a zero-objective feasible program point, randomized") {
  testutil::Rng rng(3030);
  for (int iter = 0; iter < 20; ++iter) {
    const auto game = testutil::random_discrete_game(rng, 2, 2);
    const Rational beta(rng.uniform(1, 9), 10);
    for (const auto& [f, g] : enumerate_pure_nash(game, beta)) {
      const auto fm = f.to_mixed(game, Player::One);
      const auto gm = g.to_mixed(game, Player::Two);
      const auto v1 = testutil::pair_value(game, fm, gm, Player::One, beta);
      const auto v2 = testutil::pair_value(game, fm, gm, Player::Two, beta);
      const auto res = op_evaluate(game, beta, v1, v2, fm, gm);
      CHECK(res.objective == rat(0));
      CHECK(res.feasible(rat(0)));
    }
  }
}
