#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace sgnash;
using testutil::load_continuous;
using testutil::load_discrete;
using testutil::pure;
using testutil::rat;
using testutil::rows;

TEST_CASE("bundled paper games pass validation") {
  CHECK(load_discrete("ex1-discrete.json").validate().empty());
  CHECK(load_discrete("ex-sec-set.json").validate().empty());
  CHECK(load_discrete("ex-additive-check.json").validate().empty());
  CHECK(load_continuous("ct-ex1.json").validate().empty());
  CHECK(load_continuous("ct-ex3.json").validate().empty());
  CHECK(load_continuous("ct-ex2.json").validate().empty());
}

TEST_CASE("validation flags a deficient probability row") {
  DiscreteGame game(2, {{1, 1}, {1, 1}});
  game.set_entry(0, 0, 0, 0, rat(1, 2));
  game.set_entry(0, 0, 0, 1, rat(2, 5));
  game.set_entry(1, 0, 0, 1, rat(1));
  const auto violations = game.validate();
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message == "row sum 9/10 != 1");
  CHECK(violations[0].state == 0);
}

TEST_CASE("validation flags an unbalanced rate row") {
  ContinuousGame game(2, {{1, 1}, {1, 1}});
  game.set_entry(0, 0, 0, 1, rat(2));
  game.set_entry(0, 0, 0, 0, rat(-1));  // should be -2
  const auto violations = game.validate();
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].state == 0);
}

TEST_CASE("continuous counterexample has the listed diagonal rates") {
  const auto game = load_continuous("ct-ex1.json");
  CHECK(game.entry(0, 0, 0, 0) == rat(0));
  CHECK(game.entry(0, 0, 1, 0) == rat(-1));
  CHECK(game.entry(1, 0, 0, 1) == rat(-1));
}

TEST_CASE("induced chain of pure first actions in the single-controller example") {
  const auto game = load_discrete("ex1-discrete.json");
  const auto p = induced_transition(game, pure({0, 0}).to_mixed(game, Player::One),
                                    pure({0, 0}).to_mixed(game, Player::Two));
  CHECK(p(0, 0) == rat(1));
  CHECK(p(0, 1) == rat(0));
  CHECK(p(1, 0) == rat(1));
  CHECK(p(1, 1) == rat(0));
}

TEST_CASE("identity chain under the second example's equilibrium pair") {
  const auto game = load_discrete("ex-sec-set.json");
  const auto p = induced_transition(game, pure({0, 0}).to_mixed(game, Player::One),
                                    pure({0, 0}).to_mixed(game, Player::Two));
  CHECK(p == DenseMatrix<Rational>::identity(2));
}

TEST_CASE("induced chain rows sum to one for random mixed pairs") {
  testutil::Rng rng(31);
  for (int iter = 0; iter < 25; ++iter) {
    const auto game = testutil::random_discrete_game(rng, 4, 3);
    std::vector<std::vector<Rational>> fr(game.states()), gr(game.states());
    for (int s = 0; s < game.states(); ++s) {
      fr[s] = rng.stochastic_row(game.actions(Player::One, s));
      gr[s] = rng.stochastic_row(game.actions(Player::Two, s));
    }
    const auto p = induced_transition(game, rows(fr), rows(gr));
    for (int s = 0; s < game.states(); ++s) {
      Rational sum(0);
      for (int s2 = 0; s2 < game.states(); ++s2) sum += p(s, s2);
      CHECK(sum == rat(1));
    }
  }
}

TEST_CASE("one-period rewards of the single-controller example") {
  const auto game = load_discrete("ex1-discrete.json");
  for (const Rational& p : {rat(0), rat(1, 3), rat(1, 2), rat(1)}) {
    const auto f = rows({{p, rat(1) - p}, {rat(1)}});
    const auto g1 = rows({{rat(1), rat(0)}, {rat(1)}});
    const auto g2 = rows({{rat(0), rat(1)}, {rat(1)}});
    CHECK(induced_rewards(game, f, g1, Player::Two)[0] == rat(4) + rat(5) * p);
    CHECK(induced_rewards(game, f, g2, Player::Two)[0] == rat(5) - rat(2) * p);
  }
  // pure pair reads the table directly
  const auto f2 = pure({1, 0}).to_mixed(game, Player::One);
  const auto g2 = pure({1, 0}).to_mixed(game, Player::Two);
  CHECK(induced_rewards(game, f2, g2, Player::One)[0] == rat(4));
  CHECK(induced_rewards(game, f2, g2, Player::Two)[0] == rat(5));
}

TEST_CASE("induced rewards are bilinear in the strategies") {
  testutil::Rng rng(55);
  for (int iter = 0; iter < 20; ++iter) {
    const auto game = testutil::random_discrete_game(rng, 3, 3);
    std::vector<std::vector<Rational>> fa(game.states()), fb(game.states()), gr(game.states());
    for (int s = 0; s < game.states(); ++s) {
      fa[s] = rng.stochastic_row(game.actions(Player::One, s));
      fb[s] = rng.stochastic_row(game.actions(Player::One, s));
      gr[s] = rng.stochastic_row(game.actions(Player::Two, s));
    }
    const Rational lambda(rng.uniform(0, 6), 6);
    std::vector<std::vector<Rational>> mix(game.states());
    for (int s = 0; s < game.states(); ++s) {
      mix[s].resize(fa[s].size());
      for (size_t a = 0; a < fa[s].size(); ++a)
        mix[s][a] = lambda * fa[s][a] + (rat(1) - lambda) * fb[s][a];
    }
    const auto g = rows(gr);
    const auto lhs = induced_rewards(game, rows(mix), g, Player::One);
    const auto ra = induced_rewards(game, rows(fa), g, Player::One);
    const auto rb = induced_rewards(game, rows(fb), g, Player::One);
    for (int s = 0; s < game.states(); ++s)
      CHECK(lhs[s] == lambda * ra[s] + (rat(1) - lambda) * rb[s]);
  }
}

TEST_CASE("induced rate matrix rows sum to zero with nonnegative off-diagonals") {
  const auto ct2 = load_continuous("ct-ex2.json");
  const auto q0 = induced_rate_matrix(ct2, pure({0, 0}).to_mixed(ct2, Player::One),
                                      pure({0, 0}).to_mixed(ct2, Player::Two));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(q0(i, j) == rat(0));

  const auto ct3 = load_continuous("ct-ex3.json");
  const auto q = induced_rate_matrix(ct3, pure({0, 0}).to_mixed(ct3, Player::One),
                                     pure({1, 0}).to_mixed(ct3, Player::Two));
  CHECK(q(0, 0) == rat(-1));
  CHECK(q(0, 1) == rat(1));
  CHECK(q(1, 0) == rat(0));
  CHECK(q(1, 1) == rat(0));

  testutil::Rng rng(11);
  for (int iter = 0; iter < 15; ++iter) {
    const auto m = testutil::random_ctmdp(rng, 4, 1);  // one action: doubles as a game row check
    for (int s = 0; s < m.states(); ++s) {
      Rational sum(0);
      for (int s2 = 0; s2 < m.states(); ++s2) {
        sum += m.rate(s, 0, s2);
        if (s2 != s) CHECK(m.rate(s, 0, s2) >= rat(0));
      }
      CHECK(sum == rat(0));
    }
  }
}

TEST_CASE("single-controller detection") {
  CHECK(single_controller(load_discrete("ex1-discrete.json")) == Controller::Player2);
  CHECK(single_controller(load_discrete("ex-sec-set.json")) == Controller::Neither);
  CHECK(single_controller(load_continuous("ct-ex1.json")) == Controller::Player2);

  DiscreteGame constant(2, {{2, 2}, {1, 1}});
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) constant.set_entry(0, a1, a2, 1, rat(1));
  constant.set_entry(1, 0, 0, 0, rat(1));
  CHECK(single_controller(constant) == Controller::Both);
}

TEST_CASE("additive-reward check on the bundled games") {
  const auto ex1 = load_discrete("ex1-discrete.json");
  const auto res = check_additive_reward(ex1, Player::One);
  REQUIRE_FALSE(res.feasible());
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->state == 0);
  CHECK(res.witness->r_a1a2 + res.witness->r_b1b2 == rat(8));   // 4 + 4
  CHECK(res.witness->r_a1b2 + res.witness->r_b1a2 == rat(11));  // 6 + 5

  const auto ct2 = load_continuous("ct-ex2.json");
  const auto res_ct = check_additive_reward(ct2, Player::One);
  REQUIRE_FALSE(res_ct.feasible());
  CHECK(res_ct.witness->r_a1a2 + res_ct.witness->r_b1b2 == rat(7));   // 4 + 3
  CHECK(res_ct.witness->r_a1b2 + res_ct.witness->r_b1a2 == rat(9));   // 4 + 5
}

TEST_CASE("rewards depending on own action only are trivially additive") {
  DiscreteGame game(1, {{2, 2}});
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      game.set_reward(Player::One, 0, a1, a2, rat(a1 + 1));
      game.set_entry(0, a1, a2, 0, rat(1));
    }
  const auto res = check_additive_reward(game, Player::One);
  REQUIRE(res.feasible());
  CHECK(res.decomposition->part2[0][0] == rat(0));
  CHECK(res.decomposition->part2[0][1] == rat(0));
  CHECK(res.decomposition->part1[0][0] == rat(1));
  CHECK(res.decomposition->part1[0][1] == rat(2));
}

TEST_CASE("successful decomposition reconstructs every reward entry") {
  testutil::Rng rng(333);
  for (int iter = 0; iter < 20; ++iter) {
    // build an additive game by construction
    const int n = rng.uniform(1, 3);
    std::vector<std::pair<int, int>> counts(n);
    for (int s = 0; s < n; ++s) counts[s] = {rng.uniform(1, 3), rng.uniform(1, 3)};
    DiscreteGame game(n, counts);
    for (int s = 0; s < n; ++s) {
      std::vector<Rational> own(counts[s].first), other(counts[s].second);
      for (auto& x : own) x = rng.signed_rational(6, 2);
      for (auto& x : other) x = rng.signed_rational(6, 2);
      for (int a1 = 0; a1 < counts[s].first; ++a1)
        for (int a2 = 0; a2 < counts[s].second; ++a2) {
          game.set_reward(Player::One, s, a1, a2, own[a1] + other[a2]);
          const auto row = rng.stochastic_row(n);
          for (int s2 = 0; s2 < n; ++s2) game.set_entry(s, a1, a2, s2, row[s2]);
        }
    }
    const auto res = check_additive_reward(game, Player::One);
    REQUIRE(res.feasible());
    for (int s = 0; s < n; ++s)
      for (int a1 = 0; a1 < counts[s].first; ++a1)
        for (int a2 = 0; a2 < counts[s].second; ++a2)
          CHECK(res.decomposition->part1[s][a1] + res.decomposition->part2[s][a2] ==
                game.reward(Player::One, s, a1, a2));
  }
}

TEST_CASE("SIT predicate and strategy support") {
  DenseMatrix<Rational> sit(3, 2);
  for (int r = 0; r < 3; ++r) {
    sit(r, 0) = rat(1, 3);
    sit(r, 1) = rat(2, 3);
  }
  CHECK(is_sit(sit));
  CHECK_FALSE(is_sit(DenseMatrix<Rational>::identity(2)));

  const auto s = rows({{rat(2, 3), rat(1, 3)}});
  CHECK(strategy_support(s, 0) == std::vector<int>{0, 1});
  const auto d = rows({{rat(0), rat(1)}});
  CHECK(strategy_support(d, 0) == std::vector<int>{1});
}

TEST_CASE("strategies validate against the game shape") {
  const auto game = load_discrete("ex1-discrete.json");
  CHECK(rows({{rat(1, 2), rat(1, 2)}, {rat(1)}}).validate_for(game, Player::One).empty());
  CHECK_FALSE(rows({{rat(1, 2), rat(1, 2)}}).validate_for(game, Player::One).empty());
  CHECK_FALSE(rows({{rat(1, 2), rat(1, 4)}, {rat(1)}}).validate_for(game, Player::One).empty());
  CHECK_FALSE(rows({{rat(3, 2), rat(-1, 2)}, {rat(1)}}).validate_for(game, Player::One).empty());
}
