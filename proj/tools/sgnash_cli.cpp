// Command-line front end: loads game files, runs the analysis library, and
// emits machine-readable JSON reports (or human tables with --pretty).
//
// Exit codes: 0 success, 1 negative verdict (not Nash / not certified /
// not SC-AR), 2 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sgnash/sgnash.hpp"

using nlohmann::json;
using namespace sgnash;

#ifndef SGNASH_GAMES_DIR
#define SGNASH_GAMES_DIR "games"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInputError = 2;

struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

GameVariant load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open game file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("cannot parse '" + path + "': " + e.what());
  }
  try {
    return game_from_json(j);
  } catch (const std::exception& e) {
    throw InputError(std::string("invalid game file '") + path + "': " + e.what());
  }
}

const DiscreteGame& as_discrete(const GameVariant& g) {
  if (const auto* d = std::get_if<DiscreteGame>(&g)) return *d;
  throw InputError("this command requires a discrete game (use --alpha commands for continuous)");
}

const ContinuousGame& as_continuous(const GameVariant& g) {
  if (const auto* c = std::get_if<ContinuousGame>(&g)) return *c;
  throw InputError("this command requires a continuous game");
}

Rational parse_rational_arg(const std::string& text, const std::string& name) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw InputError("bad value for " + name + ": " + e.what());
  }
}

StationaryStrategy parse_strategy_arg(const std::string& text, const std::string& name) {
  try {
    return parse_strategy(text);
  } catch (const std::exception& e) {
    throw InputError("bad strategy for " + name + ": " + e.what());
  }
}

template <TimeModel M>
void require_fits(const BasicGame<M>& game, const StationaryStrategy& s, Player p,
                  const std::string& name) {
  const auto violations = s.validate_for(game, p);
  if (!violations.empty())
    throw InputError("strategy " + name + " does not fit the game: " + violations.front().message);
}

/// Discount picked from exactly one of --beta / --alpha, matching the game
/// kind.
struct Discount {
  bool discrete;
  Rational value;
};

Discount pick_discount(const GameVariant& game, const std::optional<std::string>& beta,
                       const std::optional<std::string>& alpha) {
  const bool is_discrete = std::holds_alternative<DiscreteGame>(game);
  if (is_discrete) {
    if (!beta) throw InputError("discrete game: --beta is required");
    if (alpha) throw InputError("discrete game: --alpha does not apply");
    const Rational b = parse_rational_arg(*beta, "--beta");
    if (b < Rational(0) || b >= Rational(1)) throw InputError("--beta must lie in [0,1)");
    return {true, b};
  }
  if (!alpha) throw InputError("continuous game: --alpha is required");
  if (beta) throw InputError("continuous game: --beta does not apply");
  const Rational a = parse_rational_arg(*alpha, "--alpha");
  if (!(a > Rational(0))) throw InputError("--alpha must be positive");
  return {false, a};
}

json rationals_to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(value_to_json(x));
  return out;
}

json pure_to_json(const PureStrategy& d) {
  json out = json::array();
  for (int a : d.action) out.push_back(a);
  return out;
}

std::string rationals_to_string(const std::vector<Rational>& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i].to_string();
  }
  return out + ")";
}

json nash_report_to_json(const NashReport<Rational>& report) {
  json players = json::array();
  for (int pi = 0; pi < 2; ++pi) {
    json states = json::array();
    for (const auto& a : report.players[pi]) {
      states.push_back({{"value", value_to_json(a.value)},
                        {"best_action_value", value_to_json(a.best_action_value)},
                        {"deviation_gap", value_to_json(a.deviation_gap)},
                        {"support_gap", value_to_json(a.support_gap)},
                        {"best_action", a.best_action}});
    }
    players.push_back({{"player", pi + 1}, {"states", std::move(states)}});
  }
  json out{{"is_nash", report.is_nash}, {"players", std::move(players)}};
  if (report.witness)
    out["witness"] = {{"player", player_index(report.witness->player) + 1},
                      {"state", report.witness->state},
                      {"action", report.witness->action}};
  else
    out["witness"] = nullptr;
  return out;
}

json certification_to_json(const CertificationReport& report) {
  json bounds = json::array();
  for (const auto& b : report.bounds) {
    json e{{"player", player_index(b.player) + 1},
           {"state", b.state},
           {"action", b.action},
           {"numerator", value_to_json(b.numerator)},
           {"denominator", value_to_json(b.denominator)}};
    if (const auto bound = b.bound()) e["bound"] = value_to_json(*bound);
    else e["bound"] = "beta-independent";
    bounds.push_back(std::move(e));
  }
  json out{{"set", to_string(report.set)},
           {"certified", report.certified},
           {"reference_discount", value_to_json(report.reference_discount)},
           {"conditions",
            {{"nash_at_reference",
              {{"passed", report.nash_at_reference.passed}, {"detail", report.nash_at_reference.detail}}},
             {"chain", {{"passed", report.chain_condition.passed}, {"detail", report.chain_condition.detail}}},
             {"reward",
              {{"passed", report.reward_condition.passed}, {"detail", report.reward_condition.detail}}}}},
           {"chain_is_sit", report.chain_is_sit},
           {"chain_is_identity", report.chain_is_identity},
           {"bounds", std::move(bounds)},
           {"remarks", report.remarks}};
  out["beta0"] = report.beta0 ? value_to_json(*report.beta0) : json(nullptr);
  if (report.set == ConditionSet::M || report.set == ConditionSet::N)
    out["alpha0"] = report.alpha0_unbounded ? json("unbounded")
                    : report.alpha0        ? value_to_json(*report.alpha0)
                                           : json(nullptr);
  return out;
}

void emit(const json& doc, bool pretty, const std::string& pretty_text) {
  if (pretty) std::cout << pretty_text << "\n";
  else std::cout << doc.dump(2) << "\n";
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------
// reproduce-examples

struct ExampleRow {
  std::string example;
  std::string quantity;
  std::string expected;
  std::string computed;
  bool match = false;
};

class ExampleChecker {
 public:
  explicit ExampleChecker(const std::string& games_dir) : dir_(games_dir) {}

  std::vector<ExampleRow> run() {
    rows_.clear();
    const DiscreteGame ex1 = std::get<DiscreteGame>(load_game_file(dir_ + "/ex1-discrete.json"));
    const DiscreteGame add = std::get<DiscreteGame>(load_game_file(dir_ + "/ex-additive-check.json"));
    const DiscreteGame sec = std::get<DiscreteGame>(load_game_file(dir_ + "/ex-sec-set.json"));
    const ContinuousGame ct1 = std::get<ContinuousGame>(load_game_file(dir_ + "/ct-ex1.json"));
    const ContinuousGame ct3 = std::get<ContinuousGame>(load_game_file(dir_ + "/ct-ex3.json"));
    const ContinuousGame ct2 = std::get<ContinuousGame>(load_game_file(dir_ + "/ct-ex2.json"));

    check_ex1(ex1);
    check_additive(add);
    check_sec_set(sec);
    check_ct1(ct1);
    check_ct3(ct3);
    check_ct2(ct2);
    return rows_;
  }

 private:
  void row(const std::string& ex, const std::string& what, const std::string& expected,
           const std::string& computed) {
    rows_.push_back({ex, what, expected, computed, expected == computed});
  }

  static std::vector<Rational> pair_value(const DiscreteGame& g, const PureStrategy& f,
                                          const PureStrategy& gg, Player p, const Rational& beta) {
    const auto fm = f.to_mixed(g, Player::One);
    const auto gm = gg.to_mixed(g, Player::Two);
    const auto P = induced_transition(g, fm, gm);
    const auto r = induced_rewards(g, fm, gm, p);
    const int n = g.states();
    DenseMatrix<Rational> a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a(i, j) = Rational(0) - beta * P(i, j);
        if (i == j) a(i, j) += Rational(1);
      }
    return solve_linear(a, r);
  }

  void check_ex1(const DiscreteGame& game) {
    const std::string ex = "ex1-discrete";
    const auto additive = check_additive_reward(game, Player::One);
    row(ex, "player-1 additive rewards", "infeasible: 4+4 != 6+5",
        additive.feasible() ? "feasible"
                            : "infeasible: " + additive.witness->r_a1a2.to_string() + "+" +
                                  additive.witness->r_b1b2.to_string() + " != " +
                                  additive.witness->r_a1b2.to_string() + "+" +
                                  additive.witness->r_b1a2.to_string());

    const Rational beta(3, 5);
    const auto mixed = mixed_ne_single_controller_2x2(game, beta);
    row(ex, "mixed equilibrium at beta=3/5", "f=(7/25,18/25) g=(2/3,1/3)",
        mixed.status == MixedNeStatus::Ok
            ? "f=(" + mixed.p.to_string() + "," + (Rational(1) - mixed.p).to_string() + ") g=(" +
                  mixed.q.to_string() + "," + (Rational(1) - mixed.q).to_string() + ")"
            : to_string(mixed.status));
    row(ex, "mixed pair verifies at beta=3/5", "nash",
        mixed.status == MixedNeStatus::Ok &&
                verify_nash(game, mixed.f, mixed.g, beta, Rational(0)).is_nash
            ? "nash"
            : "not nash");

    const StationaryStrategy favg({{Rational(1, 3), Rational(2, 3)}, {Rational(1)}});
    const StationaryStrategy gavg({{Rational(2, 3), Rational(1, 3)}, {Rational(1)}});
    row(ex, "limit-average equilibrium ((1/3,2/3),(2/3,1/3))", "nash",
        verify_average_nash(game, favg, gavg).is_nash ? "nash" : "not nash");

    const auto scar = sc_ar_bne_discrete(game);
    row(ex, "single-controller additive-reward construction", "not-sc-ar",
        scar.status == ScArStatus::Ok ? "ok" : "not-sc-ar");
  }

  void check_additive(const DiscreteGame& game) {
    const std::string ex = "ex-additive-check";
    const auto scar = sc_ar_bne_discrete(game);
    if (scar.status != ScArStatus::Ok) {
      row(ex, "sc-ar construction", "ok", "not-sc-ar: " + scar.witness);
      return;
    }
    row(ex, "sc-ar construction", "ok", "ok");
    row(ex, "myopic policy for player 1", "action 0 at state 0",
        "action " + std::to_string(scar.f.at(0)) + " at state 0");
    const auto fm = scar.f.to_mixed(game, Player::One);
    const auto gm = scar.g.to_mixed(game, Player::Two);
    bool all = true;
    for (const Rational& b : {scar.beta0, Rational(9, 10), Rational(99, 100)})
      all = all && verify_nash(game, fm, gm, b, Rational(0)).is_nash;
    row(ex, "constructed pair verifies at beta0, 9/10, 99/100", "nash", all ? "nash" : "not nash");
  }

  void check_sec_set(const DiscreteGame& game) {
    const std::string ex = "ex-sec-set";
    const Rational beta(3, 5);
    const PureStrategy f1{{0, 0}}, f2{{1, 0}}, g1{{0, 0}}, g2{{1, 0}};
    row(ex, "v1(f1,g1) at beta=3/5", "(10, 15/2)",
        rationals_to_string(pair_value(game, f1, g1, Player::One, beta)));
    row(ex, "v2(f1,g1) at beta=3/5", "(11, 10)",
        rationals_to_string(pair_value(game, f1, g1, Player::Two, beta)));
    row(ex, "v1(f2,g1) at beta=3/5", "(19/2, 15/2)",
        rationals_to_string(pair_value(game, f2, g1, Player::One, beta)));
    row(ex, "v2(f1,g2) at beta=3/5", "(11, 10)",
        rationals_to_string(pair_value(game, f1, g2, Player::Two, beta)));
    const auto cert = check_conditions_D(game, f1, g1, beta);
    row(ex, "identity-chain certification", "certified, beta0 = 3/5",
        cert.certified ? "certified, beta0 = " + cert.beta0->to_string() : "not certified");
  }

  void check_ct1(const ContinuousGame& game) {
    const std::string ex = "ct-ex1";
    row(ex, "rate norm", "1", mu_norm(game).to_string());
    const Rational alpha(1, 2);
    const auto mixed = mixed_ne_single_controller_2x2_ct(game, alpha);
    row(ex, "mixed equilibrium at alpha=1/2", "f=(9/31,22/31) g=(2/3,1/3)",
        mixed.status == MixedNeStatus::Ok
            ? "f=(" + mixed.p.to_string() + "," + (Rational(1) - mixed.p).to_string() + ") g=(" +
                  mixed.q.to_string() + "," + (Rational(1) - mixed.q).to_string() + ")"
            : to_string(mixed.status));
    row(ex, "mixed pair verifies at alpha=1/2", "nash",
        mixed.status == MixedNeStatus::Ok &&
                verify_nash_ct(game, mixed.f, mixed.g, alpha, Rational(0)).is_nash
            ? "nash"
            : "not nash");
    const auto scar = sc_ar_bne_ct(game);
    row(ex, "single-controller additive-reward construction", "not-sc-ar",
        scar.status == ScArStatus::Ok ? "ok" : "not-sc-ar");
  }

  static std::vector<Rational> uniformized_value(const ContinuousGame& game,
                                                 const PureStrategy& fixed, Player fixed_player,
                                                 const PureStrategy& policy, const Rational& alpha) {
    const Player mover = opponent_of(fixed_player);
    const auto uni = uniformize(
        best_response_ctmdp(game, fixed.to_mixed(game, fixed_player), mover), alpha, mu_norm(game));
    return policy_value(uni.dtmdp, policy, uni.beta);
  }

  void check_ct3(const ContinuousGame& game) {
    const std::string ex = "ct-ex3";
    const Rational alpha(1, 2);
    const PureStrategy f1{{0, 0}}, f2{{1, 0}}, g1{{0, 0}}, g2{{1, 0}};
    const PureStrategy fstar = f1, gstar = g2;
    row(ex, "uniformized discount factor at alpha=1/2", "2/3",
        uniformize(best_response_ctmdp(game, gstar.to_mixed(game, Player::Two), Player::One), alpha,
                   mu_norm(game))
            .beta.to_string());
    row(ex, "u1(f1) at alpha=1/2", "(8, 10)",
        rationals_to_string(uniformized_value(game, gstar, Player::Two, f1, alpha)));
    row(ex, "u1(f2) at alpha=1/2", "(8, 10)",
        rationals_to_string(uniformized_value(game, gstar, Player::Two, f2, alpha)));
    row(ex, "u2(g1) at alpha=1/2", "(6, 8)",
        rationals_to_string(uniformized_value(game, fstar, Player::One, g1, alpha)));
    row(ex, "u2(g2) at alpha=1/2", "(22/3, 8)",
        rationals_to_string(uniformized_value(game, fstar, Player::One, g2, alpha)));
    const auto cert = certify_bne_ct(game, fstar, gstar, alpha, ConditionSet::M);
    row(ex, "SIT-rate certification", "certified, alpha0 = 1/2",
        cert.certified
            ? "certified, alpha0 = " + (cert.alpha0_unbounded ? "unbounded" : cert.alpha0->to_string())
            : "not certified");
  }

  void check_ct2(const ContinuousGame& game) {
    const std::string ex = "ct-ex2";
    const Rational alpha(2, 3);
    const PureStrategy f1{{0, 0}}, f2{{1, 0}}, g1{{0, 0}}, g2{{1, 0}};
    const PureStrategy fstar = f1, gstar = g1;
    row(ex, "u1(f1) at alpha=2/3", "(6, 9/2)",
        rationals_to_string(uniformized_value(game, gstar, Player::Two, f1, alpha)));
    row(ex, "u1(f2) at alpha=2/3", "(57/10, 9/2)",
        rationals_to_string(uniformized_value(game, gstar, Player::Two, f2, alpha)));
    row(ex, "u2(g1) at alpha=2/3", "(33/5, 6)",
        rationals_to_string(uniformized_value(game, fstar, Player::One, g1, alpha)));
    row(ex, "u2(g2) at alpha=2/3", "(33/5, 6)",
        rationals_to_string(uniformized_value(game, fstar, Player::One, g2, alpha)));
    const auto cert = certify_bne_ct(game, fstar, gstar, alpha, ConditionSet::N);
    row(ex, "absorbing-rate certification", "certified, alpha0 = 2/3",
        cert.certified
            ? "certified, alpha0 = " + (cert.alpha0_unbounded ? "unbounded" : cert.alpha0->to_string())
            : "not certified");
  }

  std::string dir_;
  std::vector<ExampleRow> rows_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic-game analysis: discounted and limit-average values, Nash verification, "
               "and Blackwell-Nash certification for discrete- and continuous-time games"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-readable output instead of JSON");

  if (const char* env = std::getenv("BNE_TOLERANCE")) {
    try {
      scalar_traits<double>::tolerance = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << json{{"error", "BNE_TOLERANCE is not a number"}}.dump() << "\n";
      return kExitInputError;
    }
  }

  std::string game_path, f_text, g_text, fix_text, set_text;
  std::optional<std::string> beta_text, alpha_text, beta_hat_text, alpha_hat_text;
  bool average = false;
  std::string games_dir = SGNASH_GAMES_DIR;

  auto add_game_arg = [&](CLI::App* cmd) {
    cmd->add_option("game", game_path, "Game file (JSON)")->required();
  };
  auto add_discounts = [&](CLI::App* cmd) {
    cmd->add_option("--beta", [&beta_text](const std::vector<std::string>& v) {
      beta_text = v.front();
      return true;
    }, "Discount factor (discrete games), exact rational like 3/5");
    cmd->add_option("--alpha", [&alpha_text](const std::vector<std::string>& v) {
      alpha_text = v.front();
      return true;
    }, "Discount rate (continuous games), exact rational like 1/2");
  };

  CLI::App* value_cmd = app.add_subcommand("value", "Discounted value vectors of a strategy pair");
  add_game_arg(value_cmd);
  value_cmd->add_option("--f", f_text, "Player 1 strategy, rows 'p1,p2;...'")->required();
  value_cmd->add_option("--g", g_text, "Player 2 strategy")->required();
  add_discounts(value_cmd);

  CLI::App* br_cmd = app.add_subcommand("best-response", "Optimal policy against a fixed strategy");
  add_game_arg(br_cmd);
  br_cmd->add_option("--fix", fix_text, "Fixed strategy as 'player:rows', e.g. 1:2/3,1/3;1")
      ->required();
  add_discounts(br_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify-nash", "Nash verification of a strategy pair");
  add_game_arg(verify_cmd);
  verify_cmd->add_option("--f", f_text, "Player 1 strategy")->required();
  verify_cmd->add_option("--g", g_text, "Player 2 strategy")->required();
  verify_cmd->add_flag("--average", average, "Verify the limit-average criterion (discrete only)");
  add_discounts(verify_cmd);

  CLI::App* enum_cmd = app.add_subcommand("enumerate-pure", "All pure Nash equilibria");
  add_game_arg(enum_cmd);
  add_discounts(enum_cmd);

  CLI::App* certify_cmd =
      app.add_subcommand("certify", "Blackwell-Nash certification of a pure pair");
  add_game_arg(certify_cmd);
  certify_cmd->add_option("--f", f_text, "Player 1 pure strategy")->required();
  certify_cmd->add_option("--g", g_text, "Player 2 pure strategy")->required();
  certify_cmd->add_option("--set", set_text, "Condition set: C, D (discrete), M, N (continuous)")
      ->required();
  certify_cmd->add_option("--beta-hat", [&beta_hat_text](const std::vector<std::string>& v) {
    beta_hat_text = v.front();
    return true;
  }, "Reference discount factor (default 3/5)");
  certify_cmd->add_option("--alpha-hat", [&alpha_hat_text](const std::vector<std::string>& v) {
    alpha_hat_text = v.front();
    return true;
  }, "Reference discount rate (default 1/2)");

  CLI::App* scar_cmd = app.add_subcommand(
      "sc-ar", "Constructive equilibrium for single-controller additive-reward games");
  add_game_arg(scar_cmd);

  CLI::App* mixed_cmd =
      app.add_subcommand("mixed-ne-2x2", "Closed-form mixed equilibrium for the 2x2 example class");
  add_game_arg(mixed_cmd);
  add_discounts(mixed_cmd);

  CLI::App* repro_cmd =
      app.add_subcommand("reproduce-examples", "Re-run the bundled examples and compare");
  repro_cmd->add_option("--games-dir", games_dir, "Directory with the bundled game files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << json{{"error", std::string("argument error: ") + e.what()}}.dump() << "\n";
    return kExitInputError;
  }

  try {
    if (value_cmd->parsed()) {
      const GameVariant game = load_game_file(game_path);
      const Discount disc = pick_discount(game, beta_text, alpha_text);
      const StationaryStrategy f = parse_strategy_arg(f_text, "--f");
      const StationaryStrategy g = parse_strategy_arg(g_text, "--g");
      std::vector<Rational> v1, v2;
      if (disc.discrete) {
        const auto& dg = as_discrete(game);
        require_fits(dg, f, Player::One, "--f");
        require_fits(dg, g, Player::Two, "--g");
        const auto p = induced_transition(dg, f, g);
        const int n = dg.states();
        DenseMatrix<Rational> a(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            a(i, j) = Rational(0) - disc.value * p(i, j);
            if (i == j) a(i, j) += Rational(1);
          }
        v1 = solve_linear(a, induced_rewards(dg, f, g, Player::One));
        v2 = solve_linear(a, induced_rewards(dg, f, g, Player::Two));
      } else {
        const auto& cg = as_continuous(game);
        require_fits(cg, f, Player::One, "--f");
        require_fits(cg, g, Player::Two, "--g");
        const auto q = induced_rate_matrix(cg, f, g);
        const int n = cg.states();
        DenseMatrix<Rational> a(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            a(i, j) = Rational(0) - q(i, j);
            if (i == j) a(i, j) += disc.value;
          }
        v1 = solve_linear(a, induced_rewards(cg, f, g, Player::One));
        v2 = solve_linear(a, induced_rewards(cg, f, g, Player::Two));
      }
      json doc{{"command", "value"},
               {"inputs",
                {{"game", game_path},
                 {"f", f_text},
                 {"g", g_text},
                 {disc.discrete ? "beta" : "alpha", value_to_json(disc.value)}}},
               {"result", {{"p1", rationals_to_json(v1)}, {"p2", rationals_to_json(v2)}}}};
      emit(doc, pretty, "p1 value: " + rationals_to_string(v1) + "\np2 value: " + rationals_to_string(v2));
      return kExitOk;
    }

    if (br_cmd->parsed()) {
      const GameVariant game = load_game_file(game_path);
      const Discount disc = pick_discount(game, beta_text, alpha_text);
      const auto colon = fix_text.find(':');
      if (colon == std::string::npos)
        throw InputError("--fix expects 'player:strategy', e.g. 1:2/3,1/3;1");
      const std::string who = fix_text.substr(0, colon);
      if (who != "1" && who != "2") throw InputError("--fix player must be 1 or 2");
      const Player fixed = who == "1" ? Player::One : Player::Two;
      const Player mover = opponent_of(fixed);
      const StationaryStrategy fixed_strategy =
          parse_strategy_arg(fix_text.substr(colon + 1), "--fix");
      PureStrategy policy;
      std::vector<Rational> value;
      if (disc.discrete) {
        const auto& dg = as_discrete(game);
        require_fits(dg, fixed_strategy, fixed, "--fix");
        const auto opt = optimal_policy(best_response_mdp(dg, fixed_strategy, mover), disc.value);
        policy = opt.policy;
        value = opt.value;
      } else {
        const auto& cg = as_continuous(game);
        require_fits(cg, fixed_strategy, fixed, "--fix");
        const auto uni = uniformize(best_response_ctmdp(cg, fixed_strategy, mover), disc.value,
                                    mu_norm(cg));
        const auto opt = optimal_policy(uni.dtmdp, uni.beta);
        policy = opt.policy;
        value = opt.value;  // equals the continuous-time value
      }
      json doc{{"command", "best-response"},
               {"inputs",
                {{"game", game_path},
                 {"fixed_player", who},
                 {"fixed_strategy", fix_text.substr(colon + 1)},
                 {disc.discrete ? "beta" : "alpha", value_to_json(disc.value)}}},
               {"result",
                {{"responding_player", player_index(mover) + 1},
                 {"policy", pure_to_json(policy)},
                 {"value", rationals_to_json(value)}}}};
      std::string txt = "player " + std::to_string(player_index(mover) + 1) + " best response: actions [";
      for (size_t i = 0; i < policy.action.size(); ++i)
        txt += (i ? "," : "") + std::to_string(policy.action[i]);
      txt += "], value " + rationals_to_string(value);
      emit(doc, pretty, txt);
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      const GameVariant game = load_game_file(game_path);
      const StationaryStrategy f = parse_strategy_arg(f_text, "--f");
      const StationaryStrategy g = parse_strategy_arg(g_text, "--g");
      NashReport<Rational> report;
      json inputs{{"game", game_path}, {"f", f_text}, {"g", g_text}};
      std::optional<Rational> gap_conversion;  // continuous: value-unit gap -> rate units
      if (average) {
        if (!std::holds_alternative<DiscreteGame>(game))
          throw InputError("--average applies to discrete games only");
        const auto& dg = as_discrete(game);
        require_fits(dg, f, Player::One, "--f");
        require_fits(dg, g, Player::Two, "--g");
        report = verify_average_nash(dg, f, g);
        inputs["criterion"] = "limit-average";
      } else {
        const Discount disc = pick_discount(game, beta_text, alpha_text);
        inputs[disc.discrete ? "beta" : "alpha"] = value_to_json(disc.value);
        if (disc.discrete) {
          const auto& dg = as_discrete(game);
          require_fits(dg, f, Player::One, "--f");
          require_fits(dg, g, Player::Two, "--g");
          report = verify_nash(dg, f, g, disc.value, Rational(0));
        } else {
          const auto& cg = as_continuous(game);
          require_fits(cg, f, Player::One, "--f");
          require_fits(cg, g, Player::Two, "--g");
          report = verify_nash_ct(cg, f, g, disc.value, Rational(0));
          gap_conversion = disc.value + mu_norm(cg);
        }
      }
      json doc{{"command", "verify-nash"}, {"inputs", inputs}, {"result", nash_report_to_json(report)}};
      if (gap_conversion) doc["result"]["gap_conversion_to_rate_units"] = value_to_json(*gap_conversion);
      std::ostringstream txt;
      txt << (report.is_nash ? "Nash equilibrium: yes" : "Nash equilibrium: no");
      if (report.witness)
        txt << " (profitable deviation: player " << player_index(report.witness->player) + 1
            << ", state " << report.witness->state << ", action " << report.witness->action << ")";
      for (int pi = 0; pi < 2; ++pi)
        for (size_t s = 0; s < report.players[pi].size(); ++s) {
          const auto& a = report.players[pi][s];
          txt << "\n  player " << pi + 1 << " state " << s << ": value " << a.value
              << ", best " << a.best_action_value << ", gap " << a.deviation_gap;
        }
      emit(doc, pretty, txt.str());
      return report.is_nash ? kExitOk : kExitNegative;
    }

    if (enum_cmd->parsed()) {
      const GameVariant game = load_game_file(game_path);
      if (!std::holds_alternative<DiscreteGame>(game))
        throw InputError("enumerate-pure applies to discrete games only");
      const Discount disc = pick_discount(game, beta_text, alpha_text);
      const auto& dg = as_discrete(game);
      const auto found = enumerate_pure_nash(dg, disc.value);
      json list = json::array();
      for (const auto& [f, g] : found)
        list.push_back({{"f", pure_to_json(f)}, {"g", pure_to_json(g)}});
      json doc{{"command", "enumerate-pure"},
               {"inputs", {{"game", game_path}, {"beta", value_to_json(disc.value)}}},
               {"result", {{"count", found.size()}, {"equilibria", std::move(list)}}}};
      std::ostringstream txt;
      txt << found.size() << " pure equilibria";
      for (const auto& [f, g] : found) {
        txt << "\n  f=[";
        for (size_t i = 0; i < f.action.size(); ++i) txt << (i ? "," : "") << f.action[i];
        txt << "] g=[";
        for (size_t i = 0; i < g.action.size(); ++i) txt << (i ? "," : "") << g.action[i];
        txt << "]";
      }
      emit(doc, pretty, txt.str());
      return kExitOk;
    }

    if (certify_cmd->parsed()) {
      const GameVariant game = load_game_file(game_path);
      PureStrategy f, g;
      try {
        f = to_pure(parse_strategy_arg(f_text, "--f"));
        g = to_pure(parse_strategy_arg(g_text, "--g"));
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("certification needs pure strategies: ") + e.what());
      }
      CertificationReport report;
      json inputs{{"game", game_path}, {"f", f_text}, {"g", g_text}, {"set", set_text}};
      if (set_text == "C" || set_text == "D") {
        const auto& dg = as_discrete(game);
        const Rational beta_hat =
            beta_hat_text ? parse_rational_arg(*beta_hat_text, "--beta-hat") : Rational(3, 5);
        inputs["beta_hat"] = value_to_json(beta_hat);
        report = set_text == "C" ? check_conditions_C(dg, f, g, beta_hat)
                                 : check_conditions_D(dg, f, g, beta_hat);
      } else if (set_text == "M" || set_text == "N") {
        const auto& cg = as_continuous(game);
        const Rational alpha_hat =
            alpha_hat_text ? parse_rational_arg(*alpha_hat_text, "--alpha-hat") : Rational(1, 2);
        inputs["alpha_hat"] = value_to_json(alpha_hat);
        report = certify_bne_ct(cg, f, g, alpha_hat,
                                set_text == "M" ? ConditionSet::M : ConditionSet::N);
      } else {
        throw InputError("--set must be one of C, D, M, N");
      }
      json doc{{"command", "certify"}, {"inputs", inputs}, {"result", certification_to_json(report)}};
      std::ostringstream txt;
      txt << "set " << to_string(report.set) << ": " << (report.certified ? "CERTIFIED" : "not certified");
      txt << "\n  equilibrium at reference: " << yesno(report.nash_at_reference.passed);
      txt << "\n  chain condition: " << yesno(report.chain_condition.passed);
      txt << "\n  reward condition: " << yesno(report.reward_condition.passed);
      if (report.beta0) txt << "\n  beta0 = " << *report.beta0;
      if (report.alpha0) txt << "\n  alpha0 = " << *report.alpha0;
      if (report.alpha0_unbounded) txt << "\n  alpha0 unbounded (every positive rate)";
      emit(doc, pretty, txt.str());
      return report.certified ? kExitOk : kExitNegative;
    }

    if (scar_cmd->parsed()) {
      const GameVariant game = load_game_file(game_path);
      json result;
      bool ok = false;
      std::ostringstream txt;
      if (std::holds_alternative<DiscreteGame>(game)) {
        const auto r = sc_ar_bne_discrete(as_discrete(game));
        ok = r.status == ScArStatus::Ok;
        result["status"] = ok ? "ok" : "not-sc-ar";
        if (ok) {
          result["f"] = pure_to_json(r.f);
          result["g"] = pure_to_json(r.g);
          result["beta0"] = value_to_json(r.beta0);
          txt << "equilibrium constructed; valid for every beta in [" << r.beta0 << ", 1)";
        } else {
          result["witness"] = r.witness;
          if (r.rectangle)
            result["rectangle"] = {{"state", r.rectangle->state}, {"a1", r.rectangle->a1},
                                   {"b1", r.rectangle->b1},       {"a2", r.rectangle->a2},
                                   {"b2", r.rectangle->b2}};
          txt << "not SC-AR: " << r.witness;
        }
      } else {
        const auto r = sc_ar_bne_ct(as_continuous(game));
        ok = r.status == ScArStatus::Ok;
        result["status"] = ok ? "ok" : "not-sc-ar";
        if (ok) {
          result["f"] = pure_to_json(r.f);
          result["g"] = pure_to_json(r.g);
          result["alpha0"] = r.alpha0 ? value_to_json(*r.alpha0) : json("unbounded");
          txt << "equilibrium constructed; valid for every alpha in (0, "
              << (r.alpha0 ? r.alpha0->to_string() : "infinity") << "]";
        } else {
          result["witness"] = r.witness;
          txt << "not SC-AR: " << r.witness;
        }
      }
      json doc{{"command", "sc-ar"}, {"inputs", {{"game", game_path}}}, {"result", result}};
      emit(doc, pretty, txt.str());
      return ok ? kExitOk : kExitNegative;
    }

    if (mixed_cmd->parsed()) {
      const GameVariant game = load_game_file(game_path);
      const Discount disc = pick_discount(game, beta_text, alpha_text);
      MixedNeResult r;
      if (disc.discrete) r = mixed_ne_single_controller_2x2(as_discrete(game), disc.value);
      else r = mixed_ne_single_controller_2x2_ct(as_continuous(game), disc.value);
      const bool ok = r.status == MixedNeStatus::Ok;
      json result{{"status", to_string(r.status)}};
      std::ostringstream txt;
      if (ok) {
        result["f"] = strategy_to_json(r.f);
        result["g"] = strategy_to_json(r.g);
        result["p"] = value_to_json(r.p);
        result["q"] = value_to_json(r.q);
        result["mixing_state"] = r.mixing_state;
        txt << "f = " << strategy_to_string(r.f) << "\ng = " << strategy_to_string(r.g);
      } else {
        txt << to_string(r.status);
      }
      json doc{{"command", "mixed-ne-2x2"},
               {"inputs",
                {{"game", game_path}, {disc.discrete ? "beta" : "alpha", value_to_json(disc.value)}}},
               {"result", result}};
      emit(doc, pretty, txt.str());
      return ok ? kExitOk : kExitNegative;
    }

    if (repro_cmd->parsed()) {
      ExampleChecker checker(games_dir);
      const std::vector<ExampleRow> rows = checker.run();
      bool all = true;
      json list = json::array();
      std::ostringstream txt;
      for (const auto& r : rows) {
        all = all && r.match;
        list.push_back({{"example", r.example},
                        {"quantity", r.quantity},
                        {"expected", r.expected},
                        {"computed", r.computed},
                        {"match", r.match}});
        txt << (r.match ? "[ OK ] " : "[FAIL] ") << r.example << ": " << r.quantity
            << " | expected " << r.expected;
        if (!r.match) txt << " | computed " << r.computed;
        txt << "\n";
      }
      txt << (all ? "all rows match" : "MISMATCHES FOUND");
      json doc{{"command", "reproduce-examples"},
               {"inputs", {{"games_dir", games_dir}}},
               {"result", {{"all_match", all}, {"rows", std::move(list)}}}};
      emit(doc, pretty, txt.str());
      return all ? kExitOk : kExitNegative;
    }
  } catch (const InputError& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
