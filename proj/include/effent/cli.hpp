// Copyright 2026 The effent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The `effent` command line. Results go to the output stream as a single JSON
// object, sweeps as CSV. Exit codes: 0 ok, 2 bad input, 3 numerical failure.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "effent/bec.hpp"
#include "effent/effective.hpp"
#include "effent/games.hpp"
#include "effent/io.hpp"
#include "effent/selftest.hpp"

namespace effent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError(what + ": \"" + text + "\" is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) throw ValidationError(what + ": \"" + text + "\" is not a number");
  return v;
}

inline std::vector<double> numbers(const std::string& text, std::size_t count, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.size() != count) {
    throw ValidationError(what + ": expected " + std::to_string(count) + " comma-separated values, got \"" + text + "\"");
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(number(p, what));
  return out;
}

// "a:b:step" inclusive of b up to roundoff, or a comma list.
inline std::vector<double> grid(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double a = number(parts[0], what), b = number(parts[1], what), step = number(parts[2], what);
    if (!(step > 0) || b < a) throw ValidationError(what + ": range needs start <= stop and step > 0");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    if (n > 1000000) throw ValidationError(what + ": range has too many points");
    for (long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(number(p, what));
  if (out.empty()) throw ValidationError(what + ": empty grid");
  return out;
}

inline Json number_json(double x) { return round12(x); }

}  // namespace detail

/// delta:phi0 | uniform | wrapped-normal:mu,sigma | double-rect:w,delta |
/// delta-mixture:phi1,w1,phi2,w2,...
inline PhaseDistribution parse_dist_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const std::string what = "distribution \"" + name + "\"";
  if (name == "uniform") {
    if (!args.empty()) throw ValidationError(what + ": takes no parameters");
    return PhaseDistribution::uniform();
  }
  if (name == "delta") return PhaseDistribution::delta(detail::numbers(args, 1, what)[0]);
  if (name == "wrapped-normal") {
    const auto v = detail::numbers(args, 2, what);
    return PhaseDistribution::wrapped_normal(v[0], v[1]);
  }
  if (name == "double-rect") {
    const auto v = detail::numbers(args, 2, what);
    return PhaseDistribution::double_rect(v[0], v[1]);
  }
  if (name == "delta-mixture") {
    const auto parts = detail::split(args, ',');
    if (parts.empty() || parts.size() % 2) throw ValidationError(what + ": expects phi,weight pairs");
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t k = 0; k < parts.size(); k += 2) {
      atoms.emplace_back(detail::number(parts[k], what), detail::number(parts[k + 1], what));
    }
    return PhaseDistribution::delta_mixture(std::move(atoms));
  }
  throw ValidationError("unknown distribution \"" + name + "\"");
}

/// identity[:d] | amplitude-damping:g | phase-damping:l | depolarizing:p | ssr |
/// bec:<dist>,<theta> | path to a channel JSON file.
inline KrausChannel parse_channel_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const std::string what = "channel \"" + name + "\"";
  if (name == "identity") {
    if (args.empty()) return identity_channel(2);
    const double d = detail::number(args, what);
    if (d < 1 || d != std::floor(d)) throw ValidationError(what + ": dimension must be a positive integer");
    return identity_channel(static_cast<std::size_t>(d));
  }
  if (name == "amplitude-damping") return amplitude_damping(detail::numbers(args, 1, what)[0]);
  if (name == "phase-damping") return phase_damping(detail::numbers(args, 1, what)[0]);
  if (name == "depolarizing") return depolarizing(detail::numbers(args, 1, what)[0]);
  if (name == "ssr") {
    if (!args.empty()) throw ValidationError(what + ": takes no parameters");
    return ssr_dephasing({{0}, {1}});
  }
  if (name == "bec") {
    const auto comma = args.rfind(',');
    if (comma == std::string::npos) throw ValidationError(what + ": expects <dist>,<theta>");
    return ssr_lifting_channel(parse_dist_spec(args.substr(0, comma)), detail::number(args.substr(comma + 1), what + " theta"));
  }
  if (colon == std::string::npos || spec.find('/') != std::string::npos || spec.ends_with(".json")) {
    std::ifstream probe(spec);
    if (probe) {
      const KrausChannel ch = channel_from_json(read_json_file(spec), spec);
      if (!ch.cptp()) throw ValidationError(spec + ": channel must be trace preserving (\"cptp\": true)");
      return ch;
    }
  }
  throw ValidationError("unknown channel \"" + spec + "\"");
}

namespace detail {

struct Globals {
  std::uint64_t seed = 0;
  std::optional<double> tol;
};

inline RoofOptions roof_options(const Globals& g, int restarts) {
  RoofOptions o;
  o.seed = g.seed;
  if (restarts > 0) o.restarts = restarts;
  if (g.tol) o.tol = *g.tol;
  o.validate();
  return o;
}

inline const char* method_name(Method m) { return m == Method::kWootters ? "wootters" : "roof"; }

inline GameSpec load_game(const std::string& spec) {
  if (spec == "bell-statistics") return bell_statistics_game();
  return game_from_json(read_json_file(spec), spec);
}

inline DensityMatrix input_state(const std::string& name) {
  const double h = 1.0 / std::sqrt(2.0);
  if (name == "0") return DensityMatrix(PureState(ket(2, 0), {2}));
  if (name == "1") return DensityMatrix(PureState(ket(2, 1), {2}));
  if (name == "+") return DensityMatrix(PureState((ket(2, 0) + ket(2, 1)) * h, {2}));
  throw ValidationError("--input must be one of 0, 1, +");
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "param,g_abs,q_factor\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", r.param, r.g_abs, r.q_factor);
    out << buf;
  }
}

}  // namespace detail

/// Parses and runs one command. Never throws; returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Effective entanglement under restricted measurements", "effent"};
  app.require_subcommand(1);
  app.fallthrough();
  detail::Globals globals;
  if (const char* env = std::getenv("EFFENT_SEED")) {
    try {
      globals.seed = static_cast<std::uint64_t>(std::stoull(env));
    } catch (const std::exception&) {
      err << "error: EFFENT_SEED is not a non-negative integer\n";
      return kExitValidation;
    }
  }
  double tol_value = 0;
  app.add_option("--seed", globals.seed, "Seed for every stochastic component (default $EFFENT_SEED or 0)");
  auto* tol_opt = app.add_option("--tol", tol_value, "Optimizer tolerance override")->check(CLI::PositiveNumber);

  Json result;
  std::function<void()> action;

  // quality
  auto* quality = app.add_subcommand("quality", "Quality factor of a channel");
  std::string q_channel;
  std::size_t q_d = 2;
  int q_restarts = 0;
  quality->add_option("--channel", q_channel, "Channel spec")->required();
  quality->add_option("--d", q_d, "Dimension")->check(CLI::PositiveNumber);
  quality->add_option("--restarts", q_restarts, "Convex-roof restarts (d > 2)");
  quality->callback([&] {
    action = [&] {
      const auto q = quality_factor_detail(parse_channel_spec(q_channel), q_d, detail::roof_options(globals, q_restarts));
      result = Json{{"q", detail::number_json(q.q)}, {"method", detail::method_name(q.method)}};
    };
  });

  // gconc
  auto* gconc = app.add_subcommand("gconc", "G-concurrence of a bipartite state");
  std::string g_state;
  int g_restarts = 0;
  gconc->add_option("--state", g_state, "State JSON file")->required();
  gconc->add_option("--restarts", g_restarts, "Convex-roof restarts");
  gconc->callback([&] {
    action = [&] {
      const DensityMatrix rho = state_from_json(read_json_file(g_state), g_state);
      if (rho.dims().size() != 2 || rho.dims()[0] != rho.dims()[1]) {
        throw ValidationError(g_state + ": field \"dims\" must be [d, d]");
      }
      const std::size_t d = rho.dims()[0];
      if (rho.is_pure()) {
        result = Json{{"value", detail::number_json(g_concurrence_pure(rho.principal_state(), d, d))}, {"method", "pure"}};
      } else if (d == 2) {
        result = Json{{"value", detail::number_json(concurrence_wootters(rho))}, {"method", "wootters"}};
      } else {
        const RoofResult r = g_concurrence_mixed(rho, d, detail::roof_options(globals, g_restarts));
        result = Json{{"value", detail::number_json(r.value)}, {"method", r.method}, {"kind", "upper_bound"}};
      }
    };
  });

  // effective
  auto* effective = app.add_subcommand("effective", "Effective G-concurrence under local channels");
  std::string e_state, e_cha = "identity", e_chb = "identity";
  int e_restarts = 0;
  effective->add_option("--state", e_state, "State JSON file")->required();
  effective->add_option("--channel-a", e_cha, "Channel spec for party A");
  effective->add_option("--channel-b", e_chb, "Channel spec for party B");
  effective->add_option("--restarts", e_restarts, "Convex-roof restarts");
  effective->callback([&] {
    action = [&] {
      const DensityMatrix rho = state_from_json(read_json_file(e_state), e_state);
      if (rho.dims().size() != 2 || rho.dims()[0] != rho.dims()[1]) {
        throw ValidationError(e_state + ": field \"dims\" must be [d, d]");
      }
      const auto r = effective_g_concurrence(rho, parse_channel_spec(e_cha), parse_channel_spec(e_chb), rho.dims()[0],
                                             detail::roof_options(globals, e_restarts));
      result = Json{{"value", detail::number_json(r.value)}, {"kind", to_string(r.kind)},
                    {"q_a", detail::number_json(r.q_a)}, {"q_b", detail::number_json(r.q_b)},
                    {"g", detail::number_json(r.g)}};
    };
  });

  // game
  auto* game = app.add_subcommand("game", "Seesaw lower bound on the optimal game payoff");
  std::string gm_game, gm_state, gm_cha = "identity", gm_chb = "identity";
  SeesawOptions gm_opts;
  game->add_option("--game", gm_game, "Game JSON file or \"bell-statistics\"")->required();
  game->add_option("--state", gm_state, "Resource state JSON file")->required();
  game->add_option("--channel-a", gm_cha, "Restriction on A's detectors");
  game->add_option("--channel-b", gm_chb, "Restriction on B's detectors");
  game->add_option("--restarts", gm_opts.restarts, "Seesaw restarts");
  game->add_option("--rounds", gm_opts.seesaw_rounds, "Seesaw rounds per restart");
  game->add_option("--inner-iters", gm_opts.inner_iters, "Fixed-point iterations per inner step");
  game->callback([&] {
    action = [&] {
      gm_opts.seed = globals.seed;
      if (globals.tol) gm_opts.tol = *globals.tol;
      const GameSpec spec = detail::load_game(gm_game);
      const DensityMatrix rho = state_from_json(read_json_file(gm_state), gm_state);
      if (rho.dims().size() != 2) throw ValidationError(gm_state + ": field \"dims\" must name two parties");
      const KrausChannel a = parse_channel_spec(gm_cha), b = parse_channel_spec(gm_chb);
      const bool restricted = !(a.is_identity_map() && b.is_identity_map() && a.d_in() == rho.dims()[0] &&
                                b.d_in() == rho.dims()[1]);
      const SeesawResult r = restricted ? restricted_payoff(spec, rho, a, b, gm_opts, true).play
                                        : maximize_payoff(spec, rho, gm_opts);
      result = Json{{"value", detail::number_json(r.value)}, {"rounds", r.rounds}, {"restarts_used", r.restarts_used}};
    };
  });

  // bec
  auto* bec = app.add_subcommand("bec", "Condensate reference frame: g-factor and lifting channel");
  std::string b_dist;
  double b_theta = 0, b_alpha_sq = 100, b_phi = 0;
  std::size_t b_trunc = 0;
  bool b_exact = false;
  std::string b_input = "0";
  bec->add_option("--dist", b_dist, "Phase distribution spec")->required();
  bec->add_option("--theta", b_theta, "Rotation angle theta")->required();
  bec->add_flag("--exact", b_exact, "Also run the truncated Fock-space evolution");
  bec->add_option("--alpha-sq", b_alpha_sq, "Mean condensate occupation (with --exact)");
  bec->add_option("--trunc", b_trunc, "Fock cutoff of the condensate mode (with --exact)");
  bec->add_option("--phi", b_phi, "Condensate phase (with --exact)");
  bec->add_option("--input", b_input, "Input qubit state 0, 1 or + (with --exact)");
  bec->callback([&] {
    action = [&] {
      const PhaseDistribution dist = parse_dist_spec(b_dist);
      const Complex g = g_factor(dist);
      result = Json{{"distribution", dist.describe()},
                    {"g", complex_to_json(g)},
                    {"g_abs", detail::number_json(std::abs(g))},
                    {"q", detail::number_json(quality_factor(ssr_lifting_channel(dist, b_theta), 2))}};
      if (b_exact) {
        const BecParams params{b_alpha_sq, b_theta};
        const std::size_t trunc = b_trunc ? b_trunc : min_truncation(b_alpha_sq) + 10;
        const DensityMatrix in = detail::input_state(b_input);
        const BecSimulation sim = simulate_bec_exact(params, b_phi, trunc, in);
        const ComplexMatrix u = bec_limit_map(b_theta, b_phi);
        result["exact"] = Json{{"alpha_sq", detail::number_json(b_alpha_sq)},
                               {"trunc", trunc},
                               {"state", matrix_to_json(sim.state.matrix())},
                               {"leakage", detail::number_json(sim.leakage)},
                               {"norm_loss", detail::number_json(sim.norm_loss)},
                               {"trace_distance_to_limit",
                                detail::number_json(trace_distance(sim.state.matrix(), u * in.matrix() * u.adjoint()))}};
      }
    };
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "|g| and Q over a family of phase distributions (CSV)");
  std::string s_family, s_grid, s_out;
  double s_mu = 0, s_w = 0.4, s_theta = 0;
  sweep->add_option("--family", s_family, "wrapped-normal, double-rect or delta")->required();
  sweep->add_option("--sigma,--delta,--phi", s_grid, "Grid start:stop:step or a comma list")->required();
  sweep->add_option("--mu", s_mu, "Mean phase (wrapped-normal)");
  sweep->add_option("--w", s_w, "Block width (double-rect)");
  sweep->add_option("--theta", s_theta, "Rotation angle of the lifting channel");
  sweep->add_option("--out", s_out, "CSV file (default: standard output)");
  sweep->callback([&] {
    action = [&] {
      std::function<PhaseDistribution(double)> family;
      if (s_family == "wrapped-normal") {
        family = [&](double s) { return PhaseDistribution::wrapped_normal(s_mu, s); };
      } else if (s_family == "double-rect") {
        family = [&](double d) { return PhaseDistribution::double_rect(s_w, d); };
      } else if (s_family == "delta") {
        family = [](double p) { return PhaseDistribution::delta(p); };
      } else {
        throw ValidationError("--family: unknown family \"" + s_family + "\"");
      }
      const auto rows = g_sweep(family, detail::grid(s_grid, "sweep grid"), s_theta);
      if (s_out.empty()) {
        detail::write_sweep_csv(out, rows);
        return;
      }
      std::ofstream file(s_out);
      if (!file) throw ValidationError("--out: cannot write " + s_out);
      detail::write_sweep_csv(file, rows);
      result = Json{{"rows", rows.size()}, {"out", s_out}};
    };
  });

  // selftest
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance checks");
  std::vector<int> st_ids;
  selftest_cmd->add_option("--criterion", st_ids, "Run only these criteria");
  int exit_override = kExitOk;
  selftest_cmd->callback([&] {
    action = [&] {
      std::vector<selftest::CriterionResult> runs;
      if (st_ids.empty()) {
        runs = selftest::run_all();
      } else {
        for (int id : st_ids) runs.push_back(selftest::run_one(id));
      }
      Json list = Json::array();
      bool all = true;
      for (const auto& r : runs) {
        all = all && r.passed;
        list.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      }
      result = Json{{"passed", all}, {"criteria", std::move(list)}};
      if (!all) exit_override = kExitNumerical;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  if (*tol_opt) globals.tol = tol_value;

  try {
    if (action) action();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad JSON input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  if (!result.is_null()) out << result.dump() << "\n";
  return exit_override;
}

}  // namespace effent::cli
