#include "storygame/cli.hpp"

#include "numbers.hpp"
#include "storygame/efg_io.hpp"
#include "storygame/extraction.hpp"
#include "storygame/fixtures.hpp"
#include "storygame/generation_client.hpp"
#include "storygame/narrative.hpp"
#include "storygame/qre.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace storygame::cli {

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Sink {
  std::string path;
  std::ostream& fallback;

  void write(const std::string& bytes) const {
    if (path.empty() || path == "-") {
      fallback << bytes;
      return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << bytes)) throw Error(ErrorCode::IoError, "cannot write " + path);
  }
};

struct InputOptions {
  std::string path;
  std::string format;  // "", "efg", "json"

  Game load() const {
    const std::string text = read_file(path);
    std::string fmt = format;
    if (fmt.empty()) {
      if (path.size() > 4 && path.ends_with(".efg")) fmt = "efg";
      if (path.size() > 5 && path.ends_with(".json")) fmt = "json";
    }
    if (fmt == "efg") return parse_efg(text);
    if (fmt == "json") return parse_json(text);
    return parse_game(text);
  }
};

struct SolverOptions {
  double tol = 1e-10;
  double lambda_start = 0.01;
  double lambda_factor = 1.25;
  std::size_t lambda_steps = 60;
  double purify_delta = 1e-3;

  TraceOptions trace() const {
    if (!(lambda_start > 0.0) || !(lambda_factor > 1.0) || lambda_steps == 0)
      throw Error(ErrorCode::Usage, "need --lambda-start > 0, --lambda-factor > 1 and --lambda-steps >= 1");
    if (!(purify_delta > 0.0 && purify_delta < 0.5)) throw Error(ErrorCode::Usage, "--purify-delta must be in (0, 0.5)");
    if (!(tol > 0.0)) throw Error(ErrorCode::Usage, "--tol must be positive");
    TraceOptions o;
    o.tol = tol;
    o.schedule.start = lambda_start;
    o.schedule.factor = lambda_factor;
    o.schedule.steps = lambda_steps;
    o.purify_delta = purify_delta;
    return o;
  }
};

void add_input(CLI::App& cmd, InputOptions& in) {
  cmd.add_option("input", in.path, "Game file (.efg or .json)")->required();
  cmd.add_option("--format", in.format, "Input format; detected from extension or content when omitted")
      ->check(CLI::IsMember({"efg", "json"}));
}

void add_solver(CLI::App& cmd, SolverOptions& s) {
  cmd.add_option("--tol", s.tol, "Fixed-point residual tolerance")->capture_default_str();
  cmd.add_option("--lambda-start", s.lambda_start, "First positive lambda")->capture_default_str();
  cmd.add_option("--lambda-factor", s.lambda_factor, "Geometric ladder factor")->capture_default_str();
  cmd.add_option("--lambda-steps", s.lambda_steps, "Number of positive rungs")->capture_default_str();
  cmd.add_option("--purify-delta", s.purify_delta, "Purification threshold")->capture_default_str();
}

ordered_json numbers(const std::vector<double>& v) {
  ordered_json out = ordered_json::array();
  for (double x : v) out.push_back(x);
  return out;
}

ordered_json profile_json(const Game& game, const BehavioralProfile& profile) {
  ordered_json out = ordered_json::array();
  for (const auto& set : game.infosets()) {
    ordered_json probs = ordered_json::object();
    for (std::size_t a = 0; a < set.actions.size(); ++a) probs[set.actions[a]] = profile[set.id][a];
    out.push_back({{"infoset", set.id},
                   {"name", set.name},
                   {"player", game.players()[set.owner].name},
                   {"probs", std::move(probs)}});
  }
  return out;
}

std::string profile_text(const Game& game, const BehavioralProfile& profile) {
  std::string out;
  for (const auto& set : game.infosets()) {
    out += game.players()[set.owner].name + " [" + (set.name.empty() ? std::to_string(set.id) : set.name) + "]:";
    for (std::size_t a = 0; a < set.actions.size(); ++a)
      out += " " + set.actions[a] + "=" + detail::fixed(profile[set.id][a], 6);
    out += "\n";
  }
  return out;
}

std::string report_json(const Game& game, const SolveReport& r) {
  ordered_json doc;
  doc["game"] = game.title();
  doc["players"] = ordered_json::array();
  for (const auto& p : game.players()) doc["players"].push_back(p.name);
  doc["final_profile"] = profile_json(game, r.final_profile);
  doc["last_interior"] = profile_json(game, r.last_interior);
  doc["purified"] = r.purified;
  doc["stopped_on_stability"] = r.stopped_on_stability;
  doc["verification"] = {{"is_epsilon_nash", r.verification.is_epsilon_nash},
                         {"epsilon", r.verification.epsilon},
                         {"max_regret", r.verification.max_regret},
                         {"regret", numbers(r.verification.regret)},
                         {"root_value", numbers(r.verification.root_value)}};
  doc["iterations"] = r.iterations;
  doc["issues"] = ordered_json::array();
  for (const auto& i : r.issues)
    doc["issues"].push_back({{"code", to_string(i.code)}, {"lambda", i.lambda}, {"message", i.message}});
  doc["trace"] = ordered_json::array();
  for (const auto& t : r.trace)
    doc["trace"].push_back({{"lambda", t.lambda},
                            {"residual", t.residual},
                            {"iterations", t.iterations},
                            {"converged", t.converged}});
  return doc.dump(2) + "\n";
}

std::string report_csv(const Game& game, const SolveReport& r) {
  std::string out = "lambda,residual,iterations,converged";
  for (const auto& set : game.infosets())
    for (const auto& a : set.actions) out += ",p_" + std::to_string(set.id) + "_" + a;
  out += "\n";
  for (const auto& t : r.trace) {
    out += detail::shortest(t.lambda) + "," + detail::shortest(t.residual) + "," + std::to_string(t.iterations) + "," +
           (t.converged ? "1" : "0");
    for (const auto& v : t.profile.data())
      for (double p : v) out += "," + detail::shortest(p);
    out += "\n";
  }
  return out;
}

std::string report_text(const Game& game, const SolveReport& r) {
  std::string out = profile_text(game, r.final_profile);
  out += std::string("verified: ") + (r.verified ? "true" : "false") +
         ", max regret " + detail::shortest(r.verification.max_regret) + "\n";
  for (const auto& i : r.issues) out += "note: " + std::string(to_string(i.code)) + " " + i.message + "\n";
  return out;
}

StorySpec load_story(const std::string& path) { return parse_story(read_file(path)); }

std::string trimmed(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Story games: extensive-form models of plots, their equilibria and their shape"};
  app.name("storygame");
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  InputOptions input;
  SolverOptions solver;
  std::string output;
  std::string out_format;

  auto* convert = app.add_subcommand("convert", "Convert between .efg and .json");
  add_input(*convert, input);
  convert->add_option("--to", out_format, "Target format")->required()->check(CLI::IsMember({"efg", "json"}));
  convert->add_option("-o,--output", output, "Output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Trace the logit equilibrium path and purify its limit");
  add_input(*solve, input);
  add_solver(*solve, solver);
  std::string solve_out = "text";
  solve->add_option("--out", solve_out, "text: final profile and verdict; json: full report; csv: lambda trace")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  solve->add_option("-o,--output", output, "Output file (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "Values, beliefs and regrets under the solved equilibrium");
  add_input(*analyze, input);
  add_solver(*analyze, solver);
  std::uint64_t seed = 1;
  std::size_t rollouts = 0;
  analyze->add_option("--seed", seed, "Seed for the Monte-Carlo check")->capture_default_str();
  analyze->add_option("--monte-carlo", rollouts, "Rollouts for a Monte-Carlo root-value check (0 = off)");
  analyze->add_option("-o,--output", output, "Output file (default stdout)");

  std::string story_file;
  double rationalize_tol = 1e-6;
  auto* rationalize = app.add_subcommand("rationalize", "Does the equilibrium give the story positive probability?");
  add_input(*rationalize, input);
  add_solver(*rationalize, solver);
  rationalize->add_option("--story", story_file, "Story path JSON")->required();
  rationalize->add_option("--threshold", rationalize_tol, "Minimum path probability")->capture_default_str();

  auto* shape = app.add_subcommand("shape", "Value, surprise and suspense along the story path");
  add_input(*shape, input);
  add_solver(*shape, solver);
  shape->add_option("--story", story_file, "Story path JSON")->required();
  std::string shape_out = "csv";
  shape->add_option("--out", shape_out, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));
  bool decisions = false;
  shape->add_flag("--decisions-only", decisions, "Keep only the root, decision nodes and the ending");
  shape->add_option("-o,--output", output, "Output file (default stdout)");

  auto* extract = app.add_subcommand(
      "extract", std::string("Elicit a game from story text; the http client reads its credential from ") +
                     kApiKeyEnv);
  std::string client_kind = "fixture", fixtures_dir, protocol_file, hints_file, draft_file;
  HttpClientConfig http;
  long timeout_s = 60;
  extract->add_option("--story-file", story_file, "Story text")->required();
  extract->add_option("--protocol", protocol_file, "Protocol JSON")->required();
  extract->add_option("--hints", hints_file, "Topology hints JSON; without it only the draft is written");
  extract->add_option("--client", client_kind, "Generation client")->check(CLI::IsMember({"fixture", "http"}));
  extract->add_option("--fixtures-dir", fixtures_dir, "Recorded request/response pairs (fixture client)");
  extract->add_option("--endpoint", http.endpoint, "Server base URL (http client)")->capture_default_str();
  extract->add_option("--model", http.model, "Model name (http client)")->capture_default_str();
  extract->add_option("--timeout", timeout_s, "Seconds per request (http client)")->capture_default_str();
  extract->add_option("--retries", http.retries, "Retries per request (http client)")->capture_default_str();
  extract->add_option("--draft", draft_file, "Also write the draft JSON here");
  std::string extract_out = "efg";
  extract->add_option("--out", extract_out, "Compiled game format")->check(CLI::IsMember({"efg", "json"}));
  extract->add_option("-o,--output", output, "Output file (default stdout)");

  std::string emit_dir;
  auto* emit = app.add_subcommand("fixtures", "Write the bundled fixture files");
  emit->add_option("directory", emit_dir, "Destination directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  const Sink sink{output, out};
  try {
    if (convert->parsed()) {
      const Game game = input.load();
      sink.write(write_game(game, out_format == "efg" ? GameFormat::Efg : GameFormat::Json));
    } else if (solve->parsed()) {
      const Game game = input.load();
      const SolveReport r = trace_lle(game, solver.trace());
      if (solve_out == "json")
        sink.write(report_json(game, r));
      else if (solve_out == "csv")
        sink.write(report_csv(game, r));
      else
        sink.write(report_text(game, r));
    } else if (analyze->parsed()) {
      const Game game = input.load();
      const SolveReport r = trace_lle(game, solver.trace());
      const auto values = value_function(game, r.final_profile);
      std::string text = "equilibrium\n" + profile_text(game, r.final_profile);
      text += "root value:";
      for (std::size_t i = 0; i < game.players().size(); ++i)
        text += " " + game.players()[i].name + "=" + detail::shortest(values[game.root()][i]);
      text += "\n";
      const auto q = all_action_values(game, r.final_profile);
      for (const auto& set : game.infosets()) {
        const auto beliefs = infoset_beliefs_or_uniform(game, r.final_profile, set.id);
        text += "infoset " + std::to_string(set.id) + " (" + game.players()[set.owner].name + ")";
        if (beliefs.uniform_fallback) text += " unreached";
        text += "\n  beliefs:";
        for (std::size_t k = 0; k < set.members.size(); ++k)
          text += " " + std::to_string(set.members[k]) + "=" + detail::fixed(beliefs.probs[k], 9);
        text += "\n  action values:";
        for (std::size_t a = 0; a < set.actions.size(); ++a)
          text += " " + set.actions[a] + "=" + detail::fixed(q[set.id].values[a], 9);
        text += "\n";
      }
      text += "regret:";
      for (std::size_t i = 0; i < game.players().size(); ++i)
        text += " " + game.players()[i].name + "=" + detail::shortest(r.verification.regret[i]);
      text += std::string("\nverified: ") + (r.verified ? "true" : "false") + "\n";
      if (rollouts > 0) {
        const auto mc = monte_carlo_root_value(game, r.final_profile, rollouts, seed);
        text += "monte carlo (" + std::to_string(rollouts) + " rollouts, seed " + std::to_string(seed) + "):";
        for (std::size_t i = 0; i < game.players().size(); ++i)
          text += " " + game.players()[i].name + "=" + detail::fixed(mc.mean[i], 6) + "±" +
                  detail::fixed(mc.standard_error[i], 6);
        text += "\n";
      }
      for (const auto& w : game.warnings()) text += "warning: " + w.message + "\n";
      sink.write(text);
    } else if (rationalize->parsed()) {
      const Game game = input.load();
      const PathTrace path = story_path(game, load_story(story_file));
      const SolveReport r = trace_lle(game, solver.trace());
      const double p = path_probability(game, r.final_profile, path);
      const bool yes = rationalizes(game, r.final_profile, path, rationalize_tol);
      out << "rationalized: " << (yes ? "true" : "false") << ", path probability " << detail::shortest(p) << "\n";
    } else if (shape->parsed()) {
      const Game game = input.load();
      const PathTrace path = story_path(game, load_story(story_file));
      const SolveReport r = trace_lle(game, solver.trace());
      ShapeSeries series = shape_curve(game, r.final_profile, path);
      if (decisions) series = decisions_only(series);
      const ShapeFormat f = shape_out == "json" ? ShapeFormat::Json : shape_out == "svg" ? ShapeFormat::Svg : ShapeFormat::Csv;
      sink.write(export_shape(series, f));
    } else if (extract->parsed()) {
      const std::string story = trimmed(read_file(story_file));
      const auto protocol = parse_protocol(read_file(protocol_file));
      std::unique_ptr<GenerationClient> client;
      if (client_kind == "fixture") {
        if (fixtures_dir.empty()) throw Error(ErrorCode::Usage, "--client fixture needs --fixtures-dir");
        client = std::make_unique<FixtureClient>(fixtures_dir);
      } else {
        http.timeout = std::chrono::seconds(timeout_s);
        client = std::make_unique<HttpClient>(http);
      }
      const GameDraft draft = build_draft(story, protocol, *client);
      if (!draft_file.empty()) Sink{draft_file, out}.write(draft_to_json(draft));
      if (hints_file.empty()) {
        if (draft_file.empty()) sink.write(draft_to_json(draft));
      } else {
        const CompiledGame compiled = compile_draft(draft, parse_hints(read_file(hints_file)));
        sink.write(write_game(compiled.game, extract_out == "json" ? GameFormat::Json : GameFormat::Efg));
      }
      for (const auto& gap : draft.gaps) err << "gap: " << gap.field << " (" << gap.reason << ")\n";
    } else if (emit->parsed()) {
      fixtures::emit(emit_dir);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (const auto* v = dynamic_cast<const ValidationError*>(&e))
      for (const auto& d : v->diagnostics()) err << "  " << d.message << "\n";
    return e.code() == ErrorCode::Usage ? kUsageError : kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kOk;
}

}  // namespace storygame::cli
