#include "storygame/efg_io.hpp"
#include "storygame/extraction.hpp"
#include "storygame/fixtures.hpp"
#include "storygame/generation_client.hpp"
#include "storygame/narrative.hpp"
#include "storygame/normal_form.hpp"
#include "storygame/qre.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace storygame;

namespace {

using Probs = std::vector<std::vector<double>>;

BehavioralProfile profile_of(const Game& game, const Probs& probs) {
  BehavioralProfile p(probs);
  check_profile(game, p, 1e-9);
  return p;
}

PathTrace path_of(const Game& game, const std::vector<std::string>& actions) {
  return story_path(game, StorySpec{{}, actions, {}});
}

py::dict solve(const Game& game, double tol, double lambda_start, double lambda_factor, std::size_t lambda_steps,
               double purify_delta) {
  TraceOptions opt;
  opt.tol = tol;
  opt.schedule.start = lambda_start;
  opt.schedule.factor = lambda_factor;
  opt.schedule.steps = lambda_steps;
  opt.purify_delta = purify_delta;
  SolveReport r;
  {
    py::gil_scoped_release release;
    r = trace_lle(game, opt);
  }
  py::list issues, trace;
  for (const auto& i : r.issues)
    issues.append(py::dict(py::arg("code") = std::string(to_string(i.code)), py::arg("lambda") = i.lambda,
                           py::arg("message") = i.message));
  for (const auto& t : r.trace)
    trace.append(py::dict(py::arg("lambda") = t.lambda, py::arg("residual") = t.residual,
                          py::arg("converged") = t.converged, py::arg("profile") = t.profile.data()));
  py::dict out;
  out["final_profile"] = r.final_profile.data();
  out["last_interior"] = r.last_interior.data();
  out["purified"] = r.purified;
  out["stopped_on_stability"] = r.stopped_on_stability;
  out["verified"] = r.verified;
  out["max_regret"] = r.verification.max_regret;
  out["issues"] = issues;
  out["trace"] = trace;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Extensive-form story games: parsing, logit equilibria and narrative shape";

  py::register_exception<Error>(m, "StoryGameError", PyExc_ValueError);

  py::class_<Game>(m, "Game")
      .def_property_readonly("title", &Game::title)
      .def_property_readonly("num_nodes", &Game::num_nodes)
      .def_property_readonly("num_infosets", &Game::num_infosets)
      .def_property_readonly("players",
                             [](const Game& g) {
                               std::vector<std::string> names;
                               for (const auto& p : g.players()) names.push_back(p.name);
                               return names;
                             })
      .def_property_readonly("infosets",
                             [](const Game& g) {
                               py::list out;
                               for (const auto& s : g.infosets())
                                 out.append(py::dict(py::arg("id") = s.id, py::arg("player") = g.player(s.owner).name,
                                                     py::arg("name") = s.name, py::arg("members") = s.members,
                                                     py::arg("actions") = s.actions));
                               return out;
                             })
      .def("to_efg", [](const Game& g) { return write_efg(g); })
      .def("to_json", [](const Game& g) { return write_json(g); })
      .def("reroot", [](const Game& g, NodeId node) { return reroot(g, node); }, py::arg("node"))
      .def("uniform_profile", [](const Game& g) { return BehavioralProfile::uniform(g).data(); })
      .def("__repr__", [](const Game& g) {
        return "<Game '" + g.title() + "' with " + std::to_string(g.num_nodes()) + " nodes>";
      });

  m.def("parse_efg", [](const std::string& text) { return parse_efg(text); }, py::arg("text"));
  m.def("parse_json", [](const std::string& text) { return parse_json(text); }, py::arg("text"));
  m.def("parse_game", [](const std::string& text) { return parse_game(text); }, py::arg("text"),
        "Parse .efg or JSON, detected from the content.");
  m.def("same_structure", [](const Game& a, const Game& b) { return !structural_difference(a, b).has_value(); });

  m.def("romeo_juliet_game1", &fixtures::romeo_juliet_game1);
  m.def("romeo_juliet_game2", &fixtures::romeo_juliet_game2);
  m.def("actual_story", [] { return fixtures::actual_story().actions; });

  m.def("solve", &solve, py::arg("game"), py::arg("tol") = 1e-10, py::arg("lambda_start") = 0.01,
        py::arg("lambda_factor") = 1.25, py::arg("lambda_steps") = 60, py::arg("purify_delta") = 1e-3,
        "Trace the logit equilibrium path and return the purified limit with its trace.");
  m.def("qre_fixed_point",
        [](const Game& g, double lambda, const Probs& init, double tol) {
          const auto r = qre_fixed_point(g, lambda, profile_of(g, init), tol);
          return py::make_tuple(r.profile.data(), r.residual, r.converged);
        },
        py::arg("game"), py::arg("lambda_"), py::arg("init"), py::arg("tol") = 1e-10);
  m.def("purify", [](const Probs& p, double delta) { return purify(BehavioralProfile(p), delta).data(); },
        py::arg("profile"), py::arg("delta") = 1e-3);

  m.def("value_function", [](const Game& g, const Probs& p) { return value_function(g, profile_of(g, p)); });
  m.def("verify_nash",
        [](const Game& g, const Probs& p, double epsilon) {
          const auto r = verify_nash(g, profile_of(g, p), epsilon);
          return py::make_tuple(r.is_epsilon_nash, r.max_regret, r.regret);
        },
        py::arg("game"), py::arg("profile"), py::arg("epsilon") = 1e-6);
  m.def("pure_nash",
        [](const Game& g) {
          const NormalForm nf = to_normal_form(g);
          std::vector<Probs> out;
          for (const auto& pure : enumerate_pure_nash(nf)) out.push_back(to_behavioral(g, nf, pure).data());
          return out;
        },
        "Pure equilibria of the reduced normal form, as behavioral profiles.");

  m.def("story_path", [](const Game& g, const std::vector<std::string>& actions) { return path_of(g, actions).nodes; });
  m.def("path_probability", [](const Game& g, const Probs& p, const std::vector<std::string>& actions) {
    return path_probability(g, profile_of(g, p), path_of(g, actions));
  });
  m.def("rationalizes",
        [](const Game& g, const Probs& p, const std::vector<std::string>& actions, double tol) {
          return rationalizes(g, profile_of(g, p), path_of(g, actions), tol);
        },
        py::arg("game"), py::arg("profile"), py::arg("actions"), py::arg("tol") = 1e-6);
  m.def("surprise", [](const Game& g, const Probs& p, const std::vector<std::string>& actions) {
    return surprise(g, profile_of(g, p), path_of(g, actions));
  });
  m.def("suspense", [](const Game& g, const Probs& p, const std::vector<std::string>& actions) {
    return suspense(g, profile_of(g, p), path_of(g, actions));
  });
  m.def("shape",
        [](const Game& g, const Probs& p, const std::vector<std::string>& actions, const std::string& format) {
          const ShapeFormat f = format == "json" ? ShapeFormat::Json : format == "svg" ? ShapeFormat::Svg : ShapeFormat::Csv;
          return export_shape(shape_curve(g, profile_of(g, p), path_of(g, actions)), f);
        },
        py::arg("game"), py::arg("profile"), py::arg("actions"), py::arg("format") = "csv");

  m.def("parse_options", [](const std::string& text, std::size_t k) { return parse_options(text, k); });
  m.def("parse_probability", [](const std::string& text) { return parse_probability(text); });
  m.def("parse_score", [](const std::string& text) { return parse_score(text); });
  m.def("extract_offline",
        [](const std::string& story, const std::string& protocol, const std::string& hints,
           const std::string& recordings) {
          FixtureClient client{std::filesystem::path(recordings)};
          const GameDraft draft = build_draft(story, parse_protocol(protocol), client);
          return compile_draft(draft, parse_hints(hints)).game;
        },
        py::arg("story"), py::arg("protocol"), py::arg("hints"), py::arg("recordings"),
        "Build and compile a draft from recorded replies; no network access.");
}
