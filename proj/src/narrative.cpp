#include "storygame/narrative.hpp"

#include "numbers.hpp"
#include "storygame/efg_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace storygame {

StorySpec parse_story(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "story must be an object");
  if (doc.contains("schema") && doc["schema"] != 1) throw SchemaError("/schema", "expected schema 1");
  auto strings = [&](const char* key, bool required) {
    std::vector<std::string> out;
    const std::string at = std::string("/") + key;
    if (!doc.contains(key)) {
      if (required) throw SchemaError(at, "missing array");
      return out;
    }
    if (!doc[key].is_array()) throw SchemaError(at, "expected an array of strings");
    for (std::size_t i = 0; i < doc[key].size(); ++i) {
      if (!doc[key][i].is_string()) throw SchemaError(at + "/" + std::to_string(i), "expected a string");
      out.push_back(doc[key][i].get<std::string>());
    }
    return out;
  };
  StorySpec story;
  story.characters = strings("characters", false);
  story.actions = strings("actions", true);
  story.annotations = strings("annotations", false);
  return story;
}

std::string write_story(const StorySpec& story) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["characters"] = story.characters;
  doc["actions"] = story.actions;
  doc["annotations"] = story.annotations;
  return doc.dump(2) + "\n";
}

PathTrace story_path(const Game& game, const StorySpec& story) {
  PathTrace path;
  path.nodes.push_back(game.root());
  for (const auto& label : story.actions) {
    const Node& at = game.node(path.nodes.back());
    const auto matches = std::count_if(at.children.begin(), at.children.end(),
                                       [&](const Edge& e) { return e.label == label; });
    if (matches == 0)
      throw Error(ErrorCode::NoSuchBranch, "no branch '" + label + "' at node " + std::to_string(at.id) +
                                               (at.name.empty() ? "" : " ('" + at.name + "')"));
    if (matches > 1)
      throw Error(ErrorCode::AmbiguousLabel, "label '" + label + "' matches several branches at node " +
                                                 std::to_string(at.id));
    path.nodes.push_back(*game.child_by_label(at.id, label));
    path.labels.push_back(label);
  }
  if (!game.node(path.nodes.back()).is_terminal())
    throw Error(ErrorCode::PathEndsEarly, "story ends at non-terminal node " + std::to_string(path.nodes.back()));
  return path;
}

bool rationalizes(const Game& game, const BehavioralProfile& equilibrium, const PathTrace& path, double tol) {
  return path_probability(game, equilibrium, path) > tol;
}

namespace {

std::vector<std::vector<double>> surprise_from(const ValueTable& values, const PathTrace& path, std::size_t players) {
  std::vector<std::vector<double>> out(path.nodes.size(), std::vector<double>(players, 0.0));
  for (std::size_t t = 1; t < path.nodes.size(); ++t)
    for (std::size_t i = 0; i < players; ++i)
      out[t][i] = std::abs(values[path.nodes[t]][i] - values[path.nodes[t - 1]][i]);
  return out;
}

std::vector<std::vector<double>> suspense_from(const Game& game, const BehavioralProfile& profile,
                                               const ValueTable& values, const PathTrace& path) {
  const std::size_t players = game.num_players();
  std::vector<std::vector<double>> out(path.nodes.size(), std::vector<double>(players, 0.0));
  for (std::size_t t = 0; t < path.nodes.size(); ++t) {
    const Node& node = game.node(path.nodes[t]);
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      const double p = branch_probability(game, profile, node.id, c);
      for (std::size_t i = 0; i < players; ++i) {
        const double d = values[node.children[c].child][i] - values[node.id][i];
        out[t][i] += p * d * d;
      }
    }
    for (double& v : out[t]) v = std::sqrt(v);
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> surprise(const Game& game, const BehavioralProfile& profile, const PathTrace& path) {
  check_path(game, path);
  return surprise_from(value_function(game, profile), path, game.num_players());
}

std::vector<std::vector<double>> suspense(const Game& game, const BehavioralProfile& profile, const PathTrace& path) {
  check_path(game, path);
  return suspense_from(game, profile, value_function(game, profile), path);
}

ShapeSeries shape_curve(const Game& game, const BehavioralProfile& profile, const PathTrace& path) {
  check_path(game, path);
  const ValueTable values = value_function(game, profile);
  const auto up = surprise_from(values, path, game.num_players());
  const auto spread = suspense_from(game, profile, values, path);
  ShapeSeries series;
  for (const auto& p : game.players()) series.characters.push_back(p.name);
  for (std::size_t t = 0; t < path.nodes.size(); ++t) {
    const NodeId id = path.nodes[t];
    series.steps.push_back(
        {id, game.node(id).kind, t == 0 ? std::string{} : path.labels[t - 1], values[id], up[t], spread[t]});
  }
  return series;
}

namespace {

std::vector<double> column_sum(const ShapeSeries& series, std::vector<double> ShapeStep::*field) {
  std::vector<double> total(series.characters.size(), 0.0);
  for (const auto& step : series.steps)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += (step.*field)[i];
  return total;
}

}  // namespace

std::vector<double> total_surprise(const ShapeSeries& series) { return column_sum(series, &ShapeStep::surprise); }
std::vector<double> total_suspense(const ShapeSeries& series) { return column_sum(series, &ShapeStep::suspense); }

ShapeSeries decisions_only(const ShapeSeries& series) {
  ShapeSeries out;
  out.characters = series.characters;
  for (std::size_t t = 0; t < series.steps.size(); ++t)
    if (t == 0 || t + 1 == series.steps.size() || series.steps[t].kind == NodeKind::Decision)
      out.steps.push_back(series.steps[t]);
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const ShapeSeries& series) {
  std::ostringstream out;
  out << "step,label";
  for (const char* prefix : {"value_", "surprise_", "suspense_"})
    for (const auto& c : series.characters) out << ',' << csv_field(prefix + c);
  out << '\n';
  for (std::size_t t = 0; t < series.steps.size(); ++t) {
    const auto& s = series.steps[t];
    out << t << ',' << csv_field(s.label);
    for (const auto* column : {&s.value, &s.surprise, &s.suspense})
      for (double v : *column) out << ',' << detail::shortest(v);
    out << '\n';
  }
  return out.str();
}

std::string to_json(const ShapeSeries& series) {
  nlohmann::ordered_json doc;
  doc["characters"] = series.characters;
  doc["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : series.steps) {
    nlohmann::ordered_json step;
    step["node"] = s.node;
    step["kind"] = std::string(to_string(s.kind));
    step["label"] = s.label;
    step["value"] = s.value;
    step["surprise"] = s.surprise;
    step["suspense"] = s.suspense;
    doc["steps"].push_back(std::move(step));
  }
  doc["total_surprise"] = total_surprise(series);
  doc["total_suspense"] = total_suspense(series);
  return doc.dump(2) + "\n";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string to_svg(const ShapeSeries& series) {
  constexpr double width = 640, height = 360, left = 60, right = 130, top = 20, bottom = 50;
  static const char* palette[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#17a589"};
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& s : series.steps)
    for (double v : s.value) {
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const std::size_t n = series.steps.size();
  auto x_at = [&](std::size_t t) { return left + (n > 1 ? plot_w * static_cast<double>(t) / static_cast<double>(n - 1) : plot_w / 2); };
  auto y_at = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  for (double v : {lo, hi})
    out << "<text x=\"" << left - 6 << "\" y=\"" << detail::fixed(y_at(v) + 4, 2)
        << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fixed(v, 2) << "</text>\n";
  for (std::size_t t = 0; t < n; ++t)
    out << "<text x=\"" << detail::fixed(x_at(t), 2) << "\" y=\"" << top + plot_h + 16
        << "\" font-size=\"10\" text-anchor=\"middle\">" << xml_escape(series.steps[t].label.empty() ? "start" : series.steps[t].label)
        << "</text>\n";
  for (std::size_t i = 0; i < series.characters.size(); ++i) {
    const char* color = palette[i % std::size(palette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t t = 0; t < n; ++t)
      out << (t ? " " : "") << detail::fixed(x_at(t), 2) << ',' << detail::fixed(y_at(series.steps[t].value[i]), 2);
    out << "\"/>\n";
    out << "<text x=\"" << left + plot_w + 10 << "\" y=\"" << top + 14 + 16 * static_cast<double>(i)
        << "\" font-size=\"12\" fill=\"" << color << "\">" << xml_escape(series.characters[i]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string export_shape(const ShapeSeries& series, ShapeFormat format) {
  switch (format) {
    case ShapeFormat::Csv: return to_csv(series);
    case ShapeFormat::Json: return to_json(series);
    case ShapeFormat::Svg: return to_svg(series);
  }
  return {};
}

}  // namespace storygame
