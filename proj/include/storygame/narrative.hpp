#pragma once

#include "storygame/eval.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace storygame {

/// The realized plot: one branch label per step from the root, plus optional
/// prose per step.
struct StorySpec {
  std::vector<std::string> characters;
  std::vector<std::string> actions;
  std::vector<std::string> annotations;
};

/// `{"schema": 1, "characters": [...], "actions": [...], "annotations": [...]}`.
/// Throws SchemaError.
StorySpec parse_story(std::string_view json);
std::string write_story(const StorySpec& story);

/// Resolves a labelled action sequence to a root-to-leaf path. Throws
/// AmbiguousLabel, NoSuchBranch or PathEndsEarly.
PathTrace story_path(const Game& game, const StorySpec& story);

/// A game rationalizes a story when the story's path has probability above
/// `tol` under the game's equilibrium.
bool rationalizes(const Game& game, const BehavioralProfile& equilibrium, const PathTrace& path, double tol = 1e-6);

struct ShapeStep {
  NodeId node = 0;
  NodeKind kind = NodeKind::Terminal;
  std::string label;  ///< branch taken to arrive here; empty at the root
  std::vector<double> value;
  std::vector<double> surprise;
  std::vector<double> suspense;
};

struct ShapeSeries {
  std::vector<std::string> characters;
  std::vector<ShapeStep> steps;
};

/// |V_i(n_t) − V_i(n_{t−1})| per step, zero at step 0.
std::vector<std::vector<double>> surprise(const Game& game, const BehavioralProfile& profile, const PathTrace& path);

/// Standard deviation of the next-node value under the profile, zero at
/// terminals.
std::vector<std::vector<double>> suspense(const Game& game, const BehavioralProfile& profile, const PathTrace& path);

/// Value function sampled along the path, annotated with surprise and suspense.
ShapeSeries shape_curve(const Game& game, const BehavioralProfile& profile, const PathTrace& path);

/// Story-level totals: per-character sums over the series.
std::vector<double> total_surprise(const ShapeSeries& series);
std::vector<double> total_suspense(const ShapeSeries& series);

/// Keeps the root, decision nodes and the final step.
ShapeSeries decisions_only(const ShapeSeries& series);

enum class ShapeFormat { Csv, Json, Svg };

std::string export_shape(const ShapeSeries& series, ShapeFormat format);

}  // namespace storygame
