#pragma once

#include "storygame/game.hpp"

#include <string>
#include <string_view>

namespace storygame {

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string expected, const std::string& found)
      : Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                          ": expected " + expected + ", found " + found),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : Error(ErrorCode::SchemaError, (pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}

  /// JSON pointer of the offending value.
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Parses the `.efg` extensive-form text format:
///
///     EFG 2 R "<title>" { "<p1>" "<p2>" ... }
///     "<optional comment>"
///     c "<name>" <iset#> "<iset-name>" { "<label>" <prob> ... } <outcome#>
///     p "<name>" <player#> <iset#> "<iset-name>" { "<label>" ... } <outcome#>
///     t "<name>" <outcome#> "<outcome-name>" { <payoff>, <payoff>, ... }
///
/// Records appear in depth-first pre-order. Players are numbered from 1 and
/// information sets per player; the name and action list of an infoset (and
/// the payoffs of an outcome) may be omitted after their first appearance.
/// Numbers are decimals or rationals ("7/10"). Outcomes attached to chance or
/// decision records are rejected.
Game parse_efg(std::string_view text);

/// Deterministic `.efg` text; chance probabilities are written as decimals
/// when dyadic and as "p/q" otherwise.
std::string write_efg(const Game& game);

/// Parses the versioned JSON game format (`"schema": 1`). Errors carry the
/// JSON pointer of the offending value.
Game parse_json(std::string_view text);

std::string write_json(const Game& game);

enum class GameFormat { Efg, Json };

/// Looks at the first non-blank character: '{' means JSON, anything else EFG.
GameFormat detect_format(std::string_view text);

Game parse_game(std::string_view text);
std::string write_game(const Game& game, GameFormat format);

}  // namespace storygame
