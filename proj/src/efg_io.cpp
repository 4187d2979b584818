#include "storygame/efg_io.hpp"

#include "numbers.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace storygame {

namespace {

enum class TokenKind { String, Word, LBrace, RBrace, Comma, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::String: return "string \"" + t.text + "\"";
    case TokenKind::Word: return "'" + t.text + "'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = std::move(current_);
    advance();
    return t;
  }

 private:
  void advance() {
    skip_blank();
    current_ = Token{};
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{' || c == '}' || c == ',') {
      current_.kind = c == '{' ? TokenKind::LBrace : c == '}' ? TokenKind::RBrace : TokenKind::Comma;
      current_.text = std::string(1, c);
      bump();
      return;
    }
    if (c == '"') {
      current_.kind = TokenKind::String;
      bump();
      while (true) {
        if (pos_ >= text_.size()) throw SyntaxError(current_.line, current_.column, "closing '\"'", "end of input");
        char d = text_[pos_];
        bump();
        if (d == '"') break;
        if (d == '\\' && pos_ < text_.size()) {
          d = text_[pos_];
          bump();
        }
        current_.text += d;
      }
      return;
    }
    current_.kind = TokenKind::Word;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '{' || d == '}' || d == ',' || d == '"') break;
      current_.text += d;
      bump();
    }
  }

  void skip_blank() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) bump();
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  Token current_;
};

struct Outcome {
  std::string name;
  std::vector<double> payoffs;
};

struct DecisionSet {
  std::string name;
  std::vector<std::string> actions;
};

struct ChanceSet {
  std::string name;
  std::vector<std::string> labels;
  std::vector<Rational> probs;
};

class EfgParser {
 public:
  explicit EfgParser(std::string_view text) : lex_(text) {}

  Game parse() {
    GameSpec spec;
    expect_word("EFG");
    expect_word("2");
    const Token rep = lex_.take();
    if (rep.kind != TokenKind::Word || (rep.text != "R" && rep.text != "D"))
      throw SyntaxError(rep.line, rep.column, "'R'", describe(rep));
    spec.title = expect_string("game title");
    expect(TokenKind::LBrace, "'{'");
    while (lex_.peek().kind == TokenKind::String) spec.players.push_back({lex_.take().text, {}});
    expect(TokenKind::RBrace, "'}' after player names");
    if (lex_.peek().kind == TokenKind::String) spec.comment = lex_.take().text;
    players_ = spec.players.size();
    spec.root = node();
    if (lex_.peek().kind != TokenKind::End)
      throw SyntaxError(lex_.peek().line, lex_.peek().column, "end of input after a complete tree", describe(lex_.peek()));
    return build_game(spec);
  }

 private:
  NodeSpec node() {
    const Token head = lex_.take();
    if (head.kind == TokenKind::Word && head.text == "t") return terminal();
    if (head.kind == TokenKind::Word && head.text == "c") return chance(head);
    if (head.kind == TokenKind::Word && head.text == "p") return decision();
    throw SyntaxError(head.line, head.column, "node record 'c', 'p' or 't'", describe(head));
  }

  NodeSpec terminal() {
    NodeSpec spec;
    spec.kind = NodeKind::Terminal;
    spec.name = expect_string("node name");
    const Token num = lex_.peek();
    const long outcome = expect_integer("outcome number");
    std::optional<std::string> name;
    std::optional<std::vector<double>> payoffs;
    if (lex_.peek().kind == TokenKind::String) name = lex_.take().text;
    if (lex_.peek().kind == TokenKind::LBrace) payoffs = payoff_block();
    if (outcome == 0) {
      if (payoffs) semantic(num, "terminal with outcome 0 cannot carry payoffs");
      spec.payoffs.assign(players_, 0.0);
      return spec;
    }
    auto it = outcomes_.find(outcome);
    if (it == outcomes_.end()) {
      if (!payoffs) semantic(num, "outcome " + std::to_string(outcome) + " is used before its payoffs are given");
      it = outcomes_.emplace(outcome, Outcome{name.value_or(""), *payoffs}).first;
    } else if (payoffs && *payoffs != it->second.payoffs) {
      semantic(num, "outcome " + std::to_string(outcome) + " redefined with different payoffs");
    }
    spec.outcome = name.value_or(it->second.name);
    spec.payoffs = it->second.payoffs;
    return spec;
  }

  NodeSpec chance(const Token& head) {
    NodeSpec spec;
    spec.kind = NodeKind::Chance;
    spec.name = expect_string("node name");
    const Token num = lex_.peek();
    const long iset = expect_integer("chance information set number");
    std::optional<std::string> iset_name;
    if (lex_.peek().kind == TokenKind::String) iset_name = lex_.take().text;
    if (lex_.peek().kind == TokenKind::LBrace) {
      lex_.take();
      ChanceSet set;
      set.name = iset_name.value_or("");
      while (lex_.peek().kind == TokenKind::String) {
        set.labels.push_back(lex_.take().text);
        set.probs.push_back(number_token("branch probability"));
      }
      expect(TokenKind::RBrace, "'}' after chance branches");
      Rational sum;
      for (const auto& p : set.probs) {
        if (p < Rational(0)) throw Error(ErrorCode::NormalizationError, "negative probability at chance node '" + spec.name + "'");
        sum = sum + p;
      }
      if (!(sum == Rational(1)))
        throw Error(ErrorCode::NormalizationError, "line " + std::to_string(head.line) + ": chance probabilities at '" +
                                                       spec.name + "' sum to " + sum.to_string() + ", not 1");
      chance_sets_[iset] = set;
    } else if (!chance_sets_.count(iset)) {
      semantic(num, "chance information set " + std::to_string(iset) + " has no branch list");
    }
    const ChanceSet& set = chance_sets_.at(iset);
    spec.chance_set_name = iset_name.value_or(set.name);
    spec.labels = set.labels;
    spec.probs = set.probs;
    intermediate_outcome();
    for (std::size_t c = 0; c < spec.labels.size(); ++c) spec.children.push_back(node());
    return spec;
  }

  NodeSpec decision() {
    NodeSpec spec;
    spec.kind = NodeKind::Decision;
    spec.name = expect_string("node name");
    const Token num = lex_.peek();
    const long player = expect_integer("player number");
    if (player < 1 || static_cast<std::size_t>(player) > players_)
      semantic(num, "player number " + std::to_string(player) + " out of range");
    spec.player = static_cast<PlayerIndex>(player - 1);
    const Token set_token = lex_.peek();
    const long iset = expect_integer("information set number");
    std::optional<std::string> iset_name;
    if (lex_.peek().kind == TokenKind::String) iset_name = lex_.take().text;
    std::optional<std::vector<std::string>> actions;
    if (lex_.peek().kind == TokenKind::LBrace) {
      lex_.take();
      actions.emplace();
      while (lex_.peek().kind == TokenKind::String) actions->push_back(lex_.take().text);
      expect(TokenKind::RBrace, "'}' after action labels");
    }
    const auto key = std::make_pair(player, iset);
    auto it = decision_sets_.find(key);
    if (it == decision_sets_.end()) {
      if (!actions) semantic(set_token, "information set " + std::to_string(iset) + " has no action list");
      it = decision_sets_.emplace(key, DecisionSet{iset_name.value_or(""), *actions}).first;
    } else if (actions && *actions != it->second.actions) {
      semantic(set_token, "information set " + std::to_string(iset) + " of player " + std::to_string(player) +
                              " offers different actions at different members");
    }
    spec.infoset = std::to_string(iset);
    spec.infoset_name = it->second.name;
    spec.labels = it->second.actions;
    intermediate_outcome();
    for (std::size_t c = 0; c < spec.labels.size(); ++c) spec.children.push_back(node());
    return spec;
  }

  // Outcome number on a chance/decision record. Parsed, then rejected unless 0.
  void intermediate_outcome() {
    const Token num = lex_.peek();
    const long outcome = expect_integer("outcome number");
    if (lex_.peek().kind == TokenKind::String) lex_.take();
    if (lex_.peek().kind == TokenKind::LBrace) payoff_block();
    if (outcome != 0)
      semantic(num, "outcome " + std::to_string(outcome) +
                        " attached to a non-terminal node; only leaf payoffs are supported");
  }

  std::vector<double> payoff_block() {
    const Token open = lex_.peek();
    expect(TokenKind::LBrace, "'{'");
    std::vector<double> values;
    while (lex_.peek().kind == TokenKind::Word) {
      values.push_back(number_token("payoff").to_double());
      if (lex_.peek().kind == TokenKind::Comma) lex_.take();
    }
    expect(TokenKind::RBrace, "'}' after payoffs");
    if (values.size() != players_)
      semantic(open, "payoff vector has " + std::to_string(values.size()) + " entries for " +
                         std::to_string(players_) + " players");
    return values;
  }

  Rational number_token(const std::string& what) {
    const Token t = lex_.take();
    if (t.kind != TokenKind::Word) throw SyntaxError(t.line, t.column, what, describe(t));
    try {
      return Rational::parse(t.text);
    } catch (const std::invalid_argument&) {
      throw SyntaxError(t.line, t.column, what, describe(t));
    }
  }

  long expect_integer(const std::string& what) {
    const Token t = lex_.take();
    bool ok = t.kind == TokenKind::Word && !t.text.empty() && t.text.size() < 10;
    for (char c : t.text) ok = ok && std::isdigit(static_cast<unsigned char>(c));
    if (!ok) throw SyntaxError(t.line, t.column, what, describe(t));
    return std::stol(t.text);
  }

  std::string expect_string(const std::string& what) {
    const Token t = lex_.take();
    if (t.kind != TokenKind::String) throw SyntaxError(t.line, t.column, what + " (quoted)", describe(t));
    return t.text;
  }

  void expect_word(const std::string& word) {
    const Token t = lex_.take();
    if (t.kind != TokenKind::Word || t.text != word) throw SyntaxError(t.line, t.column, "'" + word + "'", describe(t));
  }

  void expect(TokenKind kind, const std::string& what) {
    const Token t = lex_.take();
    if (t.kind != kind) throw SyntaxError(t.line, t.column, what, describe(t));
  }

  [[noreturn]] void semantic(const Token& at, const std::string& message) {
    throw Error(ErrorCode::SemanticError,
                "line " + std::to_string(at.line) + ", column " + std::to_string(at.column) + ": " + message);
  }

  Lexer lex_;
  std::size_t players_ = 0;
  std::map<long, Outcome> outcomes_;
  std::map<std::pair<long, long>, DecisionSet> decision_sets_;
  std::map<long, ChanceSet> chance_sets_;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Game parse_efg(std::string_view text) { return EfgParser(text).parse(); }

std::string write_efg(const Game& game) {
  std::ostringstream out;
  out << "EFG 2 R " << quote(game.title()) << " {";
  for (const auto& p : game.players()) out << ' ' << quote(p.name);
  out << " }\n";
  if (!game.comment().empty()) out << quote(game.comment()) << '\n';

  // Per-player infoset numbers follow first appearance in pre-order, which is
  // the canonical infoset id order.
  std::vector<std::size_t> set_number(game.num_infosets(), 0);
  std::vector<std::size_t> next(game.num_players(), 0);
  for (const auto& set : game.infosets()) set_number[set.id] = ++next[set.owner];
  std::size_t chance_number = 0;
  std::size_t outcome_number = 0;

  for (const Node& node : game.nodes()) {
    switch (node.kind) {
      case NodeKind::Chance:
        out << "c " << quote(node.name) << ' ' << ++chance_number << ' ' << quote(node.chance_set_name) << " {";
        for (std::size_t c = 0; c < node.children.size(); ++c)
          out << ' ' << quote(node.children[c].label) << ' ' << node.chance_probs[c].to_string();
        out << " } 0\n";
        break;
      case NodeKind::Decision: {
        const Infoset& set = game.infoset(node.infoset);
        out << "p " << quote(node.name) << ' ' << node.player + 1 << ' ' << set_number[set.id] << ' ' << quote(set.name)
            << " {";
        for (const auto& a : set.actions) out << ' ' << quote(a);
        out << " } 0\n";
        break;
      }
      case NodeKind::Terminal:
        out << "t " << quote(node.name) << ' ' << ++outcome_number << ' ' << quote(node.outcome) << " {";
        for (std::size_t i = 0; i < node.payoffs.size(); ++i)
          out << (i ? ", " : " ") << detail::shortest(node.payoffs[i]);
        out << " }\n";
        break;
    }
  }
  return out.str();
}

GameFormat detect_format(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? GameFormat::Json : GameFormat::Efg;
  }
  return GameFormat::Efg;
}

Game parse_game(std::string_view text) {
  return detect_format(text) == GameFormat::Json ? parse_json(text) : parse_efg(text);
}

std::string write_game(const Game& game, GameFormat format) {
  return format == GameFormat::Json ? write_json(game) : write_efg(game);
}

}  // namespace storygame
