#include "geofind/rules.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "geofind/construction.hpp"

namespace geofind {

namespace {

struct Token {
  enum Kind { Ident, LParen, RParen, Comma, Colon, Arrow, End } kind;
  std::string_view text;
  std::size_t column;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : line_no_(line_no) {
    lex(line);
  }

  Rule parse() {
    Rule rule;
    const Token& kw = next();
    if (kw.kind != Token::Ident || kw.text != "rule") fail(kw, "expected 'rule'");
    const Token& name = next();
    if (name.kind != Token::Ident || !std::isalpha(static_cast<unsigned char>(name.text[0])))
      fail(name, "expected rule name");
    rule.name = std::string(name.text);
    name_column_ = name.column;
    expect(Token::Colon, "':'");

    bool in_sides = false;
    while (true) {
      const Token& head = peek();
      if (head.kind != Token::Ident) fail(head, "expected atom");
      if (is_predicate_name(head.text)) {
        if (in_sides) fail(head, "premise after side condition");
        rule.premises.push_back(parse_atom());
      } else if (auto kind = side_kind(head.text)) {
        in_sides = true;
        auto [predicate_like, args] = parse_call(side_arity(*kind));
        (void)predicate_like;
        rule.sides.push_back(SidePattern{*kind, std::move(args)});
      } else {
        fail(head, "unknown predicate '" + std::string(head.text) + "'");
      }
      const Token& sep = next();
      if (sep.kind == Token::Comma) continue;
      if (sep.kind == Token::Arrow) break;
      fail(sep, "expected ',' or '=>'");
    }
    if (rule.premises.empty()) fail(peek(), "rule needs at least one premise");
    const Token& head = peek();
    if (head.kind != Token::Ident || !is_predicate_name(head.text))
      fail(head, "expected conclusion atom");
    rule.conclusion = parse_atom();
    if (peek().kind != Token::End) fail(peek(), "trailing input");
    check_range_restriction(rule);
    return rule;
  }

  std::size_t name_column() const { return name_column_; }

 private:
  static std::optional<SideKind> side_kind(std::string_view text) {
    for (auto k : {SideKind::Distinct, SideKind::NonCollinear, SideKind::DistinctLines})
      if (side_name(k) == text) return k;
    return std::nullopt;
  }

  void lex(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      std::size_t col = i + 1;
      if (c == '=' && i + 1 < line.size() && line[i + 1] == '>') {
        tokens_.push_back({Token::Arrow, line.substr(i, 2), col});
        i += 2;
        continue;
      }
      Token::Kind k = Token::End;
      switch (c) {
        case '(': k = Token::LParen; break;
        case ')': k = Token::RParen; break;
        case ',': k = Token::Comma; break;
        case ':': k = Token::Colon; break;
        default: break;
      }
      if (k != Token::End) {
        tokens_.push_back({k, line.substr(i, 1), col});
        ++i;
        continue;
      }
      if (!ident_char(c)) throw ParseError(line_no_, col, std::string("unexpected character '") + c + "'");
      std::size_t start = i;
      while (i < line.size() && ident_char(line[i])) ++i;
      tokens_.push_back({Token::Ident, line.substr(start, i - start), col});
    }
    tokens_.push_back({Token::End, {}, line.size() + 1});
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != Token::End) ++pos_;
    return t;
  }
  void expect(Token::Kind kind, const char* what) {
    const Token& t = next();
    if (t.kind != kind) fail(t, std::string("expected ") + what);
  }
  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw ParseError(line_no_, t.column, message);
  }

  Term parse_term() {
    const Token& t = next();
    if (t.kind != Token::Ident || !is_identifier(t.text)) fail(t, "expected variable or point");
    if (std::isupper(static_cast<unsigned char>(t.text[0]))) {
      first_use_.emplace(std::string(t.text), t.column);
      return Variable{std::string(t.text)};
    }
    return PointId(std::string(t.text));
  }

  std::pair<std::string_view, std::vector<Term>> parse_call(std::size_t expected_arity) {
    const Token& name = next();
    expect(Token::LParen, "'('");
    std::vector<Term> args;
    args.push_back(parse_term());
    while (peek().kind == Token::Comma) {
      next();
      args.push_back(parse_term());
    }
    const Token& close = next();
    if (close.kind != Token::RParen) fail(close, "expected ')'");
    if (args.size() != expected_arity)
      fail(name, std::string(name.text) + " expects " + std::to_string(expected_arity) +
                     " arguments, got " + std::to_string(args.size()));
    return {name.text, std::move(args)};
  }

  Pattern parse_atom() {
    Predicate p = predicate_from_name(peek().text);
    auto [name, args] = parse_call(arity(p));
    (void)name;
    return Pattern{p, std::move(args)};
  }

  void check_range_restriction(const Rule& rule) const {
    std::set<std::string> bound;
    for (const auto& p : rule.premises)
      for (const auto& t : p.args)
        if (auto* v = std::get_if<Variable>(&t)) bound.insert(v->name);
    auto check = [&](const std::vector<Term>& args) {
      for (const auto& t : args) {
        auto* v = std::get_if<Variable>(&t);
        if (v && !bound.count(v->name))
          throw ParseError(line_no_, first_use_.at(v->name),
                           v->name + " unbound: it does not occur in any premise");
      }
    };
    check(rule.conclusion.args);
    for (const auto& s : rule.sides) check(s.args);
  }

  std::size_t line_no_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t name_column_ = 1;
  std::map<std::string, std::size_t> first_use_;
};

std::string format_terms(std::string_view name, const std::vector<Term>& args) {
  std::string out(name);
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += std::visit([](const auto& t) -> std::string {
      if constexpr (std::is_same_v<std::decay_t<decltype(t)>, Variable>) return t.name;
      else return t.name();
    }, args[i]);
  }
  out += ')';
  return out;
}

}  // namespace

std::string_view side_name(SideKind kind) {
  switch (kind) {
    case SideKind::Distinct: return "distinct";
    case SideKind::NonCollinear: return "non_collinear";
    case SideKind::DistinctLines: return "distinct_lines";
  }
  return "?";
}

std::size_t side_arity(SideKind kind) {
  switch (kind) {
    case SideKind::Distinct: return 2;
    case SideKind::NonCollinear: return 3;
    case SideKind::DistinctLines: return 4;
  }
  return 0;
}

std::string to_string(const SideCondition& side) {
  std::string out(side_name(side.kind));
  out += '(';
  for (std::size_t i = 0; i < side.args.size(); ++i) {
    if (i) out += ',';
    out += side.args[i].name();
  }
  return out + ')';
}

std::string to_string(const Pattern& pattern) {
  return format_terms(predicate_name(pattern.predicate), pattern.args);
}

std::string to_string(const Rule& rule) {
  std::string out = "rule " + rule.name + ": ";
  bool first = true;
  for (const auto& p : rule.premises) {
    out += (first ? "" : ", ") + to_string(p);
    first = false;
  }
  for (const auto& s : rule.sides) out += ", " + format_terms(side_name(s.kind), s.args);
  return out + " => " + to_string(rule.conclusion);
}

std::vector<Rule> parse_rules(std::string_view text) {
  std::vector<Rule> rules;
  std::set<std::string> names;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    if (body.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    LineParser parser(body, line_no);
    Rule rule = parser.parse();
    if (!names.insert(rule.name).second)
      throw ParseError(line_no, parser.name_column(), "duplicate rule name '" + rule.name + "'");
    rules.push_back(std::move(rule));
  }
  return rules;
}

}  // namespace geofind
