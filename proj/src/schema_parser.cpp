// Schema DSL:
//
//   object <Id> ["display name"]
//   fact <Id> [objectified] ["display name"] {
//     role <Id> player <TypeId> [fwd "phrase"] [rev "phrase"]
//   }
//   (roles may also share a line, separated by commas:
//    fact F { role r player A, role q player B })
//   spec <SubId> <SuperId>
//   poly <Id1> <Id2>
//   contract <RoleIdIn> <RoleIdOut> "phrase"

#include <sstream>

#include "lexer.hpp"
#include "qbn/schema.hpp"

namespace qbn {

using detail::Tok;
using detail::Token;
using detail::TokenCursor;

namespace {

bool is_statement_keyword(const Token& t) {
  return t.kind == Tok::word && (t.text == "object" || t.text == "fact" || t.text == "spec" ||
                                 t.text == "poly" || t.text == "contract");
}

class SchemaParser {
 public:
  explicit SchemaParser(std::string_view src) : cur_(detail::tokenize(src)) {}

  ParseResult<Schema> run() {
    while (!cur_.at_end()) {
      const Token& t = cur_.peek();
      if (t.kind == Tok::bad) {
        fail(t, t.text);
        continue;
      }
      if (!is_statement_keyword(t)) {
        fail(t, "expected a declaration (object, fact, spec, poly, contract), found " + detail::describe(t));
        continue;
      }
      bool ok = true;
      if (t.text == "object")
        ok = parse_object();
      else if (t.text == "fact")
        ok = parse_fact();
      else if (t.text == "spec" || t.text == "poly")
        ok = parse_edge();
      else
        ok = parse_contract();
      if (ok) expect_line_end();
    }

    auto built = builder_.build();
    diags_.insert(diags_.end(), built.diagnostics.begin(), built.diagnostics.end());
    if (has_errors(diags_)) return {std::nullopt, std::move(diags_)};
    return {std::move(built.value), std::move(diags_)};
  }

 private:
  static SourceLoc loc(const Token& t) { return SourceLoc{t.line, t.column}; }

  // Records an error at `t` and skips to the next line.
  void fail(const Token& t, std::string message) {
    diags_.push_back(detail::syntax_error(t, std::move(message)));
    if (!cur_.at_end()) cur_.skip_line();
  }

  // Like fail(), for a token missing from the current statement.
  void fail_missing(std::string expected) {
    const bool cut_short = cur_.at_line_start();
    diags_.push_back(detail::syntax_error_near(
        cur_, "expected " + expected + ", found " + (cut_short ? std::string("end of line") : detail::describe(cur_.peek()))));
    if (!cut_short) cur_.skip_line();
  }

  void expect_line_end() {
    if (!cur_.at_line_start()) fail(cur_.peek(), "unexpected " + detail::describe(cur_.peek()) + " at end of statement");
  }

  bool expect_word(std::string& out, const char* what) {
    const Token& t = cur_.peek();
    if (t.kind != Tok::word || t.first_on_line) {
      fail_missing(what);
      return false;
    }
    out = cur_.next().text;
    return true;
  }

  std::optional<std::string> optional_string() {
    if (cur_.peek().kind == Tok::string && !cur_.peek().first_on_line) return cur_.next().text;
    return std::nullopt;
  }

  bool parse_object() {
    Token kw = cur_.next();
    std::string id;
    if (!expect_word(id, "object type identifier")) return false;
    builder_.add_object(std::move(id), optional_string(), loc(kw));
    return true;
  }

  bool parse_fact() {
    Token kw = cur_.next();
    std::string id;
    if (!expect_word(id, "fact identifier")) return false;
    bool objectified = false;
    if (cur_.is_word("objectified") && !cur_.peek().first_on_line) {
      cur_.next();
      objectified = true;
    }
    auto display = optional_string();
    if (cur_.peek().kind != Tok::lbrace || cur_.peek().first_on_line) {
      fail_missing("'{' after fact header");
      return false;
    }
    cur_.next();
    builder_.add_fact(id, objectified, std::move(display), loc(kw));

    while (true) {
      const Token& t = cur_.peek();
      if (t.kind == Tok::rbrace) {
        cur_.next();
        return true;
      }
      if (t.kind == Tok::end || is_statement_keyword(t)) {
        diags_.push_back(detail::syntax_error(t, "missing '}' closing fact '" + id + "'"));
        return false;
      }
      if (!(t.kind == Tok::word && t.text == "role")) {
        fail(t, "expected 'role' or '}' in fact body, found " + detail::describe(t));
        continue;
      }
      if (!parse_role()) continue;
      // A role ends at the line end, at a comma, or right before the '}'.
      if (cur_.at_line_start() || cur_.peek().kind == Tok::rbrace) continue;
      if (cur_.peek().kind == Tok::comma) {
        cur_.next();
        continue;
      }
      expect_line_end();
    }
  }

  bool parse_role() {
    Token kw = cur_.next();
    std::string id, player;
    if (!expect_word(id, "role identifier")) return false;
    if (!cur_.is_word("player") || cur_.peek().first_on_line) {
      fail_missing("'player' after role identifier");
      return false;
    }
    cur_.next();
    if (!expect_word(player, "player type identifier")) return false;
    std::optional<std::string> fwd, rev;
    while (!cur_.at_line_start() && cur_.peek().kind == Tok::word &&
           (cur_.peek().text == "fwd" || cur_.peek().text == "rev")) {
      std::string which = cur_.next().text;
      auto phrase = optional_string();
      if (!phrase) {
        fail(cur_.peek(), "expected quoted phrase after '" + which + "'");
        return false;
      }
      auto& slot = which == "fwd" ? fwd : rev;
      if (slot) {
        diags_.push_back(detail::syntax_error(kw, "phrase '" + which + "' given twice for role '" + id + "'"));
      }
      slot = std::move(phrase);
    }
    builder_.add_role(std::move(id), std::move(player), std::move(fwd), std::move(rev), loc(kw));
    return true;
  }

  bool parse_edge() {
    Token kw = cur_.next();
    std::string a, b;
    if (!expect_word(a, "type identifier") || !expect_word(b, "type identifier")) return false;
    if (kw.text == "spec")
      builder_.add_spec(std::move(a), std::move(b), loc(kw));
    else
      builder_.add_poly(std::move(a), std::move(b), loc(kw));
    return true;
  }

  bool parse_contract() {
    Token kw = cur_.next();
    std::string in, out;
    if (!expect_word(in, "role identifier") || !expect_word(out, "role identifier")) return false;
    auto phrase = optional_string();
    if (!phrase) {
      fail(cur_.peek(), "expected quoted contraction phrase");
      return false;
    }
    builder_.add_contraction(std::move(in), std::move(out), std::move(*phrase), loc(kw));
    return true;
  }

  TokenCursor cur_;
  SchemaBuilder builder_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ParseResult<Schema> parse_schema(std::string_view source) { return SchemaParser(source).run(); }

std::string serialize_schema(const Schema& s) {
  using detail::quote;
  std::ostringstream os;
  for (const auto& t : s.types()) {
    if (!t.is_relationship) {
      os << "object " << t.id;
      if (t.display) os << ' ' << quote(*t.display);
      os << '\n';
      continue;
    }
    os << "fact " << t.id;
    if (t.is_object) os << " objectified";
    if (t.display) os << ' ' << quote(*t.display);
    os << " {\n";
    for (RoleId r : t.roles) {
      const auto& ri = s.role(r);
      os << "  role " << ri.id << " player " << s.type(ri.player).id;
      if (ri.fwd) os << " fwd " << quote(*ri.fwd);
      if (ri.rev) os << " rev " << quote(*ri.rev);
      os << '\n';
    }
    os << "}\n";
  }
  for (const auto& [a, b] : s.spec_edges()) os << "spec " << s.type(a).id << ' ' << s.type(b).id << '\n';
  for (const auto& [a, b] : s.poly_edges()) os << "poly " << s.type(a).id << ' ' << s.type(b).id << '\n';
  for (const auto& c : s.contractions())
    os << "contract " << s.role(c.role_in).id << ' ' << s.role(c.role_out).id << ' ' << quote(c.phrase) << '\n';
  return os.str();
}

}  // namespace qbn
