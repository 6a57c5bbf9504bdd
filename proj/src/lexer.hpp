#pragma once

// Tokenizer shared by the schema and population DSLs. Both are line-oriented:
// `#` starts a comment, statements start at the beginning of a line, and
// parsers resynchronize on the first token of a line after an error.

#include <string>
#include <string_view>
#include <vector>

#include "qbn/diagnostic.hpp"

namespace qbn::detail {

enum class Tok { word, string, lbrace, rbrace, comma, equals, end, bad };

struct Token {
  Tok kind = Tok::end;
  std::string text;  // word text, or unescaped string contents
  int line = 0;
  int column = 0;
  bool first_on_line = false;
};

std::vector<Token> tokenize(std::string_view source);

std::string quote(std::string_view text);

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  [[nodiscard]] const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::end) ++pos_;
    return t;
  }
  [[nodiscard]] bool at_end() const { return peek().kind == Tok::end; }
  /// The last consumed token, or the first one if nothing was consumed yet.
  [[nodiscard]] const Token& previous() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
  [[nodiscard]] bool is_word(std::string_view w) const {
    return peek().kind == Tok::word && peek().text == w;
  }
  /// True when the next token starts a new line (or input is exhausted).
  [[nodiscard]] bool at_line_start() const { return at_end() || peek().first_on_line; }

  void skip_line() {
    next();
    while (!at_line_start()) next();
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline Diagnostic syntax_error(const Token& at, std::string message) {
  return Diagnostic{Severity::error, "syntax-error", std::move(message), at.line, at.column};
}

std::string describe(const Token& t);

/// Where a "found ..." error should point: at `t`, or just past the previous
/// token when `t` belongs to the next line (the statement was cut short).
inline Diagnostic syntax_error_near(const TokenCursor& cur, std::string message) {
  const Token& t = cur.peek();
  if (cur.at_line_start() && &t != &cur.previous()) {
    const Token& p = cur.previous();
    return Diagnostic{Severity::error, "syntax-error", std::move(message), p.line,
                      p.column + static_cast<int>(p.text.size())};
  }
  return syntax_error(t, std::move(message));
}

}  // namespace qbn::detail
