#include "lexer.hpp"

namespace qbn::detail {

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c == '.' || static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t line_start = 0;
  bool fresh_line = true;
  std::size_t i = 0;

  auto push = [&](Tok kind, std::string text, std::size_t at) {
    out.push_back(Token{kind, std::move(text), line, static_cast<int>(at - line_start) + 1, fresh_line});
    fresh_line = false;
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
      fresh_line = true;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    switch (c) {
      case '{': push(Tok::lbrace, "{", start); ++i; continue;
      case '}': push(Tok::rbrace, "}", start); ++i; continue;
      case ',': push(Tok::comma, ",", start); ++i; continue;
      case '=': push(Tok::equals, "=", start); ++i; continue;
      default: break;
    }
    if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < src.size() && src[i] != '\n') {
        if (src[i] == '\\' && i + 1 < src.size() && src[i + 1] != '\n') {
          text += src[i + 1];
          i += 2;
          continue;
        }
        if (src[i] == '"') {
          closed = true;
          ++i;
          break;
        }
        text += src[i++];
      }
      if (closed)
        push(Tok::string, std::move(text), start);
      else
        push(Tok::bad, "unterminated string", start);
      continue;
    }
    if (is_word_char(c)) {
      while (i < src.size() && is_word_char(src[i])) ++i;
      push(Tok::word, std::string(src.substr(start, i - start)), start);
      continue;
    }
    push(Tok::bad, std::string("unexpected character '") + c + "'", start);
    ++i;
  }
  out.push_back(Token{Tok::end, "", line, static_cast<int>(i - line_start) + 1, true});
  return out;
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::word: return "'" + t.text + "'";
    case Tok::string: return "string " + quote(t.text);
    case Tok::end: return "end of input";
    case Tok::bad: return t.text;
    default: return "'" + t.text + "'";
  }
}

}  // namespace qbn::detail
