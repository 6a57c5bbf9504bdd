#include "qbn/verbalizer.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

namespace qbn {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string default_fwd(std::string_view role_id) { return "with as " + std::string(role_id); }
std::string default_rev(std::string_view role_id) { return "which is " + std::string(role_id) + " of"; }

// The marker goes after a leading relative pronoun and its verb
// ("who is (as a person) vice president of"), otherwise in front.
std::string insert_marker(const std::string& phrase, const std::string& marker) {
  std::istringstream is(phrase);
  std::vector<std::string> words;
  for (std::string w; is >> w;) words.push_back(w);
  std::size_t at = 0;
  if (words.size() >= 2) {
    const std::string first = lowercase(words[0]);
    if (first == "who" || first == "which" || first == "that") at = 2;
  }
  words.insert(words.begin() + static_cast<std::ptrdiff_t>(at), marker);
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::string display_name(const Schema& schema, TypeId t) {
  const auto& info = schema.type(t);
  return info.display ? *info.display : lowercase(info.id);
}

std::string fwd_phrase(const Schema& schema, RoleId r) {
  const auto& info = schema.role(r);
  return info.fwd ? *info.fwd : default_fwd(info.id);
}

std::string rev_phrase(const Schema& schema, RoleId r) {
  const auto& info = schema.role(r);
  return info.rev ? *info.rev : default_rev(info.id);
}

std::string with_indefinite_article(std::string_view noun) {
  const char c = noun.empty() ? 'x' : static_cast<char>(std::tolower(static_cast<unsigned char>(noun[0])));
  const bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  return (vowel ? "an " : "a ") + std::string(noun);
}

std::string verbalize(const Schema& schema, const PathExpr& p, const VerbalizeOptions& opts) {
  if (p.empty()) throw Error("empty-path", "the empty path has no verbalization");
  auto types = p.types();
  auto steps = p.steps();

  std::string out = "the " + display_name(schema, types[0]);
  std::size_t i = 0;
  while (i < steps.size()) {
    const PathStep s = steps[i];
    const TypeId prev = types[i];
    std::string phrase;
    TypeId source;
    std::size_t consumed = 1;

    const ContractionRule* contraction = nullptr;
    if (opts.use_contractions && s.kind == StepKind::enter && i + 1 < steps.size() &&
        steps[i + 1].kind == StepKind::exit && types[i + 1] == schema.rel_of(s.role))
      contraction = schema.find_contraction(s.role, steps[i + 1].role);

    if (contraction) {
      phrase = contraction->phrase;
      source = schema.player(s.role);
      consumed = 2;
    } else if (s.kind == StepKind::enter) {
      phrase = fwd_phrase(schema, s.role);
      source = schema.player(s.role);
    } else {
      phrase = rev_phrase(schema, s.role);
      source = schema.rel_of(s.role);
    }
    if (opts.mark_supertype_steps && prev != source)
      phrase = insert_marker(phrase, "(as " + with_indefinite_article(display_name(schema, source)) + ")");

    i += consumed;
    out += ' ';
    out += phrase;
    out += ' ';
    out += with_indefinite_article(display_name(schema, types[i]));
  }
  return out;
}

Schema default_naming(const Schema& schema) {
  Schema s = schema;
  for (auto& t : s.types_)
    if (!t.display) t.display = lowercase(t.id);
  for (auto& r : s.roles_) {
    if (!r.fwd) r.fwd = default_fwd(r.id);
    if (!r.rev) r.rev = default_rev(r.id);
  }
  return s;
}

}  // namespace qbn
