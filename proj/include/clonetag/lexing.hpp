#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "clonetag/corpus.hpp"

namespace clonetag {

enum class TokenKind {
  Identifier,
  Keyword,
  NumberLiteral,
  StringLiteral,
  CharLiteral,
  Comment,
  Operator,
  Delimiter,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  friend bool operator==(const Token&, const Token&) = default;
};

struct LexDiagnostic {
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  std::string message;
};

namespace detail {

inline bool is_c_keyword(std::string_view s) {
  static const std::unordered_set<std::string_view> keywords = {
      "auto",       "break",     "case",           "char",         "const",
      "continue",   "default",   "do",             "double",       "else",
      "enum",       "extern",    "float",          "for",          "goto",
      "if",         "inline",    "int",            "long",         "register",
      "restrict",   "return",    "short",          "signed",       "sizeof",
      "static",     "struct",    "switch",         "typedef",      "union",
      "unsigned",   "void",      "volatile",       "while",        "_Alignas",
      "_Alignof",   "_Atomic",   "_Bool",          "_Complex",     "_Generic",
      "_Imaginary", "_Noreturn", "_Static_assert", "_Thread_local"};
  return keywords.count(s) != 0;
}

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

constexpr std::array<std::string_view, 23> kMultiCharOperators = {
    "...", "<<=", ">>=", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "*=",  "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##"};

inline bool is_delimiter(char c) {
  return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ';' ||
         c == ',';
}

inline std::size_t utf8_length(unsigned char c) {
  if (c >= 0xF0) return 4;
  if (c >= 0xE0) return 3;
  if (c >= 0xC0) return 2;
  return 1;
}

}  // namespace detail

// Lexes C source. Comments and string/char literals are single tokens; an
// unterminated one runs to the end of input and records a diagnostic.
// Backslash-newline continuations are treated as whitespace.
inline std::vector<Token> tokenize(std::string_view text,
                                   std::vector<LexDiagnostic>* diagnostics = nullptr) {
  using detail::ident_char;
  using detail::ident_start;
  using detail::is_digit;

  std::vector<Token> out;
  std::size_t i = 0;
  std::uint32_t line = 1;
  std::size_t line_start = 0;
  const std::size_t n = text.size();

  auto column_of = [&](std::size_t pos) { return static_cast<std::uint32_t>(pos - line_start + 1); };
  auto advance_to = [&](std::size_t end) {
    for (; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        line_start = i + 1;
      }
    }
  };
  auto diag = [&](std::uint32_t l, std::uint32_t c, const char* msg) {
    if (diagnostics) diagnostics->push_back({l, c, msg});
  };
  auto emit = [&](TokenKind kind, std::size_t end) {
    const auto l = line;
    const auto c = column_of(i);
    const auto start = i;
    advance_to(end);
    out.push_back({kind, std::string(text.substr(start, end - start)), l, c});
  };
  auto quoted_end = [&](std::size_t open, char quote, bool& terminated) {
    std::size_t k = open + 1;
    while (k < n) {
      if (text[k] == '\\' && k + 1 < n) {
        k += 2;
        continue;
      }
      if (text[k] == quote) {
        terminated = true;
        return k + 1;
      }
      if (text[k] == '\n') break;  // a raw newline ends an unterminated literal
      ++k;
    }
    terminated = false;
    return k;
  };

  while (i < n) {
    const char c = text[i];
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      advance_to(i + 1);
      continue;
    }
    if (c == '\\' && (i + 1 < n) && (text[i + 1] == '\n' || text[i + 1] == '\r')) {
      std::size_t e = i + 1;
      if (text[e] == '\r') ++e;
      if (e < n && text[e] == '\n') ++e;
      advance_to(e);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      auto e = text.find('\n', i);
      if (e == std::string_view::npos) e = n;
      emit(TokenKind::Comment, e);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      auto e = text.find("*/", i + 2);
      if (e == std::string_view::npos) {
        diag(line, column_of(i), "unterminated comment");
        emit(TokenKind::Comment, n);
      } else {
        emit(TokenKind::Comment, e + 2);
      }
      continue;
    }
    if (ident_start(c)) {
      std::size_t e = i + 1;
      while (e < n && ident_char(text[e])) ++e;
      const auto word = text.substr(i, e - i);
      const bool prefix = word == "L" || word == "u" || word == "U" || word == "u8";
      if (prefix && e < n && (text[e] == '"' || text[e] == '\'')) {
        bool ok = false;
        const char q = text[e];
        const auto end = quoted_end(e, q, ok);
        if (!ok) diag(line, column_of(i), "unterminated literal");
        emit(q == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, end);
        continue;
      }
      emit(detail::is_c_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, e);
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(text[i + 1]))) {
      std::size_t e = i + 1;
      while (e < n) {
        const char d = text[e];
        if (ident_char(d) || d == '.') {
          ++e;
        } else if ((d == '+' || d == '-') &&
                   (text[e - 1] == 'e' || text[e - 1] == 'E' || text[e - 1] == 'p' ||
                    text[e - 1] == 'P')) {
          ++e;
        } else {
          break;
        }
      }
      emit(TokenKind::NumberLiteral, e);
      continue;
    }
    if (c == '"' || c == '\'') {
      bool ok = false;
      const auto end = quoted_end(i, c, ok);
      if (!ok) diag(line, column_of(i), "unterminated literal");
      emit(c == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, end);
      continue;
    }
    if (detail::is_delimiter(c)) {
      emit(TokenKind::Delimiter, i + 1);
      continue;
    }
    std::size_t len = 0;
    for (auto op : detail::kMultiCharOperators) {
      if (text.substr(i, op.size()) == op) {
        len = op.size();
        break;
      }
    }
    if (len == 0) len = std::min(detail::utf8_length(static_cast<unsigned char>(c)), n - i);
    emit(TokenKind::Operator, i + len);
  }
  return out;
}

// Splits an identifier at underscores, lower->upper camel boundaries, before the
// last capital of an uppercase run that is followed by a lowercase letter, and
// around digit runs. Case is preserved.
inline std::vector<std::string> split_identifier(std::string_view text) {
  enum class Cls { Lower, Upper, Digit, Other };
  auto cls = [](char c) {
    if (c >= 'a' && c <= 'z') return Cls::Lower;
    if (c >= 'A' && c <= 'Z') return Cls::Upper;
    if (c >= '0' && c <= '9') return Cls::Digit;
    return Cls::Other;
  };
  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) parts.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '_') {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const Cls prev = cls(cur.back());
      const Cls now = cls(c);
      const bool next_lower = i + 1 < text.size() && cls(text[i + 1]) == Cls::Lower;
      if ((prev == Cls::Digit) != (now == Cls::Digit)) {
        flush();
      } else if (prev == Cls::Lower && now == Cls::Upper) {
        flush();
      } else if (prev == Cls::Upper && now == Cls::Upper && next_lower) {
        flush();
      }
    }
    cur.push_back(c);
  }
  flush();
  return parts;
}

enum class Channel { Identifier, Comment, Literal, Number, Symbol };

NLOHMANN_JSON_SERIALIZE_ENUM(Channel, {{Channel::Identifier, "i"},
                                       {Channel::Comment, "c"},
                                       {Channel::Literal, "l"},
                                       {Channel::Number, "n"},
                                       {Channel::Symbol, "s"}})

inline bool is_alphabetic_channel(Channel c) {
  return c == Channel::Identifier || c == Channel::Comment || c == Channel::Literal;
}

struct Word {
  Channel channel;
  std::string text;

  friend bool operator==(const Word&, const Word&) = default;
};

struct WordSequence {
  FileId file_id = 0;
  std::uint32_t begin_line = 1;
  std::uint32_t end_line = 1;
  std::vector<Word> words;
  std::vector<std::uint32_t> lines;  // source line of each word, parallel to `words`

  friend bool operator==(const WordSequence&, const WordSequence&) = default;

  // The sub-sequence whose words lie on lines [begin, end].
  WordSequence slice(std::uint32_t begin, std::uint32_t end) const {
    WordSequence out{file_id, begin, end, {}, {}};
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (lines[i] >= begin && lines[i] <= end) {
        out.words.push_back(words[i]);
        out.lines.push_back(lines[i]);
      }
    }
    return out;
  }
};

namespace detail {

// Alphabetic runs become `alpha` words, digit runs become Number words.
// Escape sequences inside literals separate runs and contribute no letters.
inline void split_runs(std::string_view body, Channel alpha, bool skip_escapes, std::uint32_t line,
                       std::vector<Word>& words, std::vector<std::uint32_t>& lines) {
  std::size_t i = 0;
  const auto n = body.size();
  while (i < n) {
    const char c = body[i];
    if (skip_escapes && c == '\\' && i + 1 < n) {
      i += 2;
      continue;
    }
    if (is_alpha(c) || is_digit(c)) {
      const bool alpha_run = is_alpha(c);
      std::size_t e = i + 1;
      while (e < n && (alpha_run ? is_alpha(body[e]) : is_digit(body[e]))) ++e;
      words.push_back({alpha_run ? alpha : Channel::Number, std::string(body.substr(i, e - i))});
      lines.push_back(line);
      i = e;
      continue;
    }
    ++i;
  }
}

}  // namespace detail

// Builds the channel-annotated word stream of the tokens that start on lines
// [begin_line, end_line].
inline WordSequence extract_words(const std::vector<Token>& tokens, std::uint32_t begin_line,
                                  std::uint32_t end_line, FileId file_id = 0) {
  WordSequence seq{file_id, begin_line, end_line, {}, {}};
  if (begin_line > end_line) return seq;
  for (const auto& t : tokens) {
    if (t.line < begin_line) continue;
    if (t.line > end_line) break;
    switch (t.kind) {
      case TokenKind::Identifier:
        for (auto& part : split_identifier(t.text)) {
          const auto ch = detail::is_digit(part.front()) ? Channel::Number : Channel::Identifier;
          seq.words.push_back({ch, std::move(part)});
          seq.lines.push_back(t.line);
        }
        break;
      case TokenKind::Keyword:
        seq.words.push_back({Channel::Identifier, t.text});
        seq.lines.push_back(t.line);
        break;
      case TokenKind::NumberLiteral:
        // only digit runs; hex letters and suffixes are not words
        for (std::size_t k = 0; k < t.text.size();) {
          if (!detail::is_digit(t.text[k])) {
            ++k;
            continue;
          }
          auto e = k;
          while (e < t.text.size() && detail::is_digit(t.text[e])) ++e;
          seq.words.push_back({Channel::Number, t.text.substr(k, e - k)});
          seq.lines.push_back(t.line);
          k = e;
        }
        break;
      case TokenKind::Comment:
        detail::split_runs(t.text, Channel::Comment, false, t.line, seq.words, seq.lines);
        break;
      case TokenKind::StringLiteral:
      case TokenKind::CharLiteral: {
        std::string_view body = t.text;
        const auto q = body.find_first_of("\"'");
        if (q != std::string_view::npos) body.remove_prefix(q);  // drop L/u/U/u8 prefix
        detail::split_runs(body, Channel::Literal, true, t.line, seq.words, seq.lines);
        break;
      }
      case TokenKind::Operator:
      case TokenKind::Delimiter:
        seq.words.push_back({Channel::Symbol, t.text});
        seq.lines.push_back(t.line);
        break;
    }
  }
  return seq;
}

// A normalized token with the index of the source token it came from.
struct NormalizedToken {
  std::string text;
  std::uint32_t source_index = 0;
};

inline std::vector<NormalizedToken> normalize_tokens(const std::vector<Token>& tokens) {
  std::vector<NormalizedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    const auto idx = static_cast<std::uint32_t>(i);
    switch (t.kind) {
      case TokenKind::Comment:
        break;
      case TokenKind::Identifier:
        out.push_back({"$id", idx});
        break;
      case TokenKind::NumberLiteral:
        out.push_back({"$num", idx});
        break;
      case TokenKind::StringLiteral:
        out.push_back({"$str", idx});
        break;
      case TokenKind::CharLiteral:
        out.push_back({"$chr", idx});
        break;
      default:
        out.push_back({t.text, idx});
        break;
    }
  }
  return out;
}

inline std::vector<std::string> normalize_for_clone_detection(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (auto& t : normalize_tokens(tokens)) out.push_back(std::move(t.text));
  return out;
}

inline void to_json(nlohmann::json& j, const WordSequence& s) {
  auto words = nlohmann::json::array();
  for (const auto& w : s.words) words.push_back(nlohmann::json::array({w.channel, w.text}));
  j = nlohmann::json{{"file_id", s.file_id},
                     {"begin_line", s.begin_line},
                     {"end_line", s.end_line},
                     {"words", std::move(words)},
                     {"lines", s.lines}};
}

inline void from_json(const nlohmann::json& j, WordSequence& s) {
  s.file_id = j.at("file_id").get<FileId>();
  s.begin_line = j.value("begin_line", 1u);
  s.end_line = j.value("end_line", 1u);
  s.words.clear();
  for (const auto& w : j.at("words"))
    s.words.push_back({w.at(0).get<Channel>(), w.at(1).get<std::string>()});
  s.lines = j.value("lines", std::vector<std::uint32_t>(s.words.size(), s.begin_line));
  if (s.lines.size() != s.words.size()) throw Error("word/line arrays differ in length");
}

}  // namespace clonetag
