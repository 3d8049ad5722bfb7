/*
 * Copyright (c) 2026 The extpass Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "extpass/error.hpp"

namespace extpass::js {

enum class TokenType {
  Identifier,
  Punctuator,
  Number,
  String,
  Regex,
  TemplateHead,    // `...${
  TemplateMiddle,  // }...${
  TemplateTail,    // }...`
  TemplateFull,    // `...`  (no substitution)
  EndOfFile,
};

struct Token {
  TokenType type = TokenType::EndOfFile;
  std::string text;   // identifier/punctuator spelling, or cooked string value
  double number = 0;
  uint32_t begin = 0;
  uint32_t end = 0;
  uint32_t line = 1;
  uint32_t column = 0;
  bool newline_before = false;

  bool is(std::string_view s) const {
    return type == TokenType::Punctuator && text == s;
  }
  bool is_identifier(std::string_view s) const {
    return type == TokenType::Identifier && text == s;
  }
};

inline const std::unordered_set<std::string>& reserved_words() {
  static const std::unordered_set<std::string> kWords = {
      "break",   "case",    "catch",   "class",     "const",  "continue",
      "debugger", "default", "delete",  "do",        "else",   "enum",
      "export",  "extends", "finally", "for",       "function", "if",
      "import",  "in",      "instanceof", "new",     "return", "super",
      "switch",  "this",    "throw",   "try",       "typeof", "var",
      "void",    "while",   "with"};
  return kWords;
}

namespace detail {

inline bool is_id_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$' || c >= 0x80;
}

inline bool is_id_part(unsigned char c) {
  return is_id_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

inline bool is_hex_digit(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

inline int hex_value(unsigned char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline void append_code_point(std::string& out, uint32_t cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Multi-character punctuators, longest first so greedy matching works.
inline const std::vector<std::string>& punctuators() {
  static const std::vector<std::string> kPuncts = {
      ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=",
      "?\?=", "=>", "==", "!=", "<=", ">=", "&&", "||", "?\?", "++", "--",
      "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**",
      "?.", "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-",
      "*", "/", "%", "&", "|", "^", "!", "~", "?", ":", "=", ".", "@", "#"};
  return kPuncts;
}

}  // namespace detail

// Single-pass tokenizer. Regex-vs-division and template continuation are
// resolved with the usual previous-token heuristics, which is all a
// scope-insensitive analyzer needs; a misread surfaces as ParseFailure and
// the unit is skipped upstream.
class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    // UTF-8 BOM.
    if (src_.size() >= 3 && static_cast<unsigned char>(src_[0]) == 0xEF &&
        static_cast<unsigned char>(src_[1]) == 0xBB &&
        static_cast<unsigned char>(src_[2]) == 0xBF)
      pos_ = 3;
    // Hashbang.
    if (src_.size() >= pos_ + 2 && src_[pos_] == '#' && src_[pos_ + 1] == '!') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    }
    for (;;) {
      bool newline = skip_trivia();
      Token t;
      t.newline_before = newline || out.empty();
      t.line = line_;
      t.column = static_cast<uint32_t>(pos_ - line_start_);
      t.begin = static_cast<uint32_t>(pos_);
      if (pos_ >= src_.size()) {
        t.type = TokenType::EndOfFile;
        out.push_back(t);
        break;
      }
      scan_token(t, out);
      t.end = static_cast<uint32_t>(pos_);
      out.push_back(t);
    }
    return out;
  }

 private:
  std::string_view src_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  size_t line_start_ = 0;
  // Brace bookkeeping: true entries mark a template substitution opened by
  // `${`, so the matching `}` resumes template scanning.
  std::vector<bool> brace_is_template_;

  char peek(size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  void newline_at(size_t p) {
    ++line_;
    line_start_ = p + 1;
  }

  bool skip_trivia() {
    bool saw_newline = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        saw_newline = true;
        newline_at(pos_);
        ++pos_;
      } else if (c == '\r') {
        saw_newline = true;
        if (peek(1) == '\n') ++pos_;
        newline_at(pos_);
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\v' || c == '\f' ||
                 (static_cast<unsigned char>(c) == 0xC2 && static_cast<unsigned char>(peek(1)) == 0xA0)) {
        pos_ += (static_cast<unsigned char>(c) == 0xC2) ? 2 : 1;
      } else if (c == '/' && peek(1) == '/') {
        pos_ += 2;
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        pos_ += 2;
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) {
          if (src_[pos_] == '\n') {
            saw_newline = true;
            newline_at(pos_);
          }
          ++pos_;
        }
        pos_ = pos_ < src_.size() ? pos_ + 2 : src_.size();
      } else if (c == '<' && src_.substr(pos_).rfind("<!--", 0) == 0) {
        // Annex B HTML-like comment.
        pos_ += 4;
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
      } else if (c == '-' && saw_newline_only_before() &&
                 src_.substr(pos_).rfind("-->", 0) == 0) {
        pos_ += 3;
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
    return saw_newline;
  }

  bool saw_newline_only_before() const {
    for (size_t p = line_start_; p < pos_; ++p) {
      char c = src_[p];
      if (c != ' ' && c != '\t') return false;
    }
    return true;
  }

  void scan_token(Token& t, const std::vector<Token>& so_far) {
    char c = src_[pos_];
    if (detail::is_id_start(static_cast<unsigned char>(c)) || (c == '\\' && peek(1) == 'u')) {
      scan_identifier(t);
      return;
    }
    if (detail::is_digit(static_cast<unsigned char>(c)) ||
        (c == '.' && detail::is_digit(static_cast<unsigned char>(peek(1))))) {
      scan_number(t);
      return;
    }
    if (c == '"' || c == '\'') {
      scan_string(t);
      return;
    }
    if (c == '`') {
      ++pos_;
      scan_template_part(t, /*from_head=*/true);
      return;
    }
    if (c == '}' && !brace_is_template_.empty() && brace_is_template_.back()) {
      brace_is_template_.pop_back();
      ++pos_;
      scan_template_part(t, /*from_head=*/false);
      return;
    }
    if (c == '/' && regex_allowed(so_far)) {
      scan_regex(t);
      return;
    }
    scan_punctuator(t);
  }

  void scan_identifier(Token& t) {
    t.type = TokenType::Identifier;
    std::string name;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\\' && peek(1) == 'u') {
        pos_ += 2;
        uint32_t cp = 0;
        if (peek() == '{') {
          ++pos_;
          while (pos_ < src_.size() && src_[pos_] != '}') {
            int v = detail::hex_value(static_cast<unsigned char>(src_[pos_]));
            if (v < 0) break;
            cp = cp * 16 + static_cast<uint32_t>(v);
            ++pos_;
          }
          if (pos_ < src_.size() && src_[pos_] == '}') ++pos_;
        } else {
          for (int i = 0; i < 4 && pos_ < src_.size(); ++i, ++pos_) {
            int v = detail::hex_value(static_cast<unsigned char>(src_[pos_]));
            if (v < 0) break;
            cp = cp * 16 + static_cast<uint32_t>(v);
          }
        }
        detail::append_code_point(name, cp);
      } else if (detail::is_id_part(static_cast<unsigned char>(c))) {
        name.push_back(c);
        ++pos_;
      } else {
        break;
      }
    }
    t.text = std::move(name);
  }

  void scan_number(Token& t) {
    t.type = TokenType::Number;
    size_t start = pos_;
    auto digits = [&](auto pred) {
      while (pos_ < src_.size() &&
             (pred(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
    };
    if (src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      pos_ += 2;
      digits(detail::is_hex_digit);
    } else if (src_[pos_] == '0' && (peek(1) == 'o' || peek(1) == 'O' ||
                                     peek(1) == 'b' || peek(1) == 'B')) {
      pos_ += 2;
      digits(detail::is_digit);
    } else {
      digits(detail::is_digit);
      if (peek() == '.') {
        ++pos_;
        digits(detail::is_digit);
      }
      if (peek() == 'e' || peek() == 'E') {
        ++pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        digits(detail::is_digit);
      }
    }
    if (peek() == 'n') ++pos_;  // BigInt suffix
    std::string raw(src_.substr(start, pos_ - start));
    std::string cleaned;
    for (char ch : raw)
      if (ch != '_' && ch != 'n') cleaned.push_back(ch);
    t.text = raw;
    char* endp = nullptr;
    t.number = std::strtod(cleaned.c_str(), &endp);
  }

  void scan_string(Token& t) {
    t.type = TokenType::String;
    char quote = src_[pos_++];
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != quote) {
      char c = src_[pos_];
      if (c == '\\') {
        scan_escape(value);
      } else if (c == '\n' || c == '\r') {
        raise(ErrorCode::ParseFailure,
              "unterminated string literal at line " + std::to_string(line_));
      } else {
        value.push_back(c);
        ++pos_;
      }
    }
    if (pos_ >= src_.size())
      raise(ErrorCode::ParseFailure, "unterminated string literal");
    ++pos_;  // closing quote
    t.text = std::move(value);
  }

  void scan_escape(std::string& value) {
    ++pos_;  // backslash
    if (pos_ >= src_.size()) return;
    char c = src_[pos_++];
    switch (c) {
      case 'n': value.push_back('\n'); break;
      case 't': value.push_back('\t'); break;
      case 'r': value.push_back('\r'); break;
      case 'b': value.push_back('\b'); break;
      case 'f': value.push_back('\f'); break;
      case 'v': value.push_back('\v'); break;
      case '0':
        if (!detail::is_digit(static_cast<unsigned char>(peek()))) {
          value.push_back('\0');
          break;
        }
        [[fallthrough]];
      case '1': case '2': case '3': case '4':
      case '5': case '6': case '7': {
        // Legacy octal escape.
        uint32_t v = static_cast<uint32_t>(c - '0');
        for (int i = 0; i < 2 && peek() >= '0' && peek() <= '7'; ++i)
          v = v * 8 + static_cast<uint32_t>(src_[pos_++] - '0');
        detail::append_code_point(value, v);
        break;
      }
      case 'x': {
        uint32_t v = 0;
        for (int i = 0; i < 2 && detail::is_hex_digit(static_cast<unsigned char>(peek())); ++i)
          v = v * 16 + static_cast<uint32_t>(detail::hex_value(static_cast<unsigned char>(src_[pos_++])));
        detail::append_code_point(value, v);
        break;
      }
      case 'u': {
        uint32_t v = 0;
        if (peek() == '{') {
          ++pos_;
          while (pos_ < src_.size() && src_[pos_] != '}')
            v = v * 16 + static_cast<uint32_t>(detail::hex_value(static_cast<unsigned char>(src_[pos_++])));
          if (pos_ < src_.size()) ++pos_;
        } else {
          for (int i = 0; i < 4 && detail::is_hex_digit(static_cast<unsigned char>(peek())); ++i)
            v = v * 16 + static_cast<uint32_t>(detail::hex_value(static_cast<unsigned char>(src_[pos_++])));
        }
        detail::append_code_point(value, v);
        break;
      }
      case '\r':
        if (peek() == '\n') ++pos_;
        newline_at(pos_ - 1);
        break;  // line continuation
      case '\n':
        newline_at(pos_ - 1);
        break;
      default:
        value.push_back(c);
        break;
    }
  }

  void scan_template_part(Token& t, bool from_head) {
    std::string value;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '`') {
        ++pos_;
        t.type = from_head ? TokenType::TemplateFull : TokenType::TemplateTail;
        t.text = std::move(value);
        return;
      }
      if (c == '$' && peek(1) == '{') {
        pos_ += 2;
        brace_is_template_.push_back(true);
        t.type = from_head ? TokenType::TemplateHead : TokenType::TemplateMiddle;
        t.text = std::move(value);
        return;
      }
      if (c == '\\') {
        scan_escape(value);
      } else {
        if (c == '\n') newline_at(pos_);
        value.push_back(c);
        ++pos_;
      }
    }
    raise(ErrorCode::ParseFailure, "unterminated template literal");
  }

  void scan_regex(Token& t) {
    t.type = TokenType::Regex;
    size_t start = pos_;
    ++pos_;  // opening slash
    bool in_class = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (c == '\n' || c == '\r')
        raise(ErrorCode::ParseFailure,
              "unterminated regular expression at line " + std::to_string(line_));
      if (c == '[') in_class = true;
      else if (c == ']') in_class = false;
      else if (c == '/' && !in_class) break;
      ++pos_;
    }
    if (pos_ >= src_.size())
      raise(ErrorCode::ParseFailure, "unterminated regular expression");
    ++pos_;  // closing slash
    while (pos_ < src_.size() && detail::is_id_part(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    t.text = std::string(src_.substr(start, pos_ - start));
  }

  bool regex_allowed(const std::vector<Token>& so_far) const {
    if (so_far.empty()) return true;
    const Token& prev = so_far.back();
    switch (prev.type) {
      case TokenType::Number:
      case TokenType::String:
      case TokenType::Regex:
      case TokenType::TemplateFull:
      case TokenType::TemplateTail:
        return false;
      case TokenType::Identifier: {
        static const std::unordered_set<std::string> kBeforeRegex = {
            "return", "typeof", "instanceof", "in", "of", "new", "delete",
            "void", "throw", "case", "do", "else", "yield", "await"};
        return kBeforeRegex.count(prev.text) > 0;
      }
      case TokenType::Punctuator:
        if (prev.text == ")") {
          // Division after expression parens, regex after statement-header
          // parens: look back at the token before the matching open paren.
          int depth = 0;
          for (size_t j = so_far.size(); j-- > 0;) {
            const Token& t = so_far[j];
            if (t.type != TokenType::Punctuator) continue;
            if (t.text == ")") {
              ++depth;
            } else if (t.text == "(") {
              if (--depth != 0) continue;
              if (j == 0) return false;
              const Token& before = so_far[j - 1];
              return before.type == TokenType::Identifier &&
                     (before.text == "if" || before.text == "for" ||
                      before.text == "while" || before.text == "with");
            }
          }
          return false;
        }
        if (prev.text == "]" || prev.text == "++" || prev.text == "--")
          return false;
        return true;
      default:
        return true;
    }
  }

  void scan_punctuator(Token& t) {
    t.type = TokenType::Punctuator;
    std::string_view rest = src_.substr(pos_);
    // `?.3` is conditional + number, not optional chaining.
    if (rest.size() >= 2 && rest[0] == '?' && rest[1] == '.' &&
        !(rest.size() >= 3 && detail::is_digit(static_cast<unsigned char>(rest[2])))) {
      t.text = "?.";
      pos_ += 2;
      return;
    }
    for (const std::string& p : detail::punctuators()) {
      if (p == "?.") continue;
      if (rest.rfind(p, 0) == 0) {
        if (p == "{") brace_is_template_.push_back(false);
        if (p == "}" && !brace_is_template_.empty()) brace_is_template_.pop_back();
        t.text = p;
        pos_ += p.size();
        return;
      }
    }
    raise(ErrorCode::ParseFailure,
          "unexpected character '" + std::string(1, src_[pos_]) + "' at line " +
              std::to_string(line_));
  }
};

inline std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).tokenize();
}

}  // namespace extpass::js
