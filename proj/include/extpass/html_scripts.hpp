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

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace extpass {

struct HtmlScripts {
  std::vector<std::string> inline_sources;  // document order
  std::vector<std::string> external_refs;   // raw src attribute values
  std::vector<std::string> warnings;
};

namespace detail {

inline char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

inline bool ci_match(std::string_view text, size_t pos, std::string_view what) {
  if (pos + what.size() > text.size()) return false;
  for (size_t i = 0; i < what.size(); ++i)
    if (lower(text[pos + i]) != lower(what[i])) return false;
  return true;
}

inline bool is_javascript_type(std::string_view type) {
  std::string t;
  for (char c : type) t.push_back(lower(c));
  // Trim.
  size_t b = t.find_first_not_of(" \t\r\n");
  size_t e = t.find_last_not_of(" \t\r\n");
  t = (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
  return t.empty() || t == "text/javascript" || t == "application/javascript" ||
         t == "application/x-javascript" || t == "text/ecmascript" ||
         t == "application/ecmascript" || t == "module" || t == "text/jscript";
}

struct ScriptTag {
  std::string src;
  std::string type;
  bool has_src = false;
  size_t content_begin = 0;  // position just past '>'
  bool closed = false;       // self-closing
};

// Parses the attributes of one <script ...> tag starting right after the
// tag name; returns the tag or npos-begin when the tag never closes.
inline ScriptTag parse_script_tag(std::string_view html, size_t& pos) {
  ScriptTag tag;
  while (pos < html.size()) {
    char c = html[pos];
    if (c == '>') {
      ++pos;
      tag.content_begin = pos;
      return tag;
    }
    if (c == '/' && pos + 1 < html.size() && html[pos + 1] == '>') {
      pos += 2;
      tag.closed = true;
      tag.content_begin = pos;
      return tag;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    // Attribute name.
    size_t name_begin = pos;
    while (pos < html.size() && html[pos] != '=' && html[pos] != '>' &&
           html[pos] != '/' && !std::isspace(static_cast<unsigned char>(html[pos])))
      ++pos;
    std::string name;
    for (size_t i = name_begin; i < pos; ++i) name.push_back(lower(html[i]));
    while (pos < html.size() && std::isspace(static_cast<unsigned char>(html[pos])))
      ++pos;
    std::string value;
    if (pos < html.size() && html[pos] == '=') {
      ++pos;
      while (pos < html.size() && std::isspace(static_cast<unsigned char>(html[pos])))
        ++pos;
      if (pos < html.size() && (html[pos] == '"' || html[pos] == '\'')) {
        char q = html[pos++];
        size_t vb = pos;
        while (pos < html.size() && html[pos] != q) ++pos;
        value.assign(html.substr(vb, pos - vb));
        if (pos < html.size()) ++pos;
      } else {
        size_t vb = pos;
        while (pos < html.size() && html[pos] != '>' &&
               !std::isspace(static_cast<unsigned char>(html[pos])))
          ++pos;
        value.assign(html.substr(vb, pos - vb));
      }
    }
    if (name == "src") {
      tag.has_src = true;
      tag.src = value;
    } else if (name == "type") {
      tag.type = value;
    }
  }
  tag.content_begin = std::string_view::npos;
  return tag;
}

}  // namespace detail

// Best-effort extraction of the scripts of an HTML page: inline bodies in
// document order plus unresolved src references. Never throws; malformed
// markup degrades to whatever was recognizable, with a warning.
inline HtmlScripts extract_inline_scripts(std::string_view html) {
  HtmlScripts out;
  size_t pos = 0;
  while (pos < html.size()) {
    if (detail::ci_match(html, pos, "<!--")) {
      size_t end = html.find("-->", pos + 4);
      pos = (end == std::string_view::npos) ? html.size() : end + 3;
      continue;
    }
    if (!detail::ci_match(html, pos, "<script")) {
      ++pos;
      continue;
    }
    size_t after = pos + 7;
    if (after < html.size() && !std::isspace(static_cast<unsigned char>(html[after])) &&
        html[after] != '>' && html[after] != '/') {
      ++pos;  // e.g. <scriptfoo
      continue;
    }
    pos = after;
    detail::ScriptTag tag = detail::parse_script_tag(html, pos);
    if (tag.content_begin == std::string_view::npos) {
      out.warnings.push_back("unterminated <script> tag");
      break;
    }
    bool is_js = detail::is_javascript_type(tag.type);
    if (tag.has_src) {
      if (is_js && !tag.src.empty()) out.external_refs.push_back(tag.src);
      if (tag.closed) continue;
    }
    if (tag.closed) continue;
    // Body runs to the matching close tag.
    size_t body_end = std::string_view::npos;
    for (size_t p = tag.content_begin; p + 8 <= html.size(); ++p) {
      if (detail::ci_match(html, p, "</script")) {
        body_end = p;
        break;
      }
    }
    if (body_end == std::string_view::npos) {
      if (!tag.has_src && is_js) {
        out.inline_sources.emplace_back(html.substr(tag.content_begin));
        out.warnings.push_back("unterminated <script> body");
      }
      break;
    }
    if (!tag.has_src && is_js)
      out.inline_sources.emplace_back(
          html.substr(tag.content_begin, body_end - tag.content_begin));
    pos = html.find('>', body_end);
    pos = (pos == std::string_view::npos) ? html.size() : pos + 1;
  }
  return out;
}

}  // namespace extpass
