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

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "extpass/ast.hpp"
#include "extpass/error.hpp"

namespace extpass {

// A normalized property chain naming an API. One leading global alias
// (window, top, self, this) and one leading extension namespace (chrome,
// browser) are stripped during normalization; the latter is remembered so
// page APIs and extension APIs can be told apart when matching.
struct AccessPath {
  std::vector<std::string> segments;
  bool namespace_prefixed = false;

  std::string key() const {
    std::string k;
    for (size_t i = 0; i < segments.size(); ++i) {
      if (i) k.push_back('.');
      k += segments[i];
    }
    return k;
  }

  bool ends_with(std::initializer_list<const char*> suffix) const {
    if (segments.size() < suffix.size()) return false;
    size_t off = segments.size() - suffix.size();
    size_t i = 0;
    for (const char* s : suffix)
      if (segments[off + i++] != s) return false;
    return true;
  }
};

inline const std::vector<std::string>& global_aliases() {
  static const std::vector<std::string> kAliases = {"window", "top", "self",
                                                    "this"};
  return kAliases;
}

inline bool is_global_alias(const std::string& s) {
  const auto& a = global_aliases();
  return std::find(a.begin(), a.end(), s) != a.end();
}

inline bool is_extension_namespace(const std::string& s) {
  return s == "chrome" || s == "browser";
}

// Collects the raw property chain of an expression: dot accesses and
// bracket accesses with string-literal keys. Returns false when any link is
// computed with a non-literal key or the head is not a plain name / `this`.
inline bool raw_access_path(const js::Node& expr, std::vector<std::string>& out) {
  using js::NodeKind;
  const js::Node* n = &expr;
  std::vector<std::string> rev;
  while (n->kind == NodeKind::MemberExpression) {
    const js::Node* prop = n->property;
    if (!prop) return false;
    if (n->computed) {
      bool string_literal = (prop->kind == NodeKind::Literal &&
                             prop->literal == js::LiteralKind::String) ||
                            (prop->kind == NodeKind::TemplateLiteral &&
                             prop->list.empty());
      if (!string_literal) return false;
      rev.push_back(prop->string_value);
    } else {
      if (prop->kind != NodeKind::Identifier) return false;
      rev.push_back(prop->name);
    }
    n = n->object;
    if (!n) return false;
  }
  if (n->kind == NodeKind::Identifier) {
    rev.push_back(n->name);
  } else if (n->kind == NodeKind::ThisExpression) {
    rev.push_back("this");
  } else {
    return false;
  }
  out.assign(rev.rbegin(), rev.rend());
  return true;
}

// Strips at most one global alias head and one extension namespace head,
// never emptying the path.
inline AccessPath normalize_access_path(std::vector<std::string> raw) {
  size_t start = 0;
  if (raw.size() - start >= 2 && is_global_alias(raw[start])) ++start;
  bool ns = false;
  if (raw.size() - start >= 2 && is_extension_namespace(raw[start])) {
    ns = true;
    ++start;
  }
  AccessPath p;
  p.namespace_prefixed = ns;
  p.segments.assign(raw.begin() + static_cast<long>(start), raw.end());
  return p;
}

inline std::optional<AccessPath> access_path_of(const js::Node& expr) {
  std::vector<std::string> raw;
  if (!raw_access_path(expr, raw)) return std::nullopt;
  return normalize_access_path(std::move(raw));
}

namespace detail {

inline void enumerate_bare(const std::vector<std::string>& segments,
                           std::set<std::string>& out) {
  const std::string& head = segments.front();
  std::vector<std::string> heads;
  heads.push_back(head);
  for (const std::string& alias : global_aliases()) {
    heads.push_back(alias + "." + head);
    heads.push_back(alias + "[\"" + head + "\"]");
  }
  for (const std::string& prefix : heads) {
    std::vector<std::string> acc = {prefix};
    for (size_t i = 1; i < segments.size(); ++i) {
      std::vector<std::string> next;
      for (const std::string& a : acc) {
        next.push_back(a + "." + segments[i]);
        next.push_back(a + "[\"" + segments[i] + "\"]");
      }
      acc = std::move(next);
    }
    out.insert(acc.begin(), acc.end());
  }
}

}  // namespace detail

// All syntactic spellings an access path can be written with: an optional
// global-alias head in dot or bracket notation, every later segment in dot
// or bracket notation. A bare n-segment path yields 9 * 2^(n-1) patterns.
// Extension-namespace paths additionally get `chrome.` / `browser.` heads,
// each treated as a path one segment longer.
inline std::vector<std::string> enumerate_access_patterns(
    const std::vector<std::string>& segments, bool extension_namespace = false) {
  if (segments.empty())
    raise(ErrorCode::EmptyPath, "cannot enumerate an empty access path");
  std::set<std::string> out;
  detail::enumerate_bare(segments, out);
  if (extension_namespace) {
    for (const char* ns : {"chrome", "browser"}) {
      std::vector<std::string> prefixed;
      prefixed.reserve(segments.size() + 1);
      prefixed.emplace_back(ns);
      prefixed.insert(prefixed.end(), segments.begin(), segments.end());
      detail::enumerate_bare(prefixed, out);
    }
  }
  return {out.begin(), out.end()};
}

inline std::vector<std::string> enumerate_access_patterns(
    const AccessPath& path, bool extension_namespace = false) {
  return enumerate_access_patterns(path.segments, extension_namespace);
}

inline std::vector<std::string> split_dotted(const std::string& dotted) {
  std::vector<std::string> segments;
  std::string cur;
  for (char c : dotted) {
    if (c == '.') {
      segments.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  segments.push_back(cur);
  return segments;
}

}  // namespace extpass
