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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "extpass/error.hpp"

namespace extpass {

struct ContentScriptGroup {
  int group_index = 0;
  std::vector<std::string> match_patterns;
  std::vector<std::string> script_paths;
};

struct ManifestInfo {
  std::string name;
  std::string version;
  std::vector<std::string> permissions;
  std::vector<ContentScriptGroup> content_script_groups;
  std::vector<std::string> background_scripts;
  std::optional<std::string> background_page;
  std::vector<std::string> ui_page_paths;
  std::vector<std::string> externally_connectable_matches;

  bool has_permission(const std::string& p) const {
    for (const std::string& s : permissions)
      if (s == p) return true;
    return false;
  }

  // Host permissions are match patterns; named API permissions are plain
  // words.
  bool has_host_permission() const {
    for (const std::string& s : permissions)
      if (s == "<all_urls>" || s.find("://") != std::string::npos) return true;
    return false;
  }
};

namespace detail {

inline std::vector<std::string> string_array(const nlohmann::json& j) {
  std::vector<std::string> out;
  if (!j.is_array()) return out;
  for (const auto& el : j)
    if (el.is_string()) out.push_back(el.get<std::string>());
  return out;
}

inline std::optional<std::string> string_at(const nlohmann::json& j,
                                            const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

// The platform rejects bare scheme-host wildcards in externally_connectable;
// such patterns grant nothing, so they are dropped up front.
inline bool is_bare_wildcard_pattern(const std::string& pattern) {
  if (pattern == "*" || pattern == "<all_urls>") return true;
  size_t scheme = pattern.find("://");
  if (scheme == std::string::npos) return false;
  size_t host_begin = scheme + 3;
  size_t host_end = pattern.find('/', host_begin);
  std::string host = pattern.substr(
      host_begin, host_end == std::string::npos ? std::string::npos
                                                : host_end - host_begin);
  return host == "*";
}

}  // namespace detail

// Parses a manifest.json document. Comments are tolerated (the stores do),
// everything else must be valid JSON with an object at the top level.
inline ManifestInfo parse_manifest(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::MalformedManifest, e.what());
  }
  if (!j.is_object())
    raise(ErrorCode::MalformedManifest, "top-level value is not an object");

  ManifestInfo m;
  if (auto v = detail::string_at(j, "name")) m.name = *v;
  if (auto v = detail::string_at(j, "version")) m.version = *v;

  if (auto it = j.find("permissions"); it != j.end())
    m.permissions = detail::string_array(*it);
  // Manifest v3 moves host patterns into their own key.
  if (auto it = j.find("host_permissions"); it != j.end())
    for (std::string& p : detail::string_array(*it))
      m.permissions.push_back(std::move(p));

  if (auto it = j.find("content_scripts"); it != j.end() && it->is_array()) {
    int index = 0;
    for (const auto& g : *it) {
      ContentScriptGroup group;
      group.group_index = index++;
      if (g.is_object()) {
        if (auto mi = g.find("matches"); mi != g.end())
          group.match_patterns = detail::string_array(*mi);
        if (auto ji = g.find("js"); ji != g.end())
          group.script_paths = detail::string_array(*ji);
      }
      m.content_script_groups.push_back(std::move(group));
    }
  }

  if (auto it = j.find("background"); it != j.end() && it->is_object()) {
    if (auto si = it->find("scripts"); si != it->end())
      m.background_scripts = detail::string_array(*si);
    if (auto v = detail::string_at(*it, "page")) m.background_page = *v;
    // Manifest v3 service workers are plain background scripts for the
    // messaging surfaces analyzed here.
    if (auto v = detail::string_at(*it, "service_worker"))
      m.background_scripts.push_back(*v);
  }

  auto add_ui_page = [&m](const std::optional<std::string>& p) {
    if (!p || p->empty()) return;
    for (const std::string& existing : m.ui_page_paths)
      if (existing == *p) return;
    m.ui_page_paths.push_back(*p);
  };
  for (const char* action_key : {"browser_action", "page_action", "action"}) {
    if (auto it = j.find(action_key); it != j.end() && it->is_object())
      add_ui_page(detail::string_at(*it, "default_popup"));
  }
  add_ui_page(detail::string_at(j, "options_page"));
  if (auto it = j.find("options_ui"); it != j.end() && it->is_object())
    add_ui_page(detail::string_at(*it, "page"));

  if (auto it = j.find("externally_connectable");
      it != j.end() && it->is_object()) {
    if (auto mi = it->find("matches"); mi != it->end())
      for (std::string& p : detail::string_array(*mi))
        if (!detail::is_bare_wildcard_pattern(p))
          m.externally_connectable_matches.push_back(std::move(p));
  }

  return m;
}

}  // namespace extpass
