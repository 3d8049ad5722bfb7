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

#include <sstream>
#include <string>
#include <vector>

#include "extpass/error.hpp"

namespace extpass {

// Threat categories. The privacy-read threat splits into history, bookmarks
// and installed-extensions so each maps to exactly one permission.
enum class ThreatCategory {
  ExecuteCode,
  BypassSOP,
  ReadCookies,
  ReadHistory,
  ReadBookmarks,
  ListExtensions,
  StoreData,
  TriggerDownloads,
};

inline const std::vector<ThreatCategory>& all_categories() {
  static const std::vector<ThreatCategory> kAll = {
      ThreatCategory::ExecuteCode,    ThreatCategory::BypassSOP,
      ThreatCategory::ReadCookies,    ThreatCategory::ReadHistory,
      ThreatCategory::ReadBookmarks,  ThreatCategory::ListExtensions,
      ThreatCategory::StoreData,      ThreatCategory::TriggerDownloads};
  return kAll;
}

// Report keys, matching the analyzer's JSON output vocabulary.
inline const char* category_key(ThreatCategory c) {
  switch (c) {
    case ThreatCategory::ExecuteCode: return "code";
    case ThreatCategory::BypassSOP: return "ajax";
    case ThreatCategory::ReadCookies: return "cookies";
    case ThreatCategory::ReadHistory: return "history";
    case ThreatCategory::ReadBookmarks: return "bookmarks";
    case ThreatCategory::ListExtensions: return "management";
    case ThreatCategory::StoreData: return "storage";
    case ThreatCategory::TriggerDownloads: return "downloads";
  }
  return "?";
}

inline bool category_from_key(const std::string& key, ThreatCategory& out) {
  for (ThreatCategory c : all_categories()) {
    if (key == category_key(c)) {
      out = c;
      return true;
    }
  }
  return false;
}

// One privileged API the analyzer watches for inside handler closures.
struct WatchlistEntry {
  std::string canonical;        // dotted access path, e.g. "cookies.getAll"
  ThreatCategory category{};
  bool extension_api = false;   // matched under chrome./browser. heads too
  bool background_only = false; // only flagged in background/UI components
  bool allow_call = true;
  bool allow_new = false;
  bool requires_string_arg = false;  // setTimeout/setInterval string form
  bool destructive = false;          // reported with a destructive marker
};

inline std::vector<WatchlistEntry> default_watchlist() {
  using C = ThreatCategory;
  auto page = [](const char* path, C cat) {
    WatchlistEntry e;
    e.canonical = path;
    e.category = cat;
    return e;
  };
  auto ext = [](const char* path, C cat) {
    WatchlistEntry e;
    e.canonical = path;
    e.category = cat;
    e.extension_api = true;
    return e;
  };

  std::vector<WatchlistEntry> w;
  // Arbitrary code execution.
  w.push_back(page("eval", C::ExecuteCode));
  {
    WatchlistEntry e = page("Function", C::ExecuteCode);
    e.allow_new = true;
    w.push_back(e);
  }
  for (const char* timer : {"setTimeout", "setInterval"}) {
    WatchlistEntry e = page(timer, C::ExecuteCode);
    e.requires_string_arg = true;
    w.push_back(e);
  }
  {
    WatchlistEntry e = ext("tabs.executeScript", C::ExecuteCode);
    e.background_only = true;
    w.push_back(e);
  }
  // Cross-origin requests.
  {
    WatchlistEntry e = page("XMLHttpRequest", C::BypassSOP);
    e.allow_new = true;
    w.push_back(e);
  }
  w.push_back(page("fetch", C::BypassSOP));
  for (const char* jq : {"$.get", "$.ajax", "$.post"})
    w.push_back(page(jq, C::BypassSOP));
  for (const char* ng : {"$http.get", "$http.post"})
    w.push_back(page(ng, C::BypassSOP));
  // Extension storage.
  for (const char* s : {"storage.local.set", "storage.local.get",
                        "storage.sync.set", "storage.sync.get"})
    w.push_back(ext(s, C::StoreData));
  // Cookies.
  w.push_back(ext("cookies.getAll", C::ReadCookies));
  w.push_back(ext("cookies.get", C::ReadCookies));
  w.push_back(ext("cookies", C::ReadCookies));
  {
    WatchlistEntry e = ext("cookies.remove", C::ReadCookies);
    e.destructive = true;
    w.push_back(e);
  }
  // History.
  w.push_back(ext("history.search", C::ReadHistory));
  w.push_back(ext("history.getVisits", C::ReadHistory));
  w.push_back(ext("topSites.get", C::ReadHistory));
  {
    WatchlistEntry e = ext("history.deleteAll", C::ReadHistory);
    e.destructive = true;
    w.push_back(e);
  }
  // Bookmarks.
  w.push_back(ext("bookmarks.getTree", C::ReadBookmarks));
  w.push_back(ext("bookmarks.search", C::ReadBookmarks));
  w.push_back(ext("bookmarks.getChildren", C::ReadBookmarks));
  // Installed extensions.
  w.push_back(ext("management.getAll", C::ListExtensions));
  // Downloads.
  w.push_back(ext("downloads.download", C::TriggerDownloads));
  return w;
}

// Text format, one entry per line:
//   <canonical-path> <category-key> [ext|page] [bg-only] [new] [string-arg]
//   [destructive]
// '#' starts a comment. Paths with a chrome-API head default to `ext`.
inline std::vector<WatchlistEntry> parse_watchlist(const std::string& text) {
  std::vector<WatchlistEntry> out;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::string path, category_name;
    if (!(fields >> path)) continue;  // blank line
    if (!(fields >> category_name))
      raise(ErrorCode::IoError, "watchlist line " + std::to_string(lineno) +
                                    ": missing category");
    WatchlistEntry e;
    e.canonical = path;
    if (!category_from_key(category_name, e.category))
      raise(ErrorCode::IoError, "watchlist line " + std::to_string(lineno) +
                                    ": unknown category '" + category_name + "'");
    static const std::vector<std::string> kExtHeads = {
        "storage", "cookies", "history", "bookmarks", "management",
        "downloads", "topSites", "tabs", "runtime"};
    std::string head = path.substr(0, path.find('.'));
    for (const std::string& h : kExtHeads)
      if (head == h) e.extension_api = true;
    std::string flag;
    while (fields >> flag) {
      if (flag == "ext") e.extension_api = true;
      else if (flag == "page") e.extension_api = false;
      else if (flag == "bg-only") e.background_only = true;
      else if (flag == "new") e.allow_new = true;
      else if (flag == "string-arg") e.requires_string_arg = true;
      else if (flag == "destructive") e.destructive = true;
      else
        raise(ErrorCode::IoError, "watchlist line " + std::to_string(lineno) +
                                      ": unknown flag '" + flag + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace extpass
