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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "extpass/closure.hpp"
#include "extpass/listeners.hpp"
#include "extpass/package.hpp"
#include "extpass/watchlist.hpp"

namespace extpass {

// One privileged-API invocation reachable from a message handler.
struct SensitiveApiHit {
  std::string api;      // canonical watchlist path
  std::string written;  // spelling at the call site
  ThreatCategory category{};
  ComponentKind component{};
  std::string location;  // "origin:line"
  bool gated = false;
  bool destructive = false;
};

struct ListenerSummary {
  std::string channel;
  std::string location;
  std::string written;
};

struct ForwardingInfo {
  bool present = false;
  std::vector<std::string> locations;
};

// Findings for one page-exposed channel (a content-script group, the UI
// pages, or the external background surface).
struct ChannelReport {
  std::string label;
  std::string origin;
  std::vector<std::string> match_patterns;
  std::vector<ListenerSummary> listeners;
  std::vector<SensitiveApiHit> hits;
  ForwardingInfo forwarding;
  bool to_back = false;  // forwarding seen and background listens internally
  std::vector<SensitiveApiHit> back_hits;
  std::vector<ListenerSummary> back_listeners;
  std::vector<std::string> reachable_from;  // external channel only
  bool synthetic = false;                   // dynamically injected script
};

struct SuspicionReport {
  std::string extension_id;
  std::string name;
  std::string version;
  std::vector<ChannelReport> cs_channels;
  std::vector<ChannelReport> ui_channels;
  std::optional<ChannelReport> back_channel;
  std::vector<std::string> diagnostics;
  std::vector<ListenerSummary> unreachable_listeners;
  std::vector<std::pair<ThreatCategory, bool>> summary;  // category, gated
  bool suspicious = false;
};

struct AnalyzeOptions {
  bool ungated = false;               // keep hits whose permission is missing
  bool dynamic_content_scripts = true;
  std::vector<WatchlistEntry> watchlist = default_watchlist();
};

// Matches a closure's constructs against the watchlist. Gating is applied
// separately.
inline std::vector<SensitiveApiHit> detect_sensitive_calls(
    const HandlerClosure& closure, ComponentKind component,
    const IndexedTables& tables, const std::vector<WatchlistEntry>& watchlist) {
  std::vector<SensitiveApiHit> hits;
  for (const CallRecord& rec : closure.constructs) {
    const std::string key = rec.path.key();
    for (const WatchlistEntry& entry : watchlist) {
      if (entry.canonical != key) continue;
      if (rec.path.namespace_prefixed && !entry.extension_api) continue;
      if (entry.background_only && component == ComponentKind::ContentScript)
        continue;
      if (rec.is_new ? !entry.allow_new : !entry.allow_call) continue;
      if (entry.requires_string_arg) {
        if (rec.args.empty() || !rec.args[0]) continue;
        if (!resolves_to_any_string(*rec.args[0], tables)) continue;
      }
      SensitiveApiHit hit;
      hit.api = entry.canonical;
      hit.written = rec.written;
      hit.category = entry.category;
      hit.component = component;
      hit.location = tables.location_of(rec.where);
      hit.destructive = entry.destructive;
      hits.push_back(std::move(hit));
    }
  }
  return hits;
}

// Structural forwarding check: any extension-messaging call inside the
// closure counts. Bare postMessage is the reply path back to the page, so
// only receiver-qualified postMessage (a port) counts.
inline ForwardingInfo detect_forwarding(const HandlerClosure& closure,
                                        const IndexedTables& tables) {
  ForwardingInfo info;
  for (const CallRecord& rec : closure.constructs) {
    if (rec.is_new) continue;
    const std::string key = rec.path.key();
    bool forwards = key == "runtime.sendMessage" || key == "runtime.connect" ||
                    (rec.path.segments.size() >= 2 &&
                     rec.path.segments.back() == "postMessage");
    if (forwards) {
      info.present = true;
      info.locations.push_back(tables.location_of(rec.where));
    }
  }
  return info;
}

// Permission gate per category: a hit is gated when the manifest declares
// the permission the API needs at runtime. In default mode only gated hits
// survive; in ungated mode everything survives with the flag visible.
inline std::vector<SensitiveApiHit> gate_by_permissions(
    std::vector<SensitiveApiHit> hits, const ManifestInfo& manifest,
    bool ungated_mode) {
  auto gated_of = [&manifest](const SensitiveApiHit& h) -> bool {
    switch (h.category) {
      case ThreatCategory::ExecuteCode:
        if (h.api == "tabs.executeScript")
          return manifest.has_host_permission() ||
                 manifest.has_permission("activeTab");
        return true;  // eval and friends need no permission
      case ThreatCategory::BypassSOP:
        return manifest.has_host_permission();
      case ThreatCategory::ReadCookies:
        return manifest.has_permission("cookies");
      case ThreatCategory::ReadHistory:
        if (h.api.rfind("topSites", 0) == 0)
          return manifest.has_permission("topSites");
        return manifest.has_permission("history");
      case ThreatCategory::ReadBookmarks:
        return manifest.has_permission("bookmarks");
      case ThreatCategory::ListExtensions:
        return manifest.has_permission("management");
      case ThreatCategory::StoreData:
        return manifest.has_permission("storage");
      case ThreatCategory::TriggerDownloads:
        return manifest.has_permission("downloads");
    }
    return false;
  };
  std::vector<SensitiveApiHit> out;
  for (SensitiveApiHit& h : hits) {
    h.gated = gated_of(h);
    if (h.gated || ungated_mode) out.push_back(std::move(h));
  }
  return out;
}

namespace detail {

struct AnalysisScope {
  ComponentKind component{};
  std::vector<js::SyntaxTree> pending;  // parsed units awaiting indexing
  IndexedTables tables;

  void index() { tables = build_tables(std::move(pending)); }
};

inline void parse_into_scope(AnalysisScope& scope, const std::string& source,
                             const std::string& origin,
                             std::vector<std::string>& diagnostics) {
  try {
    scope.pending.push_back(js::parse_source(source, origin));
  } catch (const Error& e) {
    diagnostics.push_back("parse failure in " + origin + ": " + e.what());
  }
}

inline void dedup_hits(std::vector<SensitiveApiHit>& hits) {
  std::set<std::string> seen;
  std::vector<SensitiveApiHit> out;
  for (SensitiveApiHit& h : hits) {
    std::string key = h.api + "|" + h.written + "|" + h.location;
    if (seen.insert(key).second) out.push_back(std::move(h));
  }
  hits = std::move(out);
}

inline ListenerSummary summarize(const ListenerRegistration& reg,
                                 const IndexedTables& tables) {
  return ListenerSummary{channel_kind_name(reg.channel),
                         tables.location_of(reg.where), reg.written};
}

struct ChannelAnalysis {
  std::vector<SensitiveApiHit> hits;
  ForwardingInfo forwarding;
  std::vector<ListenerSummary> listeners;
};

inline ChannelAnalysis analyze_channel_listeners(
    const std::vector<ListenerRegistration>& regs, ComponentKind component,
    const IndexedTables& tables, const std::vector<WatchlistEntry>& watchlist) {
  ChannelAnalysis out;
  for (const ListenerRegistration& reg : regs) {
    out.listeners.push_back(summarize(reg, tables));
    for (const FunctionRef& handler : reg.handlers) {
      HandlerClosure closure = expand_handler(handler, tables);
      for (SensitiveApiHit& h :
           detect_sensitive_calls(closure, component, tables, watchlist))
        out.hits.push_back(std::move(h));
      ForwardingInfo fwd = detect_forwarding(closure, tables);
      if (fwd.present) {
        out.forwarding.present = true;
        for (std::string& loc : fwd.locations)
          out.forwarding.locations.push_back(std::move(loc));
      }
    }
  }
  dedup_hits(out.hits);
  std::set<std::string> seen_locs;
  std::vector<std::string> locs;
  for (std::string& l : out.forwarding.locations)
    if (seen_locs.insert(l).second) locs.push_back(std::move(l));
  out.forwarding.locations = std::move(locs);
  return out;
}

inline std::string join_origins(const AnalysisScope& scope) {
  std::string out;
  for (const std::string& origin : scope.tables.unit_origins) {
    if (!out.empty()) out += ", ";
    out += origin;
  }
  return out;
}

}  // namespace detail

// Full static pass over one extension: parse and index each scope, find the
// message-passing surfaces, expand handler closures, detect and gate
// sensitive calls, and assemble the suspicion report.
inline SuspicionReport analyze_extension(const ExtensionPackage& pkg,
                                         const AnalyzeOptions& options = {}) {
  using detail::AnalysisScope;
  SuspicionReport report;
  report.extension_id = pkg.id;
  report.name = pkg.manifest.name;
  report.version = pkg.manifest.version;
  report.diagnostics = pkg.warnings;

  // Scopes: one per content-script group, background as a whole, UI as a
  // whole. Each content script group is analyzed independently.
  std::map<int, AnalysisScope> content_scopes;
  AnalysisScope background{ComponentKind::Background, {}, {}};
  AnalysisScope ui{ComponentKind::UIPage, {}, {}};

  for (const ScriptUnit& unit : pkg.script_units) {
    switch (unit.component) {
      case ComponentKind::ContentScript: {
        AnalysisScope& scope = content_scopes[unit.group_index.value_or(0)];
        scope.component = ComponentKind::ContentScript;
        detail::parse_into_scope(scope, unit.source_text, unit.origin,
                                 report.diagnostics);
        break;
      }
      case ComponentKind::Background:
        detail::parse_into_scope(background, unit.source_text, unit.origin,
                                 report.diagnostics);
        break;
      case ComponentKind::UIPage:
        detail::parse_into_scope(ui, unit.source_text, unit.origin,
                                 report.diagnostics);
        break;
    }
  }

  for (auto& [group, scope] : content_scopes) scope.index();
  background.index();
  ui.index();

  // One feedback round: content scripts injected from background/UI code
  // join the pipeline as synthetic groups after the static ones.
  std::vector<std::pair<int, AnalysisScope>> synthetic_scopes;
  if (options.dynamic_content_scripts) {
    int next_group =
        static_cast<int>(pkg.manifest.content_script_groups.size());
    for (AnalysisScope* host : {&background, &ui}) {
      std::vector<DynamicScript> dynamic =
          find_dynamic_content_scripts(host->tables, report.diagnostics);
      for (const DynamicScript& d : dynamic) {
        AnalysisScope scope{ComponentKind::ContentScript, {}, {}};
        std::string source;
        std::string origin;
        if (d.is_file) {
          std::string rel = detail::normalize_package_path(d.text);
          auto body = detail::read_package_file(pkg.root, rel);
          if (!body) {
            report.diagnostics.push_back(
                "unreadable dynamic content script: " + rel);
            continue;
          }
          source = std::move(*body);
          origin = rel;
        } else {
          source = d.text;
          origin = "dynamic from " + host->tables.origin_of(d.where.unit) +
                   ":" + std::to_string(d.where.line);
        }
        detail::parse_into_scope(scope, source, origin, report.diagnostics);
        if (scope.pending.empty()) continue;
        scope.index();
        synthetic_scopes.emplace_back(next_group++, std::move(scope));
      }
    }
  }

  // Background listener inventory.
  std::vector<ListenerRegistration> external_regs = find_external_listeners(
      background.tables, pkg.manifest, report.diagnostics);
  std::vector<ListenerRegistration> internal_regs =
      find_internal_listeners(background.tables, report.diagnostics);

  // Hits behind forwarding are those of all internal listeners; computed
  // once, attributed under each forwarding channel.
  detail::ChannelAnalysis internal_analysis = detail::analyze_channel_listeners(
      internal_regs, ComponentKind::Background, background.tables,
      options.watchlist);

  auto build_page_channel =
      [&](const AnalysisScope& scope, const std::string& label,
          std::vector<std::string> matches, bool synthetic,
          ComponentKind component) -> std::optional<ChannelReport> {
    std::vector<ListenerRegistration> regs =
        find_page_listeners(scope.tables, component, report.diagnostics);
    if (regs.empty()) return std::nullopt;
    detail::ChannelAnalysis analysis = detail::analyze_channel_listeners(
        regs, component, scope.tables, options.watchlist);
    ChannelReport ch;
    ch.label = label;
    ch.origin = detail::join_origins(scope);
    ch.match_patterns = std::move(matches);
    ch.listeners = std::move(analysis.listeners);
    ch.hits = std::move(analysis.hits);
    ch.forwarding = std::move(analysis.forwarding);
    ch.synthetic = synthetic;
    if (ch.forwarding.present && !internal_regs.empty()) {
      ch.to_back = true;
      ch.back_hits = internal_analysis.hits;
      ch.back_listeners = internal_analysis.listeners;
    }
    return ch;
  };

  for (auto& [group, scope] : content_scopes) {
    std::vector<std::string> matches;
    if (group >= 0 &&
        group < static_cast<int>(pkg.manifest.content_script_groups.size()))
      matches = pkg.manifest.content_script_groups[static_cast<size_t>(group)]
                    .match_patterns;
    auto ch = build_page_channel(scope, "cs_" + std::to_string(group),
                                 std::move(matches), false,
                                 ComponentKind::ContentScript);
    if (ch) report.cs_channels.push_back(std::move(*ch));
  }
  for (auto& [group, scope] : synthetic_scopes) {
    auto ch = build_page_channel(scope, "cs_" + std::to_string(group), {},
                                 true, ComponentKind::ContentScript);
    if (ch) report.cs_channels.push_back(std::move(*ch));
  }
  if (auto ch = build_page_channel(ui, "ui", {}, false, ComponentKind::UIPage))
    report.ui_channels.push_back(std::move(*ch));

  // External background surface.
  std::vector<ListenerRegistration> reachable_external;
  for (const ListenerRegistration& reg : external_regs) {
    if (reg.reachable) {
      reachable_external.push_back(reg);
    } else {
      report.unreachable_listeners.push_back(
          detail::summarize(reg, background.tables));
    }
  }
  if (!reachable_external.empty()) {
    detail::ChannelAnalysis analysis = detail::analyze_channel_listeners(
        reachable_external, ComponentKind::Background, background.tables,
        options.watchlist);
    ChannelReport ch;
    ch.label = "back";
    ch.origin = detail::join_origins(background);
    ch.listeners = std::move(analysis.listeners);
    ch.hits = std::move(analysis.hits);
    ch.reachable_from = pkg.manifest.externally_connectable_matches;
    report.back_channel = std::move(ch);
  }

  // Gate every hit list.
  auto gate = [&](std::vector<SensitiveApiHit>& hits) {
    hits = gate_by_permissions(std::move(hits), pkg.manifest, options.ungated);
  };
  for (auto* channels : {&report.cs_channels, &report.ui_channels}) {
    for (ChannelReport& ch : *channels) {
      gate(ch.hits);
      gate(ch.back_hits);
    }
  }
  if (report.back_channel) gate(report.back_channel->hits);

  // Suspicion and summary cover hits reachable from a page-exposed channel.
  std::map<ThreatCategory, bool> categories;
  auto account = [&categories, &report](const std::vector<SensitiveApiHit>& hits) {
    for (const SensitiveApiHit& h : hits) {
      auto [it, inserted] = categories.emplace(h.category, h.gated);
      if (!inserted) it->second = it->second || h.gated;
      if (h.gated) report.suspicious = true;
    }
  };
  for (const auto* channels : {&report.cs_channels, &report.ui_channels}) {
    for (const ChannelReport& ch : *channels) {
      account(ch.hits);
      account(ch.back_hits);
    }
  }
  if (report.back_channel) account(report.back_channel->hits);
  for (ThreatCategory c : all_categories()) {
    auto it = categories.find(c);
    if (it != categories.end()) report.summary.emplace_back(c, it->second);
  }

  return report;
}

}  // namespace extpass
