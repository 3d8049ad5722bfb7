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
#include <string>
#include <vector>

#include <json.hpp>

#include "extpass/threats.hpp"

namespace extpass {

enum class ReportFormat { Json, JsonCompat, Summary };

inline ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "json-compat") return ReportFormat::JsonCompat;
  if (s == "summary") return ReportFormat::Summary;
  raise(ErrorCode::UnknownFormat, "unknown report format '" + s + "'");
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

// Hits grouped as category -> api -> occurrences, in category order and
// first-seen api order.
struct GroupedHits {
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::vector<const SensitiveApiHit*>>>>>
      by_category;
};

inline GroupedHits group_hits(const std::vector<SensitiveApiHit>& hits) {
  GroupedHits g;
  for (ThreatCategory cat : all_categories()) {
    std::vector<std::pair<std::string, std::vector<const SensitiveApiHit*>>> apis;
    for (const SensitiveApiHit& h : hits) {
      if (h.category != cat) continue;
      bool found = false;
      for (auto& [name, occ] : apis) {
        if (name == h.written) {
          occ.push_back(&h);
          found = true;
          break;
        }
      }
      if (!found) apis.push_back({h.written, {&h}});
    }
    if (!apis.empty()) g.by_category.push_back({category_key(cat), std::move(apis)});
  }
  return g;
}

inline ordered_json findings_full(const std::vector<SensitiveApiHit>& hits) {
  ordered_json out = ordered_json::object();
  for (auto& [cat, apis] : group_hits(hits).by_category) {
    ordered_json catj = ordered_json::object();
    for (auto& [name, occurrences] : apis) {
      ordered_json entry = ordered_json::object();
      entry["api"] = occurrences.front()->api;
      entry["gated"] = false;
      for (const SensitiveApiHit* h : occurrences)
        if (h->gated) entry["gated"] = true;
      if (occurrences.front()->destructive) entry["destructive"] = true;
      ordered_json locs = ordered_json::array();
      for (const SensitiveApiHit* h : occurrences) locs.push_back(h->location);
      entry["locations"] = std::move(locs);
      catj[name] = std::move(entry);
    }
    out[cat] = std::move(catj);
  }
  return out;
}

inline ordered_json findings_compat(const std::vector<SensitiveApiHit>& hits) {
  ordered_json out = ordered_json::object();
  for (auto& [cat, apis] : group_hits(hits).by_category) {
    ordered_json catj = ordered_json::object();
    for (auto& [name, occurrences] : apis) catj[name] = "";
    out[cat] = std::move(catj);
  }
  return out;
}

inline ordered_json listeners_json(const std::vector<ListenerSummary>& ls) {
  ordered_json out = ordered_json::array();
  for (const ListenerSummary& l : ls) {
    ordered_json j = ordered_json::object();
    j["channel"] = l.channel;
    j["location"] = l.location;
    j["registered"] = l.written;
    out.push_back(std::move(j));
  }
  return out;
}

inline ordered_json channel_full(const ChannelReport& ch) {
  ordered_json j = ordered_json::object();
  j["origin"] = ch.origin;
  if (ch.synthetic) j["synthetic"] = true;
  if (!ch.match_patterns.empty()) j["matches"] = ch.match_patterns;
  if (!ch.reachable_from.empty()) j["reachable_from"] = ch.reachable_from;
  j["listeners"] = listeners_json(ch.listeners);
  j["findings"] = findings_full(ch.hits);
  if (ch.forwarding.present) {
    ordered_json fwd = ordered_json::object();
    fwd["detected"] = true;
    fwd["locations"] = ch.forwarding.locations;
    j["forwarding"] = std::move(fwd);
  }
  if (ch.to_back) {
    ordered_json back = ordered_json::object();
    back["listeners"] = listeners_json(ch.back_listeners);
    back["findings"] = findings_full(ch.back_hits);
    j["to_back"] = {{"back", std::move(back)}};
  }
  return j;
}

inline bool channel_has_visible_hits(const ChannelReport& ch) {
  return !ch.hits.empty() || (ch.to_back && !ch.back_hits.empty());
}

// The nesting of the analyzer's original output format: api names map to
// empty strings, one block per channel, single content-script channels are
// unkeyed.
inline ordered_json channel_compat(const ChannelReport& ch) {
  ordered_json j = findings_compat(ch.hits);
  if (ch.to_back && !ch.back_hits.empty())
    j["to_back"] = {{"back", findings_compat(ch.back_hits)}};
  return j;
}

inline ordered_json render_compat(const SuspicionReport& report) {
  ordered_json j = ordered_json::object();
  // Single-channel extensions collapse to the unkeyed nesting; anything
  // with several content-script channels keeps the cs_<group> keys.
  auto emit = [&j](const char* section,
                   const std::vector<ChannelReport>& channels) {
    std::vector<const ChannelReport*> visible;
    for (const ChannelReport& ch : channels)
      if (channel_has_visible_hits(ch)) visible.push_back(&ch);
    if (visible.empty()) return;
    if (channels.size() == 1) {
      j[section] = channel_compat(*visible.front());
      return;
    }
    ordered_json sections = ordered_json::object();
    for (const ChannelReport* ch : visible)
      sections[ch->label] = channel_compat(*ch);
    j[section] = std::move(sections);
  };
  emit("com_via_cs", report.cs_channels);
  emit("com_via_ui", report.ui_channels);
  if (report.back_channel && channel_has_visible_hits(*report.back_channel))
    j["com_via_back"] = channel_compat(*report.back_channel);
  return j;
}

inline ordered_json render_full(const SuspicionReport& report) {
  ordered_json j = ordered_json::object();
  ordered_json ext = ordered_json::object();
  ext["id"] = report.extension_id;
  ext["name"] = report.name;
  ext["version"] = report.version;
  j["extension"] = std::move(ext);
  j["suspicious"] = report.suspicious;
  ordered_json summary = ordered_json::object();
  for (auto& [cat, gated] : report.summary)
    summary[category_key(cat)] = ordered_json{{"gated", gated}};
  j["summary"] = std::move(summary);

  if (!report.cs_channels.empty()) {
    ordered_json sections = ordered_json::object();
    for (const ChannelReport& ch : report.cs_channels)
      sections[ch.label] = channel_full(ch);
    j["com_via_cs"] = std::move(sections);
  }
  if (!report.ui_channels.empty()) {
    ordered_json sections = ordered_json::object();
    for (const ChannelReport& ch : report.ui_channels)
      sections[ch.label] = channel_full(ch);
    j["com_via_ui"] = std::move(sections);
  }
  if (report.back_channel) j["com_via_back"] = channel_full(*report.back_channel);

  ordered_json diag = ordered_json::object();
  diag["warnings"] = report.diagnostics;
  diag["unreachable_listeners"] = listeners_json(report.unreachable_listeners);
  j["diagnostics"] = std::move(diag);
  return j;
}

}  // namespace detail

inline std::string render_summary_line(const SuspicionReport& report) {
  std::string categories;
  for (auto& [cat, gated] : report.summary) {
    if (!gated) continue;
    if (!categories.empty()) categories += ",";
    categories += category_key(cat);
  }
  if (categories.empty()) categories = "-";
  return report.extension_id + "\t" +
         (report.suspicious ? "SUSPICIOUS" : "CLEAN") + "\t" + categories;
}

// Serializes a report. `json` is the full report with locations,
// `json-compat` the original analyzer's nesting with empty-string values,
// `summary` one tab-separated line.
inline std::string render_report(const SuspicionReport& report,
                                 ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      return detail::render_full(report).dump(4) + "\n";
    case ReportFormat::JsonCompat:
      return detail::render_compat(report).dump(4) + "\n";
    case ReportFormat::Summary:
      return render_summary_line(report) + "\n";
  }
  raise(ErrorCode::UnknownFormat, "unhandled report format");
}

inline std::string render_report(const SuspicionReport& report,
                                 const std::string& format) {
  return render_report(report, report_format_from_string(format));
}

}  // namespace extpass
