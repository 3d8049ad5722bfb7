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

#include "extpass/ast_index.hpp"
#include "extpass/closure.hpp"
#include "extpass/manifest.hpp"
#include "extpass/package.hpp"

namespace extpass {

enum class ChannelKind {
  PageMessage,          // addEventListener("message", ...) in cs/ui pages
  PageMessageProperty,  // onmessage = ... in cs/ui pages
  ExternalMessage,      // runtime.onMessageExternal.addListener in background
  ExternalConnect,      // runtime.onConnectExternal.addListener in background
  InternalMessage,      // runtime.onMessage.addListener in background
  InternalConnect,      // runtime.onConnect.addListener in background
};

inline const char* channel_kind_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::PageMessage: return "page_message";
    case ChannelKind::PageMessageProperty: return "page_message_property";
    case ChannelKind::ExternalMessage: return "external_message";
    case ChannelKind::ExternalConnect: return "external_connect";
    case ChannelKind::InternalMessage: return "internal_message";
    case ChannelKind::InternalConnect: return "internal_connect";
  }
  return "?";
}

// A discovered message-passing interface. Registrations whose handler could
// not be resolved to at least one function are dropped with a warning, so
// handlers is always non-empty.
struct ListenerRegistration {
  ChannelKind channel{};
  ComponentKind component{};
  std::optional<int> group_index;
  std::vector<FunctionRef> handlers;
  SourceRef where;
  std::string written;  // registration target as spelled in source
  std::vector<std::string> reachable_from;  // external listeners only
  bool reachable = true;
};

namespace detail {

inline void merge_handlers(std::vector<FunctionRef>& into,
                           const std::vector<FunctionRef>& add) {
  for (const FunctionRef& fr : add) {
    bool present = false;
    for (const FunctionRef& have : into)
      if (have.fn == fr.fn) {
        present = true;
        break;
      }
    if (!present) into.push_back(fr);
  }
}

// Port handlers: inside a connect handler's closure, every call that looks
// like <port>.onMessage.addListener(f) contributes f as another handler.
// Receiver identity is not tracked.
inline void add_port_handlers(ListenerRegistration& reg,
                              const IndexedTables& tables) {
  std::vector<FunctionRef> roots = reg.handlers;
  for (const FunctionRef& root : roots) {
    HandlerClosure closure = expand_handler(root, tables);
    for (const CallRecord& rec : closure.constructs) {
      if (rec.is_new || rec.args.empty() || !rec.args[0]) continue;
      if (rec.path.segments.size() < 2) continue;
      if (!rec.path.ends_with({"onMessage", "addListener"})) continue;
      merge_handlers(reg.handlers,
                     resolve_to_functions(*rec.args[0], tables, rec.where.unit));
    }
  }
}

inline std::optional<ListenerRegistration> registration_from_call(
    const CallRecord& rec, ChannelKind channel, ComponentKind component,
    const IndexedTables& tables, std::vector<std::string>& warnings) {
  if (rec.is_new || rec.args.empty() || !rec.args[0]) return std::nullopt;
  std::vector<FunctionRef> handlers =
      resolve_to_functions(*rec.args[0], tables, rec.where.unit);
  if (handlers.empty()) {
    warnings.push_back(std::string("listener with unresolvable handler: ") +
                       rec.written + " at " + tables.location_of(rec.where));
    return std::nullopt;
  }
  ListenerRegistration reg;
  reg.channel = channel;
  reg.component = component;
  reg.handlers = std::move(handlers);
  reg.where = rec.where;
  reg.written = rec.written;
  return reg;
}

}  // namespace detail

// Page-message listeners in content scripts or UI pages: calls to
// addEventListener whose first argument resolves to the literal "message"
// and whose second resolves to at least one function, plus assignments of a
// function to the onmessage property.
inline std::vector<ListenerRegistration> find_page_listeners(
    const IndexedTables& tables, ComponentKind component,
    std::vector<std::string>& warnings) {
  std::vector<ListenerRegistration> out;

  if (auto it = tables.calls.find("addEventListener"); it != tables.calls.end()) {
    for (const CallRecord& rec : it->second) {
      if (rec.path.namespace_prefixed) continue;  // page API, bare/alias only
      if (rec.is_new || rec.args.size() < 2 || !rec.args[0] || !rec.args[1])
        continue;
      if (!resolves_to_string(*rec.args[0], tables, "message")) continue;
      std::vector<FunctionRef> handlers =
          resolve_to_functions(*rec.args[1], tables, rec.where.unit);
      if (handlers.empty()) {
        warnings.push_back(
            std::string("message listener with unresolvable handler: ") +
            rec.written + " at " + tables.location_of(rec.where));
        continue;
      }
      ListenerRegistration reg;
      reg.channel = ChannelKind::PageMessage;
      reg.component = component;
      reg.handlers = std::move(handlers);
      reg.where = rec.where;
      reg.written = rec.written;
      out.push_back(std::move(reg));
    }
  }

  if (auto it = tables.assignments.find("onmessage");
      it != tables.assignments.end()) {
    for (const AssignRecord& rec : it->second) {
      if (rec.path.namespace_prefixed || !rec.value) continue;
      std::vector<FunctionRef> handlers =
          resolve_to_functions(*rec.value, tables, rec.where.unit);
      if (handlers.empty()) {
        warnings.push_back(
            std::string("onmessage assignment with unresolvable handler at ") +
            tables.location_of(rec.where));
        continue;
      }
      ListenerRegistration reg;
      reg.channel = ChannelKind::PageMessageProperty;
      reg.component = component;
      reg.handlers = std::move(handlers);
      reg.where = rec.where;
      reg.written = rec.written;
      out.push_back(std::move(reg));
    }
  }

  return out;
}

// External listeners in the background page. Delivery from web pages only
// works when the manifest whitelists origins via externally_connectable, so
// registrations are annotated with that gate.
inline std::vector<ListenerRegistration> find_external_listeners(
    const IndexedTables& tables, const ManifestInfo& manifest,
    std::vector<std::string>& warnings) {
  std::vector<ListenerRegistration> out;
  const bool reachable = !manifest.externally_connectable_matches.empty();
  const struct {
    const char* key;
    ChannelKind channel;
  } kSurfaces[] = {
      {"runtime.onMessageExternal.addListener", ChannelKind::ExternalMessage},
      {"runtime.onConnectExternal.addListener", ChannelKind::ExternalConnect},
  };
  for (const auto& surface : kSurfaces) {
    auto it = tables.calls.find(surface.key);
    if (it == tables.calls.end()) continue;
    for (const CallRecord& rec : it->second) {
      auto reg = detail::registration_from_call(
          rec, surface.channel, ComponentKind::Background, tables, warnings);
      if (!reg) continue;
      reg->reachable = reachable;
      reg->reachable_from = manifest.externally_connectable_matches;
      if (surface.channel == ChannelKind::ExternalConnect)
        detail::add_port_handlers(*reg, tables);
      out.push_back(std::move(*reg));
    }
  }
  return out;
}

// Internal listeners in the background page (the receiving end of
// content-script forwarding).
inline std::vector<ListenerRegistration> find_internal_listeners(
    const IndexedTables& tables, std::vector<std::string>& warnings) {
  std::vector<ListenerRegistration> out;
  const struct {
    const char* key;
    ChannelKind channel;
  } kSurfaces[] = {
      {"runtime.onMessage.addListener", ChannelKind::InternalMessage},
      {"runtime.onConnect.addListener", ChannelKind::InternalConnect},
  };
  for (const auto& surface : kSurfaces) {
    auto it = tables.calls.find(surface.key);
    if (it == tables.calls.end()) continue;
    for (const CallRecord& rec : it->second) {
      auto reg = detail::registration_from_call(
          rec, surface.channel, ComponentKind::Background, tables, warnings);
      if (!reg) continue;
      if (surface.channel == ChannelKind::InternalConnect)
        detail::add_port_handlers(*reg, tables);
      out.push_back(std::move(*reg));
    }
  }
  return out;
}

// A content script injected from background or UI code.
struct DynamicScript {
  bool is_file = false;
  std::string text;  // inline code, or the packaged file path
  SourceRef where;
};

// tabs.executeScript sites: the argument object's `code` property yields an
// inline script, `file` a packaged script path. Values resolve through the
// assignments table like any other argument.
inline std::vector<DynamicScript> find_dynamic_content_scripts(
    const IndexedTables& tables, std::vector<std::string>& warnings) {
  std::vector<DynamicScript> out;
  auto it = tables.calls.find("tabs.executeScript");
  if (it == tables.calls.end()) return out;
  for (const CallRecord& rec : it->second) {
    if (rec.is_new) continue;
    const js::Node* details = nullptr;
    for (const js::Node* arg : rec.args) {
      if (!arg) continue;
      if (arg->kind == js::NodeKind::ObjectExpression) {
        details = arg;
        break;
      }
      // One resolution hop for `var opts = {...}; tabs.executeScript(opts)`.
      if (auto path = access_path_of(*arg)) {
        auto ait = tables.assignments.find(path->key());
        if (ait != tables.assignments.end()) {
          for (const AssignRecord& a : ait->second)
            if (a.value && a.value->kind == js::NodeKind::ObjectExpression) {
              details = a.value;
              break;
            }
        }
        if (details) break;
      }
    }
    if (!details) {
      warnings.push_back("unresolvable tabs.executeScript argument at " +
                         tables.location_of(rec.where));
      continue;
    }
    bool found = false;
    for (const js::Node* prop : details->list) {
      if (!prop || prop->kind != js::NodeKind::Property || !prop->key ||
          !prop->value)
        continue;
      if (prop->computed || prop->key->kind != js::NodeKind::Identifier)
        continue;
      const std::string& key = prop->key->name;
      if (key != "code" && key != "file") continue;
      bool resolved = false;
      for (const LiteralValue& v : resolve_to_literal(*prop->value, tables)) {
        if (v.kind != js::LiteralKind::String) continue;
        out.push_back(DynamicScript{key == "file", v.str, rec.where});
        resolved = true;
        found = true;
      }
      if (!resolved)
        warnings.push_back("unresolvable tabs.executeScript " + key +
                           " value at " + tables.location_of(rec.where));
    }
    if (!found && details->list.empty())
      warnings.push_back("empty tabs.executeScript details at " +
                         tables.location_of(rec.where));
  }
  return out;
}

}  // namespace extpass
