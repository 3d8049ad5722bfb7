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

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "extpass/error.hpp"
#include "extpass/html_scripts.hpp"
#include "extpass/manifest.hpp"
#include "extpass/parser.hpp"
#include "extpass/zip.hpp"

namespace extpass {

enum class ComponentKind { ContentScript, Background, UIPage };

inline const char* component_name(ComponentKind k) {
  switch (k) {
    case ComponentKind::ContentScript: return "content_script";
    case ComponentKind::Background: return "background";
    case ComponentKind::UIPage: return "ui_page";
  }
  return "?";
}

struct ScriptUnit {
  std::string source_text;
  std::string origin;  // package-relative path or descriptor
  ComponentKind component = ComponentKind::ContentScript;
  std::optional<int> group_index;  // content scripts only
};

// An unpacked extension: manifest plus every gathered script unit. Immutable
// after construction; `root` points at the package tree (the input directory
// or the scratch extraction) so later passes can load dynamically referenced
// files.
struct ExtensionPackage {
  std::string id;
  ManifestInfo manifest;
  std::vector<ScriptUnit> script_units;
  std::vector<std::string> warnings;
  std::filesystem::path root;
  std::shared_ptr<const ScratchDir> scratch;  // owns the extraction, if any
};

struct LoadOptions {
  uint64_t max_extracted_bytes = 512ull << 20;
  std::filesystem::path scratch_dir;  // overrides EXTPASS_SCRATCH / tmpdir
};

namespace detail {

inline std::string normalize_package_path(std::string p) {
  for (char& c : p)
    if (c == '\\') c = '/';
  while (!p.empty() && p.front() == '/') p.erase(p.begin());
  while (p.rfind("./", 0) == 0) p.erase(0, 2);
  return p;
}

inline bool is_remote_ref(const std::string& ref) {
  return ref.find("://") != std::string::npos || ref.rfind("//", 0) == 0;
}

inline std::optional<std::string> read_package_file(
    const std::filesystem::path& root, const std::string& rel) {
  if (!is_safe_entry_path(rel)) return std::nullopt;
  std::filesystem::path p = root / rel;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) return std::nullopt;
  try {
    return read_file_bytes(p);
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline std::filesystem::path scratch_base(const LoadOptions& opts) {
  if (!opts.scratch_dir.empty()) return opts.scratch_dir;
  if (const char* env = std::getenv("EXTPASS_SCRATCH"); env && *env)
    return std::filesystem::path(env);
  return std::filesystem::temp_directory_path() / "extpass-scratch";
}

inline std::atomic<uint64_t>& extraction_counter() {
  static std::atomic<uint64_t> counter{0};
  return counter;
}

struct PageScripts {
  // (source, origin) pairs resolved from one HTML page.
  std::vector<std::pair<std::string, std::string>> sources;
};

inline PageScripts gather_page_scripts(const std::filesystem::path& root,
                                       const std::string& page_path,
                                       std::vector<std::string>& warnings) {
  PageScripts out;
  auto html = read_package_file(root, page_path);
  if (!html) {
    warnings.push_back("unreadable page: " + page_path);
    return out;
  }
  HtmlScripts scripts = extract_inline_scripts(*html);
  for (const std::string& w : scripts.warnings)
    warnings.push_back(w + " (in " + page_path + ")");
  int inline_index = 0;
  for (std::string& src : scripts.inline_sources) {
    ++inline_index;
    std::string origin = "inline in " + page_path;
    if (inline_index > 1) origin += " #" + std::to_string(inline_index);
    out.sources.emplace_back(std::move(src), std::move(origin));
  }
  for (const std::string& ref : scripts.external_refs) {
    if (is_remote_ref(ref)) {
      // Remote scripts are recorded, never fetched.
      warnings.push_back("remote script not fetched: " + ref + " (in " +
                         page_path + ")");
      continue;
    }
    std::string rel = normalize_package_path(ref);
    auto body = read_package_file(root, rel);
    if (!body) {
      warnings.push_back("unreadable script: " + rel + " (referenced by " +
                         page_path + ")");
      continue;
    }
    out.sources.emplace_back(std::move(*body), rel);
  }
  return out;
}

}  // namespace detail

// Gathers every script unit of an unpacked package, in deterministic order:
// content-script groups as declared, then background, then UI pages.
inline std::vector<ScriptUnit> collect_script_units(
    const std::filesystem::path& root, const ManifestInfo& manifest,
    std::vector<std::string>& warnings) {
  std::vector<ScriptUnit> units;

  for (const ContentScriptGroup& group : manifest.content_script_groups) {
    for (const std::string& raw_path : group.script_paths) {
      std::string rel = detail::normalize_package_path(raw_path);
      auto body = detail::read_package_file(root, rel);
      if (!body) {
        warnings.push_back("unreadable script: " + rel);
        continue;
      }
      units.push_back(ScriptUnit{std::move(*body), rel,
                                 ComponentKind::ContentScript,
                                 group.group_index});
    }
  }

  for (const std::string& raw_path : manifest.background_scripts) {
    std::string rel = detail::normalize_package_path(raw_path);
    auto body = detail::read_package_file(root, rel);
    if (!body) {
      warnings.push_back("unreadable script: " + rel);
      continue;
    }
    units.push_back(
        ScriptUnit{std::move(*body), rel, ComponentKind::Background, {}});
  }
  if (manifest.background_page) {
    std::string rel = detail::normalize_package_path(*manifest.background_page);
    detail::PageScripts page = detail::gather_page_scripts(root, rel, warnings);
    for (auto& [src, origin] : page.sources)
      units.push_back(ScriptUnit{std::move(src), std::move(origin),
                                 ComponentKind::Background, {}});
  }

  for (const std::string& raw_path : manifest.ui_page_paths) {
    std::string rel = detail::normalize_package_path(raw_path);
    detail::PageScripts page = detail::gather_page_scripts(root, rel, warnings);
    for (auto& [src, origin] : page.sources)
      units.push_back(ScriptUnit{std::move(src), std::move(origin),
                                 ComponentKind::UIPage, {}});
  }

  return units;
}

// Parses one gathered unit. Throws Error(ParseFailure) for malformed
// scripts; the analysis orchestrator records that in diagnostics and skips
// the unit.
inline js::SyntaxTree parse_script(const ScriptUnit& unit) {
  return js::parse_source(unit.source_text, unit.origin);
}

// Loads an extension from an unpacked directory, a ZIP/XPI archive, or a
// CRX container. Archive extraction goes to a fresh scratch subdirectory
// and never writes outside it.
inline ExtensionPackage load_package(const std::filesystem::path& path,
                                     const LoadOptions& opts = {}) {
  ExtensionPackage pkg;
  std::error_code ec;

  if (std::filesystem::is_directory(path, ec)) {
    pkg.root = path;
    pkg.id = path.filename().string();
    if (pkg.id.empty()) pkg.id = path.parent_path().filename().string();
  } else if (std::filesystem::is_regular_file(path, ec)) {
    std::string bytes = read_file_bytes(path);
    std::string_view payload;
    if (bytes.size() >= 4 && bytes.compare(0, 4, "Cr24") == 0) {
      payload = crx_zip_payload(bytes);
    } else if (bytes.size() >= 2 && bytes.compare(0, 2, "PK") == 0) {
      payload = bytes;  // .zip / .xpi
    } else {
      raise(ErrorCode::UnsupportedContainer,
            "unrecognized container magic in " + path.string());
    }
    pkg.id = path.stem().string();
    std::filesystem::path base = detail::scratch_base(opts);
    std::filesystem::create_directories(base);
    uint64_t n = detail::extraction_counter().fetch_add(1);
    std::filesystem::path dest =
        base / (pkg.id + "-" + std::to_string(::getpid()) + "-" + std::to_string(n));
    auto scratch = std::make_shared<ScratchDir>(dest);
    extract_zip(std::string(payload), dest, pkg.warnings,
                opts.max_extracted_bytes);
    pkg.root = dest;
    pkg.scratch = std::move(scratch);
  } else {
    raise(ErrorCode::IoError, "no such package: " + path.string());
  }

  auto manifest_text = detail::read_package_file(pkg.root, "manifest.json");
  if (!manifest_text)
    raise(ErrorCode::MissingManifest,
          "no manifest.json at package root of " + path.string());
  pkg.manifest = parse_manifest(*manifest_text);
  auto units = collect_script_units(pkg.root, pkg.manifest, pkg.warnings);
  pkg.script_units = std::move(units);
  return pkg;
}

}  // namespace extpass
