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
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "extpass/package.hpp"
#include "extpass/report.hpp"
#include "extpass/threats.hpp"

namespace extpass {

struct CorpusSummary {
  int analyzed_count = 0;
  int suspicious_count = 0;
  std::map<ThreatCategory, int> per_category_counts;  // extensions, not hits
  std::vector<std::pair<std::string, std::string>> failures;  // id, reason
};

struct BatchOptions {
  AnalyzeOptions analyze;
  LoadOptions load;
  std::filesystem::path out_dir;
  int jobs = 1;
};

namespace detail {

inline bool looks_like_package(const std::filesystem::directory_entry& entry) {
  if (entry.is_directory()) {
    std::error_code ec;
    return std::filesystem::is_regular_file(entry.path() / "manifest.json", ec);
  }
  if (!entry.is_regular_file()) return false;
  std::string ext = entry.path().extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".zip" || ext == ".crx" || ext == ".xpi";
}

}  // namespace detail

// Analyzes every package in a directory, writing one
// `<extension-id>.report.json` per package into out_dir. Failures are
// recorded and never abort the batch; the fold over per-extension results
// is order-insensitive.
inline CorpusSummary batch_analyze(const std::filesystem::path& dir,
                                   const BatchOptions& options) {
  std::vector<std::filesystem::path> inputs;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (detail::looks_like_package(entry)) inputs.push_back(entry.path());
  std::sort(inputs.begin(), inputs.end());

  if (!options.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec || !std::filesystem::is_directory(options.out_dir))
      raise(ErrorCode::OutputUnwritable,
            "cannot create output directory " + options.out_dir.string());
  }

  CorpusSummary summary;
  std::mutex fold_mutex;
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= inputs.size()) return;
      const std::filesystem::path& input = inputs[i];
      std::string id = input.filename().string();
      if (!std::filesystem::is_directory(input)) id = input.stem().string();
      try {
        ExtensionPackage pkg = load_package(input, options.load);
        SuspicionReport report = analyze_extension(pkg, options.analyze);
        if (!options.out_dir.empty()) {
          std::filesystem::path out_path =
              options.out_dir / (report.extension_id + ".report.json");
          std::ofstream out(out_path, std::ios::binary);
          if (!out)
            raise(ErrorCode::OutputUnwritable,
                  "cannot write " + out_path.string());
          out << render_report(report, ReportFormat::Json);
        }
        std::lock_guard<std::mutex> lock(fold_mutex);
        ++summary.analyzed_count;
        if (report.suspicious) ++summary.suspicious_count;
        for (auto& [category, gated] : report.summary)
          if (gated) ++summary.per_category_counts[category];
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(fold_mutex);
        summary.failures.emplace_back(id, e.what());
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(fold_mutex);
        summary.failures.emplace_back(id, e.what());
      }
    }
  };

  int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Failures accumulate in completion order under threads; normalize.
  std::sort(summary.failures.begin(), summary.failures.end());
  return summary;
}

}  // namespace extpass
