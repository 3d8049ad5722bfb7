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

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "extpass/batch.hpp"
#include "extpass/package.hpp"
#include "extpass/report.hpp"
#include "extpass/threats.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitError = 1;
constexpr int kExitSuspicious = 2;

std::vector<extpass::WatchlistEntry> load_watchlist(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    extpass::raise(extpass::ErrorCode::IoError,
                   "cannot open watchlist file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return extpass::parse_watchlist(text);
}

int run_analyze(const std::string& input, const std::string& format,
                bool ungated, bool no_dynamic_cs, const std::string& watchlist,
                const std::string& out_file) {
  extpass::AnalyzeOptions options;
  options.ungated = ungated;
  options.dynamic_content_scripts = !no_dynamic_cs;
  if (!watchlist.empty()) options.watchlist = load_watchlist(watchlist);

  extpass::ExtensionPackage pkg = extpass::load_package(input);
  extpass::SuspicionReport report = extpass::analyze_extension(pkg, options);
  std::string text = extpass::render_report(report, format);

  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_file, std::ios::binary);
    if (!out)
      extpass::raise(extpass::ErrorCode::OutputUnwritable,
                     "cannot write " + out_file);
    out << text;
  }
  return report.suspicious ? kExitSuspicious : kExitClean;
}

int run_batch(const std::string& dir, const std::string& out_dir, int jobs,
              bool ungated, bool no_dynamic_cs, const std::string& watchlist) {
  extpass::BatchOptions options;
  options.analyze.ungated = ungated;
  options.analyze.dynamic_content_scripts = !no_dynamic_cs;
  if (!watchlist.empty()) options.analyze.watchlist = load_watchlist(watchlist);
  options.out_dir = out_dir;
  options.jobs = jobs;

  extpass::CorpusSummary summary = extpass::batch_analyze(dir, options);
  std::cout << "analyzed\t" << summary.analyzed_count << "\n"
            << "suspicious\t" << summary.suspicious_count << "\n";
  for (extpass::ThreatCategory c : extpass::all_categories()) {
    auto it = summary.per_category_counts.find(c);
    std::cout << extpass::category_key(c) << "\t"
              << (it == summary.per_category_counts.end() ? 0 : it->second)
              << "\n";
  }
  for (auto& [id, reason] : summary.failures)
    std::cout << "failed\t" << id << "\t" << reason << "\n";
  return summary.suspicious_count > 0 ? kExitSuspicious : kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "extpass - static analyzer for the message-passing interfaces "
      "WebExtensions expose to web pages"};
  app.require_subcommand(1);

  std::string input, format = "json", out_file, watchlist;
  bool ungated = false, no_dynamic_cs = false;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Analyze one extension package");
  analyze->add_option("path", input, "Unpacked directory, .zip, .crx or .xpi")
      ->required();
  analyze->add_option("--format", format, "json | json-compat | summary")
      ->check(CLI::IsMember({"json", "json-compat", "summary"}));
  analyze->add_flag("--ungated", ungated,
                    "Keep hits whose required permission is not declared");
  analyze->add_flag("--no-dynamic-cs", no_dynamic_cs,
                    "Skip dynamically injected content scripts");
  analyze->add_option("--watchlist", watchlist,
                      "Sensitive-API table override (path category per line)");
  analyze->add_option("--out", out_file, "Write the report to a file");

  std::string batch_dir, batch_out;
  int jobs = 1;
  CLI::App* batch =
      app.add_subcommand("batch", "Analyze every package in a directory");
  batch->add_option("dir", batch_dir, "Directory of packages")->required();
  batch->add_option("--out-dir", batch_out, "Directory for per-extension reports")
      ->required();
  batch->add_option("--jobs", jobs, "Parallel analyses")->check(CLI::PositiveNumber);
  batch->add_flag("--ungated", ungated,
                  "Keep hits whose required permission is not declared");
  batch->add_flag("--no-dynamic-cs", no_dynamic_cs,
                  "Skip dynamically injected content scripts");
  batch->add_option("--watchlist", watchlist,
                    "Sensitive-API table override (path category per line)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze))
      return run_analyze(input, format, ungated, no_dynamic_cs, watchlist,
                         out_file);
    return run_batch(batch_dir, batch_out, jobs, ungated, no_dynamic_cs,
                     watchlist);
  } catch (const extpass::Error& e) {
    std::cerr << "extpass: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "extpass: " << e.what() << "\n";
    return kExitError;
  }
}
