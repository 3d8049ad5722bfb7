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

#include <gtest/gtest.h>

#include <json.hpp>

#include "extpass/batch.hpp"
#include "extpass/report.hpp"
#include "support/test_util.hpp"
#include "support/zip_writer.hpp"

namespace extpass {
namespace {

using nlohmann::json;
using test::TempDir;
using test::fixture;

TEST(RenderReport, CompatShapeMatchesOriginalToolNesting) {
  ExtensionPackage pkg = load_package(fixture("erail"));
  SuspicionReport report = analyze_extension(pkg);
  json got = json::parse(render_report(report, ReportFormat::JsonCompat));
  json expected = json::parse(R"json({
    "com_via_cs": {
        "to_back": {
            "back": {
                "ajax": {
                    "$.get": "",
                    "$.post": "",
                    "$.ajax": "",
                    "XMLHttpRequest": ""
                },
                "cookies": {
                    "chrome.cookies.getAll": "",
                    "chrome.cookies.remove": "",
                    "cookies": ""
                }
            }
        }
    }
  })json");
  EXPECT_EQ(got, expected);
}

TEST(RenderReport, CleanExtensionCompatIsEmptyObject) {
  ExtensionPackage pkg = load_package(fixture("clean_minimal"));
  SuspicionReport report = analyze_extension(pkg);
  json got = json::parse(render_report(report, ReportFormat::JsonCompat));
  EXPECT_TRUE(got.is_object());
  EXPECT_TRUE(got.empty());
}

TEST(RenderReport, CleanSummaryLine) {
  ExtensionPackage pkg = load_package(fixture("clean_minimal"));
  SuspicionReport report = analyze_extension(pkg);
  EXPECT_EQ(render_report(report, ReportFormat::Summary),
            "clean_minimal\tCLEAN\t-\n");
}

TEST(RenderReport, SuspiciousSummaryListsCategories) {
  ExtensionPackage pkg = load_package(fixture("erail"));
  SuspicionReport report = analyze_extension(pkg);
  EXPECT_EQ(render_report(report, ReportFormat::Summary),
            "erail\tSUSPICIOUS\tajax,cookies\n");
}

TEST(RenderReport, FullJsonCarriesLocationsForEveryApi) {
  ExtensionPackage pkg = load_package(fixture("erail"));
  SuspicionReport report = analyze_extension(pkg);
  json full = json::parse(render_report(report, ReportFormat::Json));
  const json& back =
      full.at("com_via_cs").at("cs_0").at("to_back").at("back").at("findings");
  ASSERT_TRUE(back.contains("ajax"));
  for (const auto& [category, apis] : back.items()) {
    for (const auto& [api, entry] : apis.items()) {
      ASSERT_TRUE(entry.contains("locations")) << category << "/" << api;
      ASSERT_FALSE(entry.at("locations").empty());
      std::string loc = entry.at("locations")[0].get<std::string>();
      EXPECT_NE(loc.find(':'), std::string::npos);
    }
  }
  EXPECT_TRUE(full.at("suspicious").get<bool>());
}

TEST(RenderReport, MultiGroupCompatKeepsChannelKeys) {
  ExtensionPackage pkg = load_package(fixture("multigroup"));
  SuspicionReport report = analyze_extension(pkg);
  json got = json::parse(render_report(report, ReportFormat::JsonCompat));
  ASSERT_TRUE(got.contains("com_via_cs"));
  EXPECT_TRUE(got["com_via_cs"].contains("cs_0"));
  EXPECT_FALSE(got["com_via_cs"].contains("cs_1"));  // nothing to report there
  EXPECT_EQ(got["com_via_cs"]["cs_0"]["code"]["eval"], "");
}

TEST(RenderReport, UnknownFormatRaises) {
  try {
    report_format_from_string("yaml");
    FAIL() << "expected UnknownFormat";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownFormat);
  }
}

TEST(RenderReport, DestructiveMarkerOnlyInFullJson) {
  ExtensionPackage pkg = load_package(fixture("erail"));
  SuspicionReport report = analyze_extension(pkg);
  json full = json::parse(render_report(report, ReportFormat::Json));
  const json& cookies = full.at("com_via_cs").at("cs_0").at("to_back").at("back")
                            .at("findings").at("cookies");
  EXPECT_TRUE(cookies.at("chrome.cookies.remove").value("destructive", false));
  EXPECT_FALSE(cookies.at("chrome.cookies.getAll").contains("destructive"));
}

TEST(Batch, CorpusCountsAndReportFiles) {
  TempDir out("batch-out");
  BatchOptions options;
  options.out_dir = out.path();
  options.jobs = 4;
  CorpusSummary summary = batch_analyze(fixture("corpus"), options);
  EXPECT_EQ(summary.analyzed_count, 16);
  EXPECT_EQ(summary.suspicious_count, 8);
  EXPECT_TRUE(summary.failures.empty());
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(out.path()))
    if (e.path().extension() == ".json") ++files;
  EXPECT_EQ(files, 16);
  EXPECT_TRUE(std::filesystem::exists(out.path() / "cookies_vuln.report.json"));
}

TEST(Batch, PerCategoryCountsCountExtensionsNotHits) {
  TempDir out("batch-categories");
  BatchOptions options;
  options.out_dir = out.path();
  CorpusSummary summary = batch_analyze(fixture("corpus"), options);
  for (ThreatCategory c : all_categories())
    EXPECT_EQ(summary.per_category_counts[c], 1) << category_key(c);
  EXPECT_LE(summary.suspicious_count, summary.analyzed_count);
}

TEST(Batch, EmptyDirectory) {
  TempDir dir("batch-empty");
  TempDir out("batch-empty-out");
  BatchOptions options;
  options.out_dir = out.path();
  CorpusSummary summary = batch_analyze(dir.path(), options);
  EXPECT_EQ(summary.analyzed_count, 0);
  EXPECT_EQ(summary.suspicious_count, 0);
}

TEST(Batch, CorruptArchiveIsRecordedNotFatal) {
  TempDir dir("batch-corrupt");
  TempDir out("batch-corrupt-out");
  test::write_file(dir.path() / "broken.zip", "PK\x03\x04 nope nope nope nope");
  test::copy_tree(fixture("corpus/cookies_vuln"), dir.path() / "cookies_vuln");
  BatchOptions options;
  options.out_dir = out.path();
  CorpusSummary summary = batch_analyze(dir.path(), options);
  EXPECT_EQ(summary.analyzed_count, 1);
  EXPECT_EQ(summary.suspicious_count, 1);
  ASSERT_EQ(summary.failures.size(), 1u);
  EXPECT_EQ(summary.failures[0].first, "broken");
}

TEST(Batch, AggregateEqualsFoldOfIndividualAnalyses) {
  TempDir out("batch-fold");
  BatchOptions options;
  options.out_dir = out.path();
  CorpusSummary summary = batch_analyze(fixture("corpus"), options);

  int analyzed = 0, suspicious = 0;
  std::map<ThreatCategory, int> per_category;
  for (const auto& e : std::filesystem::directory_iterator(fixture("corpus"))) {
    if (!e.is_directory()) continue;
    SuspicionReport r = analyze_extension(load_package(e.path()));
    ++analyzed;
    if (r.suspicious) ++suspicious;
    for (auto& [cat, gated] : r.summary)
      if (gated) ++per_category[cat];
  }
  EXPECT_EQ(summary.analyzed_count, analyzed);
  EXPECT_EQ(summary.suspicious_count, suspicious);
  EXPECT_EQ(summary.per_category_counts, per_category);
}

TEST(Batch, UnwritableOutputDirectoryRaises) {
  TempDir dir("batch-unwritable");
  test::write_file(dir.path() / "blocker", "plain file, not a directory");
  BatchOptions options;
  options.out_dir = dir.path() / "blocker" / "reports";
  try {
    batch_analyze(fixture("corpus"), options);
    FAIL() << "expected OutputUnwritable";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutputUnwritable);
  }
}

TEST(Batch, RerunsProduceByteIdenticalReports) {
  TempDir out1("batch-bytes-1");
  TempDir out2("batch-bytes-2");
  BatchOptions options;
  options.jobs = 3;
  options.out_dir = out1.path();
  batch_analyze(fixture("corpus"), options);
  options.jobs = 1;  // fan-out must not affect report bytes
  options.out_dir = out2.path();
  batch_analyze(fixture("corpus"), options);
  int compared = 0;
  for (const auto& e : std::filesystem::directory_iterator(out1.path())) {
    std::string name = e.path().filename().string();
    EXPECT_EQ(test::slurp(e.path()), test::slurp(out2.path() / name)) << name;
    ++compared;
  }
  EXPECT_EQ(compared, 16);
}

TEST(Watchlist, ParseRoundTripAndErrors) {
  auto entries = parse_watchlist(
      "# comment line\n"
      "cookies.getAll cookies\n"
      "my.api ajax page new\n"
      "tabs.executeScript code bg-only\n"
      "\n");
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_TRUE(entries[0].extension_api);
  EXPECT_FALSE(entries[1].extension_api);
  EXPECT_TRUE(entries[1].allow_new);
  EXPECT_TRUE(entries[2].background_only);
  EXPECT_THROW(parse_watchlist("path withoutcategoryname\n"), Error);
  EXPECT_THROW(parse_watchlist("path cookies unknownflag\n"), Error);
}

}  // namespace
}  // namespace extpass
