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

#include "extpass/package.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "support/test_util.hpp"
#include "support/zip_writer.hpp"

namespace extpass {
namespace {

using test::TempDir;
using test::fixture;

struct UnitShape {
  std::string origin;
  ComponentKind component;
  int group = -1;
};

std::vector<UnitShape> shape_of(const ExtensionPackage& pkg) {
  std::vector<UnitShape> out;
  for (const ScriptUnit& u : pkg.script_units)
    out.push_back({u.origin, u.component, u.group_index.value_or(-1)});
  return out;
}

bool same_shape(const ExtensionPackage& a, const ExtensionPackage& b) {
  auto sa = shape_of(a), sb = shape_of(b);
  if (sa.size() != sb.size()) return false;
  for (size_t i = 0; i < sa.size(); ++i) {
    if (sa[i].origin != sb[i].origin || sa[i].component != sb[i].component ||
        sa[i].group != sb[i].group)
      return false;
    if (a.script_units[i].source_text != b.script_units[i].source_text)
      return false;
  }
  return a.manifest.permissions == b.manifest.permissions &&
         a.warnings == b.warnings;
}

TEST(LoadPackage, UnpackedDirectoryWithPermissionBlock) {
  ExtensionPackage pkg = load_package(fixture("listing1"));
  ASSERT_EQ(pkg.manifest.permissions.size(), 7u);
  EXPECT_TRUE(pkg.manifest.has_permission("<all_urls>"));
  EXPECT_TRUE(pkg.manifest.has_permission("storage"));
  EXPECT_TRUE(pkg.manifest.has_permission("management"));
  EXPECT_TRUE(pkg.manifest.has_permission("cookies"));
  EXPECT_TRUE(pkg.manifest.has_permission("history"));
  EXPECT_TRUE(pkg.manifest.has_permission("bookmarks"));
  EXPECT_TRUE(pkg.manifest.has_permission("downloads"));
  ASSERT_EQ(pkg.script_units.size(), 1u);
  EXPECT_EQ(pkg.script_units[0].component, ComponentKind::ContentScript);
  EXPECT_EQ(pkg.script_units[0].group_index, 0);
}

TEST(LoadPackage, EmptyDirectoryIsMissingManifest) {
  TempDir dir("empty");
  try {
    load_package(dir.path());
    FAIL() << "expected MissingManifest";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingManifest);
  }
}

TEST(LoadPackage, ZipAndCrxContainersYieldIdenticalUnits) {
  std::string zip = test::zip_directory(fixture("listing1"));
  TempDir dir("containers");
  test::write_file(dir.path() / "pkg.zip", zip);
  test::write_file(dir.path() / "pkg.crx", test::wrap_crx3(zip));
  test::write_file(dir.path() / "pkg2.crx", test::wrap_crx2(zip));
  test::write_file(dir.path() / "pkg.xpi", zip);

  LoadOptions opts;
  opts.scratch_dir = dir.path() / "scratch";
  ExtensionPackage from_zip = load_package(dir.path() / "pkg.zip", opts);
  ExtensionPackage from_crx3 = load_package(dir.path() / "pkg.crx", opts);
  ExtensionPackage from_crx2 = load_package(dir.path() / "pkg2.crx", opts);
  ExtensionPackage from_xpi = load_package(dir.path() / "pkg.xpi", opts);

  EXPECT_TRUE(same_shape(from_zip, from_crx3));
  EXPECT_TRUE(same_shape(from_zip, from_crx2));
  EXPECT_TRUE(same_shape(from_zip, from_xpi));
  ASSERT_EQ(from_crx3.script_units.size(), 1u);
}

TEST(LoadPackage, DeflatedZipEntriesRoundTrip) {
  std::string zip = test::zip_directory(fixture("listing1"), /*deflate=*/true);
  TempDir dir("deflate");
  test::write_file(dir.path() / "pkg.zip", zip);
  LoadOptions opts;
  opts.scratch_dir = dir.path() / "scratch";
  ExtensionPackage pkg = load_package(dir.path() / "pkg.zip", opts);
  EXPECT_EQ(pkg.script_units[0].source_text, "console.log(\"ready\");\n");
}

TEST(LoadPackage, LoadingTwiceIsStructurallyIdentical) {
  std::string zip = test::zip_directory(fixture("erail"));
  TempDir dir("determinism");
  test::write_file(dir.path() / "erail.zip", zip);
  LoadOptions opts;
  opts.scratch_dir = dir.path() / "scratch";
  ExtensionPackage a = load_package(dir.path() / "erail.zip", opts);
  ExtensionPackage b = load_package(dir.path() / "erail.zip", opts);
  EXPECT_TRUE(same_shape(a, b));
}

TEST(LoadPackage, TraversalEntriesAreSkippedWithWarning) {
  std::vector<test::ZipInputFile> files = {
      {"manifest.json", "{\"name\":\"t\",\"version\":\"1\"}"},
      {"../escape.js", "evil();"},
      {"/abs.js", "evil();"},
      {"ok/../fine.js", "evil();"},
  };
  TempDir dir("traversal");
  test::write_file(dir.path() / "t.zip", test::make_zip(files));
  LoadOptions opts;
  opts.scratch_dir = dir.path() / "scratch";
  ExtensionPackage pkg = load_package(dir.path() / "t.zip", opts);
  EXPECT_EQ(pkg.warnings.size(), 3u);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "escape.js"));
  EXPECT_FALSE(std::filesystem::exists("/abs.js"));
}

TEST(LoadPackage, ExtractionStaysInsideScratchArea) {
  std::string zip = test::zip_directory(fixture("listing1"));
  TempDir dir("scratch-area");
  test::write_file(dir.path() / "pkg.zip", zip);
  LoadOptions opts;
  opts.scratch_dir = dir.path() / "scratch";
  ExtensionPackage pkg = load_package(dir.path() / "pkg.zip", opts);
  auto rel = std::filesystem::relative(pkg.root, dir.path() / "scratch");
  EXPECT_FALSE(rel.empty());
  EXPECT_NE(rel.generic_string().substr(0, 2), "..");
}

TEST(LoadPackage, ScratchIsRemovedWhenPackageDies) {
  TempDir dir("cleanup");
  test::write_file(dir.path() / "pkg.zip", test::zip_directory(fixture("listing1")));
  LoadOptions opts;
  opts.scratch_dir = dir.path() / "scratch";
  std::filesystem::path root;
  {
    ExtensionPackage pkg = load_package(dir.path() / "pkg.zip", opts);
    root = pkg.root;
    EXPECT_TRUE(std::filesystem::exists(root));
  }
  EXPECT_FALSE(std::filesystem::exists(root));
}

TEST(LoadPackage, GroupIndicesAlwaysValidIntoManifestGroups) {
  for (const char* name : {"listing1", "erail", "multigroup", "ui_popup"}) {
    ExtensionPackage pkg = load_package(fixture(name));
    for (const ScriptUnit& u : pkg.script_units) {
      EXPECT_EQ(u.group_index.has_value(),
                u.component == ComponentKind::ContentScript);
      if (u.group_index) {
        EXPECT_GE(*u.group_index, 0);
        EXPECT_LT(*u.group_index,
                  static_cast<int>(pkg.manifest.content_script_groups.size()));
      }
    }
  }
}

TEST(LoadPackage, ScratchEnvVariableIsHonored) {
  TempDir dir("env-scratch");
  test::write_file(dir.path() / "pkg.zip", test::zip_directory(fixture("listing1")));
  std::string scratch = (dir.path() / "via-env").string();
  ASSERT_EQ(setenv("EXTPASS_SCRATCH", scratch.c_str(), 1), 0);
  ExtensionPackage pkg = load_package(dir.path() / "pkg.zip");
  unsetenv("EXTPASS_SCRATCH");
  auto rel = std::filesystem::relative(pkg.root, scratch);
  ASSERT_FALSE(rel.empty());
  EXPECT_NE(rel.generic_string().substr(0, 2), "..");
}

TEST(LoadPackage, CorruptArchiveRaises) {
  TempDir dir("corrupt");
  test::write_file(dir.path() / "bad.zip", "PK\x03\x04 this is not really a zip");
  try {
    LoadOptions opts;
    opts.scratch_dir = dir.path() / "scratch";
    load_package(dir.path() / "bad.zip", opts);
    FAIL() << "expected CorruptContainer";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CorruptContainer);
  }
}

TEST(LoadPackage, UnknownMagicIsUnsupported) {
  TempDir dir("magic");
  test::write_file(dir.path() / "odd.crx", "NOPE....");
  try {
    load_package(dir.path() / "odd.crx");
    FAIL() << "expected UnsupportedContainer";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedContainer);
  }
}

TEST(LoadPackage, SizeCapGuardsAgainstBombs) {
  TempDir dir("bomb");
  test::write_file(dir.path() / "pkg.zip", test::zip_directory(fixture("erail")));
  LoadOptions opts;
  opts.scratch_dir = dir.path() / "scratch";
  opts.max_extracted_bytes = 16;  // absurdly small cap for the test
  try {
    load_package(dir.path() / "pkg.zip", opts);
    FAIL() << "expected CorruptContainer";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CorruptContainer);
  }
}

TEST(CollectUnits, GroupIndicesFollowManifestDeclaration) {
  TempDir dir("groups");
  test::write_file(dir.path() / "manifest.json", R"json({
    "name": "g", "version": "1",
    "content_scripts": [
      { "matches": ["<all_urls>"], "js": ["a.js", "b.js"] },
      { "matches": ["<all_urls>"], "js": ["c.js", "d.js"] }
    ]
  })json");
  for (const char* f : {"a.js", "b.js", "c.js", "d.js"})
    test::write_file(dir.path() / f, std::string("// ") + f + "\n");
  ExtensionPackage pkg = load_package(dir.path());
  ASSERT_EQ(pkg.script_units.size(), 4u);
  std::vector<int> groups;
  for (const ScriptUnit& u : pkg.script_units) {
    EXPECT_EQ(u.component, ComponentKind::ContentScript);
    groups.push_back(*u.group_index);
  }
  EXPECT_EQ(groups, (std::vector<int>{0, 0, 1, 1}));
}

TEST(CollectUnits, BackgroundPageInlineAndRemoteScripts) {
  TempDir dir("bgpage");
  test::write_file(dir.path() / "manifest.json", R"json({
    "name": "bg", "version": "1",
    "background": { "page": "bg.html" }
  })json");
  test::write_file(dir.path() / "bg.html",
                   "<html><script>var a = 1;</script>"
                   "<script src=\"https://cdn.example/x.js\"></script></html>");
  ExtensionPackage pkg = load_package(dir.path());
  ASSERT_EQ(pkg.script_units.size(), 1u);
  EXPECT_EQ(pkg.script_units[0].component, ComponentKind::Background);
  EXPECT_EQ(pkg.script_units[0].origin, "inline in bg.html");
  ASSERT_EQ(pkg.warnings.size(), 1u);
  EXPECT_NE(pkg.warnings[0].find("remote script not fetched"), std::string::npos);
}

TEST(CollectUnits, BackgroundHtmlPackagedScriptsAreLoaded) {
  ExtensionPackage pkg = load_package(fixture("erail"));
  ASSERT_EQ(pkg.script_units.size(), 3u);
  EXPECT_EQ(pkg.script_units[0].origin, "irctc.js");
  EXPECT_EQ(pkg.script_units[1].origin, "lib/ajax.js");
  EXPECT_EQ(pkg.script_units[2].origin, "background.js");
  EXPECT_EQ(pkg.script_units[1].component, ComponentKind::Background);
}

TEST(CollectUnits, UiPageScriptsAreGathered) {
  ExtensionPackage pkg = load_package(fixture("ui_popup"));
  ASSERT_EQ(pkg.script_units.size(), 1u);
  EXPECT_EQ(pkg.script_units[0].component, ComponentKind::UIPage);
  EXPECT_EQ(pkg.script_units[0].origin, "inline in popup.html");
}

TEST(CollectUnits, MissingFilesBecomeWarnings) {
  TempDir dir("missing");
  test::write_file(dir.path() / "manifest.json", R"json({
    "name": "m", "version": "1",
    "content_scripts": [{ "matches": ["<all_urls>"], "js": ["gone.js"] }]
  })json");
  ExtensionPackage pkg = load_package(dir.path());
  EXPECT_TRUE(pkg.script_units.empty());
  ASSERT_EQ(pkg.warnings.size(), 1u);
  EXPECT_NE(pkg.warnings[0].find("gone.js"), std::string::npos);
}

TEST(ParseScript, UnitsParseWithTheirOrigin) {
  ExtensionPackage pkg = load_package(fixture("listing1"));
  js::SyntaxTree tree = parse_script(pkg.script_units[0]);
  EXPECT_EQ(tree.origin, "cs.js");
  ASSERT_NE(tree.program, nullptr);
  EXPECT_EQ(tree.program->list.size(), 1u);
}

TEST(ExtractInlineScripts, SingleInlineScript) {
  HtmlScripts s = extract_inline_scripts("<html><script>var a=1;</script></html>");
  ASSERT_EQ(s.inline_sources.size(), 1u);
  EXPECT_EQ(s.inline_sources[0], "var a=1;");
  EXPECT_TRUE(s.external_refs.empty());
}

TEST(ExtractInlineScripts, MixedInlineAndSrc) {
  HtmlScripts s = extract_inline_scripts(
      "<script>one();</script>"
      "<script src=\"lib.js\"></script>"
      "<script>two();</script>");
  ASSERT_EQ(s.inline_sources.size(), 2u);
  EXPECT_EQ(s.inline_sources[0], "one();");
  EXPECT_EQ(s.inline_sources[1], "two();");
  ASSERT_EQ(s.external_refs.size(), 1u);
  EXPECT_EQ(s.external_refs[0], "lib.js");
}

TEST(ExtractInlineScripts, EmptyInput) {
  HtmlScripts s = extract_inline_scripts("");
  EXPECT_TRUE(s.inline_sources.empty());
  EXPECT_TRUE(s.external_refs.empty());
}

TEST(ExtractInlineScripts, CommentsAndNonJsTypesIgnored) {
  HtmlScripts s = extract_inline_scripts(
      "<!-- <script>hidden();</script> -->"
      "<script type=\"application/json\">{\"a\":1}</script>"
      "<SCRIPT TYPE=\"text/javascript\">kept();</SCRIPT>");
  ASSERT_EQ(s.inline_sources.size(), 1u);
  EXPECT_EQ(s.inline_sources[0], "kept();");
}

TEST(ExtractInlineScripts, MalformedHtmlDegrades) {
  HtmlScripts s = extract_inline_scripts("<script>never closed");
  ASSERT_EQ(s.inline_sources.size(), 1u);
  EXPECT_EQ(s.warnings.size(), 1u);
}

}  // namespace
}  // namespace extpass
