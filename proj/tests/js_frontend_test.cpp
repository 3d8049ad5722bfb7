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

#include "extpass/parser.hpp"

#include <gtest/gtest.h>

#include "extpass/error.hpp"

namespace extpass::js {
namespace {

SyntaxTree parse(const std::string& src) { return parse_source(src, "test.js"); }

TEST(Lexer, TokenizesBasicProgram) {
  auto toks = tokenize("var a = 1;");
  ASSERT_EQ(toks.size(), 6u);  // var a = 1 ; EOF
  EXPECT_EQ(toks[0].text, "var");
  EXPECT_EQ(toks[3].type, TokenType::Number);
  EXPECT_EQ(toks[3].number, 1.0);
}

TEST(Lexer, StringEscapes) {
  auto toks = tokenize(R"js('a\n\x41B\u{43}')js");
  ASSERT_EQ(toks[0].type, TokenType::String);
  EXPECT_EQ(toks[0].text, "a\nABC");
}

TEST(Lexer, RegexVersusDivision) {
  auto toks = tokenize("a = b / c; x = /re/g.test(y); for (k of ks) /^a$/.test(k);");
  int regex_count = 0;
  for (auto& t : toks)
    if (t.type == TokenType::Regex) ++regex_count;
  EXPECT_EQ(regex_count, 2);
}

TEST(Lexer, TemplatesNestParts) {
  auto toks = tokenize("`a${ {b: `c${d}e`} }f`");
  EXPECT_EQ(toks[0].type, TokenType::TemplateHead);
  bool saw_tail = false;
  for (auto& t : toks)
    if (t.type == TokenType::TemplateTail) saw_tail = true;
  EXPECT_TRUE(saw_tail);
}

TEST(Parser, SingleVariableDeclaration) {
  auto tree = parse("var a = 1;");
  ASSERT_EQ(tree.program->list.size(), 1u);
  EXPECT_EQ(tree.program->list[0]->kind, NodeKind::VariableDeclaration);
}

TEST(Parser, MessageListenerSnippetHasOneCallWithTwoArguments) {
  auto tree = parse(
      "addEventListener(\"message\", function(event){\n"
      "  Received_message = event.data;\n"
      "  postMessage(\"Hello Web Application\", \"*\")\n"
      "});");
  size_t calls = 0;
  const Node* listener_call = nullptr;
  walk(*tree.program, [&](const Node& n) {
    if (n.kind == NodeKind::CallExpression) {
      ++calls;
      if (n.callee && n.callee->kind == NodeKind::Identifier &&
          n.callee->name == "addEventListener")
        listener_call = &n;
    }
  });
  EXPECT_EQ(calls, 2u);  // addEventListener + postMessage
  ASSERT_NE(listener_call, nullptr);
  EXPECT_EQ(listener_call->list.size(), 2u);
}

TEST(Parser, SyntaxErrorIsParseFailure) {
  try {
    parse("function (");
    FAIL() << "expected ParseFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
  }
}

TEST(Parser, UnterminatedStringIsParseFailure) {
  EXPECT_THROW(parse("var s = 'abc"), Error);
}

TEST(Parser, AsiAndRestrictedProductions) {
  auto tree = parse("a = 1\nb = 2\nfunction f() { return\n1 }");
  EXPECT_EQ(tree.program->list.size(), 3u);
}

TEST(Parser, ArrowFunctions) {
  auto tree = parse(
      "const f = x => x + 1;\n"
      "const g = (a, b = 2, ...rest) => { return a; };\n"
      "const h = async (q) => q;\n"
      "const i = async x => x;\n");
  size_t arrows = count_nodes(*tree.program, NodeKind::ArrowFunctionExpression);
  EXPECT_EQ(arrows, 4u);
}

TEST(Parser, DestructuringAndSpread) {
  auto tree = parse(
      "var {a, b: {c}, d = 1, ...rest} = obj;\n"
      "var [x, , y = 2, ...more] = arr;\n"
      "f(...args);\n"
      "var merged = {...one, two: 2};\n"
      "[p, q] = pair;\n");
  EXPECT_GT(tree.program->list.size(), 0u);
}

TEST(Parser, ClassesWithModernMembers) {
  auto tree = parse(
      "class Point extends Base {\n"
      "  static origin = null;\n"
      "  #hidden = 1;\n"
      "  static { Point.origin = new Point(0, 0); }\n"
      "  constructor(x, y) { super(); this.x = x; this.y = y; }\n"
      "  get length() { return 0; }\n"
      "  static from(a) { return new Point(a, a); }\n"
      "  async *walk() { yield this.x; }\n"
      "}\n");
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::ClassDeclaration), 1u);
}

TEST(Parser, OptionalChainingAndNullish) {
  auto tree = parse("const v = a?.b?.[c] ?? d?.(e) ?? 0;");
  EXPECT_GE(count_nodes(*tree.program, NodeKind::MemberExpression), 2u);
}

TEST(Parser, TemplatesAndTags) {
  auto tree = parse("const s = `a ${x + 1} b`; const t = tag`c ${y} d`; const u = `plain`;");
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::TemplateLiteral), 3u);
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::TaggedTemplateExpression), 1u);
}

TEST(Parser, LoopsSwitchTryLabels) {
  auto tree = parse(
      "outer: for (var i = 0; i < 3; i++) {\n"
      "  for (const k in obj) { if (k) continue outer; }\n"
      "  for (const v of list) { break; }\n"
      "}\n"
      "do { x--; } while (x)\n"
      "switch (x) { case 1: y = 1; break; default: y = 2; }\n"
      "try { risky(); } catch { recover(); } finally { done(); }\n"
      "with (env) { run(); }\n");
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::ForStatement), 1u);
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::ForInStatement), 1u);
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::ForOfStatement), 1u);
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::TryStatement), 1u);
}

TEST(Parser, GeneratorsAndAwait) {
  auto tree = parse(
      "function* gen() { yield 1; yield* inner(); }\n"
      "async function load() { const r = await fetch(url); return r; }\n");
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::YieldExpression), 2u);
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::AwaitExpression), 1u);
}

TEST(Parser, ModulesParseStructurally) {
  auto tree = parse(
      "import dflt, { a as b } from \"mod\";\n"
      "import \"side-effect\";\n"
      "export default function main() {}\n"
      "export { x };\n"
      "export const k = 1;\n"
      "export * from \"other\";\n");
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::ImportDeclaration), 2u);
}

TEST(Parser, NodesCarryPositions) {
  auto tree = parse("var a = 1;\nfoo.bar(2);\n");
  const Node* call = nullptr;
  walk(*tree.program, [&](const Node& n) {
    if (n.kind == NodeKind::CallExpression) call = &n;
  });
  ASSERT_NE(call, nullptr);
  EXPECT_EQ(call->line, 2u);
  EXPECT_EQ(tree.slice(*call->callee), "foo.bar");
}

TEST(Parser, KeywordsAsPropertyNames) {
  auto tree = parse("a.new = 1; b.delete(); c = { if: 1, for: 2 };");
  EXPECT_EQ(count_nodes(*tree.program, NodeKind::Property), 2u);
}

TEST(Parser, MinifiedStyleOneLiner) {
  auto tree = parse(
      "(function(w,d){var e=d.createElement('s');e.onload=function(){w.ready=!0};"
      "w.addEventListener&&w.addEventListener('message',function(m){w.q.push(m)},!1)})(window,document);");
  EXPECT_GE(count_nodes(*tree.program, NodeKind::CallExpression), 3u);
}

}  // namespace
}  // namespace extpass::js
