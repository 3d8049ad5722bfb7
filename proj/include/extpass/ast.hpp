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

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace extpass::js {

enum class NodeKind {
  Program,

  // Statements.
  VariableDeclaration,
  VariableDeclarator,
  FunctionDeclaration,
  ClassDeclaration,
  ExpressionStatement,
  BlockStatement,
  IfStatement,
  ForStatement,
  ForInStatement,
  ForOfStatement,
  WhileStatement,
  DoWhileStatement,
  SwitchStatement,
  SwitchCase,
  ReturnStatement,
  ThrowStatement,
  TryStatement,
  CatchClause,
  BreakStatement,
  ContinueStatement,
  LabeledStatement,
  EmptyStatement,
  DebuggerStatement,
  WithStatement,
  ImportDeclaration,
  ExportNamedDeclaration,
  ExportDefaultDeclaration,
  ExportAllDeclaration,

  // Expressions.
  Identifier,
  PrivateName,
  Literal,
  TemplateLiteral,
  TaggedTemplateExpression,
  ArrayExpression,
  ObjectExpression,
  Property,
  FunctionExpression,
  ArrowFunctionExpression,
  ClassExpression,
  MethodDefinition,
  PropertyDefinition,
  UnaryExpression,
  UpdateExpression,
  BinaryExpression,
  LogicalExpression,
  AssignmentExpression,
  ConditionalExpression,
  CallExpression,
  NewExpression,
  MemberExpression,
  SequenceExpression,
  SpreadElement,
  RestElement,
  YieldExpression,
  AwaitExpression,
  ThisExpression,
  Super,
  MetaProperty,
  AssignmentPattern,
  ArrayPattern,
  ObjectPattern,
};

enum class LiteralKind {
  None,
  String,
  Number,
  Boolean,
  Null,
  RegExp,
  BigInt,
};

// One AST node. Link roles depend on the node kind:
//   Program/Block/Sequence/Array/Object/Switch  list = members
//   VariableDeclaration   name = "var"|"let"|"const", list = declarators
//   VariableDeclarator    id, init
//   Function*/Arrow       id (may be null), params, body
//   Class*                id, superclass, list = member definitions
//   MethodDefinition      key, value (function), name = kind, computed/is_static
//   Property              key, value, name = "init"|"get"|"set"
//   If/Conditional        test, consequent, alternate
//   For                   init, test, update, body
//   ForIn/ForOf           left, right, body
//   While/DoWhile         test, body
//   SwitchCase            test (null = default), list = body
//   Return/Throw/Unary/Update/Spread/Rest/Yield/Await  argument
//   Try                   block, handler, finalizer; CatchClause param, body
//   Labeled/Break/Continue  label
//   With                  object, body
//   Binary/Logical/Assignment  name = operator, left, right
//   Call/New              callee, list = arguments
//   Member                object, property, computed
//   TaggedTemplate        tag, quasi
//   TemplateLiteral       quasis = cooked strings, list = substitutions
//   Import/Export         source, argument = declaration
struct Node {
  NodeKind kind{};
  uint32_t line = 1;    // 1-based
  uint32_t column = 0;  // 0-based
  uint32_t begin = 0;   // byte offsets into the unit source
  uint32_t end = 0;

  std::string name;          // identifier, operator, label, property kind
  LiteralKind literal = LiteralKind::None;
  std::string string_value;  // cooked string / template value
  std::string raw;           // raw literal text (numbers, regexps)
  double number_value = 0;
  bool boolean_value = false;

  bool computed = false;
  bool is_async = false;
  bool is_generator = false;
  bool is_static = false;
  bool prefix = false;
  bool optional = false;   // optional chaining link
  bool shorthand = false;
  bool delegate = false;   // yield*

  Node* id = nullptr;
  Node* key = nullptr;
  Node* value = nullptr;
  Node* init = nullptr;
  Node* object = nullptr;
  Node* property = nullptr;
  Node* callee = nullptr;
  Node* test = nullptr;
  Node* consequent = nullptr;
  Node* alternate = nullptr;
  Node* left = nullptr;
  Node* right = nullptr;
  Node* argument = nullptr;
  Node* body = nullptr;
  Node* update = nullptr;
  Node* label = nullptr;
  Node* block = nullptr;
  Node* handler = nullptr;
  Node* finalizer = nullptr;
  Node* param = nullptr;
  Node* tag = nullptr;
  Node* quasi = nullptr;
  Node* superclass = nullptr;
  Node* discriminant = nullptr;
  Node* source = nullptr;

  std::vector<Node*> list;    // primary child list; may contain nulls (array holes)
  std::vector<Node*> params;  // function parameters
  std::vector<std::string> quasis;  // template literal string parts

  bool is_function() const {
    return kind == NodeKind::FunctionDeclaration ||
           kind == NodeKind::FunctionExpression ||
           kind == NodeKind::ArrowFunctionExpression;
  }
};

// Parsed representation of one script unit. Owns the node arena and a copy
// of the source so raw slices stay valid independently of the caller.
struct SyntaxTree {
  std::string source;
  std::string origin;  // path-or-descriptor of the unit
  std::deque<Node> arena;
  Node* program = nullptr;

  // Node pointers reach into the arena; a copy would leave them dangling in
  // the duplicate, so trees only move.
  SyntaxTree() = default;
  SyntaxTree(const SyntaxTree&) = delete;
  SyntaxTree& operator=(const SyntaxTree&) = delete;
  SyntaxTree(SyntaxTree&&) noexcept = default;
  SyntaxTree& operator=(SyntaxTree&&) noexcept = default;

  Node* make(NodeKind kind) {
    arena.emplace_back();
    arena.back().kind = kind;
    return &arena.back();
  }

  std::string slice(const Node& n) const {
    if (n.end <= n.begin || n.end > source.size()) return {};
    return source.substr(n.begin, n.end - n.begin);
  }
};

// Invokes fn on every non-null child node, in source order.
inline void for_each_child(const Node& n, const std::function<void(const Node&)>& fn) {
  const Node* const links[] = {
      n.id, n.key, n.value, n.init, n.object, n.property, n.callee,
      n.test, n.consequent, n.alternate, n.left, n.right, n.argument,
      n.body, n.update, n.label, n.block, n.handler, n.finalizer,
      n.param, n.tag, n.quasi, n.superclass, n.discriminant, n.source};
  for (const Node* c : links)
    if (c) fn(*c);
  for (const Node* c : n.list)
    if (c) fn(*c);
  for (const Node* c : n.params)
    if (c) fn(*c);
}

// Depth-first walk over a whole subtree, root included.
inline void walk(const Node& root, const std::function<void(const Node&)>& fn) {
  fn(root);
  for_each_child(root, [&](const Node& c) { walk(c, fn); });
}

inline size_t count_nodes(const Node& root, NodeKind kind) {
  size_t n = 0;
  walk(root, [&](const Node& c) {
    if (c.kind == kind) ++n;
  });
  return n;
}

}  // namespace extpass::js
