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

#include <string>
#include <string_view>
#include <vector>

#include "extpass/ast.hpp"
#include "extpass/error.hpp"
#include "extpass/lexer.hpp"

namespace extpass::js {

// Recursive-descent parser for ECMAScript scripts (ES2017 baseline, plus the
// later-era syntax that shows up in the wild: optional chaining, nullish
// coalescing, class fields, numeric separators). The produced tree is meant
// for indexing, not execution, so the parser is deliberately lenient about
// early errors (duplicate declarations, strict-mode restrictions) while
// still rejecting malformed input with ParseFailure.
class Parser {
 public:
  explicit Parser(SyntaxTree& tree)
      : tree_(tree), toks_(tokenize(tree.source)) {}

  Node* parse_program() {
    Node* program = tree_.make(NodeKind::Program);
    program->line = 1;
    while (!at_eof()) program->list.push_back(parse_statement());
    program->end = static_cast<uint32_t>(tree_.source.size());
    tree_.program = program;
    return program;
  }

 private:
  struct FunctionContext {
    bool is_async = false;
    bool is_generator = false;
  };

  SyntaxTree& tree_;
  std::vector<Token> toks_;
  size_t i_ = 0;
  std::vector<FunctionContext> fn_stack_;

  // ---- token plumbing ----

  const Token& tok(size_t off = 0) const {
    size_t k = i_ + off;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  const Token& prev() const { return toks_[i_ == 0 ? 0 : i_ - 1]; }
  bool at_eof() const { return tok().type == TokenType::EndOfFile; }
  void advance() {
    if (i_ + 1 < toks_.size()) ++i_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    raise(ErrorCode::ParseFailure, msg + " at line " +
                                       std::to_string(tok().line) + ":" +
                                       std::to_string(tok().column));
  }

  void expect(std::string_view p) {
    if (!tok().is(p)) fail("expected '" + std::string(p) + "'");
    advance();
  }

  void expect_word(std::string_view w) {
    if (!tok().is_identifier(w)) fail("expected '" + std::string(w) + "'");
    advance();
  }

  bool eat(std::string_view p) {
    if (tok().is(p)) {
      advance();
      return true;
    }
    return false;
  }

  bool eat_word(std::string_view w) {
    if (tok().is_identifier(w)) {
      advance();
      return true;
    }
    return false;
  }

  Node* make_at(NodeKind kind, const Token& at) {
    Node* n = tree_.make(kind);
    n->line = at.line;
    n->column = at.column;
    n->begin = at.begin;
    n->end = at.end;
    return n;
  }

  Node* make_here(NodeKind kind) { return make_at(kind, tok()); }

  Node* finish(Node* n) {
    n->end = prev().end;
    return n;
  }

  Node* start_from(NodeKind kind, const Node* first) {
    Node* n = tree_.make(kind);
    n->line = first->line;
    n->column = first->column;
    n->begin = first->begin;
    return n;
  }

  bool in_async() const { return !fn_stack_.empty() && fn_stack_.back().is_async; }
  bool in_generator() const {
    return !fn_stack_.empty() && fn_stack_.back().is_generator;
  }

  // Automatic semicolon insertion.
  void consume_semicolon() {
    if (eat(";")) return;
    if (tok().is("}") || at_eof() || tok().newline_before) return;
    fail("expected ';'");
  }

  static bool is_reserved(const Token& t) {
    return t.type == TokenType::Identifier && reserved_words().count(t.text) > 0;
  }

  bool token_starts_expression(const Token& t) const {
    switch (t.type) {
      case TokenType::Identifier:
        return !(t.text == "in" || t.text == "instanceof");
      case TokenType::Number:
      case TokenType::String:
      case TokenType::Regex:
      case TokenType::TemplateHead:
      case TokenType::TemplateFull:
        return true;
      case TokenType::Punctuator:
        return t.text == "(" || t.text == "[" || t.text == "{" ||
               t.text == "+" || t.text == "-" || t.text == "!" ||
               t.text == "~" || t.text == "++" || t.text == "--";
      default:
        return false;
    }
  }

  // Index of the token just past the matching close for the bracket at k.
  size_t after_matching(size_t k) const {
    int depth = 0;
    for (size_t j = k; j < toks_.size(); ++j) {
      const Token& t = toks_[j];
      if (t.type != TokenType::Punctuator) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      else if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (--depth == 0) return j + 1;
      }
    }
    return toks_.size() - 1;
  }

  // ---- statements ----

  Node* parse_statement() {
    const Token& t = tok();
    if (t.is("{")) return parse_block();
    if (t.is(";")) {
      Node* n = make_here(NodeKind::EmptyStatement);
      advance();
      return n;
    }
    if (t.type == TokenType::Identifier) {
      const std::string& w = t.text;
      if (w == "var" || w == "const") return parse_variable_statement();
      if (w == "let" && starts_binding(tok(1))) return parse_variable_statement();
      if (w == "function") return parse_function(NodeKind::FunctionDeclaration, false);
      if (w == "async" && tok(1).is_identifier("function") && !tok(1).newline_before)
        return parse_function(NodeKind::FunctionDeclaration, true);
      if (w == "class") return parse_class(NodeKind::ClassDeclaration);
      if (w == "if") return parse_if();
      if (w == "for") return parse_for();
      if (w == "while") return parse_while();
      if (w == "do") return parse_do_while();
      if (w == "switch") return parse_switch();
      if (w == "return") return parse_return();
      if (w == "throw") return parse_throw();
      if (w == "try") return parse_try();
      if (w == "break" || w == "continue") return parse_break_continue();
      if (w == "debugger") {
        Node* n = make_here(NodeKind::DebuggerStatement);
        advance();
        consume_semicolon();
        return finish(n);
      }
      if (w == "with") return parse_with();
      if (w == "import" && !tok(1).is("(") && !tok(1).is("."))
        return parse_import();
      if (w == "export") return parse_export();
      if (tok(1).is(":") && !is_reserved(t)) {
        Node* n = make_here(NodeKind::LabeledStatement);
        n->label = parse_identifier();
        expect(":");
        n->body = parse_statement();
        return finish(n);
      }
    }
    Node* n = make_here(NodeKind::ExpressionStatement);
    n->argument = parse_expression(false);
    consume_semicolon();
    return finish(n);
  }

  static bool starts_binding(const Token& t) {
    return (t.type == TokenType::Identifier && !is_reserved(t)) || t.is("[") ||
           t.is("{");
  }

  Node* parse_block() {
    Node* n = make_here(NodeKind::BlockStatement);
    expect("{");
    while (!tok().is("}") && !at_eof()) n->list.push_back(parse_statement());
    expect("}");
    return finish(n);
  }

  Node* parse_variable_statement() {
    Node* n = parse_variable_declaration(false);
    consume_semicolon();
    return finish(n);
  }

  Node* parse_variable_declaration(bool no_in) {
    Node* n = make_here(NodeKind::VariableDeclaration);
    n->name = tok().text;
    advance();
    for (;;) {
      Node* d = make_here(NodeKind::VariableDeclarator);
      d->id = parse_binding_target();
      if (eat("=")) d->init = parse_assignment(no_in);
      n->list.push_back(finish(d));
      if (!eat(",")) break;
    }
    return finish(n);
  }

  Node* parse_binding_target() {
    if (tok().is("[")) return parse_array_pattern();
    if (tok().is("{")) return parse_object_pattern();
    if (tok().type == TokenType::Identifier && !is_reserved(tok()))
      return parse_identifier();
    fail("expected binding target");
  }

  Node* parse_array_pattern() {
    Node* n = make_here(NodeKind::ArrayPattern);
    expect("[");
    while (!tok().is("]") && !at_eof()) {
      if (tok().is(",")) {
        n->list.push_back(nullptr);
        advance();
        continue;
      }
      Node* el = nullptr;
      if (tok().is("...")) {
        el = make_here(NodeKind::RestElement);
        advance();
        el->argument = parse_binding_target();
        finish(el);
      } else {
        el = parse_binding_target();
        if (tok().is("=")) {
          Node* ap = start_from(NodeKind::AssignmentPattern, el);
          advance();
          ap->left = el;
          ap->right = parse_assignment(false);
          el = finish(ap);
        }
      }
      n->list.push_back(el);
      if (!tok().is("]")) expect(",");
    }
    expect("]");
    return finish(n);
  }

  Node* parse_object_pattern() {
    Node* n = make_here(NodeKind::ObjectPattern);
    expect("{");
    while (!tok().is("}") && !at_eof()) {
      if (tok().is("...")) {
        Node* rest = make_here(NodeKind::RestElement);
        advance();
        rest->argument = parse_binding_target();
        n->list.push_back(finish(rest));
      } else {
        Node* p = make_here(NodeKind::Property);
        p->name = "init";
        p->key = parse_property_key(p);
        if (eat(":")) {
          p->value = parse_binding_target();
          if (tok().is("=")) {
            Node* ap = start_from(NodeKind::AssignmentPattern, p->value);
            advance();
            ap->left = p->value;
            ap->right = parse_assignment(false);
            p->value = finish(ap);
          }
        } else {
          p->shorthand = true;
          p->value = p->key;
          if (tok().is("=")) {
            Node* ap = start_from(NodeKind::AssignmentPattern, p->key);
            advance();
            ap->left = p->key;
            ap->right = parse_assignment(false);
            p->value = finish(ap);
          }
        }
        n->list.push_back(finish(p));
      }
      if (!tok().is("}")) expect(",");
    }
    expect("}");
    return finish(n);
  }

  Node* parse_if() {
    Node* n = make_here(NodeKind::IfStatement);
    advance();
    expect("(");
    n->test = parse_expression(false);
    expect(")");
    n->consequent = parse_statement();
    if (eat_word("else")) n->alternate = parse_statement();
    return finish(n);
  }

  Node* parse_for() {
    Node* header = make_here(NodeKind::ForStatement);
    advance();
    bool for_await = eat_word("await");
    expect("(");

    Node* init = nullptr;
    if (!tok().is(";")) {
      if (tok().is_identifier("var") || tok().is_identifier("const") ||
          (tok().is_identifier("let") && starts_binding(tok(1)))) {
        init = parse_variable_declaration(true);
      } else {
        init = parse_expression(true);
      }
      if (tok().is_identifier("in") || tok().is_identifier("of")) {
        bool is_of = tok().text == "of";
        advance();
        Node* n = header;
        n->kind = is_of ? NodeKind::ForOfStatement : NodeKind::ForInStatement;
        n->is_async = for_await;
        n->left = to_pattern(init);
        n->right = is_of ? parse_assignment(false) : parse_expression(false);
        expect(")");
        n->body = parse_statement();
        return finish(n);
      }
    }
    header->init = init;
    expect(";");
    if (!tok().is(";")) header->test = parse_expression(false);
    expect(";");
    if (!tok().is(")")) header->update = parse_expression(false);
    expect(")");
    header->body = parse_statement();
    return finish(header);
  }

  Node* parse_while() {
    Node* n = make_here(NodeKind::WhileStatement);
    advance();
    expect("(");
    n->test = parse_expression(false);
    expect(")");
    n->body = parse_statement();
    return finish(n);
  }

  Node* parse_do_while() {
    Node* n = make_here(NodeKind::DoWhileStatement);
    advance();
    n->body = parse_statement();
    expect_word("while");
    expect("(");
    n->test = parse_expression(false);
    expect(")");
    eat(";");  // ASI always applies after do-while
    return finish(n);
  }

  Node* parse_switch() {
    Node* n = make_here(NodeKind::SwitchStatement);
    advance();
    expect("(");
    n->discriminant = parse_expression(false);
    expect(")");
    expect("{");
    while (!tok().is("}") && !at_eof()) {
      Node* c = make_here(NodeKind::SwitchCase);
      if (eat_word("case")) {
        c->test = parse_expression(false);
      } else {
        expect_word("default");
      }
      expect(":");
      while (!tok().is("}") && !tok().is_identifier("case") &&
             !tok().is_identifier("default") && !at_eof())
        c->list.push_back(parse_statement());
      n->list.push_back(finish(c));
    }
    expect("}");
    return finish(n);
  }

  Node* parse_return() {
    Node* n = make_here(NodeKind::ReturnStatement);
    advance();
    if (!tok().is(";") && !tok().is("}") && !at_eof() && !tok().newline_before)
      n->argument = parse_expression(false);
    consume_semicolon();
    return finish(n);
  }

  Node* parse_throw() {
    Node* n = make_here(NodeKind::ThrowStatement);
    advance();
    if (!tok().is(";") && !tok().is("}") && !at_eof() && !tok().newline_before)
      n->argument = parse_expression(false);
    consume_semicolon();
    return finish(n);
  }

  Node* parse_try() {
    Node* n = make_here(NodeKind::TryStatement);
    advance();
    n->block = parse_block();
    if (tok().is_identifier("catch")) {
      Node* c = make_here(NodeKind::CatchClause);
      advance();
      if (eat("(")) {
        c->param = parse_binding_target();
        expect(")");
      }
      c->body = parse_block();
      n->handler = finish(c);
    }
    if (eat_word("finally")) n->finalizer = parse_block();
    if (!n->handler && !n->finalizer) fail("missing catch or finally");
    return finish(n);
  }

  Node* parse_break_continue() {
    Node* n = make_here(tok().text == "break" ? NodeKind::BreakStatement
                                              : NodeKind::ContinueStatement);
    advance();
    if (tok().type == TokenType::Identifier && !is_reserved(tok()) &&
        !tok().newline_before)
      n->label = parse_identifier();
    consume_semicolon();
    return finish(n);
  }

  Node* parse_with() {
    Node* n = make_here(NodeKind::WithStatement);
    advance();
    expect("(");
    n->object = parse_expression(false);
    expect(")");
    n->body = parse_statement();
    return finish(n);
  }

  Node* parse_import() {
    Node* n = make_here(NodeKind::ImportDeclaration);
    advance();
    if (tok().type == TokenType::String) {
      n->source = parse_primary(false);
      consume_semicolon();
      return finish(n);
    }
    // Specifiers are skipped structurally; only the source matters here.
    while (!tok().is_identifier("from") && !at_eof()) {
      if (tok().is("{")) {
        i_ = after_matching(i_);
      } else {
        advance();
      }
    }
    expect_word("from");
    if (tok().type != TokenType::String) fail("expected module specifier");
    n->source = parse_primary(false);
    consume_semicolon();
    return finish(n);
  }

  Node* parse_export() {
    const Token& start = tok();
    advance();
    if (tok().is_identifier("default")) {
      Node* n = make_at(NodeKind::ExportDefaultDeclaration, start);
      advance();
      if (tok().is_identifier("function") ||
          (tok().is_identifier("async") && tok(1).is_identifier("function"))) {
        bool as = eat_word("async");
        n->argument = parse_function(NodeKind::FunctionDeclaration, as, true);
      } else if (tok().is_identifier("class")) {
        n->argument = parse_class(NodeKind::ClassDeclaration, true);
      } else {
        n->argument = parse_assignment(false);
        consume_semicolon();
      }
      return finish(n);
    }
    if (tok().is("*")) {
      Node* n = make_at(NodeKind::ExportAllDeclaration, start);
      advance();
      if (eat_word("as")) parse_identifier();
      expect_word("from");
      if (tok().type != TokenType::String) fail("expected module specifier");
      n->source = parse_primary(false);
      consume_semicolon();
      return finish(n);
    }
    Node* n = make_at(NodeKind::ExportNamedDeclaration, start);
    if (tok().is("{")) {
      i_ = after_matching(i_);
      if (eat_word("from")) {
        if (tok().type != TokenType::String) fail("expected module specifier");
        n->source = parse_primary(false);
      }
      consume_semicolon();
      return finish(n);
    }
    n->argument = parse_statement();  // var/let/const/function/class
    return finish(n);
  }

  // ---- functions and classes ----

  Node* parse_function(NodeKind kind, bool is_async, bool name_optional = false) {
    Node* n = make_here(kind);
    if (is_async) advance();  // 'async'
    expect_word("function");
    n->is_async = is_async;
    n->is_generator = eat("*");
    if (tok().type == TokenType::Identifier && !is_reserved(tok())) {
      n->id = parse_identifier();
    } else if (kind == NodeKind::FunctionDeclaration && !name_optional) {
      fail("function declaration requires a name");
    }
    parse_function_rest(n);
    return finish(n);
  }

  void parse_function_rest(Node* n) {
    n->params = parse_formal_parameters();
    fn_stack_.push_back({n->is_async, n->is_generator});
    n->body = parse_block();
    fn_stack_.pop_back();
  }

  std::vector<Node*> parse_formal_parameters() {
    std::vector<Node*> params;
    expect("(");
    while (!tok().is(")") && !at_eof()) {
      if (tok().is("...")) {
        Node* rest = make_here(NodeKind::RestElement);
        advance();
        rest->argument = parse_binding_target();
        params.push_back(finish(rest));
      } else {
        Node* p = parse_binding_target();
        if (tok().is("=")) {
          Node* ap = start_from(NodeKind::AssignmentPattern, p);
          advance();
          ap->left = p;
          ap->right = parse_assignment(false);
          p = finish(ap);
        }
        params.push_back(p);
      }
      if (!tok().is(")")) expect(",");
    }
    expect(")");
    return params;
  }

  Node* parse_class(NodeKind kind, bool name_optional = false) {
    Node* n = make_here(kind);
    advance();  // 'class'
    if (tok().type == TokenType::Identifier && !is_reserved(tok()))
      n->id = parse_identifier();
    else if (kind == NodeKind::ClassDeclaration && !name_optional)
      fail("class declaration requires a name");
    if (eat_word("extends")) n->superclass = parse_unary();
    expect("{");
    while (!tok().is("}") && !at_eof()) {
      if (eat(";")) continue;
      n->list.push_back(parse_class_member());
    }
    expect("}");
    return finish(n);
  }

  bool next_is_member_key(size_t off) const {
    const Token& t = tok(off);
    return t.type == TokenType::Identifier || t.type == TokenType::String ||
           t.type == TokenType::Number || t.is("[") || t.is("#") || t.is("*");
  }

  Node* parse_class_member() {
    Node* m = make_here(NodeKind::MethodDefinition);
    if (tok().is_identifier("static") && tok(1).is("{")) {
      m->kind = NodeKind::PropertyDefinition;
      m->is_static = true;
      advance();
      m->body = parse_block();
      return finish(m);
    }
    if (tok().is_identifier("static") && next_is_member_key(1) && !tok(1).is("(")) {
      m->is_static = true;
      advance();
    }
    std::string kind = "method";
    bool is_async = false, is_generator = false;
    if (tok().is_identifier("async") && next_is_member_key(1) &&
        !tok(1).is("(") && !tok(1).newline_before) {
      is_async = true;
      advance();
    }
    if (tok().is("*")) {
      is_generator = true;
      advance();
    }
    if ((tok().is_identifier("get") || tok().is_identifier("set")) &&
        next_is_member_key(1) && !tok(1).is("(") && !tok(1).is("=")) {
      kind = tok().text;
      advance();
    }
    m->key = parse_property_key(m);
    if (tok().is("(")) {
      m->name = (!m->computed && m->key->kind == NodeKind::Identifier &&
                 m->key->name == "constructor")
                    ? "constructor"
                    : kind;
      Node* fn = start_from(NodeKind::FunctionExpression, m->key);
      fn->is_async = is_async;
      fn->is_generator = is_generator;
      parse_function_rest(fn);
      m->value = finish(fn);
      return finish(m);
    }
    // Class field.
    m->kind = NodeKind::PropertyDefinition;
    if (eat("=")) m->value = parse_assignment(false);
    consume_semicolon();
    return finish(m);
  }

  Node* parse_property_key(Node* owner) {
    if (tok().is("[")) {
      owner->computed = true;
      advance();
      Node* k = parse_assignment(false);
      expect("]");
      return k;
    }
    if (tok().is("#")) {
      Node* k = make_here(NodeKind::PrivateName);
      advance();
      if (tok().type != TokenType::Identifier) fail("expected private name");
      k->name = tok().text;
      advance();
      return finish(k);
    }
    const Token& t = tok();
    if (t.type == TokenType::Identifier) {
      Node* k = make_here(NodeKind::Identifier);
      k->name = t.text;
      advance();
      return finish(k);
    }
    if (t.type == TokenType::String || t.type == TokenType::Number)
      return parse_primary(false);
    fail("expected property key");
  }

  // ---- expressions ----

  Node* parse_identifier() {
    if (tok().type != TokenType::Identifier) fail("expected identifier");
    Node* n = make_here(NodeKind::Identifier);
    n->name = tok().text;
    advance();
    return finish(n);
  }

  Node* parse_expression(bool no_in) {
    Node* first = parse_assignment(no_in);
    if (!tok().is(",")) return first;
    Node* seq = start_from(NodeKind::SequenceExpression, first);
    seq->list.push_back(first);
    while (eat(",")) seq->list.push_back(parse_assignment(no_in));
    return finish(seq);
  }

  bool arrow_ahead() const {
    const Token& t = tok();
    if (t.type == TokenType::Identifier && !is_reserved(t) && t.text != "async") {
      return tok(1).is("=>") && !tok(1).newline_before;
    }
    if (t.is("(")) {
      size_t after = after_matching(i_);
      return toks_[after].is("=>");
    }
    if (t.is_identifier("async") && !tok(1).newline_before) {
      if (tok(1).is("=>")) return true;  // `async` as a parameter name
      if (tok(1).type == TokenType::Identifier && !is_reserved(tok(1)))
        return tok(2).is("=>") && !tok(2).newline_before;
      if (tok(1).is("(")) {
        size_t after = after_matching(i_ + 1);
        return toks_[after].is("=>");
      }
    }
    return false;
  }

  Node* parse_arrow() {
    Node* n = make_here(NodeKind::ArrowFunctionExpression);
    n->is_async = tok().is_identifier("async") && !tok(1).is("=>");
    if (n->is_async) advance();
    if (tok().is("(")) {
      n->params = parse_formal_parameters();
    } else {
      n->params.push_back(parse_identifier());
    }
    expect("=>");
    fn_stack_.push_back({n->is_async, false});
    if (tok().is("{")) {
      n->body = parse_block();
    } else {
      n->body = parse_assignment(false);
    }
    fn_stack_.pop_back();
    return finish(n);
  }

  static bool is_assignment_operator(const Token& t) {
    if (t.type != TokenType::Punctuator) return false;
    static const std::unordered_set<std::string> kOps = {
        "=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", ">>>=",
        "&=", "|=", "^=", "**=", "&&=", "||=", "?\?="};
    return kOps.count(t.text) > 0;
  }

  Node* parse_assignment(bool no_in) {
    if (tok().is_identifier("yield") && in_generator()) return parse_yield(no_in);
    if (arrow_ahead()) return parse_arrow();
    Node* left = parse_conditional(no_in);
    if (!is_assignment_operator(tok())) return left;
    Node* n = start_from(NodeKind::AssignmentExpression, left);
    n->name = tok().text;
    advance();
    n->left = (n->name == "=") ? to_pattern(left) : left;
    n->right = parse_assignment(no_in);
    return finish(n);
  }

  Node* parse_yield(bool no_in) {
    Node* n = make_here(NodeKind::YieldExpression);
    advance();
    if (tok().is("*")) {
      n->delegate = true;
      advance();
      n->argument = parse_assignment(no_in);
    } else if (!tok().newline_before && token_starts_expression(tok())) {
      n->argument = parse_assignment(no_in);
    }
    return finish(n);
  }

  Node* parse_conditional(bool no_in) {
    Node* test = parse_binary(1, no_in);
    if (!tok().is("?")) return test;
    Node* n = start_from(NodeKind::ConditionalExpression, test);
    n->test = test;
    advance();
    n->consequent = parse_assignment(false);
    expect(":");
    n->alternate = parse_assignment(no_in);
    return finish(n);
  }

  int binary_precedence(const Token& t, bool no_in) const {
    if (t.type == TokenType::Identifier) {
      if (t.text == "instanceof") return 8;
      if (t.text == "in") return no_in ? -1 : 8;
      return -1;
    }
    if (t.type != TokenType::Punctuator) return -1;
    const std::string& p = t.text;
    if (p == "??") return 1;
    if (p == "||") return 2;
    if (p == "&&") return 3;
    if (p == "|") return 4;
    if (p == "^") return 5;
    if (p == "&") return 6;
    if (p == "==" || p == "!=" || p == "===" || p == "!==") return 7;
    if (p == "<" || p == ">" || p == "<=" || p == ">=") return 8;
    if (p == "<<" || p == ">>" || p == ">>>") return 9;
    if (p == "+" || p == "-") return 10;
    if (p == "*" || p == "/" || p == "%") return 11;
    if (p == "**") return 12;
    return -1;
  }

  Node* parse_binary(int min_prec, bool no_in) {
    Node* left = parse_unary();
    for (;;) {
      int prec = binary_precedence(tok(), no_in);
      if (prec < min_prec) return left;
      std::string op = tok().text;
      bool logical = op == "&&" || op == "||" || op == "??";
      advance();
      int next_min = (op == "**") ? prec : prec + 1;  // ** is right-assoc
      Node* right = parse_binary(next_min, no_in);
      Node* n = start_from(
          logical ? NodeKind::LogicalExpression : NodeKind::BinaryExpression,
          left);
      n->name = op;
      n->left = left;
      n->right = right;
      left = finish(n);
    }
  }

  bool await_is_operator() const {
    if (in_async()) return true;
    if (!fn_stack_.empty()) return false;
    return token_starts_expression(tok(1)) && !tok(1).is("(");
  }

  Node* parse_unary() {
    const Token& t = tok();
    if (t.is("+") || t.is("-") || t.is("~") || t.is("!") ||
        t.is_identifier("typeof") || t.is_identifier("void") ||
        t.is_identifier("delete")) {
      Node* n = make_here(NodeKind::UnaryExpression);
      n->name = t.text;
      n->prefix = true;
      advance();
      n->argument = parse_unary();
      return finish(n);
    }
    if (t.is("++") || t.is("--")) {
      Node* n = make_here(NodeKind::UpdateExpression);
      n->name = t.text;
      n->prefix = true;
      advance();
      n->argument = parse_unary();
      return finish(n);
    }
    if (t.is_identifier("await") && await_is_operator()) {
      Node* n = make_here(NodeKind::AwaitExpression);
      advance();
      n->argument = parse_unary();
      return finish(n);
    }
    Node* expr = parse_call_member(parse_new_or_primary());
    if ((tok().is("++") || tok().is("--")) && !tok().newline_before) {
      Node* n = start_from(NodeKind::UpdateExpression, expr);
      n->name = tok().text;
      n->prefix = false;
      n->argument = expr;
      advance();
      return finish(n);
    }
    return expr;
  }

  Node* parse_new_or_primary() {
    if (tok().is_identifier("new")) {
      const Token& start = tok();
      if (tok(1).is(".")) {  // new.target
        Node* n = make_at(NodeKind::MetaProperty, start);
        advance();
        advance();
        if (tok().type == TokenType::Identifier) advance();
        n->name = "new.target";
        return finish(n);
      }
      advance();
      Node* n = make_at(NodeKind::NewExpression, start);
      Node* callee = parse_new_or_primary();
      // Member accesses bind tighter than the `new` arguments.
      for (;;) {
        if (tok().is(".")) {
          Node* m = start_from(NodeKind::MemberExpression, callee);
          advance();
          m->object = callee;
          m->property = parse_member_property_name();
          callee = finish(m);
        } else if (tok().is("[")) {
          Node* m = start_from(NodeKind::MemberExpression, callee);
          advance();
          m->object = callee;
          m->property = parse_expression(false);
          m->computed = true;
          expect("]");
          callee = finish(m);
        } else {
          break;
        }
      }
      n->callee = callee;
      if (tok().is("(")) n->list = parse_arguments();
      return finish(n);
    }
    return parse_primary(false);
  }

  Node* parse_member_property_name() {
    if (tok().is("#")) {
      Node* k = make_here(NodeKind::PrivateName);
      advance();
      if (tok().type != TokenType::Identifier) fail("expected private name");
      k->name = tok().text;
      advance();
      return finish(k);
    }
    if (tok().type != TokenType::Identifier) fail("expected property name");
    Node* n = make_here(NodeKind::Identifier);
    n->name = tok().text;
    advance();
    return finish(n);
  }

  Node* parse_call_member(Node* expr) {
    for (;;) {
      if (tok().is(".")) {
        Node* m = start_from(NodeKind::MemberExpression, expr);
        advance();
        m->object = expr;
        m->property = parse_member_property_name();
        expr = finish(m);
      } else if (tok().is("[")) {
        Node* m = start_from(NodeKind::MemberExpression, expr);
        advance();
        m->object = expr;
        m->property = parse_expression(false);
        m->computed = true;
        expect("]");
        expr = finish(m);
      } else if (tok().is("(")) {
        Node* c = start_from(NodeKind::CallExpression, expr);
        c->callee = expr;
        c->list = parse_arguments();
        expr = finish(c);
      } else if (tok().is("?.")) {
        advance();
        if (tok().is("(")) {
          Node* c = start_from(NodeKind::CallExpression, expr);
          c->callee = expr;
          c->optional = true;
          c->list = parse_arguments();
          expr = finish(c);
        } else if (tok().is("[")) {
          Node* m = start_from(NodeKind::MemberExpression, expr);
          advance();
          m->object = expr;
          m->property = parse_expression(false);
          m->computed = true;
          m->optional = true;
          expect("]");
          expr = finish(m);
        } else {
          Node* m = start_from(NodeKind::MemberExpression, expr);
          m->object = expr;
          m->property = parse_member_property_name();
          m->optional = true;
          expr = finish(m);
        }
      } else if (tok().type == TokenType::TemplateHead ||
                 tok().type == TokenType::TemplateFull) {
        Node* tt = start_from(NodeKind::TaggedTemplateExpression, expr);
        tt->tag = expr;
        tt->quasi = parse_template_literal();
        expr = finish(tt);
      } else {
        return expr;
      }
    }
  }

  std::vector<Node*> parse_arguments() {
    std::vector<Node*> args;
    expect("(");
    while (!tok().is(")") && !at_eof()) {
      if (tok().is("...")) {
        Node* s = make_here(NodeKind::SpreadElement);
        advance();
        s->argument = parse_assignment(false);
        args.push_back(finish(s));
      } else {
        args.push_back(parse_assignment(false));
      }
      if (!tok().is(")")) expect(",");
    }
    expect(")");
    return args;
  }

  Node* parse_template_literal() {
    Node* n = make_here(NodeKind::TemplateLiteral);
    if (tok().type == TokenType::TemplateFull) {
      n->quasis.push_back(tok().text);
      n->string_value = tok().text;
      advance();
      return finish(n);
    }
    n->quasis.push_back(tok().text);
    advance();
    for (;;) {
      n->list.push_back(parse_expression(false));
      if (tok().type == TokenType::TemplateMiddle) {
        n->quasis.push_back(tok().text);
        advance();
      } else if (tok().type == TokenType::TemplateTail) {
        n->quasis.push_back(tok().text);
        advance();
        break;
      } else {
        fail("unterminated template literal");
      }
    }
    return finish(n);
  }

  Node* parse_primary(bool) {
    const Token& t = tok();
    switch (t.type) {
      case TokenType::Number: {
        Node* n = make_here(NodeKind::Literal);
        n->literal = LiteralKind::Number;
        n->number_value = t.number;
        n->raw = t.text;
        advance();
        return finish(n);
      }
      case TokenType::String: {
        Node* n = make_here(NodeKind::Literal);
        n->literal = LiteralKind::String;
        n->string_value = t.text;
        advance();
        return finish(n);
      }
      case TokenType::Regex: {
        Node* n = make_here(NodeKind::Literal);
        n->literal = LiteralKind::RegExp;
        n->raw = t.text;
        advance();
        return finish(n);
      }
      case TokenType::TemplateFull:
      case TokenType::TemplateHead:
        return parse_template_literal();
      case TokenType::Punctuator:
        if (t.text == "(") {
          advance();
          Node* e = parse_expression(false);
          expect(")");
          return e;
        }
        if (t.text == "[") return parse_array_literal();
        if (t.text == "{") return parse_object_literal();
        fail("unexpected token '" + t.text + "'");
      case TokenType::Identifier: {
        const std::string& w = t.text;
        if (w == "function") return parse_function(NodeKind::FunctionExpression, false);
        if (w == "async" && tok(1).is_identifier("function") &&
            !tok(1).newline_before)
          return parse_function(NodeKind::FunctionExpression, true);
        if (w == "class") return parse_class(NodeKind::ClassExpression);
        if (w == "this") {
          Node* n = make_here(NodeKind::ThisExpression);
          advance();
          return finish(n);
        }
        if (w == "super") {
          Node* n = make_here(NodeKind::Super);
          advance();
          return finish(n);
        }
        if (w == "true" || w == "false") {
          Node* n = make_here(NodeKind::Literal);
          n->literal = LiteralKind::Boolean;
          n->boolean_value = (w == "true");
          advance();
          return finish(n);
        }
        if (w == "null") {
          Node* n = make_here(NodeKind::Literal);
          n->literal = LiteralKind::Null;
          advance();
          return finish(n);
        }
        if (is_reserved(t) && w != "import") fail("unexpected keyword '" + w + "'");
        return parse_identifier();
      }
      default:
        fail("unexpected end of input");
    }
  }

  Node* parse_array_literal() {
    Node* n = make_here(NodeKind::ArrayExpression);
    expect("[");
    while (!tok().is("]") && !at_eof()) {
      if (tok().is(",")) {
        n->list.push_back(nullptr);  // hole
        advance();
        continue;
      }
      if (tok().is("...")) {
        Node* s = make_here(NodeKind::SpreadElement);
        advance();
        s->argument = parse_assignment(false);
        n->list.push_back(finish(s));
      } else {
        n->list.push_back(parse_assignment(false));
      }
      if (!tok().is("]")) expect(",");
    }
    expect("]");
    return finish(n);
  }

  Node* parse_object_literal() {
    Node* n = make_here(NodeKind::ObjectExpression);
    expect("{");
    while (!tok().is("}") && !at_eof()) {
      n->list.push_back(parse_object_property());
      if (!tok().is("}")) expect(",");
    }
    expect("}");
    return finish(n);
  }

  Node* parse_object_property() {
    if (tok().is("...")) {
      Node* s = make_here(NodeKind::SpreadElement);
      advance();
      s->argument = parse_assignment(false);
      return finish(s);
    }
    Node* p = make_here(NodeKind::Property);
    p->name = "init";
    bool is_async = false, is_generator = false;

    if (tok().is_identifier("async") && !tok(1).newline_before &&
        next_is_member_key(1) && !tok(1).is("(")) {
      is_async = true;
      advance();
    }
    if (tok().is("*")) {
      is_generator = true;
      advance();
    }
    if ((tok().is_identifier("get") || tok().is_identifier("set")) &&
        next_is_member_key(1) && !tok(1).is("(") && !tok(1).is(":") &&
        !tok(1).is(",") && !tok(1).is("}") && !tok(1).is("=")) {
      p->name = tok().text;
      advance();
      p->key = parse_property_key(p);
      Node* fn = start_from(NodeKind::FunctionExpression, p->key);
      parse_function_rest(fn);
      p->value = finish(fn);
      return finish(p);
    }

    p->key = parse_property_key(p);
    if (tok().is("(")) {  // method shorthand
      Node* fn = start_from(NodeKind::FunctionExpression, p->key);
      fn->is_async = is_async;
      fn->is_generator = is_generator;
      parse_function_rest(fn);
      p->value = finish(fn);
      return finish(p);
    }
    if (eat(":")) {
      p->value = parse_assignment(false);
      return finish(p);
    }
    if (p->key->kind != NodeKind::Identifier) fail("expected ':' in object literal");
    p->shorthand = true;
    if (tok().is("=")) {
      // Cover grammar: only valid once reinterpreted as a pattern.
      Node* ap = start_from(NodeKind::AssignmentPattern, p->key);
      advance();
      ap->left = p->key;
      ap->right = parse_assignment(false);
      p->value = finish(ap);
    } else {
      p->value = p->key;
    }
    return finish(p);
  }

  // Reinterprets an expression produced by the cover grammar as a binding
  // pattern. Lenient: anything that cannot be a pattern is left as-is.
  Node* to_pattern(Node* n) {
    if (!n) return n;
    switch (n->kind) {
      case NodeKind::ArrayExpression:
        n->kind = NodeKind::ArrayPattern;
        for (Node*& el : n->list) el = to_pattern(el);
        return n;
      case NodeKind::ObjectExpression:
        n->kind = NodeKind::ObjectPattern;
        for (Node*& pr : n->list)
          if (pr && pr->kind == NodeKind::Property) pr->value = to_pattern(pr->value);
        return n;
      case NodeKind::SpreadElement:
        n->kind = NodeKind::RestElement;
        n->argument = to_pattern(n->argument);
        return n;
      case NodeKind::AssignmentExpression:
        if (n->name == "=") {
          n->kind = NodeKind::AssignmentPattern;
          n->left = to_pattern(n->left);
        }
        return n;
      default:
        return n;
    }
  }
};

// Parses one script. Throws Error(ParseFailure) on malformed input.
inline SyntaxTree parse_source(std::string source, std::string origin = {}) {
  SyntaxTree tree;
  tree.source = std::move(source);
  tree.origin = std::move(origin);
  Parser(tree).parse_program();
  return tree;
}

}  // namespace extpass::js
