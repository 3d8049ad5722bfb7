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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "extpass/access_path.hpp"
#include "extpass/ast.hpp"
#include "extpass/parser.hpp"

namespace extpass {

struct SourceRef {
  int unit = 0;
  uint32_t line = 1;
  uint32_t column = 0;
};

struct AssignRecord {
  AccessPath path;
  std::string written;     // target as spelled in source
  const js::Node* value = nullptr;
  SourceRef where;
};

struct FunctionRecord {
  AccessPath path;
  const js::Node* fn = nullptr;
  SourceRef where;
};

struct CallRecord {
  AccessPath path;
  std::string written;      // callee as spelled in source
  std::vector<const js::Node*> args;
  const js::Node* node = nullptr;  // the call/new expression itself
  SourceRef where;
  bool is_new = false;
  bool via_call_apply = false;
};

// The three indexed tables: every assignment, function definition and call
// in an analysis scope, keyed by normalized access-path name. All names in
// one scope share one namespace; same-named bindings from unrelated scopes
// deliberately land under the same key. The tables own the parse trees their
// records point into.
struct IndexedTables {
  std::map<std::string, std::vector<AssignRecord>> assignments;
  std::map<std::string, std::vector<FunctionRecord>> functions;
  std::map<std::string, std::vector<CallRecord>> calls;
  std::vector<js::SyntaxTree> units;
  std::vector<std::string> unit_origins;

  std::string origin_of(int unit) const {
    return unit >= 0 && unit < static_cast<int>(unit_origins.size())
               ? unit_origins[static_cast<size_t>(unit)]
               : std::string("<unknown>");
  }

  std::string location_of(const SourceRef& ref) const {
    return origin_of(ref.unit) + ":" + std::to_string(ref.line);
  }
};

struct FunctionRef {
  const js::Node* fn = nullptr;
  int unit = 0;
};

namespace detail {

class TableBuilder {
 public:
  TableBuilder(IndexedTables& tables, const js::SyntaxTree& tree, int unit)
      : tables_(tables), tree_(tree), unit_(unit) {}

  void run() { visit(*tree_.program); }

 private:
  IndexedTables& tables_;
  const js::SyntaxTree& tree_;
  int unit_;

  SourceRef ref(const js::Node& n) const {
    return SourceRef{unit_, n.line, n.column};
  }

  void visit(const js::Node& n) {
    using js::NodeKind;
    switch (n.kind) {
      case NodeKind::VariableDeclarator:
        if (n.id && n.id->kind == NodeKind::Identifier && n.init)
          record_binding({n.id->name}, tree_.slice(*n.id), *n.init, *n.id);
        break;
      case NodeKind::AssignmentExpression:
        if (n.left && n.right) {
          std::vector<std::string> raw;
          if (raw_access_path(*n.left, raw))
            record_binding(raw, tree_.slice(*n.left), *n.right, *n.left);
        }
        break;
      case NodeKind::FunctionDeclaration:
        if (n.id) {
          add_function({n.id->name}, n, *n.id);
          add_assignment({n.id->name}, tree_.slice(*n.id), n, *n.id);
        }
        break;
      case NodeKind::ObjectExpression:
        register_object_members({}, n);
        break;
      case NodeKind::ClassDeclaration:
      case NodeKind::ClassExpression:
        register_class(n);
        break;
      case NodeKind::CallExpression:
      case NodeKind::NewExpression:
        record_call(n);
        break;
      default:
        break;
    }
    js::for_each_child(n, [&](const js::Node& c) { visit(c); });
  }

  void record_binding(std::vector<std::string> raw_target,
                      const std::string& written, const js::Node& value,
                      const js::Node& at) {
    add_assignment(raw_target, written, value, at);
    if (value.is_function()) {
      add_function(raw_target, value, at);
      // Named function expressions are reachable under their own name too.
      if (value.kind == js::NodeKind::FunctionExpression && value.id &&
          value.id->name != raw_target.back())
        add_function({value.id->name}, value, at);
    }
    if (value.kind == js::NodeKind::ObjectExpression)
      register_object_members(raw_target, value);
  }

  void add_assignment(std::vector<std::string> raw, const std::string& written,
                      const js::Node& value, const js::Node& at) {
    AccessPath path = normalize_access_path(std::move(raw));
    std::string key = path.key();
    tables_.assignments[key].push_back(
        AssignRecord{std::move(path), written, &value, ref(at)});
  }

  void add_function(std::vector<std::string> raw, const js::Node& fn,
                    const js::Node& at) {
    AccessPath path = normalize_access_path(std::move(raw));
    std::string key = path.key();
    tables_.functions[key].push_back(
        FunctionRecord{std::move(path), &fn, ref(at)});
  }

  static std::optional<std::string> literal_property_name(const js::Node& prop) {
    if (!prop.key) return std::nullopt;
    if (prop.computed) {
      if (prop.key->kind == js::NodeKind::Literal &&
          prop.key->literal == js::LiteralKind::String)
        return prop.key->string_value;
      return std::nullopt;
    }
    if (prop.key->kind == js::NodeKind::Identifier) return prop.key->name;
    if (prop.key->kind == js::NodeKind::Literal) {
      if (prop.key->literal == js::LiteralKind::String)
        return prop.key->string_value;
      if (prop.key->literal == js::LiteralKind::Number) return prop.key->raw;
    }
    return std::nullopt;
  }

  // Object expressions are flattened into assignments: `ctx.name = value`
  // for every literal-keyed property. Function-valued properties always get
  // a functions entry under the bare property name; the dotted name is added
  // when the object itself was bound to a resolvable target.
  void register_object_members(const std::vector<std::string>& context,
                               const js::Node& obj) {
    for (const js::Node* p : obj.list) {
      if (!p || p->kind != js::NodeKind::Property || !p->value) continue;
      auto name = literal_property_name(*p);
      if (!name) continue;
      if (p->value->is_function() && context.empty())
        add_function({*name}, *p->value, *p);
      if (!context.empty()) {
        std::vector<std::string> dotted = context;
        dotted.push_back(*name);
        record_binding(dotted, join(context) + "." + *name, *p->value, *p);
      }
    }
  }

  void register_class(const js::Node& cls) {
    std::string class_name = cls.id ? cls.id->name : std::string();
    if (!class_name.empty() && cls.id)
      add_assignment({class_name}, class_name, cls, *cls.id);
    for (const js::Node* m : cls.list) {
      if (!m || m->kind != js::NodeKind::MethodDefinition || !m->value) continue;
      auto name = literal_property_name(*m);
      if (!name) continue;
      if (m->name == "constructor") {
        if (!class_name.empty()) add_function({class_name}, *m->value, *m);
        continue;
      }
      add_function({*name}, *m->value, *m);
      if (m->is_static && !class_name.empty())
        add_function({class_name, *name}, *m->value, *m);
    }
  }

  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) out.push_back('.');
      out += v[i];
    }
    return out;
  }

  void record_call(const js::Node& call) {
    if (!call.callee) return;
    auto path = access_path_of(*call.callee);
    if (!path) return;
    CallRecord rec;
    rec.path = *path;
    rec.written = tree_.slice(*call.callee);
    for (const js::Node* a : call.list) rec.args.push_back(a);
    rec.node = &call;
    rec.where = ref(call);
    rec.is_new = call.kind == js::NodeKind::NewExpression;
    tables_.calls[rec.path.key()].push_back(rec);

    // f.call(recv, a...) and f.apply(recv, [a...]) also register under f's
    // key, receiver dropped.
    if (!rec.is_new && rec.path.segments.size() >= 2) {
      const std::string& last = rec.path.segments.back();
      if (last == "call" || last == "apply") {
        CallRecord base = rec;
        base.path.segments.pop_back();
        base.via_call_apply = true;
        base.written = call.callee->object ? tree_.slice(*call.callee->object)
                                           : base.written;
        base.args.clear();
        if (last == "call") {
          for (size_t i = 1; i < rec.args.size(); ++i)
            base.args.push_back(rec.args[i]);
        } else if (rec.args.size() >= 2 && rec.args[1] &&
                   rec.args[1]->kind == js::NodeKind::ArrayExpression) {
          for (const js::Node* el : rec.args[1]->list)
            if (el) base.args.push_back(el);
        }
        tables_.calls[base.path.key()].push_back(std::move(base));
      }
    }
  }
};

}  // namespace detail

// Builds the three tables over one analysis scope (a list of parsed units
// that are indexed together). Takes ownership of the trees so every record's
// node pointer stays valid for the tables' lifetime.
inline IndexedTables build_tables(std::vector<js::SyntaxTree> trees) {
  IndexedTables tables;
  tables.units = std::move(trees);
  int unit = 0;
  for (const js::SyntaxTree& tree : tables.units) {
    tables.unit_origins.push_back(tree.origin);
    if (tree.program) detail::TableBuilder(tables, tree, unit).run();
    ++unit;
  }
  return tables;
}

struct LiteralValue {
  js::LiteralKind kind = js::LiteralKind::None;
  std::string str;
  double num = 0;
  bool boolean = false;
};

inline std::optional<LiteralValue> literal_of_node(const js::Node& n) {
  if (n.kind == js::NodeKind::Literal) {
    LiteralValue v;
    v.kind = n.literal;
    v.str = n.string_value;
    v.num = n.number_value;
    v.boolean = n.boolean_value;
    return v;
  }
  if (n.kind == js::NodeKind::TemplateLiteral && n.list.empty()) {
    LiteralValue v;
    v.kind = js::LiteralKind::String;
    v.str = n.string_value;
    return v;
  }
  return std::nullopt;
}

// Resolves an expression to literal candidates: the literal itself, or the
// literal values bound to the expression's name in the assignments table
// (one hop, all candidates — may-analysis).
inline std::vector<LiteralValue> resolve_to_literal(const js::Node& expr,
                                                    const IndexedTables& tables) {
  if (auto v = literal_of_node(expr)) return {*v};
  auto path = access_path_of(expr);
  if (!path) return {};
  auto it = tables.assignments.find(path->key());
  if (it == tables.assignments.end()) return {};
  std::vector<LiteralValue> out;
  for (const AssignRecord& rec : it->second)
    if (rec.value)
      if (auto v = literal_of_node(*rec.value)) out.push_back(*v);
  return out;
}

inline bool resolves_to_string(const js::Node& expr, const IndexedTables& tables,
                               const char* expected) {
  for (const LiteralValue& v : resolve_to_literal(expr, tables))
    if (v.kind == js::LiteralKind::String && v.str == expected) return true;
  return false;
}

inline bool resolves_to_any_string(const js::Node& expr,
                                   const IndexedTables& tables) {
  for (const LiteralValue& v : resolve_to_literal(expr, tables))
    if (v.kind == js::LiteralKind::String) return true;
  return false;
}

namespace detail {

inline bool is_bind_call(const js::Node& n, AccessPath& base_out) {
  if (n.kind != js::NodeKind::CallExpression || !n.callee) return false;
  auto path = access_path_of(*n.callee);
  if (!path || path->segments.size() < 2 || path->segments.back() != "bind")
    return false;
  base_out = *path;
  base_out.segments.pop_back();
  return true;
}

inline void resolve_functions_into(const js::Node& expr,
                                   const IndexedTables& tables, int unit,
                                   std::vector<FunctionRef>& out,
                                   std::set<const js::Node*>& seen, int depth);

inline void resolve_key_into(const std::string& key, const IndexedTables& tables,
                             std::vector<FunctionRef>& out,
                             std::set<const js::Node*>& seen, int depth) {
  if (depth > 4) return;
  auto fit = tables.functions.find(key);
  if (fit != tables.functions.end()) {
    for (const FunctionRecord& rec : fit->second) {
      if (rec.fn && seen.insert(rec.fn).second)
        out.push_back(FunctionRef{rec.fn, rec.where.unit});
    }
  }
  // Names bound to bind-call results resolve through the underlying key.
  auto ait = tables.assignments.find(key);
  if (ait != tables.assignments.end()) {
    for (const AssignRecord& rec : ait->second) {
      if (!rec.value || rec.value->is_function()) continue;
      AccessPath base;
      if (is_bind_call(*rec.value, base))
        resolve_key_into(base.key(), tables, out, seen, depth + 1);
    }
  }
}

inline void resolve_functions_into(const js::Node& expr,
                                   const IndexedTables& tables, int unit,
                                   std::vector<FunctionRef>& out,
                                   std::set<const js::Node*>& seen, int depth) {
  if (depth > 4) return;
  if (expr.is_function()) {
    if (seen.insert(&expr).second) out.push_back(FunctionRef{&expr, unit});
    return;
  }
  AccessPath bind_base;
  if (is_bind_call(expr, bind_base)) {
    resolve_key_into(bind_base.key(), tables, out, seen, depth + 1);
    return;
  }
  auto path = access_path_of(expr);
  if (!path) return;
  resolve_key_into(path->key(), tables, out, seen, depth);
}

}  // namespace detail

// Resolves an expression to function nodes: the function itself, the
// functions-table entries under its name, or the target of a bind call.
// Scope-insensitive: same-named functions from anywhere in the scope are
// all returned.
inline std::vector<FunctionRef> resolve_to_functions(const js::Node& expr,
                                                     const IndexedTables& tables,
                                                     int unit_of_expr) {
  std::vector<FunctionRef> out;
  std::set<const js::Node*> seen;
  detail::resolve_functions_into(expr, tables, unit_of_expr, out, seen, 0);
  return out;
}

}  // namespace extpass
