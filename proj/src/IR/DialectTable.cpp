//===- DialectTable.cpp - Declarative op-definition tables ----------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/DialectTable.h"
#include "mir/Text/Parser.h"

#include <cctype>

namespace mir {

namespace {

class TableReader {
public:
  TableReader(Context &ctx, std::string_view text, const HookTable &hooks)
      : ctx_(ctx), text_(text), hooks_(hooks) {}

  void run() {
    while (true) {
      std::string word = next();
      if (word.empty())
        break;
      if (word == "dialect") {
        ctx_.registerDialect(next());
      } else if (word == "op") {
        readOp();
      } else {
        fail("expected 'dialect' or 'op', got '" + word + "'");
      }
    }
  }

private:
  [[noreturn]] void fail(const std::string &msg) {
    throw ValidationError("dialect table line " + std::to_string(line_) + ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n')
        ++line_;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          ++pos_;
      } else {
        break;
      }
    }
  }

  /// Next token: a word (letters, digits, `_ . -`), `...`, or one
  /// punctuation character. Empty at end of input.
  std::string next() {
    skip();
    if (pos_ >= text_.size())
      return "";
    if (text_.substr(pos_, 3) == "...") {
      pos_ += 3;
      return "...";
    }
    size_t start = pos_;
    auto isWord = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    };
    while (pos_ < text_.size() && isWord(text_[pos_]) && text_.substr(pos_, 3) != "...")
      ++pos_;
    if (pos_ == start)
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string peek() {
    size_t savedPos = pos_;
    unsigned savedLine = line_;
    std::string tok = next();
    pos_ = savedPos;
    line_ = savedLine;
    return tok;
  }

  void expect(std::string_view tok) {
    std::string got = next();
    if (got != tok)
      fail("expected '" + std::string(tok) + "', got '" + got + "'");
  }

  /// Raw text up to the matching close paren (for type(T)).
  std::string rawUntilClose() {
    size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(' || c == '<')
        ++depth;
      if (c == ')' || c == '>') {
        if (depth == 0 && c == ')')
          break;
        --depth;
      }
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  TypeConstraint readConstraint() {
    TypeConstraint c;
    std::string word = next();
    if (word == "any")
      c.kind = TypeConstraint::Kind::Any;
    else if (word == "integer")
      c.kind = TypeConstraint::Kind::IntegerLike;
    else if (word == "float")
      c.kind = TypeConstraint::Kind::FloatLike;
    else if (word == "index")
      c.kind = TypeConstraint::Kind::Index;
    else if (word == "memref")
      c.kind = TypeConstraint::Kind::MemRef;
    else if (word == "tensor")
      c.kind = TypeConstraint::Kind::Tensor;
    else if (word == "function")
      c.kind = TypeConstraint::Kind::Function;
    else if (word == "same") {
      c.kind = TypeConstraint::Kind::SameAs;
      expect("(");
      c.slot = static_cast<unsigned>(std::stoul(next()));
      expect(")");
    } else if (word == "type") {
      c.kind = TypeConstraint::Kind::Exact;
      expect("(");
      c.exact = parseType(ctx_, rawUntilClose());
      expect(")");
    } else {
      fail("unknown type constraint '" + word + "'");
    }
    return c;
  }

  void readConstraintList(std::vector<TypeConstraint> &out, bool &variadic) {
    expect("(");
    if (peek() == ")") {
      next();
      return;
    }
    while (true) {
      out.push_back(readConstraint());
      std::string tok = next();
      if (tok == "...") {
        variadic = true;
        tok = next();
        if (tok != ")")
          fail("'...' must follow the last constraint");
        return;
      }
      if (tok == ")")
        return;
      if (tok != ",")
        fail("expected ',' or ')' in constraint list");
    }
  }

  static std::optional<AttrKind> attrKindFromName(const std::string &name, bool &ok) {
    ok = true;
    static const std::pair<const char *, AttrKind> kinds[] = {
        {"integer", AttrKind::Integer},       {"float", AttrKind::Float},
        {"string", AttrKind::String},         {"type", AttrKind::Type},
        {"affine_map", AttrKind::AffineMap},  {"array", AttrKind::Array},
        {"dictionary", AttrKind::Dictionary}, {"symbol", AttrKind::SymbolRef},
        {"unit", AttrKind::Unit}};
    if (name == "any")
      return std::nullopt;
    for (auto [n, k] : kinds)
      if (name == n)
        return k;
    ok = false;
    return std::nullopt;
  }

  template <typename Hook>
  Hook lookupHook(const std::map<std::string, Hook> &table, const std::string &id,
                  const std::string &kind) {
    auto it = table.find(id);
    if (it == table.end())
      fail("unknown " + kind + " hook '" + id + "'");
    return it->second;
  }

  void readOp() {
    OpDefinition def;
    def.name = next();
    if (def.name.find('.') == std::string::npos)
      fail("op name '" + def.name + "' lacks a dialect prefix");
    while (true) {
      std::string clause = peek();
      if (clause.empty() || clause == "op" || clause == "dialect")
        break;
      next();
      if (clause == "traits") {
        expect("(");
        while (true) {
          std::string name = next();
          if (name == ")")
            break;
          if (name == ",")
            continue;
          auto trait = traitFromName(name);
          if (!trait)
            fail("unknown trait '" + name + "'");
          def.traits.add(*trait);
        }
      } else if (clause == "operands") {
        readConstraintList(def.operands, def.variadicOperands);
      } else if (clause == "results") {
        readConstraintList(def.results, def.variadicResults);
      } else if (clause == "attrs") {
        expect("(");
        while (true) {
          std::string name = next();
          if (name == ")")
            break;
          if (name == ",")
            continue;
          expect(":");
          AttrConstraint c;
          c.name = name;
          bool ok;
          c.kind = attrKindFromName(next(), ok);
          if (!ok)
            fail("unknown attribute kind for '" + name + "'");
          if (peek() == "?") {
            next();
            c.required = false;
          }
          def.attributes.push_back(std::move(c));
        }
      } else if (clause == "regions" || clause == "successors") {
        expect("(");
        unsigned n = static_cast<unsigned>(std::stoul(next()));
        expect(")");
        (clause == "regions" ? def.numRegions : def.numSuccessors) = n;
      } else if (clause == "hooks") {
        expect("(");
        while (true) {
          std::string kind = next();
          if (kind == ")")
            break;
          if (kind == ",")
            continue;
          expect("=");
          std::string id = next();
          if (kind == "verify")
            def.verify = lookupHook(hooks_.verify, id, kind);
          else if (kind == "fold")
            def.fold = lookupHook(hooks_.fold, id, kind);
          else if (kind == "canonicalize")
            def.canonicalize = lookupHook(hooks_.canonicalize, id, kind);
          else if (kind == "print")
            def.print = lookupHook(hooks_.print, id, kind);
          else if (kind == "parse")
            def.parse = lookupHook(hooks_.parse, id, kind);
          else
            fail("unknown hook kind '" + kind + "'");
        }
      } else {
        fail("unknown clause '" + clause + "' in op '" + def.name + "'");
      }
    }
    ctx_.registerOp(std::move(def));
  }

  Context &ctx_;
  std::string_view text_;
  const HookTable &hooks_;
  size_t pos_ = 0;
  unsigned line_ = 1;
};

} // namespace

void loadDialectTable(Context &ctx, std::string_view table, const HookTable &hooks) {
  TableReader(ctx, table, hooks).run();
}

} // namespace mir
