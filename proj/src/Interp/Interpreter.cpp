//===- Interpreter.cpp - Reference interpreter ----------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Interp/Interpreter.h"
#include "mir/Dialects/Dialects.h"
#include "mir/IR/IntMath.h"
#include "mir/IR/SymbolTable.h"
#include "mir/Text/Parser.h"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <unordered_map>

namespace mir {

bool RuntimeValue::operator==(const RuntimeValue &other) const {
  if (type != other.type || data.index() != other.data.index())
    return false;
  if (std::holds_alternative<__int128>(data))
    return getInt() == other.getInt();
  if (std::holds_alternative<double>(data)) {
    double a = getFloat(), b = other.getFloat();
    return std::memcmp(&a, &b, sizeof(double)) == 0;
  }
  const Buffer &x = *getBuffer(), &y = *other.getBuffer();
  return x.shape == y.shape && x.elementType == y.elementType && x.data == y.data;
}

__int128 wrapToType(__int128 value, Type type) {
  unsigned width = getIntegerBitWidth(type);
  if (width > 64)
    throw InterpTrap("unsupported integer width " + std::to_string(width));
  if (width == 1)
    return value & 1;
  if (width == 64)
    return static_cast<int64_t>(static_cast<uint64_t>(value));
  unsigned __int128 mask = (static_cast<unsigned __int128>(1) << width) - 1;
  unsigned __int128 bits = static_cast<unsigned __int128>(value) & mask;
  unsigned __int128 sign = static_cast<unsigned __int128>(1) << (width - 1);
  if (bits & sign)
    return static_cast<__int128>(bits) - (static_cast<__int128>(1) << width);
  return static_cast<__int128>(bits);
}

double roundToType(double value, Type type) {
  return type.isF32() ? static_cast<double>(static_cast<float>(value)) : value;
}

static std::string int128ToString(__int128 v) {
  if (v == 0)
    return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg)
    s.push_back('-');
  return {s.rbegin(), s.rend()};
}

static RuntimeValue zeroOf(Type type) {
  if (type.isFloat())
    return RuntimeValue::floating(type, 0.0);
  return RuntimeValue::integer(type, 0);
}

//===----------------------------------------------------------------------===//
// Execution
//===----------------------------------------------------------------------===//

struct Interpreter::Frame {
  std::unordered_map<Value *, RuntimeValue> values;

  const RuntimeValue &get(Value *v) const {
    auto it = values.find(v);
    if (it == values.end())
      throw InterpTrap("use of a value that has not been computed");
    return it->second;
  }
  void set(Value *v, RuntimeValue rv) { values.insert_or_assign(v, std::move(rv)); }
  int64_t getIndex(Value *v) const { return static_cast<int64_t>(get(v).getInt()); }
};

Interpreter::Interpreter(Operation *module, InterpLimits limits)
    : module_(module), limits_(limits) {}

size_t Interpreter::getLiveAllocations() const {
  size_t n = 0;
  for (const auto &w : allocations_)
    if (auto b = w.lock(); b && !b->freed)
      ++n;
  return n;
}

void Interpreter::tick() {
  if (++steps_ > limits_.maxSteps)
    throw InterpTrap("step budget of " + std::to_string(limits_.maxSteps) + " exceeded");
}

std::vector<RuntimeValue> Interpreter::run(std::string_view name,
                                           std::vector<RuntimeValue> args) {
  Operation *func = lookupSymbol(module_, name);
  if (!func || func->getName() != "func.func")
    throw InterpTrap("no function named @" + std::string(name));
  return call(func, std::move(args));
}

std::vector<RuntimeValue> Interpreter::call(Operation *func, std::vector<RuntimeValue> args) {
  Type fnType = func->getAttr("function_type").getTypeValue();
  const auto &inputs = fnType.getInputs();
  if (args.size() != inputs.size())
    throw InterpTrap("@" + *getSymbolName(func) + " expects " + std::to_string(inputs.size()) +
                     " arguments, got " + std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); ++i)
    if (args[i].type != inputs[i])
      throw InterpTrap("argument #" + std::to_string(i) + " of @" + *getSymbolName(func) +
                       " must be " + inputs[i].str() + ", got " + args[i].type.str());
  if (func->getRegion(0).empty())
    throw InterpTrap("@" + *getSymbolName(func) + " has no body");
  if (depth_ >= limits_.maxCallDepth)
    throw InterpTrap("call depth limit of " + std::to_string(limits_.maxCallDepth) + " exceeded");
  ++depth_;
  Frame frame;
  std::vector<RuntimeValue> results = runRegion(frame, func->getRegion(0), std::move(args));
  --depth_;
  return results;
}

std::vector<RuntimeValue> Interpreter::runRegion(Frame &frame, Region &region,
                                                 std::vector<RuntimeValue> entryArgs) {
  Block *block = region.front();
  std::vector<RuntimeValue> incoming = std::move(entryArgs);
  while (true) {
    if (incoming.size() != block->getNumArguments())
      throw InterpTrap("block argument count mismatch");
    for (unsigned i = 0; i < incoming.size(); ++i)
      frame.set(block->getArgument(i), incoming[i]);

    Block *next = nullptr;
    for (Operation &op : *block) {
      tick();
      const std::string &name = op.getName();
      if (name == "func.return" || name == "affine.yield") {
        std::vector<RuntimeValue> results;
        for (Value *v : op.getOperands())
          results.push_back(frame.get(v));
        return results;
      }
      unsigned succ = 0;
      if (name == "cf.br") {
        succ = 0;
      } else if (name == "cf.cond_br") {
        succ = frame.get(op.getOperand(0)).getInt() ? 0 : 1;
      } else {
        if (op.hasTrait(Trait::Terminator))
          throw InterpTrap("cannot interpret terminator '" + name + "'");
        execute(frame, &op);
        continue;
      }
      next = op.getSuccessor(succ);
      incoming.clear();
      for (Value *v : op.getSuccessorOperands(succ))
        incoming.push_back(frame.get(v));
      break;
    }
    if (!next)
      throw InterpTrap("fell off the end of a block");
    block = next;
  }
}

static std::vector<int64_t> evalMap(const AffineMap &map, const std::vector<int64_t> &operands) {
  std::span<const int64_t> all(operands);
  try {
    return map.evaluate(all.subspan(0, map.getNumDims()), all.subspan(map.getNumDims()));
  } catch (const ValidationError &e) {
    throw InterpTrap(e.what());
  }
}

static std::string joinInts(const std::vector<int64_t> &values, const char *sep) {
  std::string s;
  for (size_t i = 0; i < values.size(); ++i)
    s += (i ? sep : "") + std::to_string(values[i]);
  return s;
}

static size_t linearIndex(const Buffer &buf, const std::vector<int64_t> &indices) {
  if (buf.freed)
    throw InterpTrap("use of a deallocated buffer");
  if (indices.size() != buf.shape.size())
    throw InterpTrap("index count does not match buffer rank");
  size_t linear = 0;
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= buf.shape[i])
      throw InterpTrap("out-of-bounds access [" + joinInts(indices, ", ") +
                       "] on buffer of shape " + joinInts(buf.shape, "x"));
    linear = linear * static_cast<size_t>(buf.shape[i]) + static_cast<size_t>(indices[i]);
  }
  return linear;
}

void Interpreter::runFor(Frame &frame, Operation *op) {
  AffineForBounds b = getAffineForBounds(op);
  auto values = [&](const std::vector<Value *> &vs) {
    std::vector<int64_t> out;
    for (Value *v : vs)
      out.push_back(frame.getIndex(v));
    return out;
  };
  std::vector<int64_t> lbs = evalMap(b.lower, values(b.lowerOperands));
  std::vector<int64_t> ubs = evalMap(b.upper, values(b.upperOperands));
  int64_t lb = *std::max_element(lbs.begin(), lbs.end());
  int64_t ub = *std::min_element(ubs.begin(), ubs.end());
  Type index = op->getContext().getIndexType();
  for (int64_t iv = lb; iv < ub; iv += b.step)
    runRegion(frame, op->getRegion(0), {RuntimeValue::integer(index, iv)});
}

void Interpreter::execute(Frame &frame, Operation *op) {
  const std::string &name = op->getName();
  auto intOperand = [&](unsigned i) { return frame.get(op->getOperand(i)).getInt(); };
  auto floatOperand = [&](unsigned i) { return frame.get(op->getOperand(i)).getFloat(); };
  auto setInt = [&](__int128 v) {
    Type t = op->getResult(0)->getType();
    frame.set(op->getResult(0), RuntimeValue::integer(t, wrapToType(v, t)));
  };
  auto setFloat = [&](double v) {
    Type t = op->getResult(0)->getType();
    frame.set(op->getResult(0), RuntimeValue::floating(t, roundToType(v, t)));
  };
  auto indices = [&](unsigned from, unsigned to) {
    std::vector<int64_t> out;
    for (unsigned i = from; i < to; ++i)
      out.push_back(frame.getIndex(op->getOperand(i)));
    return out;
  };

  if (name == "arith.constant") {
    Attribute value = op->getAttr("value");
    if (value.isa(AttrKind::Float))
      return setFloat(value.getFloat());
    if (value.isa(AttrKind::Integer))
      return setInt(static_cast<__int128>(value.getInt().convert_to<long long>()));
    throw InterpTrap("unsupported constant " + value.str());
  }
  if (name == "arith.addi")
    return setInt(intOperand(0) + intOperand(1));
  if (name == "arith.subi")
    return setInt(intOperand(0) - intOperand(1));
  if (name == "arith.muli") {
    // Operands are at most 64 bits wide, so the product fits.
    return setInt(intOperand(0) * intOperand(1));
  }
  if (name == "arith.divsi" || name == "arith.remsi") {
    __int128 rhs = intOperand(1);
    if (rhs == 0)
      throw InterpTrap("division by zero in '" + name + "'");
    return setInt(name == "arith.divsi" ? intOperand(0) / rhs : intOperand(0) % rhs);
  }
  if (name == "arith.cmpi") {
    bool r = evaluateIntPredicate(op->getAttr("predicate").getString(),
                                  BigInt(static_cast<long long>(intOperand(0))),
                                  BigInt(static_cast<long long>(intOperand(1))));
    return setInt(r);
  }
  if (name == "arith.addf")
    return setFloat(floatOperand(0) + floatOperand(1));
  if (name == "arith.subf")
    return setFloat(floatOperand(0) - floatOperand(1));
  if (name == "arith.mulf")
    return setFloat(floatOperand(0) * floatOperand(1));
  if (name == "arith.cmpf")
    return setInt(evaluateFloatPredicate(op->getAttr("predicate").getString(), floatOperand(0),
                                         floatOperand(1)));
  if (name == "arith.select") {
    frame.set(op->getResult(0), frame.get(op->getOperand(intOperand(0) ? 1 : 2)));
    return;
  }
  if (name == "ml.leaky_relu") {
    Type t = op->getResult(0)->getType();
    if (!t.isFloat())
      throw InterpTrap("ml.leaky_relu on " + t.str() + " has no runtime semantics");
    double x = floatOperand(0);
    double alpha = roundToType(op->getAttr("alpha").getFloat(), t);
    return setFloat(x < 0 ? alpha * x : x);
  }
  if (name == "memref.alloc") {
    Type t = op->getResult(0)->getType();
    if (!t.hasStaticShape())
      throw InterpTrap("dynamic allocation is not supported");
    auto buf = std::make_shared<Buffer>();
    buf->shape = t.getShape();
    buf->elementType = t.getElementType();
    buf->data.assign(static_cast<size_t>(t.getNumElements()), zeroOf(buf->elementType));
    allocations_.push_back(buf);
    frame.set(op->getResult(0), RuntimeValue{t, buf});
    return;
  }
  if (name == "memref.dealloc") {
    Buffer &buf = *frame.get(op->getOperand(0)).getBuffer();
    if (buf.freed)
      throw InterpTrap("double deallocation");
    buf.freed = true;
    return;
  }
  if (name == "memref.load" || name == "affine.load") {
    Buffer &buf = *frame.get(op->getOperand(0)).getBuffer();
    std::vector<int64_t> idx = indices(1, op->getNumOperands());
    if (name == "affine.load")
      idx = evalMap(op->getAttr("map").getAffineMap(), idx);
    frame.set(op->getResult(0), buf.data[linearIndex(buf, idx)]);
    return;
  }
  if (name == "memref.store" || name == "affine.store") {
    Buffer &buf = *frame.get(op->getOperand(1)).getBuffer();
    std::vector<int64_t> idx = indices(2, op->getNumOperands());
    if (name == "affine.store")
      idx = evalMap(op->getAttr("map").getAffineMap(), idx);
    buf.data[linearIndex(buf, idx)] = frame.get(op->getOperand(0));
    return;
  }
  if (name == "affine.apply") {
    std::vector<int64_t> r = evalMap(op->getAttr("map").getAffineMap(),
                                     indices(0, op->getNumOperands()));
    return setInt(r[0]);
  }
  if (name == "affine.for")
    return runFor(frame, op);
  if (name == "func.call") {
    const std::string &callee = op->getAttr("callee").getSymbol();
    Operation *func = lookupNearestSymbol(op, callee);
    if (!func || func->getName() != "func.func")
      throw InterpTrap("call to unknown function @" + callee);
    std::vector<RuntimeValue> args;
    for (Value *v : op->getOperands())
      args.push_back(frame.get(v));
    std::vector<RuntimeValue> results = call(func, std::move(args));
    if (results.size() != op->getNumResults())
      throw InterpTrap("result count mismatch in call to @" + callee);
    for (unsigned i = 0; i < results.size(); ++i)
      frame.set(op->getResult(i), results[i]);
    return;
  }
  throw InterpTrap("cannot interpret '" + name + "'");
}

std::vector<RuntimeValue> runFunction(Operation *module, std::string_view name,
                                      std::vector<RuntimeValue> args, InterpLimits limits) {
  Interpreter interp(module, limits);
  return interp.run(name, std::move(args));
}

//===----------------------------------------------------------------------===//
// Literals
//===----------------------------------------------------------------------===//

static RuntimeValue parseScalar(std::string_view text, Type type) {
  std::string s(text);
  size_t used = 0;
  try {
    if (type.isFloat()) {
      double v = std::stod(s, &used);
      if (used == s.size())
        return RuntimeValue::floating(type, roundToType(v, type));
    } else if (type.isIntOrIndex()) {
      if (s == "true" || s == "false")
        return RuntimeValue::integer(type, s == "true");
      long long v = std::stoll(s, &used);
      if (used == s.size())
        return RuntimeValue::integer(type, wrapToType(v, type));
    }
  } catch (const std::logic_error &) {
  }
  throw ValidationError("invalid " + type.str() + " literal '" + s + "'");
}

RuntimeValue parseRuntimeValue(Context &ctx, std::string_view text) {
  size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ValidationError("literal '" + std::string(text) + "' lacks a ':type' suffix");
  std::string_view body = text.substr(0, colon);
  Type type = parseType(ctx, text.substr(colon + 1));
  if (!type.isMemRef())
    return parseScalar(body, type);
  if (!type.hasStaticShape())
    throw ValidationError("buffer literal needs a static shape");
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw ValidationError("buffer literal must be written as [a,b,...]");
  auto buf = std::make_shared<Buffer>();
  buf->shape = type.getShape();
  buf->elementType = type.getElementType();
  std::string_view elems = body.substr(1, body.size() - 2);
  while (!elems.empty()) {
    size_t comma = elems.find(',');
    std::string_view item = elems.substr(0, comma);
    while (!item.empty() && item.front() == ' ')
      item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ')
      item.remove_suffix(1);
    buf->data.push_back(parseScalar(item, buf->elementType));
    if (comma == std::string_view::npos)
      break;
    elems.remove_prefix(comma + 1);
  }
  if (static_cast<int64_t>(buf->data.size()) != type.getNumElements())
    throw ValidationError(type.str() + " literal needs " + std::to_string(type.getNumElements()) +
                          " elements, got " + std::to_string(buf->data.size()));
  return RuntimeValue{type, buf};
}

std::vector<RuntimeValue> parseRuntimeValues(Context &ctx, std::string_view text) {
  std::vector<RuntimeValue> values;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token)
    values.push_back(parseRuntimeValue(ctx, token));
  return values;
}

static std::string formatScalar(const RuntimeValue &v) {
  if (v.type.isFloat())
    return formatFloat(v.getFloat(), v.type.getFloatKind());
  return int128ToString(v.getInt());
}

std::string formatRuntimeValue(const RuntimeValue &value) {
  if (!value.type.isMemRef())
    return formatScalar(value) + ":" + value.type.str();
  std::string s = "[";
  const Buffer &buf = *value.getBuffer();
  for (size_t i = 0; i < buf.data.size(); ++i)
    s += (i ? "," : "") + formatScalar(buf.data[i]);
  return s + "]:" + value.type.str();
}

} // namespace mir
