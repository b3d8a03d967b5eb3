#pragma once

// Trace infrastructure shared by both interpreters: program points, call
// contexts, and the strategy interface that turns call events into context
// updates. Both machines feed the same event data through the same strategy
// object, so a context computed concretely is the context the analysis uses.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "njs/domains.hpp"
#include "njs/ir.hpp"

namespace njs::trace {

enum class PointKind : std::uint8_t { At, AfterVal, AfterExc, AfterJump };

inline const char* point_kind_name(PointKind k) {
  switch (k) {
    case PointKind::At: return "at";
    case PointKind::AfterVal: return "after";
    case PointKind::AfterExc: return "exc";
    case PointKind::AfterJump: return "jump";
  }
  return "?";
}

struct PointKey {
  PointKind kind = PointKind::At;
  ir::NodeId node = 0;
  std::string aux;  // distinguishes extra points a node introduces

  friend bool operator==(const PointKey& a, const PointKey& b) {
    return a.kind == b.kind && a.node == b.node && a.aux == b.aux;
  }
  friend bool operator<(const PointKey& a, const PointKey& b) {
    if (a.node != b.node) return a.node < b.node;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.aux < b.aux;
  }
};

inline PointKey at(ir::NodeId n, std::string aux = {}) {
  return {PointKind::At, n, std::move(aux)};
}
inline PointKey after_val(ir::NodeId n) { return {PointKind::AfterVal, n, {}}; }
inline PointKey after_exc(ir::NodeId n) { return {PointKind::AfterExc, n, {}}; }
inline PointKey after_jump(ir::NodeId n) {
  return {PointKind::AfterJump, n, {}};
}

// A context is a bounded trace of call descriptors, most recent first.
using Ctx = std::vector<std::uint64_t>;

inline Ctx heap_prefix(const Ctx& c, unsigned h) {
  if (c.size() <= h) return c;
  return Ctx(c.begin(), c.begin() + h);
}

struct PartKey {
  PointKey point;
  Ctx ctx;

  friend bool operator==(const PartKey& a, const PartKey& b) {
    return a.point == b.point && a.ctx == b.ctx;
  }
  friend bool operator<(const PartKey& a, const PartKey& b) {
    if (!(a.point == b.point)) return a.point < b.point;
    return a.ctx < b.ctx;
  }
};

inline std::string to_string(const PointKey& p) {
  std::string s = point_kind_name(p.kind);
  s += ':';
  s += std::to_string(p.node);
  if (!p.aux.empty()) {
    s += '/';
    s += p.aux;
  }
  return s;
}

inline std::string to_string(const PartKey& k) {
  std::string s = to_string(k.point);
  s += " [";
  for (size_t i = 0; i < k.ctx.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(k.ctx[i]);
  }
  s += ']';
  return s;
}

// Everything a strategy may look at about one call. The receiver and the
// first argument positions arrive pre-abstracted so the concrete machine
// and the analysis present identical events.
struct CallEvent {
  ir::NodeId site = 0;    // the call statement
  ir::NodeId callee = 0;  // the invoked method
  dom::AddrSet self_addrs;
  std::uint8_t self_typeset = 0;
  std::array<std::uint8_t, 4> arg_typesets = {0, 0, 0, 0};
  std::uint64_t global_token = 0;  // token of the singleton global receiver
};

struct Strategy {
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  virtual unsigned heap() const = 0;
  virtual Ctx on_call(const Ctx& caller, const CallEvent& ev) const = 0;
};

using StrategyPtr = std::shared_ptr<const Strategy>;

}  // namespace njs::trace
