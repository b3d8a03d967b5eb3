#pragma once

// The context sensitivities shipped with the analyzer, behind the Strategy
// interface. The engine never includes this header; it sees strategies only
// through trace::Strategy, so new sensitivities drop in without touching
// the analysis core.

#include <memory>
#include <stdexcept>
#include <string>

#include "njs/domains.hpp"
#include "njs/trace.hpp"

namespace njs::strat {

struct SensitivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline trace::Ctx push_trunc(const trace::Ctx& c, std::uint64_t tok,
                             unsigned k) {
  trace::Ctx out;
  out.reserve(k);
  out.push_back(tok);
  for (std::uint64_t t : c) {
    if (out.size() >= k) break;
    out.push_back(t);
  }
  return out;
}

struct Fs final : trace::Strategy {
  std::string name() const override { return "fs"; }
  unsigned heap() const override { return 0; }
  trace::Ctx on_call(const trace::Ctx&, const trace::CallEvent&) const override {
    return {};
  }
};

struct Stack final : trace::Strategy {
  unsigned k, h;
  Stack(unsigned k, unsigned h) : k(k), h(h) {}
  std::string name() const override {
    return "stack:" + std::to_string(k) + "." + std::to_string(h);
  }
  unsigned heap() const override { return h; }
  trace::Ctx on_call(const trace::Ctx& c,
                     const trace::CallEvent& ev) const override {
    return push_trunc(c, ev.site, k);
  }
};

struct Acyclic final : trace::Strategy {
  unsigned h;
  explicit Acyclic(unsigned h) : h(h) {}
  std::string name() const override {
    return "acyclic:" + std::to_string(h);
  }
  unsigned heap() const override { return h; }
  trace::Ctx on_call(const trace::Ctx& c,
                     const trace::CallEvent& ev) const override {
    // Re-entering a site already on the trace folds the cycle away instead
    // of growing the context, so recursion cannot pump it unboundedly.
    for (size_t i = 0; i < c.size(); ++i)
      if (c[i] == ev.site) return trace::Ctx(c.begin() + i, c.end());
    trace::Ctx out;
    out.reserve(c.size() + 1);
    out.push_back(ev.site);
    out.insert(out.end(), c.begin(), c.end());
    return out;
  }
};

struct ObjSens final : trace::Strategy {
  unsigned k, h;
  ObjSens(unsigned k, unsigned h) : k(k), h(h) {}
  std::string name() const override {
    return "obj:" + std::to_string(k) + "." + std::to_string(h);
  }
  unsigned heap() const override { return h; }
  trace::Ctx on_call(const trace::Ctx& c,
                     const trace::CallEvent& ev) const override {
    return push_trunc(c, dom::addrs_token(ev.self_addrs), k);
  }
};

struct Sig final : trace::Strategy {
  unsigned k, h;
  Sig(unsigned k, unsigned h) : k(k), h(h) {}
  std::string name() const override {
    return "sig:" + std::to_string(k) + "." + std::to_string(h);
  }
  unsigned heap() const override { return h; }
  trace::Ctx on_call(const trace::Ctx& c,
                     const trace::CallEvent& ev) const override {
    std::uint64_t tok = (static_cast<std::uint64_t>(ev.callee) << 30) |
                        (static_cast<std::uint64_t>(ev.self_typeset & 0x3F)
                         << 24);
    for (int i = 0; i < 4; ++i)
      tok |= static_cast<std::uint64_t>(ev.arg_typesets[i] & 0x3F)
             << (18 - 6 * i);
    return push_trunc(c, tok, k);
  }
};

struct Mixed final : trace::Strategy {
  unsigned k, h;
  Mixed(unsigned k, unsigned h) : k(k), h(h) {}
  std::string name() const override {
    return "mixed:" + std::to_string(k) + "." + std::to_string(h);
  }
  unsigned heap() const override { return h; }
  trace::Ctx on_call(const trace::Ctx& c,
                     const trace::CallEvent& ev) const override {
    std::uint64_t recv = dom::addrs_token(ev.self_addrs);
    std::uint64_t tok = (recv == ev.global_token) ? ev.site : recv;
    return push_trunc(c, tok, k);
  }
};

inline unsigned parse_count(const std::string& spec, size_t from, size_t to) {
  if (from >= to) throw SensitivityError("malformed sensitivity parameter");
  unsigned v = 0;
  for (size_t i = from; i < to; ++i) {
    char ch = spec[i];
    if (ch < '0' || ch > '9')
      throw SensitivityError("malformed sensitivity parameter");
    v = v * 10 + static_cast<unsigned>(ch - '0');
    if (v > 64) throw SensitivityError("sensitivity parameter too large");
  }
  return v;
}

}  // namespace detail

// Accepted spellings: fs, stack:K.H, acyclic:H, obj:K.H, sig:K.H, mixed:K.H.
inline trace::StrategyPtr make_strategy(const std::string& spec) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  if (head == "fs") {
    if (colon != std::string::npos)
      throw SensitivityError("fs takes no parameters");
    return std::make_shared<detail::Fs>();
  }
  if (colon == std::string::npos)
    throw SensitivityError("unknown sensitivity: " + spec);
  std::string params = spec.substr(colon + 1);
  if (head == "acyclic") {
    unsigned h = detail::parse_count(params, 0, params.size());
    return std::make_shared<detail::Acyclic>(h);
  }
  if (head != "stack" && head != "obj" && head != "sig" && head != "mixed")
    throw SensitivityError("unknown sensitivity: " + spec);
  auto dot = params.find('.');
  if (dot == std::string::npos)
    throw SensitivityError("expected K.H parameters for " + head);
  unsigned k = detail::parse_count(params, 0, dot);
  unsigned h = detail::parse_count(params, dot + 1, params.size());
  if (k == 0) throw SensitivityError("k must be positive");
  if (h >= k) throw SensitivityError("h must be < k per " + head + ":K.H");
  if (head == "stack") return std::make_shared<detail::Stack>(k, h);
  if (head == "obj") return std::make_shared<detail::ObjSens>(k, h);
  if (head == "sig") return std::make_shared<detail::Sig>(k, h);
  if (head == "mixed") return std::make_shared<detail::Mixed>(k, h);
  throw SensitivityError("unknown sensitivity: " + spec);
}

}  // namespace njs::strat
