#include "bidir/session.hpp"

#include <algorithm>

#include "bidir/surface.hpp"

namespace bidir {

const char* to_string(TypeError::Kind kind) {
  switch (kind) {
    case TypeError::Kind::Mismatch: return "Mismatch";
    case TypeError::Kind::OccursCheck: return "OccursCheck";
    case TypeError::Kind::UnboundVariable: return "UnboundVariable";
    case TypeError::Kind::NotAFunction: return "NotAFunction";
    case TypeError::Kind::CannotSynthesize: return "CannotSynthesize";
    case TypeError::Kind::NoRuleApplies: return "NoRuleApplies";
    case TypeError::Kind::IllFormedType: return "IllFormedType";
  }
  return "TypeError";
}

std::string Session::fresh_evar() {
  ++evars_created_;
  return "a" + std::to_string(++counter_);
}

std::string Session::universal_for(const Context& g, const std::string& binder) {
  if (!g.has_universal(binder)) return binder;
  return fresh_variant(binder, g.universal_names());
}

std::string Session::term_var_for(const Context& g, const std::string& binder, const NameSet& taken) {
  if (g.lookup_term(binder) == nullptr) return binder;
  for (;;) {
    std::string name = binder + std::to_string(++counter_);
    if (g.lookup_term(name) == nullptr && !taken.contains(name)) return name;
  }
}

void Session::violation(std::string invariant, std::string detail) {
  violations_.push_back({std::move(invariant), std::move(detail)});
}

Type Session::applied(const Context& g, const Type& a) {
  Type once = apply_ctx(g, a);
  if (checking()) {
    Type twice = apply_ctx(g, once);
    if (!(twice == once))
      violation("apply-idempotent", print_type(a) + " under " + print_context(g));
  }
  return once;
}

void Session::record_solution(const std::string& evar, const Type& solution) {
  solutions_.emplace_back(evar, solution);
}

namespace {

bool same_family(Session::FrameKind a, Session::FrameKind b) {
  return (a == Session::FrameKind::Subtype) == (b == Session::FrameKind::Subtype);
}

}  // namespace

Session::FrameGuard::FrameGuard(Session& session, FrameKind kind, std::vector<std::size_t> measure,
                                std::string_view what)
    : session_(&session) {
  if (session.checking() && !session.frames_.empty()) {
    const Frame& parent = session.frames_.back();
    if (same_family(parent.kind, kind) &&
        !std::lexicographical_compare(measure.begin(), measure.end(), parent.measure.begin(),
                                      parent.measure.end())) {
      std::string m;
      for (auto v : measure) m += std::to_string(v) + " ";
      std::string p;
      for (auto v : parent.measure) p += std::to_string(v) + " ";
      session.violation(kind == FrameKind::Subtype ? "subtype-measure" : "typing-measure",
                        std::string(what) + ": <" + m + "> not below <" + p + ">");
    }
  }
  session.frames_.push_back({kind, std::move(measure)});
}

Session::FrameGuard::~FrameGuard() { session_->frames_.pop_back(); }

}  // namespace bidir
