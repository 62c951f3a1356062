#include "stagger/closures.hpp"

#include <string>

namespace stagger {

std::string_view to_string(ClosureKind kind) {
  switch (kind) {
    case ClosureKind::None: return "none";
    case ClosureKind::Naive: return "naive";
    case ClosureKind::EntropicFull: return "entropic-full";
    case ClosureKind::EntropicScalar: return "entropic-scalar";
  }
  return "unknown";
}

ClosureKind parse_closure(std::string_view name) {
  if (name == "none") return ClosureKind::None;
  if (name == "naive") return ClosureKind::Naive;
  if (name == "entropic-full") return ClosureKind::EntropicFull;
  if (name == "entropic-scalar" || name == "entropic") return ClosureKind::EntropicScalar;
  throw ConfigError("unknown closure '" + std::string(name) +
                    "' (expected none, naive, entropic-full or entropic-scalar)");
}

}  // namespace stagger
