#include "lcm/trace.hpp"

namespace lcm {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::em:
      return "em";
    case Method::pqn:
      return "pqn";
    case Method::sqp:
      return "sqp";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "em") return Method::em;
  if (name == "pqn") return Method::pqn;
  if (name == "sqp") return Method::sqp;
  throw InputError("unknown method '" + std::string(name) + "' (expected em, pqn or sqp)");
}

}  // namespace lcm
