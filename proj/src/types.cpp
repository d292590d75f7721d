#include "qzeno/types.hpp"

namespace qzeno {

ToleranceProfile ToleranceProfile::by_name(const std::string& name) {
  if (name == "default") return ToleranceProfile{};
  if (name == "strict") return ToleranceProfile{name, 1e-13, 1e-11};
  if (name == "loose") return ToleranceProfile{name, 1e-9, 1e-8};
  throw ValidationError("unknown tolerance profile '" + name +
                        "' (expected default, strict or loose)");
}

ToleranceProfile& tolerances() {
  static ToleranceProfile active;
  return active;
}

}  // namespace qzeno
