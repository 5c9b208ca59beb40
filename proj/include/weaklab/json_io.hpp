#pragma once

#include <cmath>
#include <cstdint>

#include "json.hpp"

namespace weaklab {

using Json = nlohmann::ordered_json;

/// Integral doubles become JSON integers (`2`, not `2.0`); non-finite values
/// become null.
inline Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  if (v == std::floor(v) && std::fabs(v) < 9007199254740992.0) return static_cast<std::int64_t>(v);
  return v;
}

}  // namespace weaklab
