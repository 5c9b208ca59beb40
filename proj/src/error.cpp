#include "weaklab/error.hpp"

namespace weaklab {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::domain_error: return "domain-error";
    case Errc::singular_point: return "singular-point";
    case Errc::tolerance_not_met: return "tolerance-not-met";
    case Errc::invalid_weight: return "invalid-weight";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::insufficient_variation: return "insufficient-variation";
    case Errc::parse_error: return "parse-error";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace weaklab
