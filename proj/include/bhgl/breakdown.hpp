#ifndef BHGL_BREAKDOWN_HPP
#define BHGL_BREAKDOWN_HPP

#include <stdexcept>
#include <string>

namespace bhgl {

// Why a feedback episode ended. The reduced currents j01 and j23 are the
// denominators of the reservoir controllers.
enum class BreakdownCause {
  kNone,
  kCurrent01,
  kCurrent23,
  kReservoirEmpty,
  kDegenerateProjection,
};

inline const char* to_string(BreakdownCause cause) {
  switch (cause) {
    case BreakdownCause::kNone: return "none";
    case BreakdownCause::kCurrent01: return "jt01";
    case BreakdownCause::kCurrent23: return "jt23";
    case BreakdownCause::kReservoirEmpty: return "reservoir_empty";
    case BreakdownCause::kDegenerateProjection: return "degenerate_projection";
  }
  return "unknown";
}

// Raised from inside a right-hand-side evaluation when a controller can no
// longer produce finite parameters.
class BreakdownError : public std::runtime_error {
 public:
  explicit BreakdownError(BreakdownCause cause)
      : std::runtime_error(std::string("controller breakdown: ") + to_string(cause)),
        cause_(cause) {}
  BreakdownCause cause() const { return cause_; }

 private:
  BreakdownCause cause_;
};

}  // namespace bhgl

#endif  // BHGL_BREAKDOWN_HPP
