#pragma once

#include <cstdint>

namespace pecert {

// One Bell trial: settings x,y, outcomes a,b, all binary. t is the optional
// spot-check flag (-1 when the stream carries none).
struct TrialRecord {
  std::uint8_t x = 0;
  std::uint8_t y = 0;
  std::uint8_t a = 0;
  std::uint8_t b = 0;
  std::int8_t t = -1;

  bool in_range() const {
    return x <= 1 && y <= 1 && a <= 1 && b <= 1 && t >= -1 && t <= 1;
  }
};

}  // namespace pecert
