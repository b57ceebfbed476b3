#pragma once

#include <array>
#include <cstdint>

namespace ged {

// xoshiro256** with splitmix64 state expansion. The algorithm, the seeding
// procedure and the draw order used by the assignment code are all fixed;
// a seed pins the whole output stream across platforms and builds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  // Next raw 64-bit draw.
  std::uint64_t next();

  // Uniform draw in [0, n); rejection sampled so every value is equally
  // likely. n must be nonzero.
  std::uint64_t bounded(std::uint64_t n);

  // Raw draws consumed so far.
  std::uint64_t draws() const { return draws_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t draws_ = 0;
};

}  // namespace ged
