#pragma once

#include <array>
#include <cstdint>

namespace prcsync {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure: the output depends only on (counter, key).
struct Philox4x32 {
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block counter, Key key) noexcept;
};

/// Counter-based stream addressed by (seed, stream). Draws are a pure
/// function of (seed, stream, draw index), so realisations can be generated
/// in any order or on any thread and still reproduce bit for bit.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  /// Uniform on (0, 1], 53 random bits.
  double uniform() noexcept;
  /// Standard normal by Box-Muller; consumes one block per pair of draws.
  double normal() noexcept;

  std::uint64_t blocks_used() const noexcept { return block_; }

 private:
  Philox4x32::Block next_block() noexcept;

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Block uniform_buffer_{};
  int uniform_left_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace prcsync
