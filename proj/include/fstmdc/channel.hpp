#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fstmdc/mdc.hpp"

namespace fstmdc {

enum class LossMode {
  IidPacket,   ///< every packet dropped independently
  WholeFrame,  ///< all packets of a frame share one draw
  Burst,       ///< two-state Gilbert chain per path, loss while in the bad state
};

const char* to_string(LossMode mode) noexcept;
LossMode parse_loss_mode(std::string_view text);

/// Two independent paths, one per description.
///
/// In Burst mode the bad-state exit probability is `burst_exit`; the entry
/// probability is chosen per path so the stationary loss rate equals that
/// path's loss ratio, i.e. p_enter = r * p_exit / (1 - r), capped at 1.
struct ChannelConfig {
  double loss_ratio_even = 0.0;
  double loss_ratio_odd = 0.0;
  LossMode mode = LossMode::IidPacket;
  double burst_exit = 0.25;
  std::uint64_t seed = 0;

  void validate() const;
  double loss_ratio(DescriptionId id) const noexcept {
    return id == DescriptionId::Even ? loss_ratio_even : loss_ratio_odd;
  }
};

/// Generator for one path: MT19937-64 seeded from SplitMix64(seed, path).
/// Each path owns its stream, so changing one path's settings never shifts
/// the other's draws.
class PathRng {
 public:
  PathRng(std::uint64_t seed, DescriptionId path);

  /// Uniform on [0, 1) with 53 random bits; identical on every platform.
  double uniform() noexcept;

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

struct TransmitResult {
  std::vector<Packet> delivered;
  LossMask mask;
};

/// Deterministic in (packets, cfg). Packets of each path are visited in
/// input order.
TransmitResult transmit(std::span<const Packet> packets, const ChannelConfig& cfg);

/// One line per packet: "<even|odd> <frame> <row> <1 delivered|0 lost>".
std::string to_trace(const LossMask& mask);
LossMask parse_trace(std::string_view text);

}  // namespace fstmdc
