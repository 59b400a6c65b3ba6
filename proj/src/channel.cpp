#include "fstmdc/channel.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fstmdc {

const char* to_string(LossMode mode) noexcept {
  switch (mode) {
    case LossMode::IidPacket: return "iid";
    case LossMode::WholeFrame: return "frame";
    case LossMode::Burst: return "burst";
  }
  return "?";
}

LossMode parse_loss_mode(std::string_view text) {
  if (text == "iid") return LossMode::IidPacket;
  if (text == "frame") return LossMode::WholeFrame;
  if (text == "burst") return LossMode::Burst;
  throw std::invalid_argument("unknown loss mode '" + std::string(text) + "'");
}

void ChannelConfig::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(loss_ratio_even) || !prob(loss_ratio_odd)) throw std::invalid_argument("loss ratios must lie in [0, 1]");
  if (mode == LossMode::Burst && !(burst_exit > 0.0 && burst_exit <= 1.0)) {
    throw std::invalid_argument("burst exit probability must lie in (0, 1]");
  }
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t path_seed(std::uint64_t seed, DescriptionId path) noexcept {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ (0xd1b54a32d192ed03ULL * (static_cast<std::uint64_t>(path) + 1));
  return splitmix64(state);
}

struct PathState {
  PathRng rng;
  double ratio;
  bool bad = false;
  bool started = false;
  std::map<std::uint32_t, bool> frame_lost;

  PathState(std::uint64_t seed, DescriptionId id, double r) : rng(seed, id), ratio(r) {}
};

bool draw_loss(PathState& s, const Packet& p, const ChannelConfig& cfg) {
  switch (cfg.mode) {
    case LossMode::IidPacket:
      return s.rng.uniform() < s.ratio;
    case LossMode::WholeFrame: {
      auto it = s.frame_lost.find(p.frame_index);
      if (it == s.frame_lost.end()) it = s.frame_lost.emplace(p.frame_index, s.rng.uniform() < s.ratio).first;
      return it->second;
    }
    case LossMode::Burst: {
      if (s.ratio <= 0.0) return false;
      if (s.ratio >= 1.0) return true;
      const double p_exit = cfg.burst_exit;
      const double p_enter = std::min(1.0, s.ratio * p_exit / (1.0 - s.ratio));
      if (!s.started) {
        s.bad = s.rng.uniform() < s.ratio;  // start from the stationary distribution
        s.started = true;
      }
      const bool lost = s.bad;
      const double u = s.rng.uniform();
      s.bad = s.bad ? !(u < p_exit) : (u < p_enter);
      return lost;
    }
  }
  return false;
}

}  // namespace

PathRng::PathRng(std::uint64_t seed, DescriptionId path) : engine_(path_seed(seed, path)) {}

double PathRng::uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

TransmitResult transmit(std::span<const Packet> packets, const ChannelConfig& cfg) {
  cfg.validate();
  PathState even(cfg.seed, DescriptionId::Even, cfg.loss_ratio_even);
  PathState odd(cfg.seed, DescriptionId::Odd, cfg.loss_ratio_odd);

  TransmitResult out;
  out.delivered.reserve(packets.size());
  for (const Packet& p : packets) {
    PathState& path = p.description == DescriptionId::Even ? even : odd;
    const bool lost = draw_loss(path, p, cfg);
    out.mask.record(p.key(), !lost);
    if (!lost) out.delivered.push_back(p);
  }
  return out;
}

std::string to_trace(const LossMask& mask) {
  std::ostringstream os;
  for (const auto& [key, ok] : mask.entries()) {
    os << to_string(key.description) << ' ' << key.frame_index << ' ' << key.row_index << ' ' << (ok ? 1 : 0)
       << '\n';
  }
  return os.str();
}

LossMask parse_trace(std::string_view text) {
  LossMask mask;
  std::istringstream is{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string desc;
    long long frame = -1, row = -1;
    int flag = -1;
    if (!(ls >> desc >> frame >> row >> flag) || (desc != "even" && desc != "odd") || frame < 0 ||
        frame > UINT32_MAX || row < 0 || row > UINT16_MAX || (flag != 0 && flag != 1)) {
      throw FormatError("malformed loss trace line " + std::to_string(line_no));
    }
    PacketKey key{desc == "even" ? DescriptionId::Even : DescriptionId::Odd, static_cast<std::uint32_t>(frame),
                  static_cast<std::uint16_t>(row)};
    try {
      mask.record(key, flag == 1);
    } catch (const std::invalid_argument&) {
      throw FormatError("duplicate packet on loss trace line " + std::to_string(line_no));
    }
  }
  return mask;
}

}  // namespace fstmdc
