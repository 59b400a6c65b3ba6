#include "fstmdc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fstmdc/dct.hpp"

namespace fstmdc::synthetic {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed ^ 0x5deece66dULL) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Irwin-Hall approximation keeps the sequence platform-independent
  double gaussian() {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += uniform();
    return s - 6.0;
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> value_noise(int w, int h, Rng& rng) {
  std::vector<double> acc(static_cast<std::size_t>(w) * h, 0.0);
  for (int cell = 128; cell >= 2; cell /= 2) {
    const double amp = std::pow(static_cast<double>(cell), 0.9);
    const int gw = w / cell + 2;
    const int gh = h / cell + 2;
    std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
    for (auto& g : grid) g = rng.range(-1.0, 1.0) * amp;
    for (int y = 0; y < h; ++y) {
      const double fy = static_cast<double>(y) / cell;
      const int gy = static_cast<int>(fy);
      const double ty = fy - gy;
      for (int x = 0; x < w; ++x) {
        const double fx = static_cast<double>(x) / cell;
        const int gx = static_cast<int>(fx);
        const double tx = fx - gx;
        auto at = [&](int i, int j) { return grid[static_cast<std::size_t>(j) * gw + i]; };
        const double top = at(gx, gy) * (1 - tx) + at(gx + 1, gy) * tx;
        const double bot = at(gx, gy + 1) * (1 - tx) + at(gx + 1, gy + 1) * tx;
        acc[static_cast<std::size_t>(y) * w + x] += top * (1 - ty) + bot * ty;
      }
    }
  }
  return acc;
}

Frame normalise(const std::vector<double>& v, int w, int h) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double span = std::max(1e-9, *hi - *lo);
  Frame f(w, h);
  for (std::size_t i = 0; i < v.size(); ++i) f.samples()[i] = to_pixel(16.0 + 219.0 * (v[i] - *lo) / span);
  return f;
}

Frame window(const Frame& src, int x0, int y0, int w, int h) {
  Frame out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(x, y) = src.at(std::clamp(x0 + x, 0, src.width() - 1), std::clamp(y0 + y, 0, src.height() - 1));
  }
  return out;
}

void add_noise(Frame& f, Rng& rng, double sigma) {
  for (auto& s : f.samples()) s = to_pixel(s + sigma * rng.gaussian());
}

void check_dims(int w, int h, int frames) {
  if (w <= 0 || h <= 0 || frames <= 0) throw std::invalid_argument("synthetic sequence needs positive dimensions");
}

}  // namespace

Frame texture(int width, int height, std::uint64_t seed) {
  check_dims(width, height, 1);
  Rng rng(seed);
  std::vector<double> v = value_noise(width, height, rng);

  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double l = *lo, span = *hi - *lo;
  const int shapes = std::max(4, width * height / 12000);
  for (int s = 0; s < shapes; ++s) {
    const double level = l + span * rng.uniform();
    const double cx = rng.range(0, width), cy = rng.range(0, height);
    const double r = rng.range(6.0, 40.0);
    const bool disc = rng.uniform() < 0.5;
    for (int y = std::max(0, static_cast<int>(cy - r)); y < std::min(height, static_cast<int>(cy + r) + 1); ++y) {
      for (int x = std::max(0, static_cast<int>(cx - r)); x < std::min(width, static_cast<int>(cx + r) + 1); ++x) {
        const bool inside = disc ? (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r : true;
        if (inside) {
          double& px = v[static_cast<std::size_t>(y) * width + x];
          px = 0.35 * px + 0.65 * level;
        }
      }
    }
  }
  return normalise(v, width, height);
}

VideoSequence talking_head(int width, int height, int frames, std::uint64_t seed) {
  check_dims(width, height, frames);
  const Frame background = texture(width, height, seed);
  const int pad = 8;
  const Frame head_tex = texture(width + 2 * pad, height + 2 * pad, seed + 1);
  Rng noise(seed + 2);

  const double cx = width * 0.5, cy = height * 0.55;
  const double rx = width * 0.16, ry = height * 0.27;
  VideoSequence seq;
  for (int t = 0; t < frames; ++t) {
    const int ox = static_cast<int>(std::lround(2.0 * std::sin(2 * std::numbers::pi * t / 40.0)));
    const int oy = static_cast<int>(std::lround(1.0 * std::sin(2 * std::numbers::pi * t / 55.0)));
    Frame f = background;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double ex = (x - cx - ox) / rx, ey = (y - cy - oy) / ry;
        if (ex * ex + ey * ey <= 1.0) f.at(x, y) = head_tex.at(x - ox + pad, y - oy + pad);
      }
    }
    // mouth: a small band whose brightness oscillates
    const int mx0 = static_cast<int>(cx - rx * 0.35) + ox, mx1 = static_cast<int>(cx + rx * 0.35) + ox;
    const int my0 = static_cast<int>(cy + ry * 0.35) + oy, my1 = my0 + std::max(2, height / 40);
    const double gain = 20.0 * std::sin(2 * std::numbers::pi * t / 7.0);
    for (int y = std::max(0, my0); y < std::min(height, my1); ++y) {
      for (int x = std::max(0, mx0); x < std::min(width, mx1); ++x) f.at(x, y) = to_pixel(f.at(x, y) + gain);
    }
    add_noise(f, noise, 1.0);
    seq.push_back(std::move(f));
  }
  return seq;
}

VideoSequence camera_pan(int width, int height, int frames, std::uint64_t seed) {
  check_dims(width, height, frames);
  const int margin_y = 24;
  const int big_w = width + 3 * frames + 16;
  const Frame scene = texture(big_w, height + 2 * margin_y, seed);
  const int obj_r = std::max(6, height / 8);
  const Frame obj_tex = texture(2 * obj_r + 1, 2 * obj_r + 1, seed + 7);
  Rng noise(seed + 3);

  VideoSequence seq;
  double cam_x = 0.0;
  for (int t = 0; t < frames; ++t) {
    cam_x += 2.0 + std::round(std::sin(t / 7.0));
    const int x0 = static_cast<int>(cam_x);
    const int y0 = margin_y + static_cast<int>(std::lround(2.0 * std::sin(t / 5.0)));
    Frame f = window(scene, x0, y0, width, height);

    // object drifts right-to-left in frame coordinates
    const int ocx = width - obj_r - ((t * 3) % std::max(1, width - 2 * obj_r));
    const int ocy = height / 2 + static_cast<int>(std::lround(height * 0.15 * std::sin(t / 9.0)));
    for (int y = -obj_r; y <= obj_r; ++y) {
      for (int x = -obj_r; x <= obj_r; ++x) {
        const int px = ocx + x, py = ocy + y;
        if (x * x + y * y <= obj_r * obj_r && px >= 0 && py >= 0 && px < width && py < height) {
          f.at(px, py) = obj_tex.at(x + obj_r, y + obj_r);
        }
      }
    }
    add_noise(f, noise, 1.5);
    seq.push_back(std::move(f));
  }
  return seq;
}

VideoSequence uniform_pan(int width, int height, int frames, int step, std::uint64_t seed) {
  check_dims(width, height, frames);
  const Frame scene = texture(width + std::abs(step) * frames + 1, height, seed);
  VideoSequence seq;
  for (int t = 0; t < frames; ++t) seq.push_back(window(scene, t * step, 0, width, height));
  return seq;
}

VideoSequence still(int width, int height, int frames, std::uint64_t seed) {
  check_dims(width, height, frames);
  const Frame f = texture(width, height, seed);
  return VideoSequence(std::vector<Frame>(static_cast<std::size_t>(frames), f));
}

VideoSequence by_name(std::string_view name, int width, int height, int frames, std::uint64_t seed) {
  if (name == "talking_head") return talking_head(width, height, frames, seed);
  if (name == "camera_pan") return camera_pan(width, height, frames, seed);
  if (name == "uniform_pan") return uniform_pan(width, height, frames, 2, seed);
  if (name == "still") return still(width, height, frames, seed);
  throw std::invalid_argument("unknown synthetic sequence '" + std::string(name) + "'");
}

}  // namespace fstmdc::synthetic
