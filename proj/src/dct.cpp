#include "fstmdc/dct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fstmdc {
namespace {

// basis[k][n] = c(k) * cos((2n + 1) k pi / 16)
struct DctBasis {
  std::array<std::array<double, kDctSize>, kDctSize> m{};

  DctBasis() {
    for (int k = 0; k < kDctSize; ++k) {
      const double c = k == 0 ? std::sqrt(1.0 / kDctSize) : std::sqrt(2.0 / kDctSize);
      for (int n = 0; n < kDctSize; ++n) {
        m[k][n] = c * std::cos((2 * n + 1) * k * std::numbers::pi / (2.0 * kDctSize));
      }
    }
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

}  // namespace

Block8x8 dct2(const Block8x8& samples) {
  const auto& m = basis().m;
  Block8x8 tmp{};
  // rows
  for (int y = 0; y < kDctSize; ++y) {
    for (int k = 0; k < kDctSize; ++k) {
      double acc = 0.0;
      for (int n = 0; n < kDctSize; ++n) acc += m[k][n] * samples[y * kDctSize + n];
      tmp[y * kDctSize + k] = acc;
    }
  }
  Block8x8 out{};
  // columns
  for (int x = 0; x < kDctSize; ++x) {
    for (int k = 0; k < kDctSize; ++k) {
      double acc = 0.0;
      for (int n = 0; n < kDctSize; ++n) acc += m[k][n] * tmp[n * kDctSize + x];
      out[k * kDctSize + x] = acc;
    }
  }
  return out;
}

Block8x8 idct2(const Block8x8& coefficients) {
  const auto& m = basis().m;
  Block8x8 tmp{};
  for (int x = 0; x < kDctSize; ++x) {
    for (int n = 0; n < kDctSize; ++n) {
      double acc = 0.0;
      for (int k = 0; k < kDctSize; ++k) acc += m[k][n] * coefficients[k * kDctSize + x];
      tmp[n * kDctSize + x] = acc;
    }
  }
  Block8x8 out{};
  for (int y = 0; y < kDctSize; ++y) {
    for (int n = 0; n < kDctSize; ++n) {
      double acc = 0.0;
      for (int k = 0; k < kDctSize; ++k) acc += m[k][n] * tmp[y * kDctSize + k];
      out[y * kDctSize + n] = acc;
    }
  }
  return out;
}

std::uint8_t to_pixel(double value) noexcept {
  const double r = std::round(value);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

std::array<std::uint8_t, kDctArea> reconstruct_intra(const Block8x8& coefficients) {
  const Block8x8 spatial = idct2(coefficients);
  std::array<std::uint8_t, kDctArea> out{};
  for (int i = 0; i < kDctArea; ++i) out[i] = to_pixel(spatial[i] + 128.0);
  return out;
}

std::int16_t quantize(double coefficient, int step) {
  if (step < 1) throw std::invalid_argument("quantizer step must be >= 1");
  const double level = std::round(coefficient / step);
  constexpr double lo = std::numeric_limits<std::int16_t>::min();
  constexpr double hi = std::numeric_limits<std::int16_t>::max();
  return static_cast<std::int16_t>(std::clamp(level, lo, hi));
}

double dequantize(std::int32_t level, int step) noexcept {
  return static_cast<double>(level) * step;
}

}  // namespace fstmdc
