#pragma once

#include <array>
#include <cstdint>

namespace fstmdc {

inline constexpr int kDctSize = 8;
inline constexpr int kDctArea = kDctSize * kDctSize;

using Block8x8 = std::array<double, kDctArea>;

/// Orthonormal 2-D DCT-II of an 8x8 block of centered samples (pixel - 128
/// for intra, raw residual for inter). Row-major in and out.
Block8x8 dct2(const Block8x8& samples);

/// Inverse of dct2, before any rounding.
Block8x8 idct2(const Block8x8& coefficients);

/// Rounds half away from zero and clamps to [0, 255].
std::uint8_t to_pixel(double value) noexcept;

/// idct2 followed by +128, rounding and clamping.
std::array<std::uint8_t, kDctArea> reconstruct_intra(const Block8x8& coefficients);

/// Uniform mid-tread quantizer: round(coeff / step), ties away from zero,
/// saturated to the signed 16-bit range the bitstream stores.
std::int16_t quantize(double coefficient, int step);

double dequantize(std::int32_t level, int step) noexcept;

}  // namespace fstmdc
