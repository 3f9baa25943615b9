#pragma once

#include <array>
#include <span>

namespace uwbsim {

// MB-OFDM numerology for the first band group (three 528 MHz sub-bands).
inline constexpr int kNumBands = 3;
inline constexpr int kFftSize = 128;
inline constexpr int kNumDataTones = 100;
inline constexpr double kToneSpacingMHz = 528.0 / kFftSize;  // 4.125 MHz
inline constexpr double kSymbolDurationNs = 312.5;           // 165 samples at 528 MHz incl. ZP
inline constexpr std::array<double, kNumBands> kBandCenterMHz = {3432.0, 3960.0, 4488.0};

/// Logical tone indices (-56..56) of the 100 data tones, ascending. Pilots sit
/// on +-5, +-15, ..., +-55; DC and the guard edge tones carry no data.
std::span<const int> data_tone_indices() noexcept;

}  // namespace uwbsim
