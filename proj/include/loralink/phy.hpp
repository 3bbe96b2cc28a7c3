#pragma once

#include <optional>

#include "loralink/types.hpp"

namespace loralink::phy {

struct FrameParams {
  int payload_bytes = 0;
  int preamble_symbols = 8;
  bool explicit_header = true;
  bool crc_on = true;
  /// Low-data-rate optimisation; unset means "on when the symbol is longer
  /// than 16 ms".
  std::optional<bool> low_data_rate_optimize;
  /// Datasheet coding-rate index (1..4 for 4/5..4/8). Unset is only accepted
  /// for a 4/8 config, which maps to index 4. Other k/8 rates have no exact
  /// datasheet counterpart and need the index spelled out.
  std::optional<int> cr_index;
};

struct MonopoleDesign {
  double element_len_m = 0.0;
  double radial_len_m = 0.0;
  double radial_angle_deg = 45.0;
  double gain_dbi = 5.15;
};

inline constexpr double kLowDataRateSymbolThresholdS = 16e-3;
inline constexpr double kElementShortening = 0.953;
inline constexpr double kRadialLengthening = 1.0625;
inline constexpr double kMonopoleGainDbi = 5.15;

double symbol_duration(const RadioConfig& config);

bool low_data_rate_enabled(const RadioConfig& config, const FrameParams& frame);

/// Datasheet index resolved for this frame; throws if it cannot be derived.
int datasheet_cr_index(const RadioConfig& config, const FrameParams& frame);

/// Number of payload symbols, including the fixed 8.
long payload_symbols(const RadioConfig& config, const FrameParams& frame);

/// Frame airtime in seconds per the SX127x datasheet formula.
double time_on_air(const RadioConfig& config, const FrameParams& frame);

/// sf · (bw / 2^sf) · cr, with cr taken as the stored k/8 fraction.
double nominal_bit_rate(const RadioConfig& config);

MonopoleDesign monopole_dimensions(double freq_hz, double c_mps = 3e8);

}  // namespace loralink::phy
