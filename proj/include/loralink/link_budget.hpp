#pragma once

#include <cstdint>

#include "loralink/types.hpp"

namespace loralink::budget {

struct LossBreakdown {
  double esp_dbm = 0.0;
  double path_loss_db = 0.0;
  double fsl_db = 0.0;
  double excess_db = 0.0;  // path_loss_db - fsl_db
};

/// RegPktRssiValue → dBm. `offset_db` is 157 for the 433 MHz band.
double rssi_from_register(std::uint8_t raw, double offset_db);

/// RegPktSnrValue (two's complement, quarter-dB steps) → dB.
double snr_from_register(std::int8_t raw) noexcept;

/// 100 · lost / sent. Throws on sent == 0 or lost > sent.
double packet_loss_pct(std::uint64_t lost, std::uint64_t sent);

/// Effective signal power: RSSI with the noise contribution removed,
/// RSSI + SNR - 10·log10(1 + 10^(SNR/10)).
double esp(const SignalSample& sample);

/// Empirical path loss: Pt + Gt + Gr - ESP.
double path_loss(const LinkParams& params, const RadioConfig& config, double esp_dbm);

/// Friis free-space loss in dB. All arguments must be positive.
double free_space_loss(double distance_m, double freq_hz, double c_mps);

LossBreakdown loss_breakdown(const LinkParams& params, const RadioConfig& config,
                             const SignalSample& sample);

}  // namespace loralink::budget
