#include "loralink/link_budget.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "loralink/error.hpp"

namespace loralink::budget {

double rssi_from_register(std::uint8_t raw, double offset_db) {
  if (!(offset_db > 0.0)) {
    throw Error(ErrorCode::domain, "RSSI offset must be positive");
  }
  return static_cast<double>(raw) - offset_db;
}

double snr_from_register(std::int8_t raw) noexcept {
  return static_cast<double>(raw) / 4.0;
}

double packet_loss_pct(std::uint64_t lost, std::uint64_t sent) {
  if (sent == 0) {
    throw Error(ErrorCode::domain, "packet loss undefined: no packets sent");
  }
  if (lost > sent) {
    throw Error(ErrorCode::invalid_argument,
                "inconsistent counts: lost=" + std::to_string(lost) +
                    " exceeds sent=" + std::to_string(sent));
  }
  return 100.0 * static_cast<double>(lost) / static_cast<double>(sent);
}

double esp(const SignalSample& sample) {
  const double snr = sample.snr_db;
  if (!std::isfinite(sample.rssi_dbm) || !std::isfinite(snr)) {
    throw Error(ErrorCode::domain, "ESP needs finite RSSI and SNR");
  }
  // SNR - 10log10(1 + 10^(SNR/10)) == -10log10(1 + 10^(-SNR/10)); the second
  // form keeps the power term below 1 for positive SNR.
  if (snr > 0.0) {
    return sample.rssi_dbm - 10.0 * std::log1p(std::pow(10.0, -0.1 * snr)) /
                                 std::numbers::ln10;
  }
  return sample.rssi_dbm + snr -
         10.0 * std::log1p(std::pow(10.0, 0.1 * snr)) / std::numbers::ln10;
}

double path_loss(const LinkParams& params, const RadioConfig& config, double esp_dbm) {
  return config.tx_power_dbm + params.gt_dbi + params.gr_dbi - esp_dbm;
}

double free_space_loss(double distance_m, double freq_hz, double c_mps) {
  if (!(distance_m > 0.0) || !(freq_hz > 0.0) || !(c_mps > 0.0)) {
    throw Error(ErrorCode::domain,
                "free-space loss needs positive distance, frequency and speed");
  }
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(freq_hz) -
         20.0 * std::log10(c_mps) + 20.0 * std::log10(4.0 * std::numbers::pi);
}

LossBreakdown loss_breakdown(const LinkParams& params, const RadioConfig& config,
                             const SignalSample& sample) {
  LossBreakdown out;
  out.esp_dbm = esp(sample);
  out.path_loss_db = path_loss(params, config, out.esp_dbm);
  out.fsl_db = free_space_loss(params.distance_m, config.freq_hz, params.c_mps);
  out.excess_db = out.path_loss_db - out.fsl_db;
  return out;
}

}  // namespace loralink::budget
