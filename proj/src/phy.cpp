#include "loralink/phy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loralink/error.hpp"

namespace loralink::phy {

double symbol_duration(const RadioConfig& config) {
  require_well_formed(config);
  return std::ldexp(1.0, config.sf) / config.bw_hz;
}

bool low_data_rate_enabled(const RadioConfig& config, const FrameParams& frame) {
  if (frame.low_data_rate_optimize) return *frame.low_data_rate_optimize;
  return symbol_duration(config) > kLowDataRateSymbolThresholdS;
}

int datasheet_cr_index(const RadioConfig& config, const FrameParams& frame) {
  if (frame.cr_index) {
    if (*frame.cr_index < 1 || *frame.cr_index > 4) {
      throw Error(ErrorCode::invalid_argument,
                  "datasheet coding-rate index must be 1..4, got " +
                      std::to_string(*frame.cr_index));
    }
    return *frame.cr_index;
  }
  if (config.cr.numerator() == 4) return 4;
  throw Error(ErrorCode::invalid_argument,
              "coding rate " + config.cr.to_string() +
                  " has no datasheet equivalent; pass an explicit index 1..4");
}

long payload_symbols(const RadioConfig& config, const FrameParams& frame) {
  if (frame.payload_bytes < 0 || frame.preamble_symbols < 0) {
    throw Error(ErrorCode::invalid_argument,
                "payload and preamble lengths must be non-negative");
  }
  const long de = low_data_rate_enabled(config, frame) ? 1 : 0;
  const long ih = frame.explicit_header ? 0 : 1;
  const long crc = frame.crc_on ? 1 : 0;
  const long sf = config.sf;
  const long denom = 4 * (sf - 2 * de);
  if (denom <= 0) {
    throw Error(ErrorCode::invalid_argument,
                "SF - 2*DE must be positive (sf=" + std::to_string(sf) + ")");
  }
  const long numer = 8L * frame.payload_bytes - 4 * sf + 28 + 16 * crc - 20 * ih;
  const long blocks = numer > 0 ? (numer + denom - 1) / denom : 0;
  return 8 + blocks * (datasheet_cr_index(config, frame) + 4);
}

double time_on_air(const RadioConfig& config, const FrameParams& frame) {
  const double t_sym = symbol_duration(config);
  const double preamble = (frame.preamble_symbols + 4.25) * t_sym;
  const double payload = static_cast<double>(payload_symbols(config, frame)) * t_sym;
  return preamble + payload;
}

double nominal_bit_rate(const RadioConfig& config) {
  require_well_formed(config);
  return config.sf * (config.bw_hz / std::ldexp(1.0, config.sf)) * config.cr.value();
}

MonopoleDesign monopole_dimensions(double freq_hz, double c_mps) {
  if (!(freq_hz > 0.0) || !(c_mps > 0.0)) {
    throw Error(ErrorCode::domain, "monopole needs a positive frequency");
  }
  const double quarter_wave = c_mps / (4.0 * freq_hz);
  MonopoleDesign design;
  design.element_len_m = kElementShortening * quarter_wave;
  design.radial_len_m = kRadialLengthening * quarter_wave;
  design.radial_angle_deg = 45.0;
  design.gain_dbi = kMonopoleGainDbi;
  return design;
}

}  // namespace loralink::phy
