#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace loralink {

/// Coding rate in the k/8 notation used by the measurement campaign.
/// The numerator is 4..7 and the denominator is always 8.
class CodingRate {
 public:
  static constexpr int kDenominator = 8;

  constexpr CodingRate() = default;
  explicit CodingRate(int numerator);

  constexpr int numerator() const noexcept { return numerator_; }
  constexpr int denominator() const noexcept { return kDenominator; }
  constexpr double value() const noexcept {
    return static_cast<double>(numerator_) / kDenominator;
  }

  std::string to_string() const;  // "5/8"
  static CodingRate parse(std::string_view text);

  friend constexpr auto operator<=>(CodingRate, CodingRate) = default;

 private:
  int numerator_ = 4;
};

struct RadioConfig {
  int sf = 7;
  double bw_hz = 125000.0;
  CodingRate cr{};
  double tx_power_dbm = 20.0;
  double freq_hz = 433e6;

  friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

struct LinkParams {
  double distance_m = 5000.0;
  double gt_dbi = 5.15;
  double gr_dbi = 5.15;
  double c_mps = 3e8;
  double rssi_offset_db = 157.0;

  friend bool operator==(const LinkParams&, const LinkParams&) = default;
};

struct SignalSample {
  double rssi_dbm = 0.0;
  double snr_db = 0.0;
};

inline constexpr std::array<int, 6> kGridSpreadingFactors{7, 8, 9, 10, 11, 12};
inline constexpr std::array<double, 6> kGridBandwidthsHz{
    10400.0, 20800.0, 62500.0, 125000.0, 250000.0, 500000.0};
inline constexpr std::array<int, 4> kGridCodingNumerators{4, 5, 6, 7};

/// Transmit power assumed for the published measurement campaign.
inline constexpr double kCampaignTxPowerDbm = 20.0;

/// Outcome of a grid check. `field` is empty when the config is accepted.
struct GridValidation {
  std::string field;
  std::string given;
  std::string allowed;

  bool ok() const noexcept { return field.empty(); }
  std::string message() const;
};

GridValidation validate_measurement_grid(const RadioConfig& config);

/// Throws Error(validation) unless the config lies on the measurement grid.
void require_measurement_grid(const RadioConfig& config);

/// Type invariants that hold in freeform mode too (finite power, positive
/// bandwidth and frequency, SF within the radio's range).
void require_well_formed(const RadioConfig& config);
void require_well_formed(const LinkParams& params);

bool is_grid_bandwidth(double bw_hz) noexcept;
bool is_grid_spreading_factor(int sf) noexcept;

/// `sf=<int>,bw_khz=<decimal>,cr=<k>/8,pt_dbm=<decimal>,f_mhz=<decimal>`
std::string to_canonical_text(const RadioConfig& config);
RadioConfig parse_canonical_text(std::string_view text);

// Decimal rendering shared by every text format: shortest round-trip
// representation, never exponent notation.
std::string format_decimal(double value);
double parse_decimal(std::string_view text);

/// Moves the decimal point of a plain decimal string; exact, no rounding.
/// shift_decimal("10400", -3) == "10.4".
std::string shift_decimal(std::string_view text, int places);

std::string format_khz(double hz);
double parse_khz(std::string_view khz);

}  // namespace loralink
