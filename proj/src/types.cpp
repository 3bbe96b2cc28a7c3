#include "loralink/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "loralink/error.hpp"

namespace loralink {

CodingRate::CodingRate(int numerator) : numerator_(numerator) {
  if (numerator < 4 || numerator > 7) {
    throw Error(ErrorCode::validation,
                "coding rate numerator " + std::to_string(numerator) +
                    " outside 4..7 (denominator is fixed at 8)");
  }
}

std::string CodingRate::to_string() const {
  return std::to_string(numerator_) + "/8";
}

CodingRate CodingRate::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw ParseError(0, "coding rate must look like k/8, got '" +
                            std::string(text) + "'");
  }
  int num = 0;
  int den = 0;
  const auto num_part = text.substr(0, slash);
  const auto den_part = text.substr(slash + 1);
  auto r1 = std::from_chars(num_part.data(), num_part.data() + num_part.size(), num);
  auto r2 = std::from_chars(den_part.data(), den_part.data() + den_part.size(), den);
  if (r1.ec != std::errc{} || r1.ptr != num_part.data() + num_part.size() ||
      r2.ec != std::errc{} || r2.ptr != den_part.data() + den_part.size()) {
    throw ParseError(0, "coding rate must look like k/8, got '" +
                            std::string(text) + "'");
  }
  if (den != kDenominator) {
    throw Error(ErrorCode::validation,
                "coding rate denominator must be 8, got " + std::to_string(den));
  }
  return CodingRate(num);
}

std::string GridValidation::message() const {
  if (ok()) return "accepted";
  return field + "=" + given + " not in {" + allowed + "}";
}

bool is_grid_bandwidth(double bw_hz) noexcept {
  return std::find(kGridBandwidthsHz.begin(), kGridBandwidthsHz.end(),
                   bw_hz) != kGridBandwidthsHz.end();
}

bool is_grid_spreading_factor(int sf) noexcept {
  return std::find(kGridSpreadingFactors.begin(), kGridSpreadingFactors.end(),
                   sf) != kGridSpreadingFactors.end();
}

GridValidation validate_measurement_grid(const RadioConfig& config) {
  if (!is_grid_spreading_factor(config.sf)) {
    return {"sf", std::to_string(config.sf), "7, 8, 9, 10, 11, 12"};
  }
  if (!is_grid_bandwidth(config.bw_hz)) {
    return {"bw_khz", format_khz(config.bw_hz),
            "10.4, 20.8, 62.5, 125, 250, 500"};
  }
  // CodingRate cannot hold anything else, but keep the check explicit.
  const int k = config.cr.numerator();
  if (k < 4 || k > 7) {
    return {"cr", config.cr.to_string(), "4/8, 5/8, 6/8, 7/8"};
  }
  return {};
}

void require_measurement_grid(const RadioConfig& config) {
  const auto result = validate_measurement_grid(config);
  if (!result.ok()) throw Error(ErrorCode::validation, result.message());
}

void require_well_formed(const RadioConfig& config) {
  if (config.sf < 6 || config.sf > 12) {
    throw Error(ErrorCode::validation,
                "sf=" + std::to_string(config.sf) + " outside 6..12");
  }
  if (!(config.bw_hz > 0.0) || !std::isfinite(config.bw_hz)) {
    throw Error(ErrorCode::validation, "bandwidth must be positive and finite");
  }
  if (!std::isfinite(config.tx_power_dbm)) {
    throw Error(ErrorCode::validation, "transmit power must be finite");
  }
  if (!(config.freq_hz > 0.0) || !std::isfinite(config.freq_hz)) {
    throw Error(ErrorCode::validation, "frequency must be positive and finite");
  }
}

void require_well_formed(const LinkParams& params) {
  if (!(params.distance_m > 0.0)) {
    throw Error(ErrorCode::domain, "distance must be positive");
  }
  if (!(params.c_mps > 0.0)) {
    throw Error(ErrorCode::domain, "propagation speed must be positive");
  }
  if (!(params.rssi_offset_db > 0.0)) {
    throw Error(ErrorCode::domain, "RSSI offset must be positive");
  }
  if (!std::isfinite(params.gt_dbi) || !std::isfinite(params.gr_dbi)) {
    throw Error(ErrorCode::domain, "antenna gains must be finite");
  }
}

std::string format_decimal(double value) {
  // Worst case for fixed notation is ~310 digits for DBL_MAX.
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

double parse_decimal(std::string_view text) {
  double value = 0.0;
  if (text.empty()) throw ParseError(0, "empty number");
  const char* first = text.data();
  const char* last = first + text.size();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ParseError(0, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string shift_decimal(std::string_view text, int places) {
  std::string sign;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    if (text.front() == '-') sign = "-";
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string int_part(text.substr(0, dot));
  std::string frac_part =
      dot == std::string_view::npos ? std::string() : std::string(text.substr(dot + 1));
  if (int_part.empty() && frac_part.empty()) {
    throw ParseError(0, "not a decimal: '" + std::string(text) + "'");
  }
  for (char c : int_part + frac_part) {
    if (c < '0' || c > '9') {
      throw ParseError(0, "not a plain decimal: '" + std::string(text) + "'");
    }
  }

  std::string digits = int_part + frac_part;
  long point = static_cast<long>(int_part.size()) + places;
  if (point < 0) {
    digits.insert(0, static_cast<std::size_t>(-point), '0');
    point = 0;
  }
  if (point > static_cast<long>(digits.size())) {
    digits.append(static_cast<std::size_t>(point) - digits.size(), '0');
  }
  std::string whole = digits.substr(0, static_cast<std::size_t>(point));
  std::string frac = digits.substr(static_cast<std::size_t>(point));

  const auto first_nonzero = whole.find_first_not_of('0');
  whole = first_nonzero == std::string::npos ? "0" : whole.substr(first_nonzero);
  const auto last_nonzero = frac.find_last_not_of('0');
  frac = last_nonzero == std::string::npos ? "" : frac.substr(0, last_nonzero + 1);

  return sign + whole + (frac.empty() ? "" : "." + frac);
}

std::string format_khz(double hz) { return shift_decimal(format_decimal(hz), -3); }

double parse_khz(std::string_view khz) { return parse_decimal(shift_decimal(khz, 3)); }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::string to_canonical_text(const RadioConfig& config) {
  return "sf=" + std::to_string(config.sf) + ",bw_khz=" + format_khz(config.bw_hz) +
         ",cr=" + config.cr.to_string() +
         ",pt_dbm=" + format_decimal(config.tx_power_dbm) +
         ",f_mhz=" + shift_decimal(format_decimal(config.freq_hz), -6);
}

RadioConfig parse_canonical_text(std::string_view text) {
  static constexpr std::array<std::string_view, 5> kKeys{"sf", "bw_khz", "cr",
                                                         "pt_dbm", "f_mhz"};
  RadioConfig config;
  std::size_t index = 0;
  while (!text.empty() || index < kKeys.size()) {
    if (index >= kKeys.size()) {
      throw ParseError(0, "trailing content in config text");
    }
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);

    const auto eq = item.find('=');
    if (eq == std::string_view::npos || item.substr(0, eq) != kKeys[index]) {
      throw ParseError(0, "expected '" + std::string(kKeys[index]) +
                              "=' in config text, got '" + std::string(item) + "'");
    }
    const auto value = item.substr(eq + 1);
    switch (index) {
      case 0: {
        int sf = 0;
        auto res = std::from_chars(value.data(), value.data() + value.size(), sf);
        if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
          throw ParseError(0, "bad sf '" + std::string(value) + "'");
        }
        config.sf = sf;
        break;
      }
      case 1: config.bw_hz = parse_khz(value); break;
      case 2: config.cr = CodingRate::parse(value); break;
      case 3: config.tx_power_dbm = parse_decimal(value); break;
      case 4: config.freq_hz = parse_decimal(shift_decimal(value, 6)); break;
    }
    ++index;
  }
  return config;
}

}  // namespace loralink
