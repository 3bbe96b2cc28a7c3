#include "loralink/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "loralink/error.hpp"
#include "loralink/link_budget.hpp"

namespace loralink::dataset {

namespace {

std::string cell_name(int sf, double bw_hz) {
  return "SF " + std::to_string(sf) + ", BW " + format_khz(bw_hz) + " kHz";
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename Fn>
auto at_line(std::size_t line, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(line, e.what());
  } catch (const Error& e) {
    throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what());
  }
}

int parse_int(std::string_view text) {
  const double v = parse_decimal(text);
  if (v != std::floor(v) || std::abs(v) > 1e6) {
    throw ParseError(0, "expected an integer, got '" + std::string(text) + "'");
  }
  return static_cast<int>(v);
}

bool same_key(const MeasurementRecord& a, const MeasurementRecord& b) {
  return a.sf == b.sf && a.bw_hz == b.bw_hz && a.cr == b.cr &&
         a.is_cr_sweep() == b.is_cr_sweep();
}

std::size_t bw_index(double bw_hz) {
  const auto it = std::find(kGridBandwidthsHz.begin(), kGridBandwidthsHz.end(), bw_hz);
  return static_cast<std::size_t>(it - kGridBandwidthsHz.begin());
}

void check_record(const MeasurementRecord& r, LoadMode mode) {
  if (r.rssi_dbm.has_value() != r.loss_pct.has_value()) {
    throw Error(ErrorCode::validation,
                "rssi_dbm and loss_pct must both be present or both empty");
  }
  if (!std::isfinite(r.snr_db)) throw Error(ErrorCode::validation, "snr_db must be finite");
  if (r.loss_pct && !(*r.loss_pct >= 0.0 && *r.loss_pct <= 100.0)) {
    throw Error(ErrorCode::validation,
                "loss_pct=" + format_decimal(*r.loss_pct) + " outside [0, 100]");
  }
  if (r.rssi_dbm && !std::isfinite(*r.rssi_dbm)) {
    throw Error(ErrorCode::validation, "rssi_dbm must be finite");
  }
  if (!(r.bw_hz > 0.0)) throw Error(ErrorCode::validation, "bandwidth must be positive");
  if (mode == LoadMode::validated) {
    RadioConfig config;
    config.sf = r.sf;
    config.bw_hz = r.bw_hz;
    config.cr = r.cr;
    require_measurement_grid(config);
    if (r.rssi_dbm && !(*r.rssi_dbm < 0.0)) {
      throw Error(ErrorCode::validation,
                  "rssi_dbm=" + format_decimal(*r.rssi_dbm) + " must be negative");
    }
  }
}

}  // namespace

void MeasurementTable::add(MeasurementRecord record) {
  for (const auto& existing : records_) {
    if (same_key(existing, record)) {
      throw Error(ErrorCode::conflict,
                  "duplicate record for " + cell_name(record.sf, record.bw_hz) +
                      ", CR " + record.cr.to_string() +
                      (record.is_cr_sweep() ? " (coding-rate sweep)" : ""));
    }
  }
  records_.push_back(std::move(record));
}

std::optional<MeasurementRecord> MeasurementTable::find(int sf, double bw_hz,
                                                        CodingRate cr) const {
  for (const auto& r : records_) {
    if (!r.is_cr_sweep() && r.sf == sf && r.bw_hz == bw_hz && r.cr == cr) return r;
  }
  return std::nullopt;
}

const MeasurementRecord& MeasurementTable::cell(int sf, double bw_hz) const {
  const MeasurementRecord* found = nullptr;
  for (const auto& r : records_) {
    if (r.is_cr_sweep() || r.sf != sf || r.bw_hz != bw_hz) continue;
    if (found) {
      throw Error(ErrorCode::conflict,
                  "cell " + cell_name(sf, bw_hz) + " has records for several coding rates");
    }
    found = &r;
  }
  if (!found) throw Error(ErrorCode::not_found, "missing cell " + cell_name(sf, bw_hz));
  return *found;
}

std::vector<MeasurementRecord> MeasurementTable::grid_records() const {
  std::vector<MeasurementRecord> out;
  std::copy_if(records_.begin(), records_.end(), std::back_inserter(out),
               [](const MeasurementRecord& r) { return !r.is_cr_sweep(); });
  return out;
}

std::vector<MeasurementRecord> MeasurementTable::cr_sweep(int sf, double bw_hz) const {
  std::vector<MeasurementRecord> out;
  std::copy_if(records_.begin(), records_.end(), std::back_inserter(out),
               [&](const MeasurementRecord& r) {
                 return r.is_cr_sweep() && r.sf == sf && r.bw_hz == bw_hz;
               });
  return out;
}

MeasurementTable load_measurements(std::istream& in, LoadMode mode) {
  MeasurementTable table;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(raw);
    if (!header_seen) {
      if (line.empty() || line.front() == '#') continue;
      if (line != kCsvHeader) {
        throw ParseError(line_no, "expected header '" + std::string(kCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    const auto fields = split_commas(line);
    if (fields.size() != 7) {
      throw ParseError(line_no, "expected 7 fields, got " + std::to_string(fields.size()));
    }
    MeasurementRecord record = at_line(line_no, [&] {
      MeasurementRecord r;
      r.sf = parse_int(fields[0]);
      r.bw_hz = parse_khz(fields[1]);
      const int den = parse_int(fields[3]);
      if (den != CodingRate::kDenominator) {
        throw Error(ErrorCode::validation, "cr_den must be 8");
      }
      r.cr = CodingRate(parse_int(fields[2]));
      if (!fields[4].empty()) r.rssi_dbm = parse_decimal(fields[4]);
      r.snr_db = parse_decimal(fields[5]);
      if (!fields[6].empty()) r.loss_pct = parse_decimal(fields[6]);
      check_record(r, mode);
      return r;
    });
    at_line(line_no, [&] { table.add(std::move(record)); });
  }
  if (in.bad()) throw Error(ErrorCode::io, "read error");
  if (!header_seen) throw ParseError(line_no, "missing header");
  return table;
}

MeasurementTable load_measurements_file(const std::string& path, LoadMode mode) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  return load_measurements(in, mode);
}

void write_measurements(const MeasurementTable& table, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : table.records()) {
    out << r.sf << ',' << format_khz(r.bw_hz) << ',' << r.cr.numerator() << ','
        << r.cr.denominator() << ',' << (r.rssi_dbm ? format_decimal(*r.rssi_dbm) : "")
        << ',' << format_decimal(r.snr_db) << ','
        << (r.loss_pct ? format_decimal(*r.loss_pct) : "") << '\n';
  }
}

MeasurementRecord lookup(const MeasurementTable& table, int sf, double bw_hz,
                         CodingRate cr) {
  if (auto found = table.find(sf, bw_hz, cr)) return *found;
  throw Error(ErrorCode::not_found,
              "no record for " + cell_name(sf, bw_hz) + ", CR " + cr.to_string());
}

Grid reconstruct_excess_loss(const MeasurementTable& table, const LinkParams& params,
                             double tx_power_dbm, double freq_hz) {
  require_well_formed(params);
  Grid grid{};
  for (std::size_t row = 0; row < kGridBandwidthsHz.size(); ++row) {
    for (std::size_t col = 0; col < kGridSpreadingFactors.size(); ++col) {
      const auto& rec = table.cell(kGridSpreadingFactors[col], kGridBandwidthsHz[row]);
      RadioConfig config;
      config.sf = rec.sf;
      config.bw_hz = rec.bw_hz;
      config.cr = rec.cr;
      config.tx_power_dbm = tx_power_dbm;
      config.freq_hz = freq_hz;
      grid[row][col] =
          budget::loss_breakdown(params, config, {*rec.rssi_dbm, rec.snr_db}).excess_db;
    }
  }
  return grid;
}

Grid read_grid(std::istream& in) {
  Grid grid{};
  std::array<bool, 6> seen{};
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  static const std::string kHeader = "bw_khz,sf7,sf8,sf9,sf10,sf11,sf12";
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) throw ParseError(line_no, "expected header '" + kHeader + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split_commas(line);
    if (fields.size() != 7) {
      throw ParseError(line_no, "expected 7 fields, got " + std::to_string(fields.size()));
    }
    at_line(line_no, [&] {
      const double bw = parse_khz(fields[0]);
      const auto row = bw_index(bw);
      if (row == kGridBandwidthsHz.size()) {
        throw Error(ErrorCode::validation, "bandwidth " + std::string(fields[0]) +
                                               " kHz is not a grid row");
      }
      if (seen[row]) throw Error(ErrorCode::conflict, "duplicate grid row");
      seen[row] = true;
      for (std::size_t col = 0; col < 6; ++col) grid[row][col] = parse_decimal(fields[col + 1]);
    });
  }
  for (std::size_t row = 0; row < 6; ++row) {
    if (!seen[row]) {
      throw Error(ErrorCode::not_found,
                  "grid is missing the " + format_khz(kGridBandwidthsHz[row]) + " kHz row");
    }
  }
  return grid;
}

Grid read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  return read_grid(in);
}

void write_grid(const Grid& grid, std::ostream& out, int decimals) {
  out << "bw_khz,sf7,sf8,sf9,sf10,sf11,sf12\n";
  for (std::size_t row = 0; row < 6; ++row) {
    out << format_khz(kGridBandwidthsHz[row]);
    for (double v : grid[row]) {
      std::ostringstream cell;
      cell.setf(std::ios::fixed);
      cell.precision(decimals);
      cell << v;
      out << ',' << cell.str();
    }
    out << '\n';
  }
}

GridComparison compare_grids(const Grid& actual, const Grid& expected, double tolerance) {
  GridComparison cmp;
  for (std::size_t row = 0; row < 6; ++row) {
    for (std::size_t col = 0; col < 6; ++col) {
      const double dev = std::abs(actual[row][col] - expected[row][col]);
      const int sf = kGridSpreadingFactors[col];
      const double bw = kGridBandwidthsHz[row];
      if (dev > cmp.max_abs_deviation || cmp.worst_sf == 0) {
        cmp.max_abs_deviation = dev;
        cmp.worst_sf = sf;
        cmp.worst_bw_hz = bw;
      }
      if (!(dev <= tolerance)) cmp.failing_cells.emplace_back(sf, bw);
    }
  }
  return cmp;
}

}  // namespace loralink::dataset
