#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loralink/types.hpp"

namespace loralink::dataset {

/// One measured configuration. Rows from the SF×BW sweep carry all three
/// metrics; rows from the coding-rate sweep only carry SNR and leave
/// `rssi_dbm` and `loss_pct` empty.
struct MeasurementRecord {
  int sf = 7;
  double bw_hz = 125000.0;
  CodingRate cr{};
  std::optional<double> rssi_dbm;
  double snr_db = 0.0;
  std::optional<double> loss_pct;

  bool is_cr_sweep() const noexcept { return !rssi_dbm && !loss_pct; }

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

enum class LoadMode { validated, freeform };

inline constexpr const char* kCsvHeader = "sf,bw_khz,cr_num,cr_den,rssi_dbm,snr_db,loss_pct";

class MeasurementTable {
 public:
  MeasurementTable() = default;

  /// Adds a record; throws Error(conflict) on a duplicate key.
  void add(MeasurementRecord record);

  std::span<const MeasurementRecord> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  /// SF×BW sweep record at exactly this key.
  std::optional<MeasurementRecord> find(int sf, double bw_hz, CodingRate cr) const;

  /// The unique SF×BW sweep record for (sf, bw), whatever its coding rate.
  /// Throws not_found when absent and conflict when several rates exist.
  const MeasurementRecord& cell(int sf, double bw_hz) const;

  std::vector<MeasurementRecord> grid_records() const;
  std::vector<MeasurementRecord> cr_sweep(int sf, double bw_hz) const;

 private:
  std::vector<MeasurementRecord> records_;
};

MeasurementTable load_measurements(std::istream& in, LoadMode mode);
MeasurementTable load_measurements_file(const std::string& path, LoadMode mode);
void write_measurements(const MeasurementTable& table, std::ostream& out);

/// Throws Error(not_found) when the key is missing.
MeasurementRecord lookup(const MeasurementTable& table, int sf, double bw_hz,
                         CodingRate cr = CodingRate{});

/// Row = bandwidth (10.4 … 500 kHz), column = SF (7 … 12).
using Grid = std::array<std::array<double, 6>, 6>;

/// Excess loss (path loss minus free-space loss) for all 36 grid cells.
/// Throws not_found naming the first missing cell.
Grid reconstruct_excess_loss(const MeasurementTable& table, const LinkParams& params,
                             double tx_power_dbm, double freq_hz = 433e6);

/// Grid CSV: header `bw_khz,sf7,…,sf12`, one row per bandwidth.
Grid read_grid(std::istream& in);
Grid read_grid_file(const std::string& path);
void write_grid(const Grid& grid, std::ostream& out, int decimals = 3);

struct GridComparison {
  double max_abs_deviation = 0.0;
  int worst_sf = 0;
  double worst_bw_hz = 0.0;
  /// Cells whose deviation exceeds the tolerance passed to compare_grids.
  std::vector<std::pair<int, double>> failing_cells;  // (sf, bw_hz)
};

GridComparison compare_grids(const Grid& actual, const Grid& expected, double tolerance);

}  // namespace loralink::dataset
