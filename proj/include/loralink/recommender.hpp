#pragma once

#include <string_view>
#include <vector>

#include "loralink/dataset.hpp"
#include "loralink/types.hpp"

namespace loralink::recommend {

/// Ranking metrics. Each has a fixed preferred direction: higher SNR, lower
/// excess loss, higher RSSI, lower packet loss.
enum class Metric { snr, excess_loss, rssi, loss };

std::string_view metric_name(Metric metric) noexcept;
Metric parse_metric(std::string_view name);

struct SelectionConstraints {
  double max_loss_pct = 0.0;
  double min_bw_hz = 62500.0;
  std::vector<Metric> tie_break_order{Metric::snr, Metric::excess_loss, Metric::rssi};
};

void require_valid(const SelectionConstraints& constraints);

struct Candidate {
  int sf = 0;
  double bw_hz = 0.0;
  CodingRate cr{};
  double rssi_dbm = 0.0;
  double snr_db = 0.0;
  double loss_pct = 0.0;
  double excess_db = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Recommendation {
  Candidate winner;
  /// Remaining feasible cells, best first.
  std::vector<Candidate> runners_up;
};

/// Filter-then-rank over the SF×BW sweep records of `table`. Exact metric
/// ties fall back to lower SF, then lower bandwidth.
Recommendation recommend_sf_bw(const dataset::MeasurementTable& table,
                               const LinkParams& params, double tx_power_dbm,
                               const SelectionConstraints& constraints = {},
                               double freq_hz = 433e6);

/// Coding rate with the highest SNR in the CR sweep at (sf, bw); ties go to
/// the smaller numerator.
CodingRate recommend_cr(const dataset::MeasurementTable& table, int sf, double bw_hz);

}  // namespace loralink::recommend
