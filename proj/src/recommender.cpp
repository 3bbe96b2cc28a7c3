#include "loralink/recommender.hpp"

#include <algorithm>
#include <string>

#include "loralink/error.hpp"
#include "loralink/link_budget.hpp"

namespace loralink::recommend {

std::string_view metric_name(Metric metric) noexcept {
  switch (metric) {
    case Metric::snr: return "snr";
    case Metric::excess_loss: return "excess_loss";
    case Metric::rssi: return "rssi";
    case Metric::loss: return "loss";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::snr, Metric::excess_loss, Metric::rssi, Metric::loss}) {
    if (metric_name(m) == name) return m;
  }
  throw Error(ErrorCode::invalid_argument,
              "unknown metric '" + std::string(name) + "' (snr, excess_loss, rssi, loss)");
}

void require_valid(const SelectionConstraints& c) {
  if (!(c.max_loss_pct >= 0.0 && c.max_loss_pct <= 100.0)) {
    throw Error(ErrorCode::invalid_argument, "max_loss_pct must be within [0, 100]");
  }
  if (!(c.min_bw_hz > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "min_bw_hz must be positive");
  }
  if (c.tie_break_order.empty()) {
    throw Error(ErrorCode::invalid_argument, "tie-break order must not be empty");
  }
  for (std::size_t i = 0; i < c.tie_break_order.size(); ++i) {
    for (std::size_t j = i + 1; j < c.tie_break_order.size(); ++j) {
      if (c.tie_break_order[i] == c.tie_break_order[j]) {
        throw Error(ErrorCode::invalid_argument,
                    "metric '" + std::string(metric_name(c.tie_break_order[i])) +
                        "' repeated in tie-break order");
      }
    }
  }
}

namespace {

// Signed so that larger is always better.
double score(const Candidate& c, Metric m) {
  switch (m) {
    case Metric::snr: return c.snr_db;
    case Metric::excess_loss: return -c.excess_db;
    case Metric::rssi: return c.rssi_dbm;
    case Metric::loss: return -c.loss_pct;
  }
  return 0.0;
}

}  // namespace

Recommendation recommend_sf_bw(const dataset::MeasurementTable& table,
                               const LinkParams& params, double tx_power_dbm,
                               const SelectionConstraints& constraints, double freq_hz) {
  require_valid(constraints);
  require_well_formed(params);

  const auto records = table.grid_records();
  bool any_loss_ok = false;
  bool any_bw_ok = false;
  std::vector<Candidate> feasible;
  for (const auto& r : records) {
    const bool loss_ok = *r.loss_pct <= constraints.max_loss_pct;
    const bool bw_ok = r.bw_hz >= constraints.min_bw_hz;
    any_loss_ok = any_loss_ok || loss_ok;
    any_bw_ok = any_bw_ok || bw_ok;
    if (!loss_ok || !bw_ok) continue;

    RadioConfig config;
    config.sf = r.sf;
    config.bw_hz = r.bw_hz;
    config.cr = r.cr;
    config.tx_power_dbm = tx_power_dbm;
    config.freq_hz = freq_hz;
    const auto breakdown = budget::loss_breakdown(params, config, {*r.rssi_dbm, r.snr_db});
    feasible.push_back({r.sf, r.bw_hz, r.cr, *r.rssi_dbm, r.snr_db, *r.loss_pct,
                        breakdown.excess_db});
  }

  if (feasible.empty()) {
    std::string binding;
    if (!any_loss_ok && !any_bw_ok) binding = "max_loss_pct and min_bw_hz";
    else if (!any_loss_ok) binding = "max_loss_pct";
    else if (!any_bw_ok) binding = "min_bw_hz";
    else binding = "max_loss_pct combined with min_bw_hz";
    throw Error(ErrorCode::infeasible,
                "no feasible configuration (binding constraint: " + binding +
                    "; max_loss_pct=" + format_decimal(constraints.max_loss_pct) +
                    ", min_bw_khz=" + format_khz(constraints.min_bw_hz) + ")");
  }

  std::sort(feasible.begin(), feasible.end(), [&](const Candidate& a, const Candidate& b) {
    for (Metric m : constraints.tie_break_order) {
      const double sa = score(a, m);
      const double sb = score(b, m);
      if (sa != sb) return sa > sb;
    }
    if (a.sf != b.sf) return a.sf < b.sf;
    if (a.bw_hz != b.bw_hz) return a.bw_hz < b.bw_hz;
    return a.cr < b.cr;
  });

  Recommendation out;
  out.winner = feasible.front();
  out.runners_up.assign(feasible.begin() + 1, feasible.end());
  return out;
}

CodingRate recommend_cr(const dataset::MeasurementTable& table, int sf, double bw_hz) {
  const auto sweep = table.cr_sweep(sf, bw_hz);
  if (sweep.empty()) {
    throw Error(ErrorCode::not_found, "no coding-rate sweep records at SF " +
                                          std::to_string(sf) + ", BW " +
                                          format_khz(bw_hz) + " kHz");
  }
  const auto best = std::min_element(
      sweep.begin(), sweep.end(),
      [](const dataset::MeasurementRecord& a, const dataset::MeasurementRecord& b) {
        if (a.snr_db != b.snr_db) return a.snr_db > b.snr_db;
        return a.cr < b.cr;
      });
  return best->cr;
}

}  // namespace loralink::recommend
