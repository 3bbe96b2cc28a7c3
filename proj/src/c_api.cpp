// extern "C" surface over the C++ core. Nothing here throws across the
// boundary: every entry point funnels through guarded().

#include "loralink/loralink.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "loralink/dataset.hpp"
#include "loralink/error.hpp"
#include "loralink/link_budget.hpp"
#include "loralink/phy.hpp"
#include "loralink/recommender.hpp"
#include "loralink/tdma.hpp"
#include "loralink/uplink.hpp"

struct ll_table {
  loralink::dataset::MeasurementTable table;
};

struct ll_report {
  loralink::tdma::SimReport report;
};

namespace {

using namespace loralink;

thread_local std::string g_last_error;

ll_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return LL_ERR_INVALID_ARGUMENT;
    case ErrorCode::domain: return LL_ERR_DOMAIN;
    case ErrorCode::parse: return LL_ERR_PARSE;
    case ErrorCode::validation: return LL_ERR_VALIDATION;
    case ErrorCode::conflict: return LL_ERR_CONFLICT;
    case ErrorCode::not_found: return LL_ERR_NOT_FOUND;
    case ErrorCode::infeasible: return LL_ERR_INFEASIBLE;
    case ErrorCode::io: return LL_ERR_IO;
    case ErrorCode::transport: return LL_ERR_TRANSPORT;
  }
  return LL_ERR_INTERNAL;
}

template <typename Fn>
ll_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LL_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LL_ERR_INTERNAL;
  }
}

template <typename... Ptrs>
void require_non_null(const Ptrs*... ptrs) {
  if (((ptrs == nullptr) || ...)) {
    throw Error(ErrorCode::invalid_argument, "null pointer argument");
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

RadioConfig from_c(const ll_radio_config& c) {
  if (c.cr_den != CodingRate::kDenominator) {
    throw Error(ErrorCode::validation, "coding rate denominator must be 8");
  }
  RadioConfig config;
  config.sf = c.sf;
  config.bw_hz = c.bw_hz;
  config.cr = CodingRate(c.cr_num);
  config.tx_power_dbm = c.tx_power_dbm;
  config.freq_hz = c.freq_hz;
  return config;
}

ll_radio_config to_c(const RadioConfig& config) {
  return {config.sf, config.bw_hz, config.cr.numerator(), config.cr.denominator(),
          config.tx_power_dbm, config.freq_hz};
}

LinkParams from_c(const ll_link_params& p) {
  return {p.distance_m, p.gt_dbi, p.gr_dbi, p.c_mps, p.rssi_offset_db};
}

phy::FrameParams from_c(const ll_frame_params& f) {
  phy::FrameParams frame;
  frame.payload_bytes = f.payload_bytes;
  frame.preamble_symbols = f.preamble_symbols;
  frame.explicit_header = f.explicit_header != 0;
  frame.crc_on = f.crc_on != 0;
  if (f.low_data_rate_optimize >= 0) frame.low_data_rate_optimize = f.low_data_rate_optimize != 0;
  if (f.cr_index != 0) frame.cr_index = f.cr_index;
  return frame;
}

tdma::NodeSpec from_c(const ll_node_spec& n) {
  tdma::NodeSpec node;
  node.sync_word = tdma::SyncWord(n.sync_word);
  node.config = from_c(n.config);
  node.frame = from_c(n.frame);
  node.payload = {n.payload_seed, n.payload_min_cm, n.payload_max_cm};
  return node;
}

std::vector<tdma::NodeSpec> nodes_from_c(const ll_node_spec* nodes, size_t count) {
  if (count > 0) require_non_null(nodes);
  std::vector<tdma::NodeSpec> out;
  for (size_t i = 0; i < count; ++i) out.push_back(from_c(nodes[i]));
  return out;
}

ll_measurement to_c(const dataset::MeasurementRecord& r) {
  ll_measurement m{};
  m.sf = r.sf;
  m.bw_hz = r.bw_hz;
  m.cr_num = r.cr.numerator();
  m.cr_den = r.cr.denominator();
  m.has_rssi = r.rssi_dbm.has_value();
  m.rssi_dbm = r.rssi_dbm.value_or(0.0);
  m.snr_db = r.snr_db;
  m.has_loss = r.loss_pct.has_value();
  m.loss_pct = r.loss_pct.value_or(0.0);
  return m;
}

ll_candidate to_c(const recommend::Candidate& c) {
  return {c.sf, c.bw_hz, c.cr.numerator(), c.cr.denominator(), c.rssi_dbm,
          c.snr_db, c.loss_pct, c.excess_db};
}

dataset::Grid grid_from_c(const double* flat) {
  dataset::Grid grid{};
  for (size_t r = 0; r < 6; ++r)
    for (size_t c = 0; c < 6; ++c) grid[r][c] = flat[r * 6 + c];
  return grid;
}

void grid_to_c(const dataset::Grid& grid, double* flat) {
  for (size_t r = 0; r < 6; ++r)
    for (size_t c = 0; c < 6; ++c) flat[r * 6 + c] = grid[r][c];
}

recommend::Metric metric_from_c(ll_metric m) {
  switch (m) {
    case LL_METRIC_SNR: return recommend::Metric::snr;
    case LL_METRIC_EXCESS_LOSS: return recommend::Metric::excess_loss;
    case LL_METRIC_RSSI: return recommend::Metric::rssi;
    case LL_METRIC_LOSS: return recommend::Metric::loss;
  }
  throw Error(ErrorCode::invalid_argument, "unknown metric");
}

uplink::KeyMap key_map_from_c(const ll_uplink_target* targets, size_t count) {
  if (count > 0) require_non_null(targets);
  uplink::KeyMap map;
  for (size_t i = 0; i < count; ++i) {
    require_non_null(targets[i].api_key);
    const tdma::SyncWord word(targets[i].sync_word);
    if (!map.emplace(word, uplink::FieldTarget{targets[i].api_key, targets[i].field}).second) {
      throw Error(ErrorCode::conflict, "sync word " + word.hex() + " mapped twice");
    }
  }
  return map;
}

}  // namespace

extern "C" {

const char* ll_version(void) { return "1.0.0"; }

const char* ll_status_name(ll_status status) {
  switch (status) {
    case LL_OK: return "ok";
    case LL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LL_ERR_DOMAIN: return "domain";
    case LL_ERR_PARSE: return "parse";
    case LL_ERR_VALIDATION: return "validation";
    case LL_ERR_CONFLICT: return "conflict";
    case LL_ERR_NOT_FOUND: return "not_found";
    case LL_ERR_INFEASIBLE: return "infeasible";
    case LL_ERR_IO: return "io";
    case LL_ERR_TRANSPORT: return "transport";
    case LL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* ll_last_error(void) { return g_last_error.c_str(); }

void ll_string_free(char* s) { std::free(s); }

void ll_radio_config_default(ll_radio_config* out) {
  if (out) *out = to_c(RadioConfig{});
}

void ll_link_params_default(ll_link_params* out) {
  if (!out) return;
  const LinkParams p;
  *out = {p.distance_m, p.gt_dbi, p.gr_dbi, p.c_mps, p.rssi_offset_db};
}

ll_status ll_validate_measurement_grid(const ll_radio_config* config) {
  return guarded([&] {
    require_non_null(config);
    // Check sf and bw first so the rejection names the first bad field.
    RadioConfig probe;
    probe.sf = config->sf;
    probe.bw_hz = config->bw_hz;
    require_measurement_grid(probe);
    if (config->cr_den != 8 || config->cr_num < 4 || config->cr_num > 7) {
      throw Error(ErrorCode::validation, "cr=" + std::to_string(config->cr_num) + "/" +
                                             std::to_string(config->cr_den) +
                                             " not in {4/8, 5/8, 6/8, 7/8}");
    }
  });
}

ll_status ll_config_to_text(const ll_radio_config* config, char** out) {
  return guarded([&] {
    require_non_null(config, out);
    *out = dup_string(to_canonical_text(from_c(*config)));
  });
}

ll_status ll_config_from_text(const char* text, ll_radio_config* out) {
  return guarded([&] {
    require_non_null(text, out);
    *out = to_c(parse_canonical_text(text));
  });
}

size_t ll_grid_sf_count(void) { return kGridSpreadingFactors.size(); }
int ll_grid_sf(size_t index) {
  return index < kGridSpreadingFactors.size() ? kGridSpreadingFactors[index] : 0;
}
size_t ll_grid_bw_count(void) { return kGridBandwidthsHz.size(); }
double ll_grid_bw_hz(size_t index) {
  return index < kGridBandwidthsHz.size() ? kGridBandwidthsHz[index] : 0.0;
}

ll_status ll_format_khz(double hz, char** out) {
  return guarded([&] {
    require_non_null(out);
    *out = dup_string(format_khz(hz));
  });
}

ll_status ll_parse_khz(const char* khz, double* out_hz) {
  return guarded([&] {
    require_non_null(khz, out_hz);
    *out_hz = parse_khz(khz);
  });
}

ll_status ll_rssi_from_register(unsigned raw, double offset_db, double* out) {
  return guarded([&] {
    require_non_null(out);
    if (raw > 255) throw Error(ErrorCode::invalid_argument, "RSSI register is 8-bit");
    *out = budget::rssi_from_register(static_cast<std::uint8_t>(raw), offset_db);
  });
}

ll_status ll_snr_from_register(int raw, double* out) {
  return guarded([&] {
    require_non_null(out);
    if (raw < -128 || raw > 127) {
      throw Error(ErrorCode::invalid_argument, "SNR register is signed 8-bit");
    }
    *out = budget::snr_from_register(static_cast<std::int8_t>(raw));
  });
}

ll_status ll_packet_loss_pct(uint64_t lost, uint64_t sent, double* out) {
  return guarded([&] {
    require_non_null(out);
    *out = budget::packet_loss_pct(lost, sent);
  });
}

ll_status ll_esp(double rssi_dbm, double snr_db, double* out) {
  return guarded([&] {
    require_non_null(out);
    *out = budget::esp({rssi_dbm, snr_db});
  });
}

ll_status ll_path_loss(const ll_link_params* params, const ll_radio_config* config,
                       double esp_dbm, double* out) {
  return guarded([&] {
    require_non_null(params, config, out);
    *out = budget::path_loss(from_c(*params), from_c(*config), esp_dbm);
  });
}

ll_status ll_free_space_loss(double distance_m, double freq_hz, double c_mps, double* out) {
  return guarded([&] {
    require_non_null(out);
    *out = budget::free_space_loss(distance_m, freq_hz, c_mps);
  });
}

ll_status ll_loss_breakdown_compute(const ll_link_params* params, const ll_radio_config* config,
                                    double rssi_dbm, double snr_db, ll_loss_breakdown* out) {
  return guarded([&] {
    require_non_null(params, config, out);
    const auto b = budget::loss_breakdown(from_c(*params), from_c(*config), {rssi_dbm, snr_db});
    *out = {b.esp_dbm, b.path_loss_db, b.fsl_db, b.excess_db};
  });
}

void ll_frame_params_default(ll_frame_params* out) {
  if (out) *out = {0, 8, 1, 1, -1, 0};
}

ll_status ll_symbol_duration(const ll_radio_config* config, double* out_s) {
  return guarded([&] {
    require_non_null(config, out_s);
    *out_s = phy::symbol_duration(from_c(*config));
  });
}

ll_status ll_time_on_air(const ll_radio_config* config, const ll_frame_params* frame,
                         double* out_s) {
  return guarded([&] {
    require_non_null(config, frame, out_s);
    *out_s = phy::time_on_air(from_c(*config), from_c(*frame));
  });
}

ll_status ll_nominal_bit_rate(const ll_radio_config* config, double* out_bps) {
  return guarded([&] {
    require_non_null(config, out_bps);
    *out_bps = phy::nominal_bit_rate(from_c(*config));
  });
}

ll_status ll_monopole_dimensions(double freq_hz, double c_mps, ll_monopole* out) {
  return guarded([&] {
    require_non_null(out);
    const auto m = phy::monopole_dimensions(freq_hz, c_mps);
    *out = {m.element_len_m, m.radial_len_m, m.radial_angle_deg, m.gain_dbi};
  });
}

static dataset::LoadMode mode_from_c(ll_load_mode mode) {
  return mode == LL_LOAD_FREEFORM ? dataset::LoadMode::freeform : dataset::LoadMode::validated;
}

ll_status ll_table_load_file(const char* path, ll_load_mode mode, ll_table** out) {
  return guarded([&] {
    require_non_null(path, out);
    *out = new ll_table{dataset::load_measurements_file(path, mode_from_c(mode))};
  });
}

ll_status ll_table_load_text(const char* text, size_t len, ll_load_mode mode, ll_table** out) {
  return guarded([&] {
    require_non_null(text, out);
    std::istringstream in(std::string(text, len));
    *out = new ll_table{dataset::load_measurements(in, mode_from_c(mode))};
  });
}

void ll_table_free(ll_table* table) { delete table; }

size_t ll_table_size(const ll_table* table) { return table ? table->table.size() : 0; }

ll_status ll_table_record(const ll_table* table, size_t index, ll_measurement* out) {
  return guarded([&] {
    require_non_null(table, out);
    if (index >= table->table.size()) throw Error(ErrorCode::not_found, "record index out of range");
    *out = to_c(table->table.records()[index]);
  });
}

ll_status ll_table_lookup(const ll_table* table, int sf, double bw_hz, int cr_num,
                          ll_measurement* out) {
  return guarded([&] {
    require_non_null(table, out);
    *out = to_c(dataset::lookup(table->table, sf, bw_hz, CodingRate(cr_num)));
  });
}

ll_status ll_table_cell(const ll_table* table, int sf, double bw_hz, ll_measurement* out) {
  return guarded([&] {
    require_non_null(table, out);
    *out = to_c(table->table.cell(sf, bw_hz));
  });
}

ll_status ll_table_to_csv(const ll_table* table, char** out) {
  return guarded([&] {
    require_non_null(table, out);
    std::ostringstream s;
    dataset::write_measurements(table->table, s);
    *out = dup_string(s.str());
  });
}

ll_status ll_reconstruct_excess_loss(const ll_table* table, const ll_link_params* params,
                                     double tx_power_dbm, double freq_hz, double out_grid[36]) {
  return guarded([&] {
    require_non_null(table, params, out_grid);
    grid_to_c(dataset::reconstruct_excess_loss(table->table, from_c(*params), tx_power_dbm,
                                               freq_hz),
              out_grid);
  });
}

ll_status ll_grid_load_file(const char* path, double out_grid[36]) {
  return guarded([&] {
    require_non_null(path, out_grid);
    grid_to_c(dataset::read_grid_file(path), out_grid);
  });
}

ll_status ll_grid_to_csv(const double grid[36], int decimals, char** out) {
  return guarded([&] {
    require_non_null(grid, out);
    if (decimals < 0 || decimals > 17) throw Error(ErrorCode::invalid_argument, "decimals 0..17");
    std::ostringstream s;
    dataset::write_grid(grid_from_c(grid), s, decimals);
    *out = dup_string(s.str());
  });
}

ll_status ll_grid_compare(const double actual[36], const double expected[36], double tolerance,
                          ll_grid_comparison* out) {
  return guarded([&] {
    require_non_null(actual, expected, out);
    const auto cmp = dataset::compare_grids(grid_from_c(actual), grid_from_c(expected), tolerance);
    *out = {cmp.max_abs_deviation, cmp.worst_sf, cmp.worst_bw_hz, cmp.failing_cells.size()};
  });
}

void ll_constraints_default(ll_constraints* out) {
  if (!out) return;
  *out = {};
  out->max_loss_pct = 0.0;
  out->min_bw_hz = 62500.0;
  out->tie_break[0] = LL_METRIC_SNR;
  out->tie_break[1] = LL_METRIC_EXCESS_LOSS;
  out->tie_break[2] = LL_METRIC_RSSI;
  out->tie_break_len = 3;
}

ll_status ll_metric_from_name(const char* name, ll_metric* out) {
  return guarded([&] {
    require_non_null(name, out);
    switch (recommend::parse_metric(name)) {
      case recommend::Metric::snr: *out = LL_METRIC_SNR; break;
      case recommend::Metric::excess_loss: *out = LL_METRIC_EXCESS_LOSS; break;
      case recommend::Metric::rssi: *out = LL_METRIC_RSSI; break;
      case recommend::Metric::loss: *out = LL_METRIC_LOSS; break;
    }
  });
}

ll_status ll_recommend_sf_bw(const ll_table* table, const ll_link_params* params,
                             double tx_power_dbm, double freq_hz,
                             const ll_constraints* constraints, ll_candidate* winner,
                             ll_candidate* ranked, size_t ranked_cap, size_t* ranked_count) {
  return guarded([&] {
    require_non_null(table, params, constraints, winner);
    if (ranked_cap > 0) require_non_null(ranked);
    if (constraints->tie_break_len > 4) {
      throw Error(ErrorCode::invalid_argument, "at most 4 tie-break metrics");
    }
    recommend::SelectionConstraints sc;
    sc.max_loss_pct = constraints->max_loss_pct;
    sc.min_bw_hz = constraints->min_bw_hz;
    sc.tie_break_order.clear();
    for (size_t i = 0; i < constraints->tie_break_len; ++i) {
      sc.tie_break_order.push_back(metric_from_c(constraints->tie_break[i]));
    }
    const auto rec =
        recommend::recommend_sf_bw(table->table, from_c(*params), tx_power_dbm, sc, freq_hz);
    *winner = to_c(rec.winner);
    const size_t total = rec.runners_up.size() + 1;
    for (size_t i = 0; i < total && i < ranked_cap; ++i) {
      ranked[i] = to_c(i == 0 ? rec.winner : rec.runners_up[i - 1]);
    }
    if (ranked_count) *ranked_count = total;
  });
}

ll_status ll_recommend_cr(const ll_table* table, int sf, double bw_hz, int* cr_num, int* cr_den) {
  return guarded([&] {
    require_non_null(table, cr_num, cr_den);
    const auto cr = recommend::recommend_cr(table->table, sf, bw_hz);
    *cr_num = cr.numerator();
    *cr_den = cr.denominator();
  });
}

ll_status ll_sync_word_parse(const char* text, uint16_t* out) {
  return guarded([&] {
    require_non_null(text, out);
    *out = tdma::SyncWord::parse(text).value();
  });
}

void ll_sim_options_default(ll_sim_options* out) {
  if (out) *out = {1, 0.0};
}

ll_status ll_node_airtime_s(const ll_node_spec* node, double* out_s) {
  return guarded([&] {
    require_non_null(node, out_s);
    const auto spec = from_c(*node);
    *out_s = phy::time_on_air(spec.config, spec.frame);
  });
}

ll_status ll_default_slot_s(const ll_node_spec* nodes, size_t count, double* out_s) {
  return guarded([&] {
    require_non_null(out_s);
    *out_s = tdma::default_slot_duration_s(nodes_from_c(nodes, count));
  });
}

double ll_default_guard_s(void) { return tdma::kDefaultGuardS; }

ll_status ll_build_schedule(const ll_node_spec* nodes, size_t count, double slot_s,
                            double guard_s, double* out_period_s) {
  return guarded([&] {
    const auto schedule = tdma::build_schedule(nodes_from_c(nodes, count), slot_s, guard_s);
    if (out_period_s) *out_period_s = static_cast<double>(schedule.period_ns()) / 1e9;
  });
}

ll_status ll_drop_from_table(const ll_table* table, const ll_node_spec* node,
                             double* out_probability) {
  return guarded([&] {
    require_non_null(table, node, out_probability);
    *out_probability = tdma::drop_model_from_table(table->table, from_c(*node));
  });
}

ll_status ll_simulate(const ll_node_spec* nodes, size_t count, double slot_s, double guard_s,
                      const double* drop_probability, double duration_s, uint64_t seed,
                      const ll_sim_options* options, ll_report** out) {
  return guarded([&] {
    require_non_null(out);
    if (count > 0) require_non_null(drop_probability);
    const auto specs = nodes_from_c(nodes, count);
    const auto schedule = tdma::build_schedule(specs, slot_s, guard_s);
    tdma::SimOptions opts;
    if (options) opts = {options->frames_per_slot, options->handshake_s};
    auto report = tdma::run_simulation(specs, schedule, {drop_probability, count}, duration_s,
                                       seed, opts);
    *out = new ll_report{std::move(report)};
  });
}

void ll_report_free(ll_report* report) { delete report; }

ll_status ll_report_serialize(const ll_report* report, char** out) {
  return guarded([&] {
    require_non_null(report, out);
    *out = dup_string(tdma::serialize_report(report->report));
  });
}

ll_status ll_report_parse(const char* text, size_t len, ll_report** out) {
  return guarded([&] {
    require_non_null(text, out);
    *out = new ll_report{tdma::parse_report(std::string_view(text, len))};
  });
}

size_t ll_report_node_count(const ll_report* report) {
  return report ? report->report.nodes.size() : 0;
}

ll_status ll_report_node(const ll_report* report, size_t index, ll_node_stats* out) {
  return guarded([&] {
    require_non_null(report, out);
    if (index >= report->report.nodes.size()) {
      throw Error(ErrorCode::not_found, "node index out of range");
    }
    const auto& n = report->report.nodes[index];
    *out = {n.sync_word.value(), n.packets_sent, n.packets_received, n.packets_lost,
            n.measured_loss_pct.has_value(), n.measured_loss_pct.value_or(0.0)};
  });
}

size_t ll_report_event_count(const ll_report* report) {
  return report ? report->report.timeline.size() : 0;
}

ll_status ll_report_event(const ll_report* report, size_t index, ll_event* out) {
  return guarded([&] {
    require_non_null(report, out);
    if (index >= report->report.timeline.size()) {
      throw Error(ErrorCode::not_found, "event index out of range");
    }
    const auto& e = report->report.timeline[index];
    *out = {e.t_ns, static_cast<ll_event_kind>(e.kind), e.sync_word.value(),
            e.seq.has_value(), e.seq.value_or(0), e.value.value_or(0)};
  });
}

ll_status ll_uplink_format(const char* api_key, const int* field_index, const double* values,
                           size_t count, int has_created_at, int64_t created_at,
                           char** out_request_line) {
  return guarded([&] {
    require_non_null(api_key, out_request_line);
    if (count > 0) require_non_null(field_index, values);
    uplink::ChannelUpdate update;
    update.api_key = api_key;
    for (size_t i = 0; i < count; ++i) {
      if (!update.fields.emplace(field_index[i], values[i]).second) {
        throw Error(ErrorCode::invalid_argument,
                    "field " + std::to_string(field_index[i]) + " given twice");
      }
    }
    if (has_created_at) update.created_at = created_at;
    *out_request_line = dup_string(uplink::format_update(update).request_line());
  });
}

ll_status ll_uplink_dry_run(const ll_report* report, const ll_uplink_target* targets,
                            size_t target_count, int64_t epoch_unix_s, char** out_log,
                            size_t* out_count) {
  return guarded([&] {
    require_non_null(report, out_log);
    const auto updates = uplink::bridge_sim_report(
        report->report, key_map_from_c(targets, target_count), epoch_unix_s);
    std::ostringstream log;
    uplink::DryRunTransport transport(log);
    const auto sent = uplink::publish(updates, transport);
    *out_log = dup_string(log.str());
    if (out_count) *out_count = sent;
  });
}

ll_status ll_uplink_live(const ll_report* report, const ll_uplink_target* targets,
                         size_t target_count, int64_t epoch_unix_s, const char* host,
                         double min_spacing_s, size_t* out_count) {
  return guarded([&] {
    require_non_null(report);
    if (!(min_spacing_s >= 0.0)) {
      throw Error(ErrorCode::invalid_argument, "minimum spacing must be non-negative");
    }
    const auto updates = uplink::bridge_sim_report(
        report->report, key_map_from_c(targets, target_count), epoch_unix_s);
    uplink::HttpTransport transport(
        host ? host : "http://api.thingspeak.com",
        std::chrono::milliseconds(static_cast<std::int64_t>(min_spacing_s * 1000.0)));
    const auto sent = uplink::publish(updates, transport);
    if (out_count) *out_count = sent;
  });
}

ll_status ll_parse_iso8601(const char* text, int64_t* out_unix_s) {
  return guarded([&] {
    require_non_null(text, out_unix_s);
    *out_unix_s = uplink::parse_iso8601(text);
  });
}

ll_status ll_format_iso8601(int64_t unix_s, char** out) {
  return guarded([&] {
    require_non_null(out);
    *out = dup_string(uplink::format_iso8601(unix_s));
  });
}

}  // extern "C"
