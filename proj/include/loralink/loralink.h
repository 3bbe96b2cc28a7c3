/*
 * loralink C API.
 *
 * Every function returns an ll_status; outputs go through pointer
 * arguments. On failure, ll_last_error() describes what went wrong on the
 * calling thread. Strings returned through `char**` are heap-allocated and
 * must be released with ll_string_free(). Opaque handles are released with
 * their matching *_free function; passing NULL to any *_free is a no-op.
 */
#ifndef LORALINK_H
#define LORALINK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LORALINK_BUILDING)
#    define LL_API __declspec(dllexport)
#  else
#    define LL_API __declspec(dllimport)
#  endif
#else
#  define LL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ll_status {
  LL_OK = 0,
  LL_ERR_INVALID_ARGUMENT = 1,
  LL_ERR_DOMAIN = 2,
  LL_ERR_PARSE = 3,
  LL_ERR_VALIDATION = 4,
  LL_ERR_CONFLICT = 5,
  LL_ERR_NOT_FOUND = 6,
  LL_ERR_INFEASIBLE = 7,
  LL_ERR_IO = 8,
  LL_ERR_TRANSPORT = 9,
  LL_ERR_INTERNAL = 99
} ll_status;

LL_API const char* ll_version(void);
LL_API const char* ll_status_name(ll_status status);
/* Message for the most recent failure on this thread ("" if none). */
LL_API const char* ll_last_error(void);
LL_API void ll_string_free(char* s);

/* ---- core types --------------------------------------------------------- */

typedef struct ll_radio_config {
  int sf;
  double bw_hz;
  int cr_num; /* coding rate cr_num/cr_den, cr_den must be 8 */
  int cr_den;
  double tx_power_dbm;
  double freq_hz;
} ll_radio_config;

typedef struct ll_link_params {
  double distance_m;
  double gt_dbi;
  double gr_dbi;
  double c_mps;
  double rssi_offset_db;
} ll_link_params;

/* SF 7, 125 kHz, 4/8, 20 dBm, 433 MHz. */
LL_API void ll_radio_config_default(ll_radio_config* out);
/* 5 km, 5.15/5.15 dBi, c = 3e8 m/s, RSSI offset 157 dB. */
LL_API void ll_link_params_default(ll_link_params* out);

/* LL_ERR_VALIDATION when off the 6x6x4 measurement grid. */
LL_API ll_status ll_validate_measurement_grid(const ll_radio_config* config);
LL_API ll_status ll_config_to_text(const ll_radio_config* config, char** out);
LL_API ll_status ll_config_from_text(const char* text, ll_radio_config* out);

LL_API size_t ll_grid_sf_count(void);
LL_API int ll_grid_sf(size_t index);
LL_API size_t ll_grid_bw_count(void);
LL_API double ll_grid_bw_hz(size_t index);
/* Shortest decimal kHz rendering of a bandwidth, e.g. 10400 -> "10.4". */
LL_API ll_status ll_format_khz(double hz, char** out);
LL_API ll_status ll_parse_khz(const char* khz, double* out_hz);

/* ---- link budget -------------------------------------------------------- */

typedef struct ll_loss_breakdown {
  double esp_dbm;
  double path_loss_db;
  double fsl_db;
  double excess_db;
} ll_loss_breakdown;

LL_API ll_status ll_rssi_from_register(unsigned raw, double offset_db, double* out);
LL_API ll_status ll_snr_from_register(int raw, double* out);
LL_API ll_status ll_packet_loss_pct(uint64_t lost, uint64_t sent, double* out);
LL_API ll_status ll_esp(double rssi_dbm, double snr_db, double* out);
LL_API ll_status ll_path_loss(const ll_link_params* params, const ll_radio_config* config,
                              double esp_dbm, double* out);
LL_API ll_status ll_free_space_loss(double distance_m, double freq_hz, double c_mps,
                                    double* out);
LL_API ll_status ll_loss_breakdown_compute(const ll_link_params* params,
                                           const ll_radio_config* config, double rssi_dbm,
                                           double snr_db, ll_loss_breakdown* out);

/* ---- PHY model ---------------------------------------------------------- */

typedef struct ll_frame_params {
  int payload_bytes;
  int preamble_symbols;
  int explicit_header;        /* bool */
  int crc_on;                 /* bool */
  int low_data_rate_optimize; /* -1 auto (symbol > 16 ms), 0 off, 1 on */
  int cr_index;               /* 0 = derive (4/8 only), else datasheet index 1..4 */
} ll_frame_params;

typedef struct ll_monopole {
  double element_len_m;
  double radial_len_m;
  double radial_angle_deg;
  double gain_dbi;
} ll_monopole;

/* 0-byte payload, preamble 8, explicit header, CRC on, auto LDRO, derived CR. */
LL_API void ll_frame_params_default(ll_frame_params* out);
LL_API ll_status ll_symbol_duration(const ll_radio_config* config, double* out_s);
LL_API ll_status ll_time_on_air(const ll_radio_config* config, const ll_frame_params* frame,
                                double* out_s);
LL_API ll_status ll_nominal_bit_rate(const ll_radio_config* config, double* out_bps);
LL_API ll_status ll_monopole_dimensions(double freq_hz, double c_mps, ll_monopole* out);

/* ---- measurement tables ------------------------------------------------- */

typedef struct ll_table ll_table;

typedef struct ll_measurement {
  int sf;
  double bw_hz;
  int cr_num;
  int cr_den;
  int has_rssi; /* 0 for coding-rate sweep records */
  double rssi_dbm;
  double snr_db;
  int has_loss;
  double loss_pct;
} ll_measurement;

typedef enum ll_load_mode { LL_LOAD_VALIDATED = 0, LL_LOAD_FREEFORM = 1 } ll_load_mode;

LL_API ll_status ll_table_load_file(const char* path, ll_load_mode mode, ll_table** out);
LL_API ll_status ll_table_load_text(const char* text, size_t len, ll_load_mode mode,
                                    ll_table** out);
LL_API void ll_table_free(ll_table* table);
LL_API size_t ll_table_size(const ll_table* table);
LL_API ll_status ll_table_record(const ll_table* table, size_t index, ll_measurement* out);
/* SF x BW sweep record at (sf, bw, cr_num/8); LL_ERR_NOT_FOUND if absent. */
LL_API ll_status ll_table_lookup(const ll_table* table, int sf, double bw_hz, int cr_num,
                                 ll_measurement* out);
/* The unique SF x BW sweep record at (sf, bw), whatever its coding rate. */
LL_API ll_status ll_table_cell(const ll_table* table, int sf, double bw_hz,
                               ll_measurement* out);
LL_API ll_status ll_table_to_csv(const ll_table* table, char** out);

/* Grids are 36 doubles, row-major: row = bandwidth (10.4..500 kHz),
 * column = SF (7..12). */
LL_API ll_status ll_reconstruct_excess_loss(const ll_table* table, const ll_link_params* params,
                                            double tx_power_dbm, double freq_hz,
                                            double out_grid[36]);
LL_API ll_status ll_grid_load_file(const char* path, double out_grid[36]);
LL_API ll_status ll_grid_to_csv(const double grid[36], int decimals, char** out);

typedef struct ll_grid_comparison {
  double max_abs_deviation;
  int worst_sf;
  double worst_bw_hz;
  size_t failing_count; /* cells with deviation > tolerance */
} ll_grid_comparison;

LL_API ll_status ll_grid_compare(const double actual[36], const double expected[36],
                                 double tolerance, ll_grid_comparison* out);

/* ---- recommender -------------------------------------------------------- */

typedef enum ll_metric {
  LL_METRIC_SNR = 0,
  LL_METRIC_EXCESS_LOSS = 1,
  LL_METRIC_RSSI = 2,
  LL_METRIC_LOSS = 3
} ll_metric;

typedef struct ll_constraints {
  double max_loss_pct;
  double min_bw_hz;
  ll_metric tie_break[4];
  size_t tie_break_len;
} ll_constraints;

typedef struct ll_candidate {
  int sf;
  double bw_hz;
  int cr_num;
  int cr_den;
  double rssi_dbm;
  double snr_db;
  double loss_pct;
  double excess_db;
} ll_candidate;

/* max loss 0 %, min bandwidth 62.5 kHz, order snr, excess_loss, rssi. */
LL_API void ll_constraints_default(ll_constraints* out);
LL_API ll_status ll_metric_from_name(const char* name, ll_metric* out);

/* Writes the winner to `winner` and up to `ranked_cap` feasible candidates,
 * best first (the winner included), to `ranked`. `ranked_count` receives the
 * total number of feasible candidates. `ranked` may be NULL when
 * `ranked_cap` is 0. */
LL_API ll_status ll_recommend_sf_bw(const ll_table* table, const ll_link_params* params,
                                    double tx_power_dbm, double freq_hz,
                                    const ll_constraints* constraints, ll_candidate* winner,
                                    ll_candidate* ranked, size_t ranked_cap,
                                    size_t* ranked_count);
LL_API ll_status ll_recommend_cr(const ll_table* table, int sf, double bw_hz, int* cr_num,
                                 int* cr_den);

/* ---- TDMA simulation ---------------------------------------------------- */

typedef struct ll_node_spec {
  uint16_t sync_word;
  ll_radio_config config;
  ll_frame_params frame;
  uint64_t payload_seed;
  int payload_min_cm;
  int payload_max_cm;
} ll_node_spec;

typedef struct ll_sim_options {
  int frames_per_slot;
  double handshake_s;
} ll_sim_options;

typedef struct ll_node_stats {
  uint16_t sync_word;
  uint64_t packets_sent;
  uint64_t packets_received;
  uint64_t packets_lost;
  int has_loss_pct;
  double loss_pct;
} ll_node_stats;

typedef enum ll_event_kind {
  LL_EVENT_SLOT_OPEN = 0,
  LL_EVENT_TX_START = 1,
  LL_EVENT_TX_END = 2,
  LL_EVENT_RX_OK = 3,
  LL_EVENT_RX_DROP = 4,
  LL_EVENT_SLOT_CLOSE = 5
} ll_event_kind;

typedef struct ll_event {
  int64_t t_ns;
  ll_event_kind kind;
  uint16_t sync_word;
  int has_payload;
  uint64_t seq;
  int64_t value;
} ll_event;

typedef struct ll_report ll_report;

LL_API ll_status ll_sync_word_parse(const char* text, uint16_t* out);
LL_API void ll_sim_options_default(ll_sim_options* out);
LL_API ll_status ll_node_airtime_s(const ll_node_spec* node, double* out_s);
/* 2x the longest airtime rounded up to 1 ms. */
LL_API ll_status ll_default_slot_s(const ll_node_spec* nodes, size_t count, double* out_s);
LL_API double ll_default_guard_s(void);
/* Validates the schedule; outputs the schedule period. */
LL_API ll_status ll_build_schedule(const ll_node_spec* nodes, size_t count, double slot_s,
                                   double guard_s, double* out_period_s);
LL_API ll_status ll_drop_from_table(const ll_table* table, const ll_node_spec* node,
                                    double* out_probability);
LL_API ll_status ll_simulate(const ll_node_spec* nodes, size_t count, double slot_s,
                             double guard_s, const double* drop_probability,
                             double duration_s, uint64_t seed, const ll_sim_options* options,
                             ll_report** out);
LL_API void ll_report_free(ll_report* report);
LL_API ll_status ll_report_serialize(const ll_report* report, char** out);
LL_API ll_status ll_report_parse(const char* text, size_t len, ll_report** out);
LL_API size_t ll_report_node_count(const ll_report* report);
LL_API ll_status ll_report_node(const ll_report* report, size_t index, ll_node_stats* out);
LL_API size_t ll_report_event_count(const ll_report* report);
LL_API ll_status ll_report_event(const ll_report* report, size_t index, ll_event* out);

/* ---- uplink bridge ------------------------------------------------------ */

typedef struct ll_uplink_target {
  uint16_t sync_word;
  const char* api_key;
  int field; /* 1..8 */
} ll_uplink_target;

/* Request line for one update; created_at is used when has_created_at. */
LL_API ll_status ll_uplink_format(const char* api_key, const int* field_index,
                                  const double* values, size_t count, int has_created_at,
                                  int64_t created_at, char** out_request_line);
/* Dry-run log (one `<ISO8601> UPLINK <request line>` per rx_ok event). */
LL_API ll_status ll_uplink_dry_run(const ll_report* report, const ll_uplink_target* targets,
                                   size_t target_count, int64_t epoch_unix_s, char** out_log,
                                   size_t* out_count);
/* Real HTTP sends; key from UPLINK_API_KEY. Never used by the test suite. */
LL_API ll_status ll_uplink_live(const ll_report* report, const ll_uplink_target* targets,
                                size_t target_count, int64_t epoch_unix_s, const char* host,
                                double min_spacing_s, size_t* out_count);
LL_API ll_status ll_parse_iso8601(const char* text, int64_t* out_unix_s);
LL_API ll_status ll_format_iso8601(int64_t unix_s, char** out);

#ifdef __cplusplus
}
#endif

#endif /* LORALINK_H */
