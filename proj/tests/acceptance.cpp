// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "loralink/dataset.hpp"
#include "loralink/error.hpp"
#include "loralink/link_budget.hpp"
#include "loralink/phy.hpp"
#include "loralink/recommender.hpp"
#include "loralink/tdma.hpp"
#include "loralink/uplink.hpp"
#include "oracles.hpp"
#include "tdma_checks.hpp"

using namespace loralink;

namespace {

// Pinned tolerances.
constexpr double kGridToleranceDb = 0.05;
constexpr double kPtStepDb = 0.1;
constexpr double kPtLowDbm = 0.0;
constexpr double kPtHighDbm = 30.0;
constexpr double kExpectedPtDbm = 20.0;
constexpr std::size_t kPropertySamples = 100000;
constexpr double kFslDoublingTolDb = 1e-9;
constexpr int kRandomSims = 100;
constexpr double kConvergenceP = 0.166;
constexpr std::uint64_t kConvergenceN = 20000;
constexpr double kMonopoleTolM = 0.001;
constexpr double kElementM = 0.165;
constexpr double kRadialM = 0.184;
constexpr double kGainDbi = 5.15;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v, int places = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

// 1. Excess-loss grid reconstruction.
Outcome excess_loss_reconstruction() {
  const auto& table = field_table();
  const auto expected = dataset::read_grid_file(data_path("expected_excess_loss.csv"));
  const LinkParams params;  // 5000 m, 5.15/5.15 dBi, c = 3e8

  // Back-solve Pt on a 0.1 dB grid; the minimiser of the worst deviation must
  // be unique and equal to the campaign constant.
  double best_pt = 0;
  double best_dev = INFINITY;
  int ties = 0;
  const int steps = static_cast<int>(std::lround((kPtHighDbm - kPtLowDbm) / kPtStepDb));
  for (int i = 0; i <= steps; ++i) {
    const double pt = kPtLowDbm + i * kPtStepDb;
    const auto grid = dataset::reconstruct_excess_loss(table, params, pt, 433e6);
    const double dev = dataset::compare_grids(grid, expected, kGridToleranceDb).max_abs_deviation;
    if (dev < best_dev - 1e-12) {
      best_dev = dev;
      best_pt = pt;
      ties = 1;
    } else if (std::abs(dev - best_dev) <= 1e-12) {
      ++ties;
    }
  }
  const bool pt_ok = ties == 1 && std::abs(best_pt - kExpectedPtDbm) < 1e-9;

  const auto grid = dataset::reconstruct_excess_loss(table, params, kExpectedPtDbm, 433e6);
  const auto cmp = dataset::compare_grids(grid, expected, kGridToleranceDb);
  const bool anchors = std::abs(grid[0][0] - 24.532) <= kGridToleranceDb &&
                       std::abs(grid[2][2] - 40.198) <= kGridToleranceDb &&
                       std::abs(grid[5][5] - 39.175) <= kGridToleranceDb;

  std::string detail = "Pt minimiser " + fmt(best_pt, 1) + " dBm (" +
                       (pt_ok ? "unique" : "NOT unique/unexpected") + "), anchors " +
                       (anchors ? "ok" : "off") + ", max deviation " +
                       fmt(cmp.max_abs_deviation) + " dB at SF " + std::to_string(cmp.worst_sf) +
                       "/BW " + format_khz(cmp.worst_bw_hz) + " kHz, " +
                       std::to_string(cmp.failing_cells.size()) + " of 36 cells over " +
                       fmt(kGridToleranceDb, 2) + " dB";
  if (!cmp.failing_cells.empty()) {
    detail += " [";
    for (std::size_t i = 0; i < cmp.failing_cells.size(); ++i) {
      const auto [sf, bw] = cmp.failing_cells[i];
      const std::size_t row = static_cast<std::size_t>(
          std::find(kGridBandwidthsHz.begin(), kGridBandwidthsHz.end(), bw) -
          kGridBandwidthsHz.begin());
      const double dev = grid[row][static_cast<std::size_t>(sf - 7)] -
                         expected[row][static_cast<std::size_t>(sf - 7)];
      detail += (i ? ", " : "") + std::string("SF") + std::to_string(sf) + "/" +
                format_khz(bw) + ":" + fmt(dev);
    }
    detail += "]";
  }
  return {pt_ok && anchors && cmp.failing_cells.empty(), detail};
}

// 2. Default recommendation.
Outcome recommendation() {
  const auto rec = recommend::recommend_sf_bw(field_table(), LinkParams{}, kCampaignTxPowerDbm);
  const auto cr = recommend::recommend_cr(field_table(), 8, 250000);
  const bool ok = rec.winner.sf == 8 && rec.winner.bw_hz == 62500 && cr == CodingRate(4);
  return {ok, "sf=" + std::to_string(rec.winner.sf) + " bw_khz=" + format_khz(rec.winner.bw_hz) +
                  " cr=" + cr.to_string()};
}

// 3. Airtime against the straight-line oracle.
Outcome airtime_oracle() {
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  for (int sf : kGridSpreadingFactors)
    for (double bw : kGridBandwidthsHz)
      for (int cr : kGridCodingNumerators)
        for (int payload : {0, 1, 2, 16, 255}) {
          RadioConfig c;
          c.sf = sf;
          c.bw_hz = bw;
          c.cr = CodingRate(cr);
          phy::FrameParams f;
          f.payload_bytes = payload;
          f.cr_index = 4;
          const double got = phy::time_on_air(c, f);
          const double want = oracle::airtime(sf, bw, 4, payload, 8, true, true, -1);
          ++cases;
          if (got != want) ++mismatches;
        }
  return {mismatches == 0 && cases == 720,
          std::to_string(cases) + " cases, " + std::to_string(mismatches) + " bit mismatches"};
}

// 4. Link-budget properties.
Outcome link_budget_properties() {
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> rssi(-157.0, 0.0);
  std::uniform_real_distribution<double> snr(-32.0, 31.75);
  std::uniform_real_distribution<double> log_d(0.0, 6.0), log_f(6.0, 10.0);
  std::size_t esp_fail = 0, mono_fail = 0, fsl_fail = 0;
  double worst_fsl = 0;
  const double six = 20.0 * std::log10(2.0);
  for (std::size_t i = 0; i < kPropertySamples; ++i) {
    const double r = rssi(rng);
    double s1 = snr(rng);
    double s2 = snr(rng);
    if (!(budget::esp({r, s1}) < r)) ++esp_fail;
    if (s1 > s2) std::swap(s1, s2);
    if (s1 < s2 && !(budget::esp({r, s1}) < budget::esp({r, s2}))) ++mono_fail;

    const double d = std::pow(10.0, log_d(rng));
    const double f = std::pow(10.0, log_f(rng));
    const double base = budget::free_space_loss(d, f, 3e8);
    const double e1 = std::abs(budget::free_space_loss(2 * d, f, 3e8) - base - six);
    const double e2 = std::abs(budget::free_space_loss(d, 2 * f, 3e8) - base - six);
    worst_fsl = std::max({worst_fsl, e1, e2});
    if (e1 >= kFslDoublingTolDb || e2 >= kFslDoublingTolDb) ++fsl_fail;
  }

  bool loss_ok = budget::packet_loss_pct(0, 1) == 0.0 && budget::packet_loss_pct(1, 1) == 100.0 &&
                 budget::packet_loss_pct(0, 500) == 0.0 &&
                 budget::packet_loss_pct(500, 500) == 100.0;
  auto raises = [](std::function<void()> fn, ErrorCode code) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code() == code;
    }
    return false;
  };
  loss_ok = loss_ok && raises([] { budget::packet_loss_pct(0, 0); }, ErrorCode::domain) &&
            raises([] { budget::packet_loss_pct(2, 1); }, ErrorCode::invalid_argument);

  const bool ok = esp_fail == 0 && mono_fail == 0 && fsl_fail == 0 && loss_ok;
  return {ok, std::to_string(kPropertySamples) + " samples: esp<rssi failures " +
                  std::to_string(esp_fail) + ", monotonicity failures " +
                  std::to_string(mono_fail) + ", worst FSL doubling error " +
                  fmt(worst_fsl * 1e12, 3) + "e-12 dB, loss identities " +
                  (loss_ok ? "ok" : "FAILED")};
}

// 5. TDMA simulator.
Outcome tdma_suite() {
  using namespace tdma;
  std::mt19937_64 rng(5150);
  std::string first_failure;
  int deterministic = 0;
  for (int i = 0; i < kRandomSims; ++i) {
    const auto sc = tdma_checks::random_scenario(rng);
    const auto s = build_schedule(sc.nodes, sc.slot_s, sc.guard_s);
    const auto a = run_simulation(sc.nodes, s, sc.drops, sc.duration_s, sc.seed, sc.options);
    const auto b = run_simulation(sc.nodes, s, sc.drops, sc.duration_s, sc.seed, sc.options);
    auto why = tdma_checks::check_invariants(a, s, sc.nodes.size());
    if (why.empty()) why = tdma_checks::check_fairness(a, sc.options.frames_per_slot);
    if (!why.empty() && first_failure.empty()) first_failure = "run " + std::to_string(i) + ": " + why;
    if (serialize_report(a) == serialize_report(b)) ++deterministic;
  }

  NodeSpec node;
  node.sync_word = SyncWord(0x1A01);
  node.config.sf = 7;
  node.config.bw_hz = 125000;
  node.frame.payload_bytes = 2;
  node.payload.seed = 99;
  const std::vector<NodeSpec> nodes{node};
  const auto s = build_schedule(nodes, 0.1, 0.0);
  const std::vector<double> drops{kConvergenceP};
  const auto r = run_simulation(nodes, s, drops, 0.1 * kConvergenceN, 1);
  const auto& st = r.nodes.front();
  const double empirical = static_cast<double>(st.packets_lost) / static_cast<double>(st.packets_sent);
  const double band = 3.0 * std::sqrt(kConvergenceP * (1 - kConvergenceP) / kConvergenceN);
  const bool converged = st.packets_sent == kConvergenceN && std::abs(empirical - kConvergenceP) <= band;

  const bool ok = first_failure.empty() && deterministic == kRandomSims && converged;
  return {ok, std::to_string(kRandomSims) + " random runs " +
                  (first_failure.empty() ? "invariant-clean" : first_failure) + ", " +
                  std::to_string(deterministic) + " deterministic, loss " +
                  fmt(100 * empirical, 3) + "% over N=" + std::to_string(st.packets_sent) +
                  " (band +/-" + fmt(100 * band, 3) + " pp)"};
}

// 6. Monopole dimensions.
Outcome monopole() {
  const auto m = phy::monopole_dimensions(433e6);
  const bool ok = std::abs(m.element_len_m - kElementM) <= kMonopoleTolM &&
                  std::abs(m.radial_len_m - kRadialM) <= kMonopoleTolM && m.gain_dbi == kGainDbi &&
                  m.radial_angle_deg == 45.0;
  return {ok, "element " + fmt(100 * m.element_len_m, 3) + " cm, radials " +
                  fmt(100 * m.radial_len_m, 3) + " cm, gain " + fmt(m.gain_dbi, 2) + " dBi"};
}

// 7. Uplink dry run on a hand-built report.
Outcome uplink_dry_run() {
  using namespace tdma;
  SimReport r;
  auto ev = [](Nanoseconds t, EventKind k, std::uint16_t w, std::optional<std::uint64_t> seq = {},
               std::optional<std::int64_t> v = {}) { return Event{t, k, SyncWord(w), seq, v}; };
  r.timeline = {
      ev(0, EventKind::slot_open, 0x1A01),
      ev(1'000'000, EventKind::tx_start, 0x1A01, 0, 123),
      ev(60'000'000, EventKind::tx_end, 0x1A01, 0, 123),
      ev(60'000'000, EventKind::rx_ok, 0x1A01, 0, 123),
      ev(1'000'000'000, EventKind::slot_close, 0x1A01),
      ev(1'010'000'000, EventKind::slot_open, 0x1A02),
      ev(1'010'000'000, EventKind::tx_start, 0x1A02, 0, 45),
      ev(1'070'000'000, EventKind::tx_end, 0x1A02, 0, 45),
      ev(1'070'000'000, EventKind::rx_ok, 0x1A02, 0, 45),
      ev(2'010'000'000, EventKind::slot_close, 0x1A02),
      ev(2'020'000'000, EventKind::slot_open, 0x1A01),
      ev(2'020'000'000, EventKind::tx_start, 0x1A01, 1, 7),
      ev(2'080'000'000, EventKind::tx_end, 0x1A01, 1, 7),
      ev(2'080'000'000, EventKind::rx_ok, 0x1A01, 1, 7),
      ev(3'020'000'000, EventKind::slot_close, 0x1A01),
      ev(3'030'000'000, EventKind::slot_open, 0x1A02),
      ev(3'030'000'000, EventKind::tx_start, 0x1A02, 1, 400),
      ev(3'090'000'000, EventKind::tx_end, 0x1A02, 1, 400),
      ev(3'090'000'000, EventKind::rx_ok, 0x1A02, 1, 400),
      ev(4'030'000'000, EventKind::slot_close, 0x1A02),
  };
  r.nodes = {{SyncWord(0x1A01), 2, 2, 0, 0.0}, {SyncWord(0x1A02), 2, 2, 0, 0.0}};

  const uplink::KeyMap map{{SyncWord(0x1A01), {"KEY1", 1}}, {SyncWord(0x1A02), {"KEY1", 2}}};
  std::ostringstream log;
  uplink::DryRunTransport dry(log, [] { return std::int64_t{0}; });
  const auto sent = uplink::publish(uplink::bridge_sim_report(r, map, 1704067200), dry);
  const std::string expected =
      "2024-01-01T00:00:00Z UPLINK GET /update?api_key=KEY1&field1=123&created_at=2024-01-01T00%3A00%3A00Z\n"
      "2024-01-01T00:00:01Z UPLINK GET /update?api_key=KEY1&field2=45&created_at=2024-01-01T00%3A00%3A01Z\n"
      "2024-01-01T00:00:02Z UPLINK GET /update?api_key=KEY1&field1=7&created_at=2024-01-01T00%3A00%3A02Z\n"
      "2024-01-01T00:00:03Z UPLINK GET /update?api_key=KEY1&field2=400&created_at=2024-01-01T00%3A00%3A03Z\n";
  const bool ok = sent == 4 && log.str() == expected;
  return {ok, std::to_string(sent) + " request lines, " +
                  (log.str() == expected ? "byte-exact" : "MISMATCH:\n" + log.str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"excess-loss grid reconstruction", excess_loss_reconstruction},
      {"default recommendation", recommendation},
      {"airtime oracle equivalence", airtime_oracle},
      {"link-budget properties", link_budget_properties},
      {"TDMA simulator suite", tdma_suite},
      {"monopole dimensions", monopole},
      {"uplink dry run", uplink_dry_run},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
