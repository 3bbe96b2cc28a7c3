#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "loralink/error.hpp"

using namespace loralink;
using namespace loralink::dataset;

namespace {

const std::string kHeader = std::string(kCsvHeader) + "\n";

MeasurementTable parse(const std::string& text, LoadMode mode = LoadMode::validated) {
  std::istringstream in(text);
  return load_measurements(in, mode);
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("field fixture loads completely") {
  const auto& t = field_table();
  CHECK(t.size() == 40);
  CHECK(t.grid_records().size() == 36);
  CHECK(t.cr_sweep(8, 250000).size() == 4);
  for (int sf : kGridSpreadingFactors)
    for (double bw : kGridBandwidthsHz) CHECK_NOTHROW(t.cell(sf, bw));
}

TEST_CASE("lookup") {
  const auto& t = field_table();
  CHECK(*lookup(t, 7, 250000).rssi_dbm == -80.5);
  CHECK(lookup(t, 8, 10400).snr_db == 11.55);
  CHECK(*lookup(t, 7, 10400).loss_pct == 54.0);
  CHECK(code_of([&] { lookup(t, 6, 250000); }) == ErrorCode::not_found);
  CHECK(code_of([&] { lookup(t, 7, 250000, CodingRate(5)); }) == ErrorCode::not_found);
  CHECK(code_of([&] { t.cell(7, 130000); }) == ErrorCode::not_found);
}

TEST_CASE("header-only and comment handling") {
  CHECK(parse(kHeader).empty());
  CHECK(parse("# provenance\n\n" + kHeader + "\n").empty());
  CHECK(parse(kHeader + "7,10.4,4,8,-92.8,8.4,54\r\n").size() == 1);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("sf,bw,cr\n"), ParseError);
}

TEST_CASE("malformed rows carry line numbers") {
  try {
    parse("# c\n" + kHeader + "7,10.4,4,8,-92.8,8.4,54\n7,20.8,4,8,-90\n");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  try {
    parse(kHeader + "7,10.4,4,8,abc,8.4,54\n");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("range and grid violations") {
  CHECK(code_of([] { parse(kHeader + "7,10.4,4,8,-92.8,8.4,101\n"); }) ==
        ErrorCode::validation);
  CHECK(code_of([] { parse(kHeader + "7,10.4,4,8,-92.8,8.4,-1\n"); }) ==
        ErrorCode::validation);
  CHECK(code_of([] { parse(kHeader + "7,10.4,4,8,3,8.4,0\n"); }) == ErrorCode::validation);
  CHECK(code_of([] { parse(kHeader + "6,10.4,4,8,-92.8,8.4,0\n"); }) == ErrorCode::validation);
  CHECK(code_of([] { parse(kHeader + "7,11,4,8,-92.8,8.4,0\n"); }) == ErrorCode::validation);
  CHECK(code_of([] { parse(kHeader + "7,10.4,4,5,-92.8,8.4,0\n"); }) == ErrorCode::validation);
  CHECK(code_of([] { parse(kHeader + "7,10.4,4,8,-92.8,8.4,\n"); }) == ErrorCode::validation);
  // Freeform lifts grid membership and the sign of RSSI, not the loss range.
  CHECK(parse(kHeader + "6,11,4,8,3,8.4,0\n", LoadMode::freeform).size() == 1);
  CHECK(code_of([] { parse(kHeader + "7,11,4,8,-92.8,8.4,101\n", LoadMode::freeform); }) ==
        ErrorCode::validation);
}

TEST_CASE("duplicate keys conflict") {
  const std::string row = "7,10.4,4,8,-92.8,8.4,54\n";
  CHECK(code_of([&] { parse(kHeader + row + row); }) == ErrorCode::conflict);
  // The same (sf, bw, cr) may appear once per sweep kind.
  const auto t = parse(kHeader + "8,250,4,8,-85,7,0\n8,250,4,8,,9.75,\n");
  CHECK(t.size() == 2);
  CHECK(t.cell(8, 250000).snr_db == 7);
  CHECK(t.cr_sweep(8, 250000).front().snr_db == 9.75);
  const auto two = parse(kHeader + "8,250,4,8,-85,7,0\n8,250,5,8,-86,7,0\n");
  CHECK(code_of([&] { two.cell(8, 250000); }) == ErrorCode::conflict);
}

TEST_CASE("property: write/load round-trip") {
  std::ostringstream out;
  write_measurements(field_table(), out);
  const auto again = parse(out.str());
  REQUIRE(again.size() == field_table().size());
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again.records()[i] == field_table().records()[i]);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rssi(-140, -1), snr(-20, 20), loss(0, 100);
  for (int trial = 0; trial < 50; ++trial) {
    MeasurementTable t;
    for (int sf : kGridSpreadingFactors)
      for (double bw : kGridBandwidthsHz) {
        if (rng() % 3 == 0) continue;
        MeasurementRecord r;
        r.sf = sf;
        r.bw_hz = bw;
        r.cr = CodingRate(4 + static_cast<int>(rng() % 4));
        r.rssi_dbm = rssi(rng);
        r.snr_db = snr(rng);
        r.loss_pct = loss(rng);
        t.add(r);
      }
    std::ostringstream o;
    write_measurements(t, o);
    const auto back = parse(o.str());
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) REQUIRE(back.records()[i] == t.records()[i]);
  }
}

TEST_CASE("reconstruction anchors") {
  const auto grid = reconstruct_excess_loss(field_table(), LinkParams{}, 20.0);
  // row = bandwidth index, column = SF - 7
  CHECK(std::abs(grid[0][0] - 24.532) < 0.05);
  CHECK(std::abs(grid[5][5] - 39.175) < 0.05);
  CHECK(std::abs(grid[4][3] - 39.998) < 0.05);
  CHECK(std::abs(grid[2][2] - 40.198) < 0.05);
}

TEST_CASE("reconstruction is order-insensitive and reports missing cells") {
  std::ostringstream out;
  write_measurements(field_table(), out);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  std::mt19937 rng(17);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::string shuffled = header + "\n";
  for (const auto& r : rows) shuffled += r + "\n";
  const auto a = reconstruct_excess_loss(field_table(), LinkParams{}, 20.0);
  const auto b = reconstruct_excess_loss(parse(shuffled), LinkParams{}, 20.0);
  CHECK(a == b);

  std::string missing = header + "\n";
  for (const auto& r : rows)
    if (r.rfind("11,125,", 0) != 0) missing += r + "\n";
  try {
    reconstruct_excess_loss(parse(missing), LinkParams{}, 20.0);
    FAIL("expected missing cell");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_found);
    CHECK(std::string(e.what()).find("SF 11, BW 125") != std::string::npos);
  }
}

TEST_CASE("grid files") {
  const auto expected = read_grid_file(data_path("expected_excess_loss.csv"));
  CHECK(expected[0][0] == 24.532);
  CHECK(expected[5][5] == 39.175);
  std::ostringstream out;
  write_grid(expected, out, 3);
  std::istringstream in(out.str());
  CHECK(read_grid(in) == expected);

  std::istringstream short_grid("bw_khz,sf7,sf8,sf9,sf10,sf11,sf12\n10.4,1,2,3,4,5,6\n");
  CHECK_THROWS_AS(read_grid(short_grid), Error);
  std::istringstream bad_row("bw_khz,sf7,sf8,sf9,sf10,sf11,sf12\n11,1,2,3,4,5,6\n");
  CHECK_THROWS_AS(read_grid(bad_row), Error);
  CHECK_THROWS_AS(read_grid_file("/nonexistent/grid.csv"), Error);
}

TEST_CASE("grid comparison") {
  Grid a{};
  Grid b{};
  auto cmp = compare_grids(a, b, 0.0);
  CHECK(cmp.max_abs_deviation == 0.0);
  CHECK(cmp.failing_cells.empty());
  b[3][2] = 0.2;
  b[1][4] = -0.1;
  cmp = compare_grids(a, b, 0.15);
  CHECK(cmp.max_abs_deviation == doctest::Approx(0.2));
  CHECK(cmp.worst_sf == 9);
  CHECK(cmp.worst_bw_hz == 125000);
  REQUIRE(cmp.failing_cells.size() == 1);
  CHECK(compare_grids(a, b, 0.05).failing_cells.size() == 2);
}
