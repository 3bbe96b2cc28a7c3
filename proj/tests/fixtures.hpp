#pragma once

#include <string>

#include "loralink/dataset.hpp"

#ifndef LORALINK_DATA_DIR
#error "LORALINK_DATA_DIR must be defined"
#endif

inline std::string data_path(const std::string& name) {
  return std::string(LORALINK_DATA_DIR) + "/" + name;
}

inline const loralink::dataset::MeasurementTable& field_table() {
  static const auto table = loralink::dataset::load_measurements_file(
      data_path("field_measurements.csv"), loralink::dataset::LoadMode::validated);
  return table;
}
