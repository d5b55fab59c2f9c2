#include "alarms/hazard_matrix.hpp"

#include <set>

#include "alarms/error.hpp"
#include "json_util.hpp"

namespace alarms {

using detail::json;

HazardMatrix::HazardMatrix(std::vector<Sensor> sensors,
                           std::vector<Hazard> hazards,
                           const std::vector<MatrixCell>& cells)
    : sensors_(std::move(sensors)), hazards_(std::move(hazards)) {
  std::set<std::string> seen;
  for (const auto& s : sensors_) {
    if (s.id.empty()) throw ValidationError("sensor id must be non-empty");
    if (!seen.insert(s.id).second) {
      throw ValidationError("duplicate sensor id '" + s.id + "'");
    }
  }
  seen.clear();
  for (const auto& h : hazards_) {
    if (h.id.empty()) throw ValidationError("hazard id must be non-empty");
    if (!seen.insert(h.id).second) {
      throw ValidationError("duplicate hazard id '" + h.id + "'");
    }
  }

  caps_.assign(sensors_.size() * hazards_.size(), std::nullopt);
  for (const auto& cell : cells) {
    int s = sensor_index(cell.sensor);
    int h = hazard_index(cell.hazard);
    if (cell.cap == AlertLevel::kNominal) {
      throw ValidationError("cell (" + cell.sensor + ", " + cell.hazard +
                            ") has cap Nominal; omit the cell instead");
    }
    auto& slot = caps_[static_cast<std::size_t>(s * num_hazards() + h)];
    if (slot) {
      throw ValidationError("duplicate cell (" + cell.sensor + ", " +
                            cell.hazard + ")");
    }
    slot = cell.cap;
  }

  for (int s = 0; s < num_sensors(); ++s) {
    if (hazards_of(s).empty()) {
      throw ValidationError("orphan row: sensor '" + sensors_[s].id +
                            "' has no cells");
    }
  }
  for (int h = 0; h < num_hazards(); ++h) {
    if (sensors_of(h).empty()) {
      throw ValidationError("orphan column: hazard '" + hazards_[h].id +
                            "' has no cells");
    }
  }
}

std::optional<int> HazardMatrix::find_sensor(std::string_view id) const {
  for (int i = 0; i < num_sensors(); ++i) {
    if (sensors_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<int> HazardMatrix::find_hazard(std::string_view id) const {
  for (int i = 0; i < num_hazards(); ++i) {
    if (hazards_[i].id == id) return i;
  }
  return std::nullopt;
}

int HazardMatrix::sensor_index(std::string_view id) const {
  if (auto i = find_sensor(id)) return *i;
  throw ValidationError("unknown sensor '" + std::string(id) + "'");
}

int HazardMatrix::hazard_index(std::string_view id) const {
  if (auto i = find_hazard(id)) return *i;
  throw ValidationError("unknown hazard '" + std::string(id) + "'");
}

std::vector<MatrixCell> HazardMatrix::cells() const {
  std::vector<MatrixCell> out;
  for (int s = 0; s < num_sensors(); ++s) {
    for (int h = 0; h < num_hazards(); ++h) {
      if (auto c = cap(s, h)) out.push_back({sensors_[s].id, hazards_[h].id, *c});
    }
  }
  return out;
}

int HazardMatrix::num_cells() const {
  int n = 0;
  for (const auto& c : caps_) n += c.has_value();
  return n;
}

std::vector<int> HazardMatrix::hazards_of(int sensor) const {
  std::vector<int> out;
  for (int h = 0; h < num_hazards(); ++h) {
    if (cap(sensor, h)) out.push_back(h);
  }
  return out;
}

std::vector<int> HazardMatrix::sensors_of(int hazard) const {
  std::vector<int> out;
  for (int s = 0; s < num_sensors(); ++s) {
    if (cap(s, hazard)) out.push_back(s);
  }
  return out;
}

HazardMatrix parse_matrix(std::string_view text) {
  json doc = detail::parse_json_text(text);
  if (!doc.is_object()) throw ValidationError("matrix: expected an object");

  auto list = [&](const char* key) -> const json& {
    const json& v = detail::require(doc, key, "matrix");
    if (!v.is_array()) {
      throw ValidationError(std::string("matrix.") + key + ": expected a list");
    }
    return v;
  };

  std::vector<Sensor> sensors;
  const json& sensor_list = list("sensors");
  for (std::size_t i = 0; i < sensor_list.size(); ++i) {
    std::string where = "sensors[" + std::to_string(i) + "]";
    Sensor s;
    s.id = detail::require_string(sensor_list[i], "id", where);
    if (sensor_list[i].contains("category")) {
      s.category = detail::require_string(sensor_list[i], "category", where);
    }
    sensors.push_back(std::move(s));
  }

  std::vector<Hazard> hazards;
  const json& hazard_list = list("hazards");
  for (std::size_t i = 0; i < hazard_list.size(); ++i) {
    hazards.push_back(
        {detail::require_string(hazard_list[i], "id",
                                "hazards[" + std::to_string(i) + "]")});
  }

  std::vector<MatrixCell> cells;
  const json& cell_list = list("cells");
  for (std::size_t i = 0; i < cell_list.size(); ++i) {
    std::string where = "cells[" + std::to_string(i) + "]";
    MatrixCell c;
    c.sensor = detail::require_string(cell_list[i], "sensor", where);
    c.hazard = detail::require_string(cell_list[i], "hazard", where);
    std::string code = detail::require_string(cell_list[i], "cap", where);
    try {
      c.cap = parse_alert_level(code);
    } catch (const ValidationError&) {
      throw ValidationError(where + ".cap: unknown alert code '" + code + "'");
    }
    cells.push_back(std::move(c));
  }

  return HazardMatrix(std::move(sensors), std::move(hazards), cells);
}

std::string serialize_matrix(const HazardMatrix& matrix) {
  json doc;
  doc["sensors"] = json::array();
  for (const auto& s : matrix.sensors()) {
    doc["sensors"].push_back({{"id", s.id}, {"category", s.category}});
  }
  doc["hazards"] = json::array();
  for (const auto& h : matrix.hazards()) {
    doc["hazards"].push_back({{"id", h.id}});
  }
  doc["cells"] = json::array();
  for (const auto& c : matrix.cells()) {
    doc["cells"].push_back({{"sensor", c.sensor},
                            {"hazard", c.hazard},
                            {"cap", std::string(1, alert_code(c.cap))}});
  }
  return doc.dump(2) + "\n";
}

HazardMatrix load_matrix_file(const std::string& path) {
  return parse_matrix(detail::read_text_file(path));
}

AlertLevel max_alert(const HazardMatrix& matrix, std::string_view sensor,
                     std::string_view hazard) {
  auto c = matrix.cap(matrix.sensor_index(sensor), matrix.hazard_index(hazard));
  return c.value_or(AlertLevel::kNominal);
}

}  // namespace alarms
