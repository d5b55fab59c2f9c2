#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alarms/alert_level.hpp"

namespace alarms {

struct Sensor {
  std::string id;
  std::string category;  // UI grouping only
};

struct Hazard {
  std::string id;
};

struct MatrixCell {
  std::string sensor;
  std::string hazard;
  AlertLevel cap;
};

// Sensors x hazards capability grid. A present cell holds the highest alert
// the sensor can issue for that hazard; an absent cell means the sensor is
// blind to it. Immutable once constructed.
class HazardMatrix {
 public:
  // Validates: unique non-empty ids, caps >= Advisory, no duplicate cells,
  // every sensor and every hazard has at least one cell.
  HazardMatrix(std::vector<Sensor> sensors, std::vector<Hazard> hazards,
               const std::vector<MatrixCell>& cells);

  const std::vector<Sensor>& sensors() const { return sensors_; }
  const std::vector<Hazard>& hazards() const { return hazards_; }
  int num_sensors() const { return static_cast<int>(sensors_.size()); }
  int num_hazards() const { return static_cast<int>(hazards_.size()); }

  // Throws ValidationError on unknown ids.
  int sensor_index(std::string_view id) const;
  int hazard_index(std::string_view id) const;
  std::optional<int> find_sensor(std::string_view id) const;
  std::optional<int> find_hazard(std::string_view id) const;

  std::optional<AlertLevel> cap(int sensor, int hazard) const {
    return caps_[static_cast<std::size_t>(sensor * num_hazards() + hazard)];
  }

  // Cells in sensor-major order.
  std::vector<MatrixCell> cells() const;
  int num_cells() const;

  std::vector<int> hazards_of(int sensor) const;
  std::vector<int> sensors_of(int hazard) const;

 private:
  std::vector<Sensor> sensors_;
  std::vector<Hazard> hazards_;
  std::vector<std::optional<AlertLevel>> caps_;
};

HazardMatrix parse_matrix(std::string_view text);
std::string serialize_matrix(const HazardMatrix& matrix);
HazardMatrix load_matrix_file(const std::string& path);

// Nominal when the sensor cannot alert on the hazard.
AlertLevel max_alert(const HazardMatrix& matrix, std::string_view sensor,
                     std::string_view hazard);

}  // namespace alarms
