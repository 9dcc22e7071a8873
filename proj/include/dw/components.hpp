#pragma once

// Building-component data model: studs, drywall panels, the wall they live
// on, and the append-only action history of placements.
//
// Geometry is kept in inches. Panel width/length are kept in feet because
// that is how the action history reports them.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace dw {

struct StudId {
  std::uint32_t value = 0;
  auto operator<=>(const StudId&) const = default;
};

struct PanelId {
  std::uint32_t value = 0;
  auto operator<=>(const PanelId&) const = default;
};

std::string to_string(StudId id);
std::string to_string(PanelId id);

// Parses a 6-digit identifier token; empty when the token is not one.
std::optional<std::uint32_t> parse_component_id(std::string_view token);

enum class SizeClass { standard, unique_a, unique_b };
enum class LeftCent { left, center };
enum class VerHor { vertical, horizontal };
enum class TopBtm { top, bottom, none };

std::string_view to_string(SizeClass v);
std::string_view to_string(LeftCent v);
std::string_view to_string(VerHor v);
std::string_view to_string(TopBtm v);
SizeClass size_class_from_string(std::string_view s);
LeftCent left_cent_from_string(std::string_view s);
VerHor ver_hor_from_string(std::string_view s);
TopBtm top_btm_from_string(std::string_view s);

struct Stud {
  StudId id;
  int index = 0;  // 0..N-1, left to right
  double center_x = 0;
  double width = 0;
  double height = 0;

  double left_face() const { return center_x - width / 2; }
  bool operator==(const Stud&) const = default;
};

struct Panel {
  PanelId id;
  double w = 0;  // feet
  double l = 0;  // feet
  SizeClass size_class = SizeClass::standard;
  double floor_x = 0;  // inches, left edge of the floor position
  int floor_column = 0;
  int floor_row = 0;
  bool installed = false;

  double width_in() const;
  double length_in() const;
  bool operator==(const Panel&) const = default;
};

struct ComponentTables {
  std::vector<Stud> studs;  // ordered by index
  std::vector<Panel> panels;
  double wall_width = 0;
  double wall_height = 0;

  const Stud* find_stud(StudId id) const;
  const Panel* find_panel(PanelId id) const;
  Panel* find_panel(PanelId id);

  // Horizontal wall extent. The wall starts at the left face of the first
  // stud, so a panel hung on that stud's left line is in bounds.
  double wall_x_min() const;
  double wall_x_max() const { return wall_x_min() + wall_width; }

  bool operator==(const ComponentTables&) const = default;
};

// Inches with sub-micro noise removed; keeps 12 * (32/12) equal to 32.
double snap_inches(double inches);

ComponentTables load_components(const nlohmann::json& doc);
ComponentTables load_components(std::istream& in);
ComponentTables load_components_file(const std::filesystem::path& path);
nlohmann::json to_json(const ComponentTables& tables);

// Throws SchemaError naming the first offending record.
void validate(const ComponentTables& tables);

// 13 studs at 16 in on center and a 3x3 floor inventory of standard,
// 32 in and 16 in panels (ids 500300 + 10 * row + column).
ComponentTables default_fixture();

struct ActionRecord {
  StudId stud_id;
  double installed_x_left = 0;
  double installed_x_right = 0;
  LeftCent left_cent = LeftCent::left;
  VerHor ver_hor = VerHor::vertical;
  TopBtm top_btm = TopBtm::none;
  PanelId drywall_id;
  double w = 0;  // feet
  double l = 0;  // feet

  bool operator==(const ActionRecord&) const = default;
};

// Throws SchemaError when the record breaks a width/orientation invariant.
void validate(const ActionRecord& record);

nlohmann::json to_json(const ActionRecord& record);
ActionRecord action_record_from_json(const nlohmann::json& j);

inline constexpr std::string_view kActionHistoryHeader =
    "stud_id,installed_x_left,installed_x_right,left_cent,ver_hor,top_btm,drywall_id,w,l";

class ActionHistory {
 public:
  ActionHistory() = default;

  const std::vector<ActionRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  bool contains(PanelId id) const;

  bool operator==(const ActionHistory&) const = default;

 private:
  friend ActionHistory append_action(ActionHistory history, ActionRecord record);
  friend ActionHistory drop_latest(ActionHistory history);
  std::vector<ActionRecord> records_;
};

// Throws AlreadyInstalledError when record.drywall_id is already present.
ActionHistory append_action(ActionHistory history, ActionRecord record);
ActionHistory drop_latest(ActionHistory history);
std::optional<ActionRecord> latest_action(const ActionHistory& history);

std::string to_csv(const ActionHistory& history);
// One row of the CSV export, in header order.
std::vector<std::string> csv_fields(const ActionRecord& record);
nlohmann::json to_json(const ActionHistory& history);
ActionHistory action_history_from_json(const nlohmann::json& j);

// Shortest decimal form used by CSV/SVG output ("-0.75", "4", "2.6667").
std::string format_number(double v, int max_decimals = 4);

}  // namespace dw
