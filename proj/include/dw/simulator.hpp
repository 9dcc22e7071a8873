#pragma once

// 2D wall simulator. Executes robot commands as axis-aligned panel
// rectangles on the stud wall and checks that they stay on the wall and do
// not overlap.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dw/components.hpp"
#include "dw/error.hpp"
#include "dw/grounding.hpp"

namespace dw::sim {

// Inches; y grows upward from the floor.
struct Rect {
  double x_left = 0;
  double x_right = 0;
  double y_bottom = 0;
  double y_top = 0;

  bool operator==(const Rect&) const = default;
};

// True when the interiors intersect. Rectangles sharing an edge do not.
bool interiors_overlap(const Rect& a, const Rect& b);

struct PlacedPanel {
  PanelId panel_id;
  Rect rect;

  bool operator==(const PlacedPanel&) const = default;
};

class SimulationError : public Error {
 public:
  enum class Kind { unknown_component, already_installed, overlap, out_of_bounds, empty_history };

  SimulationError(Kind kind, const std::string& message, std::optional<PanelId> other = std::nullopt)
      : Error(message), kind_(kind), other_(other) {}

  Kind kind() const { return kind_; }
  // The placed panel an overlapping command collides with.
  std::optional<PanelId> other_panel() const { return other_; }

 private:
  Kind kind_;
  std::optional<PanelId> other_;
};

std::string_view to_string(SimulationError::Kind kind);

// Immutable snapshot; apply/undo return new states.
struct WallState {
  ComponentTables tables;  // installed flags follow the placements
  std::vector<PlacedPanel> placed;
  ActionHistory history;

  bool operator==(const WallState&) const = default;
};

WallState initial_state(ComponentTables tables);

// Vertical: 12w wide, 12l tall, from the floor up. Horizontal: 12l wide,
// 12w tall, against the wall top or the floor.
Rect placement_rect(const ActionRecord& record, const Panel& panel, const ComponentTables& tables);

WallState apply(const WallState& state, const RobotCommand& cmd);
// Removes the latest placement and puts that panel back on the floor.
WallState undo_last(const WallState& state);

struct LayoutEntry {
  SizeClass size_class;
  VerHor orientation;

  auto operator<=>(const LayoutEntry&) const = default;
};

// Expected panel kinds for layouts 1-3, sorted. Throws Error for other ids.
std::vector<LayoutEntry> layout_expectation(int layout_id);

struct LayoutReport {
  int layout_id = 0;
  bool pass = false;
  std::vector<std::string> diffs;
};

LayoutReport verify_layout(const WallState& state, int layout_id);

// Deterministic SVG: wall outline, studs, placed panels labelled with their
// ids, and the remaining floor inventory.
std::string render_svg(const WallState& state);

nlohmann::json to_json(const WallState& state);

// Scripted demo file: one instruction per line; blank lines and `#` comments
// are skipped.
std::vector<std::string> read_script(const std::filesystem::path& path);

}  // namespace dw::sim
