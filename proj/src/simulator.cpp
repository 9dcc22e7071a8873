#include "dw/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace dw::sim {

namespace {

constexpr double kEps = 1e-9;

std::string n(double v) { return format_number(v, 4); }

}  // namespace

bool interiors_overlap(const Rect& a, const Rect& b) {
  return a.x_left < b.x_right - kEps && b.x_left < a.x_right - kEps && a.y_bottom < b.y_top - kEps &&
         b.y_bottom < a.y_top - kEps;
}

std::string_view to_string(SimulationError::Kind kind) {
  using K = SimulationError::Kind;
  switch (kind) {
    case K::unknown_component: return "unknown_component";
    case K::already_installed: return "already_installed";
    case K::overlap: return "overlap";
    case K::out_of_bounds: return "out_of_bounds";
    case K::empty_history: return "empty_history";
  }
  return "unknown";
}

WallState initial_state(ComponentTables tables) {
  validate(tables);
  WallState s;
  s.tables = std::move(tables);
  return s;
}

Rect placement_rect(const ActionRecord& record, const Panel& panel, const ComponentTables& tables) {
  Rect r;
  r.x_left = record.installed_x_left;
  r.x_right = record.installed_x_right;
  if (record.ver_hor == VerHor::vertical) {
    r.y_bottom = 0;
    r.y_top = panel.length_in();
  } else if (record.top_btm == TopBtm::top) {
    r.y_top = tables.wall_height;
    r.y_bottom = snap_inches(tables.wall_height - panel.width_in());
  } else {
    r.y_bottom = 0;
    r.y_top = panel.width_in();
  }
  return r;
}

WallState apply(const WallState& state, const RobotCommand& cmd) {
  using K = SimulationError::Kind;
  const Panel* panel = state.tables.find_panel(cmd.target_panel_id);
  if (!panel) throw SimulationError(K::unknown_component, "no panel with id " + to_string(cmd.target_panel_id));
  if (!state.tables.find_stud(cmd.destination_stud_id)) {
    throw SimulationError(K::unknown_component, "no stud with id " + to_string(cmd.destination_stud_id));
  }
  if (panel->installed || state.history.contains(panel->id)) {
    throw SimulationError(K::already_installed, "panel " + to_string(panel->id) + " is already installed");
  }
  const ActionRecord record = make_action_record(cmd, state.tables);
  const Rect r = placement_rect(record, *panel, state.tables);
  const auto& t = state.tables;
  if (r.x_left < t.wall_x_min() - kEps || r.x_right > t.wall_x_max() + kEps || r.y_bottom < -kEps ||
      r.y_top > t.wall_height + kEps) {
    throw SimulationError(K::out_of_bounds, "panel " + to_string(panel->id) + " at x " + n(r.x_left) + ".." +
                                                n(r.x_right) + ", y " + n(r.y_bottom) + ".." + n(r.y_top) +
                                                " leaves the wall");
  }
  for (const auto& p : state.placed) {
    if (interiors_overlap(r, p.rect)) {
      throw SimulationError(K::overlap, "panel " + to_string(panel->id) + " overlaps panel " + to_string(p.panel_id),
                            p.panel_id);
    }
  }
  WallState next = state;
  next.tables.find_panel(panel->id)->installed = true;
  next.placed.push_back({panel->id, r});
  next.history = append_action(std::move(next.history), record);
  return next;
}

WallState undo_last(const WallState& state) {
  if (state.history.empty() || state.placed.empty()) {
    throw SimulationError(SimulationError::Kind::empty_history, "nothing to undo");
  }
  WallState next = state;
  const PanelId id = next.placed.back().panel_id;
  next.placed.pop_back();
  next.history = drop_latest(std::move(next.history));
  if (Panel* p = next.tables.find_panel(id)) p->installed = false;
  return next;
}

std::vector<LayoutEntry> layout_expectation(int layout_id) {
  using S = SizeClass;
  constexpr auto V = VerHor::vertical;
  constexpr auto H = VerHor::horizontal;
  std::vector<LayoutEntry> e;
  switch (layout_id) {
    case 1: e = {{S::unique_b, V}, {S::standard, V}, {S::standard, V}, {S::unique_a, V}}; break;
    case 2: e = {{S::unique_b, V}, {S::unique_a, V}, {S::standard, H}, {S::standard, H}}; break;
    case 3:
      e = {{S::unique_b, V}, {S::unique_a, V}, {S::unique_b, V}, {S::unique_a, V}, {S::unique_b, V}, {S::unique_a, V}};
      break;
    default: throw Error("unknown layout id " + std::to_string(layout_id) + " (expected 1, 2 or 3)");
  }
  std::sort(e.begin(), e.end());
  return e;
}

LayoutReport verify_layout(const WallState& state, int layout_id) {
  LayoutReport report;
  report.layout_id = layout_id;
  const auto expected = layout_expectation(layout_id);
  std::vector<LayoutEntry> actual;
  for (const auto& rec : state.history.records()) {
    const Panel* p = state.tables.find_panel(rec.drywall_id);
    if (p) actual.push_back({p->size_class, rec.ver_hor});
  }
  std::sort(actual.begin(), actual.end());

  std::vector<LayoutEntry> missing, extra;
  std::set_difference(expected.begin(), expected.end(), actual.begin(), actual.end(), std::back_inserter(missing));
  std::set_difference(actual.begin(), actual.end(), expected.begin(), expected.end(), std::back_inserter(extra));
  // A missing and an extra entry of the same size class is an orientation mismatch.
  for (auto m = missing.begin(); m != missing.end();) {
    auto x = std::find_if(extra.begin(), extra.end(), [&](const LayoutEntry& e) { return e.size_class == m->size_class; });
    if (x == extra.end()) {
      ++m;
      continue;
    }
    report.diffs.push_back("orientation: " + std::string(to_string(m->size_class)) + " panel expected " +
                           std::string(to_string(m->orientation)) + ", placed " + std::string(to_string(x->orientation)));
    extra.erase(x);
    m = missing.erase(m);
  }
  for (const auto& m : missing) {
    report.diffs.push_back("missing: " + std::string(to_string(m.size_class)) + " " + std::string(to_string(m.orientation)));
  }
  for (const auto& x : extra) {
    report.diffs.push_back("unexpected: " + std::string(to_string(x.size_class)) + " " +
                           std::string(to_string(x.orientation)));
  }
  report.pass = report.diffs.empty();
  return report;
}

std::string render_svg(const WallState& state) {
  const auto& t = state.tables;
  constexpr double margin = 20;
  constexpr double floor_gap = 40;
  constexpr double floor_row_h = 30;
  int rows = 0;
  double floor_right = 0;
  for (const auto& p : t.panels) {
    rows = std::max(rows, p.floor_row + 1);
    floor_right = std::max(floor_right, p.floor_x + p.width_in());
  }
  const double x0 = margin - t.wall_x_min();  // svg x of wall coordinate 0
  const double wall_top = margin;
  const double floor_top = wall_top + t.wall_height + floor_gap;
  const double width = margin * 2 + std::max(t.wall_width, floor_right - t.wall_x_min());
  const double height = floor_top + rows * floor_row_h + margin;
  auto sx = [&](double x) { return n(x + x0); };
  auto sy = [&](double y) { return n(wall_top + t.wall_height - y); };  // flip: wall y grows upward

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << n(width) << "\" height=\"" << n(height)
      << "\" viewBox=\"0 0 " << n(width) << ' ' << n(height) << "\">\n";
  out << "<rect class=\"wall\" x=\"" << sx(t.wall_x_min()) << "\" y=\"" << n(wall_top) << "\" width=\""
      << n(t.wall_width) << "\" height=\"" << n(t.wall_height) << "\" fill=\"#f4f1ea\" stroke=\"#555\"/>\n";
  for (const auto& s : t.studs) {
    out << "<rect class=\"stud\" data-id=\"" << to_string(s.id) << "\" x=\"" << sx(s.left_face()) << "\" y=\""
        << sy(s.height) << "\" width=\"" << n(s.width) << "\" height=\"" << n(s.height)
        << "\" fill=\"#b08850\"/>\n";
  }
  for (const auto& p : state.placed) {
    const auto& r = p.rect;
    out << "<rect class=\"placed-panel\" data-id=\"" << to_string(p.panel_id) << "\" x=\"" << sx(r.x_left)
        << "\" y=\"" << sy(r.y_top) << "\" width=\"" << n(r.x_right - r.x_left) << "\" height=\""
        << n(r.y_top - r.y_bottom) << "\" fill=\"#d9e4ef\" fill-opacity=\"0.85\" stroke=\"#2a4d69\"/>\n";
    out << "<text class=\"label\" x=\"" << sx((r.x_left + r.x_right) / 2) << "\" y=\""
        << sy((r.y_bottom + r.y_top) / 2) << "\" font-size=\"8\" text-anchor=\"middle\">" << to_string(p.panel_id)
        << "</text>\n";
  }
  for (const auto& p : t.panels) {
    if (p.installed) continue;
    const double y = floor_top + p.floor_row * floor_row_h;
    out << "<rect class=\"floor-panel\" data-id=\"" << to_string(p.id) << "\" x=\"" << n(margin + p.floor_x)
        << "\" y=\"" << n(y) << "\" width=\"" << n(p.width_in()) << "\" height=\"" << n(floor_row_h - 6)
        << "\" fill=\"#eeeeee\" stroke=\"#777\"/>\n";
    out << "<text class=\"label\" x=\"" << n(margin + p.floor_x + p.width_in() / 2) << "\" y=\""
        << n(y + (floor_row_h - 6) / 2 + 3) << "\" font-size=\"8\" text-anchor=\"middle\">" << to_string(p.id)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

nlohmann::json to_json(const WallState& state) {
  nlohmann::json doc = to_json(state.tables);
  doc["wall"] = {{"x_min", state.tables.wall_x_min()},
                 {"x_max", state.tables.wall_x_max()},
                 {"width", state.tables.wall_width},
                 {"height", state.tables.wall_height}};
  auto placed = nlohmann::json::array();
  for (const auto& p : state.placed) {
    placed.push_back({{"panel_id", p.panel_id.value},
                      {"x_left", p.rect.x_left},
                      {"x_right", p.rect.x_right},
                      {"y_bottom", p.rect.y_bottom},
                      {"y_top", p.rect.y_top}});
  }
  doc["placed"] = std::move(placed);
  auto remaining = nlohmann::json::array();
  for (const auto& p : state.tables.panels) {
    if (!p.installed) remaining.push_back(p.id.value);
  }
  doc["remaining"] = std::move(remaining);

  auto columns = nlohmann::json::array();
  std::string header(kActionHistoryHeader);
  std::istringstream hs(header);
  for (std::string col; std::getline(hs, col, ',');) columns.push_back(col);
  auto rows = nlohmann::json::array();
  for (const auto& r : state.history.records()) {
    rows.push_back({r.stud_id.value, r.installed_x_left, r.installed_x_right, to_string(r.left_cent),
                    to_string(r.ver_hor), to_string(r.top_btm), r.drywall_id.value, r.w, r.l});
  }
  doc["history"] = {{"columns", std::move(columns)}, {"rows", std::move(rows)}};
  return doc;
}

std::vector<std::string> read_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open script " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    lines.push_back(line.substr(b));
  }
  return lines;
}

}  // namespace dw::sim
