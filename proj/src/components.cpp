#include "dw/components.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dw/error.hpp"

namespace dw {

namespace {

constexpr double kEps = 1e-6;

template <typename Enum, std::size_t N>
Enum enum_from(std::string_view s, const std::array<std::string_view, N>& names, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  throw SchemaError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 3> kSizeClassNames{"standard", "unique_a", "unique_b"};
constexpr std::array<std::string_view, 2> kLeftCentNames{"left", "center"};
constexpr std::array<std::string_view, 2> kVerHorNames{"vertical", "horizontal"};
constexpr std::array<std::string_view, 3> kTopBtmNames{"top", "bottom", "none"};

std::string stud_label(std::size_t i, const nlohmann::json& j) {
  std::string s = "studs[" + std::to_string(i) + "]";
  if (j.contains("id") && j["id"].is_number_integer()) s += " (id " + std::to_string(j["id"].get<long long>()) + ")";
  return s;
}

std::string panel_label(std::size_t i, const nlohmann::json& j) {
  std::string s = "panels[" + std::to_string(i) + "]";
  if (j.contains("id") && j["id"].is_number_integer()) s += " (id " + std::to_string(j["id"].get<long long>()) + ")";
  return s;
}

double require_number(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number()) {
    throw SchemaError(where + ": missing numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

std::uint32_t require_id(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer()) {
    throw SchemaError(where + ": missing integer field 'id'");
  }
  auto v = j["id"].get<long long>();
  if (v < 100000 || v > 999999) throw SchemaError(where + ": id must be a 6-digit number");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::string to_string(StudId id) { return std::to_string(id.value); }
std::string to_string(PanelId id) { return std::to_string(id.value); }

std::optional<std::uint32_t> parse_component_id(std::string_view token) {
  if (token.size() != 6) return std::nullopt;
  std::uint32_t v = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint32_t>(c - '0');
  }
  if (token[0] == '0') return std::nullopt;
  return v;
}

std::string_view to_string(SizeClass v) { return kSizeClassNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(LeftCent v) { return kLeftCentNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(VerHor v) { return kVerHorNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(TopBtm v) { return kTopBtmNames[static_cast<std::size_t>(v)]; }
SizeClass size_class_from_string(std::string_view s) {
  return enum_from<SizeClass>(s, kSizeClassNames, "size_class");
}
LeftCent left_cent_from_string(std::string_view s) { return enum_from<LeftCent>(s, kLeftCentNames, "left_cent"); }
VerHor ver_hor_from_string(std::string_view s) { return enum_from<VerHor>(s, kVerHorNames, "ver_hor"); }
TopBtm top_btm_from_string(std::string_view s) { return enum_from<TopBtm>(s, kTopBtmNames, "top_btm"); }

double snap_inches(double inches) { return std::round(inches * 1e6) / 1e6; }

double Panel::width_in() const { return snap_inches(w * 12.0); }
double Panel::length_in() const { return snap_inches(l * 12.0); }

const Stud* ComponentTables::find_stud(StudId id) const {
  auto it = std::find_if(studs.begin(), studs.end(), [&](const Stud& s) { return s.id == id; });
  return it == studs.end() ? nullptr : &*it;
}

const Panel* ComponentTables::find_panel(PanelId id) const {
  auto it = std::find_if(panels.begin(), panels.end(), [&](const Panel& p) { return p.id == id; });
  return it == panels.end() ? nullptr : &*it;
}

Panel* ComponentTables::find_panel(PanelId id) {
  auto it = std::find_if(panels.begin(), panels.end(), [&](const Panel& p) { return p.id == id; });
  return it == panels.end() ? nullptr : &*it;
}

double ComponentTables::wall_x_min() const { return studs.empty() ? 0.0 : studs.front().left_face(); }

void validate(const ComponentTables& t) {
  std::set<std::uint32_t> ids;
  for (std::size_t i = 0; i < t.studs.size(); ++i) {
    const Stud& s = t.studs[i];
    const std::string where = "studs[" + std::to_string(i) + "] (id " + to_string(s.id) + ")";
    if (!ids.insert(s.id.value).second) throw SchemaError(where + ": duplicate id");
    if (s.index != static_cast<int>(i)) throw SchemaError(where + ": index out of order");
    if (!(s.width > 0) || !(s.height > 0)) throw SchemaError(where + ": non-positive dimension");
    if (i > 0 && !(s.center_x > t.studs[i - 1].center_x)) {
      throw SchemaError(where + ": stud positions must increase left to right");
    }
    if (s.center_x < -kEps || s.center_x > t.wall_width + kEps) {
      throw SchemaError(where + ": center_x outside the wall");
    }
    if (std::abs(s.height - t.wall_height) > kEps) throw SchemaError(where + ": height differs from wall height");
  }
  if (!(t.wall_width > 0) || !(t.wall_height > 0)) throw SchemaError("wall: non-positive dimension");

  std::set<std::uint32_t> panel_ids;
  for (std::size_t i = 0; i < t.panels.size(); ++i) {
    const Panel& p = t.panels[i];
    const std::string where = "panels[" + std::to_string(i) + "] (id " + to_string(p.id) + ")";
    if (!panel_ids.insert(p.id.value).second || ids.count(p.id.value)) throw SchemaError(where + ": duplicate id");
    if (!(p.w > 0) || !(p.l > 0)) throw SchemaError(where + ": non-positive dimension");
    if (p.size_class == SizeClass::standard && (std::abs(p.w - 4) > kEps || std::abs(p.l - 8) > kEps)) {
      throw SchemaError(where + ": standard panels are 4 x 8 ft");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Panel& q = t.panels[j];
      if (q.floor_column == p.floor_column && std::abs(q.floor_x - p.floor_x) > kEps) {
        throw SchemaError(where + ": panels in floor column " + std::to_string(p.floor_column) +
                          " disagree on floor_x");
      }
    }
  }
}

ComponentTables load_components(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("component document must be an object");
  ComponentTables t;
  if (!doc.contains("wall") || !doc["wall"].is_object()) throw SchemaError("wall: missing object");
  t.wall_width = require_number(doc["wall"], "width_in", "wall");
  t.wall_height = require_number(doc["wall"], "height_in", "wall");

  if (!doc.contains("studs") || !doc["studs"].is_array()) throw SchemaError("studs: missing array");
  const auto& studs = doc["studs"];
  for (std::size_t i = 0; i < studs.size(); ++i) {
    const auto where = stud_label(i, studs[i]);
    Stud s;
    s.id = StudId{require_id(studs[i], where)};
    s.index = static_cast<int>(i);
    s.center_x = require_number(studs[i], "center_x_in", where);
    s.width = require_number(studs[i], "width_in", where);
    s.height = require_number(studs[i], "height_in", where);
    t.studs.push_back(s);
  }

  if (doc.contains("panels")) {
    const auto& panels = doc["panels"];
    if (!panels.is_array()) throw SchemaError("panels: must be an array");
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const auto where = panel_label(i, panels[i]);
      Panel p;
      p.id = PanelId{require_id(panels[i], where)};
      p.w = require_number(panels[i], "w_ft", where);
      p.l = require_number(panels[i], "l_ft", where);
      if (!panels[i].contains("size_class") || !panels[i]["size_class"].is_string()) {
        throw SchemaError(where + ": missing string field 'size_class'");
      }
      try {
        p.size_class = size_class_from_string(panels[i]["size_class"].get<std::string>());
      } catch (const SchemaError& e) {
        throw SchemaError(where + ": " + e.what());
      }
      p.floor_x = require_number(panels[i], "floor_x_in", where);
      p.floor_column = static_cast<int>(require_number(panels[i], "floor_column", where));
      p.floor_row = static_cast<int>(require_number(panels[i], "floor_row", where));
      if (panels[i].contains("installed")) p.installed = panels[i]["installed"].get<bool>();
      t.panels.push_back(p);
    }
  }
  validate(t);
  return t;
}

ComponentTables load_components(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("component document is not valid JSON: ") + e.what());
  }
  return load_components(doc);
}

ComponentTables load_components_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open component document " + path.string());
  return load_components(in);
}

nlohmann::json to_json(const ComponentTables& t) {
  nlohmann::json doc;
  doc["wall"] = {{"width_in", t.wall_width}, {"height_in", t.wall_height}};
  doc["studs"] = nlohmann::json::array();
  for (const auto& s : t.studs) {
    doc["studs"].push_back(
        {{"id", s.id.value}, {"center_x_in", s.center_x}, {"width_in", s.width}, {"height_in", s.height}});
  }
  doc["panels"] = nlohmann::json::array();
  for (const auto& p : t.panels) {
    nlohmann::json j{{"id", p.id.value},
                     {"w_ft", p.w},
                     {"l_ft", p.l},
                     {"size_class", to_string(p.size_class)},
                     {"floor_x_in", p.floor_x},
                     {"floor_column", p.floor_column},
                     {"floor_row", p.floor_row}};
    if (p.installed) j["installed"] = true;
    doc["panels"].push_back(std::move(j));
  }
  return doc;
}

ComponentTables default_fixture() {
  constexpr int kStuds = 13;
  constexpr double kSpacing = 16.0;
  constexpr double kStudWidth = 1.5;
  constexpr double kWallHeight = 96.0;
  constexpr double kFloorPitch = 60.0;

  ComponentTables t;
  for (int i = 0; i < kStuds; ++i) {
    t.studs.push_back(Stud{StudId{500100u + static_cast<std::uint32_t>(i)}, i, kSpacing * i, kStudWidth, kWallHeight});
  }
  t.wall_width = kSpacing * (kStuds - 1) + kStudWidth;
  t.wall_height = kWallHeight;

  struct RowSpec {
    SizeClass size_class;
    double w_ft;
  };
  const RowSpec rows[] = {{SizeClass::standard, 4.0}, {SizeClass::unique_a, 32.0 / 12.0}, {SizeClass::unique_b, 16.0 / 12.0}};
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      Panel p;
      p.id = PanelId{500300u + static_cast<std::uint32_t>(10 * row + col)};
      p.w = rows[row].w_ft;
      p.l = 8.0;
      p.size_class = rows[row].size_class;
      p.floor_x = kFloorPitch * col;
      p.floor_column = col;
      p.floor_row = row;
      t.panels.push_back(p);
    }
  }
  return t;
}

void validate(const ActionRecord& r) {
  const std::string where = "action record for drywall " + to_string(r.drywall_id);
  if (!(r.installed_x_right > r.installed_x_left)) throw SchemaError(where + ": installed_x_right <= installed_x_left");
  if (r.ver_hor == VerHor::vertical && r.top_btm != TopBtm::none) {
    throw SchemaError(where + ": vertical placement cannot have a top/bottom row");
  }
  if (r.ver_hor == VerHor::horizontal && r.top_btm == TopBtm::none) {
    throw SchemaError(where + ": horizontal placement needs a top/bottom row");
  }
  const double span = r.installed_x_right - r.installed_x_left;
  const double expected = snap_inches(12.0 * (r.ver_hor == VerHor::vertical ? r.w : r.l));
  if (std::abs(span - expected) > kEps) throw SchemaError(where + ": x extent disagrees with panel size");
}

nlohmann::json to_json(const ActionRecord& r) {
  return {{"stud_id", r.stud_id.value},         {"installed_x_left", r.installed_x_left},
          {"installed_x_right", r.installed_x_right}, {"left_cent", to_string(r.left_cent)},
          {"ver_hor", to_string(r.ver_hor)},     {"top_btm", to_string(r.top_btm)},
          {"drywall_id", r.drywall_id.value},    {"w", r.w},
          {"l", r.l}};
}

ActionRecord action_record_from_json(const nlohmann::json& j) {
  try {
    ActionRecord r;
    r.stud_id = StudId{j.at("stud_id").get<std::uint32_t>()};
    r.installed_x_left = j.at("installed_x_left").get<double>();
    r.installed_x_right = j.at("installed_x_right").get<double>();
    r.left_cent = left_cent_from_string(j.at("left_cent").get<std::string>());
    r.ver_hor = ver_hor_from_string(j.at("ver_hor").get<std::string>());
    r.top_btm = top_btm_from_string(j.at("top_btm").get<std::string>());
    r.drywall_id = PanelId{j.at("drywall_id").get<std::uint32_t>()};
    r.w = j.at("w").get<double>();
    r.l = j.at("l").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed action record: ") + e.what());
  }
}

bool ActionHistory::contains(PanelId id) const {
  return std::any_of(records_.begin(), records_.end(), [&](const ActionRecord& r) { return r.drywall_id == id; });
}

ActionHistory append_action(ActionHistory history, ActionRecord record) {
  validate(record);
  if (history.contains(record.drywall_id)) {
    throw AlreadyInstalledError("drywall " + to_string(record.drywall_id) + " is already installed");
  }
  history.records_.push_back(record);
  return history;
}

ActionHistory drop_latest(ActionHistory history) {
  if (!history.records_.empty()) history.records_.pop_back();
  return history;
}

std::optional<ActionRecord> latest_action(const ActionHistory& history) {
  if (history.empty()) return std::nullopt;
  return history.records().back();
}

std::string format_number(double v, int max_decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", max_decimals, v);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::vector<std::string> csv_fields(const ActionRecord& r) {
  return {to_string(r.stud_id),
          format_number(r.installed_x_left),
          format_number(r.installed_x_right),
          std::string(to_string(r.left_cent)),
          std::string(to_string(r.ver_hor)),
          std::string(to_string(r.top_btm)),
          to_string(r.drywall_id),
          format_number(r.w),
          format_number(r.l)};
}

std::string to_csv(const ActionHistory& history) {
  std::ostringstream out;
  out << kActionHistoryHeader << '\n';
  for (const auto& r : history.records()) {
    const auto fields = csv_fields(r);
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const ActionHistory& history) {
  auto arr = nlohmann::json::array();
  for (const auto& r : history.records()) arr.push_back(to_json(r));
  return arr;
}

ActionHistory action_history_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw SchemaError("action history must be an array");
  ActionHistory h;
  for (const auto& r : j) h = append_action(std::move(h), action_record_from_json(r));
  return h;
}

}  // namespace dw
