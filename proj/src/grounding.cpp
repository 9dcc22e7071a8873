#include "dw/grounding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace dw {

namespace {

constexpr double kDimTolerance = 1e-3;

const std::unordered_map<std::string, int>& ordinal_words() {
  static const std::unordered_map<std::string, int> words{
      {"first", 1},   {"1st", 1},    {"one", 1},     {"next", 1},    {"second", 2},  {"2nd", 2},
      {"two", 2},     {"third", 3},  {"3rd", 3},     {"three", 3},   {"fourth", 4},  {"4th", 4},
      {"four", 4},    {"fifth", 5},  {"5th", 5},     {"five", 5},    {"sixth", 6},   {"6th", 6},
      {"six", 6},     {"seventh", 7}, {"7th", 7},    {"seven", 7},   {"eighth", 8},  {"8th", 8},
      {"eight", 8},   {"ninth", 9},  {"9th", 9},     {"nine", 9},    {"tenth", 10},  {"10th", 10},
      {"ten", 10},    {"eleventh", 11}, {"11th", 11}, {"eleven", 11}, {"twelfth", 12}, {"12th", 12},
      {"twelve", 12},
  };
  return words;
}

const std::set<std::string>& connective_words() {
  static const std::set<std::string> words{"to",    "the",    "of",     "from",   "on",     "in",
                                           "at",    "a",      "side",   "hand",   "stud",   "studs",
                                           "panel", "panels", "drywall", "piece", "sheet",  "board",
                                           "ones",  "position", "located", "is",  "laying", "lying"};
  return words;
}

const std::set<std::string>& previous_words() {
  static const std::set<std::string> words{"previous", "previously", "last", "before", "earlier", "installed",
                                           "placed"};
  return words;
}

const std::set<std::string>& standard_size_words() {
  static const std::set<std::string> words{"full-size", "full-sized", "full", "standard", "fullsize"};
  return words;
}

std::vector<std::string> words_tagged(const TagSequence& s, Tag tag) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.tags.size(); ++i) {
    if (s.tags[i] == tag) out.push_back(s.tokens[i]);
  }
  return out;
}

bool has_tag(const TagSequence& s, Tag tag) { return std::find(s.tags.begin(), s.tags.end(), tag) != s.tags.end(); }

std::string join(std::span<const std::string> words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// Distinct 6-digit ids among the words, in order of appearance.
std::vector<std::uint32_t> ids_in(std::span<const std::string> words) {
  std::vector<std::uint32_t> out;
  for (const auto& w : words) {
    if (auto id = parse_component_id(w); id && std::find(out.begin(), out.end(), *id) == out.end()) {
      out.push_back(*id);
    }
  }
  return out;
}

std::optional<double> parse_number(const std::string& w) {
  static const std::unordered_map<std::string, double> words{
      {"one", 1},  {"two", 2},   {"three", 3},  {"four", 4},    {"five", 5},     {"six", 6},     {"seven", 7},
      {"eight", 8}, {"nine", 9}, {"ten", 10},   {"eleven", 11}, {"twelve", 12},  {"sixteen", 16}, {"thirty-two", 32},
      {"ninety-six", 96}};
  if (auto it = words.find(w); it != words.end()) return it->second;
  if (w.empty()) return std::nullopt;
  bool dot = false;
  for (char c : w) {
    if (c == '.') {
      if (dot) return std::nullopt;
      dot = true;
    } else if (c < '0' || c > '9') {
      return std::nullopt;
    }
  }
  if (w == ".") return std::nullopt;
  return std::stod(w);
}

// A spoken dimension matches a panel dimension in feet or in inches.
bool dimension_matches(double spoken, double feet) {
  return std::abs(spoken - feet) < kDimTolerance || std::abs(spoken - snap_inches(feet * 12.0)) < kDimTolerance;
}

std::optional<double> single_number(const std::vector<std::string>& words, const char* what) {
  std::optional<double> value;
  for (const auto& w : words) {
    if (auto v = parse_number(w)) {
      if (value && std::abs(*value - *v) > kDimTolerance) {
        throw GroundingError(GroundingError::Kind::ambiguous_reference,
                             std::string("more than one ") + what + " value given", join(words));
      }
      value = v;
    }
  }
  if (!value) {
    throw GroundingError(GroundingError::Kind::unresolvable_location, std::string("no number in the ") + what +
                                                                            " description",
                         join(words));
  }
  return value;
}

// Sorted distinct floor positions of the given panels.
std::vector<double> columns_of(const std::vector<const Panel*>& panels) {
  std::vector<double> xs;
  for (const Panel* p : panels) {
    if (std::none_of(xs.begin(), xs.end(), [&](double x) { return std::abs(x - p->floor_x) < 1e-9; })) {
      xs.push_back(p->floor_x);
    }
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::size_t column_index(const std::vector<double>& columns, double x) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (std::abs(columns[i] - x) < 1e-9) return i;
  }
  return columns.size();
}

std::size_t extreme_index(Extreme e, std::size_t n) {
  switch (e) {
    case Extreme::leftmost:
      return 0;
    case Extreme::rightmost:
      return n - 1;
    case Extreme::middle:
      return (n - 1) / 2;  // left of the two medians when n is even
  }
  return 0;
}

// A bare direction ("the stud on the left") names the extreme on that side.
std::optional<Extreme> as_extreme(const SpatialPhrase& p) {
  if (p.extreme) return p.extreme;
  if (p.ordinal == 1) return p.direction == Direction::left ? Extreme::leftmost : Extreme::rightmost;
  return std::nullopt;
}

long signed_offset(const SpatialPhrase& p) { return p.direction == Direction::left ? -p.ordinal : p.ordinal; }

const Panel* uninstalled_in_column(const ComponentTables& tables, const ActionHistory& history, double x) {
  const Panel* best = nullptr;
  for (const auto& p : tables.panels) {
    if (std::abs(p.floor_x - x) > 1e-9 || is_installed(p, history)) continue;
    if (!best || p.id < best->id) best = &p;
  }
  return best;
}

}  // namespace

nlohmann::json to_json(const RobotCommand& cmd) {
  return {{"target_panel_id", cmd.target_panel_id.value},
          {"destination_stud_id", cmd.destination_stud_id.value},
          {"orientation", to_string(cmd.placement.orientation)},
          {"line", to_string(cmd.placement.line)},
          {"row", to_string(cmd.placement.row)}};
}

RobotCommand robot_command_from_json(const nlohmann::json& j) {
  try {
    RobotCommand c;
    c.target_panel_id = PanelId{j.at("target_panel_id").get<std::uint32_t>()};
    c.destination_stud_id = StudId{j.at("destination_stud_id").get<std::uint32_t>()};
    c.placement.orientation = ver_hor_from_string(j.at("orientation").get<std::string>());
    c.placement.line = left_cent_from_string(j.at("line").get<std::string>());
    c.placement.row = top_btm_from_string(j.at("row").get<std::string>());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed robot command: ") + e.what());
  }
}

std::string describe(const RobotCommand& cmd) {
  std::string s = to_string(cmd.target_panel_id) + " -> " + to_string(cmd.destination_stud_id) + " " +
                  std::string(to_string(cmd.placement.orientation)) + "/" + std::string(to_string(cmd.placement.line));
  if (cmd.placement.row != TopBtm::none) s += "/" + std::string(to_string(cmd.placement.row));
  return s;
}

std::string_view to_string(GroundingError::Kind kind) {
  using K = GroundingError::Kind;
  switch (kind) {
    case K::no_target: return "no_target";
    case K::no_destination: return "no_destination";
    case K::unresolvable_location: return "unresolvable_location";
    case K::unknown_id: return "unknown_id";
    case K::out_of_range: return "out_of_range";
    case K::already_installed: return "already_installed";
    case K::no_match: return "no_match";
    case K::missing_antecedent: return "missing_antecedent";
    case K::empty_column: return "empty_column";
    case K::ambiguous_placement: return "ambiguous_placement";
    case K::ambiguous_reference: return "ambiguous_reference";
  }
  return "unknown";
}

SpatialPhrase parse_spatial(std::span<const std::string> words) {
  const std::string phrase = join(words);
  if (words.empty()) throw GroundingError(GroundingError::Kind::unresolvable_location, "empty location phrase");
  SpatialPhrase out;
  std::optional<Direction> direction;
  std::optional<int> ordinal;
  bool superlative = false;  // "most" / "far" turn a direction into an extreme
  for (const auto& w : words) {
    if (w == "leftmost" || w == "left-most") {
      out.extreme = Extreme::leftmost;
    } else if (w == "rightmost" || w == "right-most") {
      out.extreme = Extreme::rightmost;
    } else if (w == "middle" || w == "center" || w == "centre") {
      out.extreme = Extreme::middle;
    } else if (w == "left") {
      direction = Direction::left;
    } else if (w == "right") {
      direction = Direction::right;
    } else if (w == "most" || w == "far") {
      superlative = true;
    } else if (auto it = ordinal_words().find(w); it != ordinal_words().end()) {
      ordinal = it->second;
    } else if (!connective_words().count(w)) {
      throw GroundingError(GroundingError::Kind::unresolvable_location,
                           "unrecognized word '" + w + "' in location phrase", phrase);
    }
  }
  if (superlative && direction && !out.extreme) {
    out.extreme = *direction == Direction::left ? Extreme::leftmost : Extreme::rightmost;
  }
  if (out.extreme) return out;
  if (!direction) {
    throw GroundingError(GroundingError::Kind::unresolvable_location, "location phrase has no direction", phrase);
  }
  out.direction = *direction;
  out.ordinal = ordinal.value_or(1);
  return out;
}

bool is_installed(const Panel& panel, const ActionHistory& history) {
  return panel.installed || history.contains(panel.id);
}

const Stud& resolve_stud(const TagSequence& tagged, const ComponentTables& tables) {
  using K = GroundingError::Kind;
  if (tables.studs.empty()) throw GroundingError(K::no_destination, "the component tables have no studs");

  if (const auto id_words = words_tagged(tagged, Tag::ID_stud); !id_words.empty()) {
    const auto ids = ids_in(id_words);
    if (ids.empty()) throw GroundingError(K::unknown_id, "stud id is not a 6-digit number", join(id_words));
    if (ids.size() > 1) throw GroundingError(K::ambiguous_reference, "more than one stud id given", join(id_words));
    const Stud* s = tables.find_stud(StudId{ids.front()});
    if (!s) throw GroundingError(K::unknown_id, "no stud with id " + std::to_string(ids.front()), join(id_words));
    return *s;
  }

  const auto loc = words_tagged(tagged, Tag::St_loc1);
  const auto ref = words_tagged(tagged, Tag::St_loc2);
  if (loc.empty() && ref.empty()) throw GroundingError(K::no_destination, "no stud description found");
  const long n = static_cast<long>(tables.studs.size());

  if (ref.empty()) {
    const auto phrase = parse_spatial(loc);
    const auto extreme = as_extreme(phrase);
    if (!extreme) {
      throw GroundingError(K::unresolvable_location, "relative stud location without a reference stud", join(loc));
    }
    return tables.studs[extreme_index(*extreme, tables.studs.size())];
  }

  long base = 0;
  if (const auto ids = ids_in(ref); !ids.empty()) {
    if (ids.size() > 1) throw GroundingError(K::ambiguous_reference, "more than one reference stud", join(ref));
    const Stud* s = tables.find_stud(StudId{ids.front()});
    if (!s) throw GroundingError(K::unknown_id, "no stud with id " + std::to_string(ids.front()), join(ref));
    base = s->index;
  } else {
    const auto rp = parse_spatial(ref);
    if (!rp.extreme) throw GroundingError(K::unresolvable_location, "reference stud is not identifiable", join(ref));
    base = static_cast<long>(extreme_index(*rp.extreme, tables.studs.size()));
  }
  if (loc.empty()) throw GroundingError(K::unresolvable_location, "reference stud without a direction", join(ref));
  const auto step = parse_spatial(loc);
  if (step.extreme) {
    throw GroundingError(K::unresolvable_location, "expected a direction relative to the reference stud", join(loc));
  }
  const long index = base + signed_offset(step);
  if (index < 0 || index >= n) {
    throw GroundingError(K::out_of_range, "location falls outside the stud wall", join(loc) + " " + join(ref));
  }
  return tables.studs[static_cast<std::size_t>(index)];
}

const Panel& resolve_target_by_dimension(const TagSequence& tagged, const ComponentTables& tables,
                                         const ActionHistory& history) {
  using K = GroundingError::Kind;
  const auto dim = words_tagged(tagged, Tag::dim);
  const auto width = words_tagged(tagged, Tag::width);
  const auto length = words_tagged(tagged, Tag::length);
  if (dim.empty() && width.empty() && length.empty()) throw GroundingError(K::no_target, "no dimension description");

  std::optional<double> want_w, want_l;
  std::string phrase = join(dim);
  const bool refers_back =
      std::any_of(dim.begin(), dim.end(), [](const std::string& w) { return previous_words().count(w) > 0; });
  if (refers_back) {
    const auto last = latest_action(history);
    if (!last) throw GroundingError(K::missing_antecedent, "nothing has been installed yet", phrase);
    want_w = last->w;
    want_l = last->l;
  } else {
    if (!dim.empty()) {
      if (std::none_of(dim.begin(), dim.end(), [](const std::string& w) { return standard_size_words().count(w) > 0; })) {
        throw GroundingError(K::no_match, "unrecognized size word", phrase);
      }
      want_w = 4.0;
      want_l = 8.0;
    }
    if (!width.empty()) {
      want_w = single_number(width, "width");
      phrase += (phrase.empty() ? "" : " ") + join(width);
    }
    if (!length.empty()) {
      want_l = single_number(length, "length");
      phrase += (phrase.empty() ? "" : " ") + join(length);
    }
  }

  const Panel* best = nullptr;
  for (const auto& p : tables.panels) {
    if (is_installed(p, history)) continue;
    // feet/inches tolerance applies to spoken numbers; history values are exact feet
    if (want_w && !(refers_back ? std::abs(p.w - *want_w) < kDimTolerance : dimension_matches(*want_w, p.w))) continue;
    if (want_l && !(refers_back ? std::abs(p.l - *want_l) < kDimTolerance : dimension_matches(*want_l, p.l))) continue;
    if (!best || p.floor_x < best->floor_x - 1e-9 || (std::abs(p.floor_x - best->floor_x) < 1e-9 && p.id < best->id)) {
      best = &p;
    }
  }
  if (!best) throw GroundingError(K::no_match, "no uninstalled panel matches the described size", phrase);
  return *best;
}

const Panel& resolve_target_by_id_or_position(const TagSequence& tagged, const ComponentTables& tables,
                                              const ActionHistory& history) {
  using K = GroundingError::Kind;
  if (const auto id_words = words_tagged(tagged, Tag::ID_wall); !id_words.empty()) {
    const auto ids = ids_in(id_words);
    if (ids.empty()) throw GroundingError(K::unknown_id, "panel id is not a 6-digit number", join(id_words));
    if (ids.size() > 1) throw GroundingError(K::ambiguous_reference, "more than one panel id given", join(id_words));
    const Panel* p = tables.find_panel(PanelId{ids.front()});
    if (!p) throw GroundingError(K::unknown_id, "no panel with id " + std::to_string(ids.front()), join(id_words));
    if (is_installed(*p, history)) {
      throw GroundingError(K::already_installed, "panel " + to_string(p->id) + " is already installed", join(id_words));
    }
    return *p;
  }

  const auto loc = words_tagged(tagged, Tag::Dw_loc1);
  const auto ref = words_tagged(tagged, Tag::Dw_loc2);
  if (loc.empty() && ref.empty()) throw GroundingError(K::no_target, "no panel description found");

  if (ref.empty()) {
    std::vector<const Panel*> remaining;
    for (const auto& p : tables.panels) {
      if (!is_installed(p, history)) remaining.push_back(&p);
    }
    const auto phrase = parse_spatial(loc);
    const auto extreme = as_extreme(phrase);
    if (!extreme) {
      throw GroundingError(K::unresolvable_location, "relative panel location without a reference panel", join(loc));
    }
    const auto columns = columns_of(remaining);
    if (columns.empty()) throw GroundingError(K::no_match, "every panel is already installed", join(loc));
    return *uninstalled_in_column(tables, history, columns[extreme_index(*extreme, columns.size())]);
  }

  std::vector<const Panel*> all;
  for (const auto& p : tables.panels) all.push_back(&p);
  const auto columns = columns_of(all);
  std::size_t base = 0;
  if (const auto ids = ids_in(ref); !ids.empty()) {
    if (ids.size() > 1) throw GroundingError(K::ambiguous_reference, "more than one reference panel", join(ref));
    const Panel* p = tables.find_panel(PanelId{ids.front()});
    if (!p) throw GroundingError(K::unknown_id, "no panel with id " + std::to_string(ids.front()), join(ref));
    base = column_index(columns, p->floor_x);
  } else if (std::any_of(ref.begin(), ref.end(), [](const std::string& w) { return previous_words().count(w) > 0; })) {
    const auto last = latest_action(history);
    if (!last) throw GroundingError(K::missing_antecedent, "nothing has been installed yet", join(ref));
    const Panel* p = tables.find_panel(last->drywall_id);
    if (!p) throw GroundingError(K::unknown_id, "last installed panel is not in the tables", join(ref));
    base = column_index(columns, p->floor_x);
  } else {
    const auto rp = parse_spatial(ref);
    if (!rp.extreme) throw GroundingError(K::unresolvable_location, "reference panel is not identifiable", join(ref));
    base = extreme_index(*rp.extreme, columns.size());
  }
  if (loc.empty()) throw GroundingError(K::unresolvable_location, "reference panel without a direction", join(ref));
  const auto step = parse_spatial(loc);
  if (step.extreme) {
    throw GroundingError(K::unresolvable_location, "expected a direction relative to the reference panel", join(loc));
  }
  const long index = static_cast<long>(base) + signed_offset(step);
  if (index < 0 || index >= static_cast<long>(columns.size())) {
    throw GroundingError(K::out_of_range, "no floor column there", join(loc) + " " + join(ref));
  }
  const Panel* p = uninstalled_in_column(tables, history, columns[static_cast<std::size_t>(index)]);
  if (!p) throw GroundingError(K::empty_column, "every panel in that floor column is installed", join(loc) + " " + join(ref));
  return *p;
}

Placement resolve_placement(const TagSequence& tagged) {
  const bool vr = has_tag(tagged, Tag::Vr_md);
  const bool top = has_tag(tagged, Tag::Hr_top);
  const bool btm = has_tag(tagged, Tag::Hr_btm);
  if (int(vr) + int(top) + int(btm) > 1) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < tagged.tags.size(); ++i) {
      if (is_placement_tag(tagged.tags[i])) words.push_back(tagged.tokens[i]);
    }
    throw GroundingError(GroundingError::Kind::ambiguous_placement, "conflicting placement methods", join(words));
  }
  if (vr) return {VerHor::vertical, LeftCent::center, TopBtm::none};
  if (top) return {VerHor::horizontal, LeftCent::left, TopBtm::top};
  if (btm) return {VerHor::horizontal, LeftCent::left, TopBtm::bottom};
  return {VerHor::vertical, LeftCent::left, TopBtm::none};
}

ActionRecord make_action_record(const RobotCommand& cmd, const ComponentTables& tables) {
  const Stud* stud = tables.find_stud(cmd.destination_stud_id);
  const Panel* panel = tables.find_panel(cmd.target_panel_id);
  if (!stud) throw GroundingError(GroundingError::Kind::unknown_id, "no stud with id " + to_string(cmd.destination_stud_id));
  if (!panel) throw GroundingError(GroundingError::Kind::unknown_id, "no panel with id " + to_string(cmd.target_panel_id));
  ActionRecord r;
  r.stud_id = stud->id;
  r.left_cent = cmd.placement.line;
  r.ver_hor = cmd.placement.orientation;
  r.top_btm = cmd.placement.row;
  r.drywall_id = panel->id;
  r.w = panel->w;
  r.l = panel->l;
  r.installed_x_left = snap_inches(cmd.placement.line == LeftCent::left ? stud->left_face() : stud->center_x);
  const double span = cmd.placement.orientation == VerHor::vertical ? panel->width_in() : panel->length_in();
  r.installed_x_right = snap_inches(r.installed_x_left + span);
  return r;
}

Grounding ground(const TagSequence& tagged, const ComponentTables& tables, const ActionHistory& history) {
  if (tagged.tokens.size() != tagged.tags.size()) {
    throw Error("tagged sequence has " + std::to_string(tagged.tokens.size()) + " tokens but " +
                std::to_string(tagged.tags.size()) + " tags");
  }
  const bool by_id = has_tag(tagged, Tag::ID_wall);
  const bool by_dim = has_tag(tagged, Tag::dim) || has_tag(tagged, Tag::width) || has_tag(tagged, Tag::length);
  const bool by_pos = has_tag(tagged, Tag::Dw_loc1) || has_tag(tagged, Tag::Dw_loc2);
  if (!by_id && !by_dim && !by_pos) throw GroundingError(GroundingError::Kind::no_target, "no target description found");

  const Panel& panel = (by_id || !by_dim) ? resolve_target_by_id_or_position(tagged, tables, history)
                                          : resolve_target_by_dimension(tagged, tables, history);
  const Stud& stud = resolve_stud(tagged, tables);
  RobotCommand cmd{panel.id, stud.id, resolve_placement(tagged)};
  return {cmd, make_action_record(cmd, tables)};
}

Grounding ground_and_record(const TagSequence& tagged, const ComponentTables& tables, ActionHistory& history) {
  auto g = ground(tagged, tables, history);
  history = append_action(std::move(history), g.record);
  return g;
}

}  // namespace dw
