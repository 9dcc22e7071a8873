#include "dw/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <random>
#include <sstream>

#include "dw/annotations.hpp"
#include "dw/tagger.hpp"

namespace dw::datagen {

namespace {

using Rng = std::mt19937_64;

struct Piece {
  std::string word;
  Tag tag;
};
using Phrase = std::vector<Piece>;

struct Sentence {
  Phrase words;
  std::string end;  // ".", "?" or "" for an unterminated last sentence
};

void add(Phrase& p, std::string_view words, Tag tag) {
  std::size_t start = 0;
  while (start < words.size()) {
    auto stop = words.find(' ', start);
    if (stop == std::string_view::npos) stop = words.size();
    if (stop > start) p.push_back({std::string(words.substr(start, stop - start)), tag});
    start = stop + 1;
  }
}

void append(Phrase& p, const Phrase& q) { p.insert(p.end(), q.begin(), q.end()); }

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

std::size_t weighted(Rng& rng, std::initializer_list<double> weights) {
  std::discrete_distribution<std::size_t> d(weights);
  return d(rng);
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

std::string pick_word(Rng& rng, std::initializer_list<const char*> words) {
  std::vector<std::string> v(words.begin(), words.end());
  return pick(rng, v);
}

enum class TargetFamily { id, numeric, size_word, previous_size, absolute, relative };
enum class StudFamily { id, extreme, relative };
enum class PlacementKind { none, center, top, bottom };

struct TargetPlan {
  TargetFamily family = TargetFamily::id;
  const Panel* gold = nullptr;
  Extreme extreme = Extreme::leftmost;
  bool bare_direction = false;
  int ordinal = 1;
  Direction direction = Direction::left;
  const Panel* reference = nullptr;  // null with relative family: previously installed panel
};

struct StudPlan {
  StudFamily family = StudFamily::id;
  const Stud* gold = nullptr;
  Extreme extreme = Extreme::leftmost;
  int ordinal = 1;
  Direction direction = Direction::left;
  const Stud* reference = nullptr;  // null with relative family: extreme reference
  Extreme reference_extreme = Extreme::leftmost;
};

std::string_view direction_word(Direction d) { return d == Direction::left ? "left" : "right"; }

std::vector<double> distinct_sorted(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), xs.end());
  return xs;
}

long column_of(const std::vector<double>& columns, double x) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (std::abs(columns[i] - x) < 1e-9) return static_cast<long>(i);
  }
  return -1;
}

class Generator {
 public:
  Generator(const ComponentTables& tables, std::uint64_t seed, std::size_t index, bool coreference)
      : tables_(tables), coref_(coreference) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    rng_.seed(seq);
    id_ = std::to_string(index + 1);
  }

  AnnotatedInstruction run() {
    make_context();
    const TargetPlan target = plan_target();
    const StudPlan stud = plan_stud();
    const auto placement = static_cast<PlacementKind>(weighted(rng_, {0.25, 0.63, 0.065, 0.055}));

    AnnotatedInstruction out;
    out.id = id_;
    out.context = history_;
    out.gold_command.target_panel_id = target.gold->id;
    out.gold_command.destination_stud_id = stud.gold->id;
    out.gold_command.placement = placement_of(placement);

    render(target, stud, placement, out);
    out.sentence_count = tagger::count_sentences(out.tokens);
    return out;
  }

 private:
  Tag trg() const { return coref_ ? Tag::Trg : Tag::O; }
  Tag dst() const { return coref_ ? Tag::Dst : Tag::O; }

  static Placement placement_of(PlacementKind k) {
    switch (k) {
      case PlacementKind::center: return {VerHor::vertical, LeftCent::center, TopBtm::none};
      case PlacementKind::top: return {VerHor::horizontal, LeftCent::left, TopBtm::top};
      case PlacementKind::bottom: return {VerHor::horizontal, LeftCent::left, TopBtm::bottom};
      case PlacementKind::none: break;
    }
    return {VerHor::vertical, LeftCent::left, TopBtm::none};
  }

  std::vector<const Panel*> uninstalled() const {
    std::vector<const Panel*> out;
    for (const auto& p : tables_.panels) {
      if (!is_installed(p, history_)) out.push_back(&p);
    }
    return out;
  }

  // First remaining panel in floor order (left to right, then by id) that satisfies `pred`.
  template <typename Pred>
  const Panel* first_remaining(Pred pred) const {
    const Panel* best = nullptr;
    for (const Panel* p : uninstalled()) {
      if (!pred(*p)) continue;
      if (!best || p->floor_x < best->floor_x - 1e-9 ||
          (std::abs(p->floor_x - best->floor_x) < 1e-9 && p->id < best->id)) {
        best = p;
      }
    }
    return best;
  }

  const Panel* lowest_id_in_column(double x) const {
    const Panel* best = nullptr;
    for (const Panel* p : uninstalled()) {
      if (std::abs(p->floor_x - x) < 1e-9 && (!best || p->id < best->id)) best = p;
    }
    return best;
  }

  // A few earlier placements, so that previous-action references have an antecedent.
  void make_context() {
    auto free = uninstalled();
    if (free.empty()) throw GenerationError("every panel in the tables is already installed");
    auto k = weighted(rng_, {0.35, 0.3, 0.2, 0.15});
    k = std::min(k, free.size() - 1);
    std::shuffle(free.begin(), free.end(), rng_);
    for (std::size_t i = 0; i < k; ++i) {
      const Stud& s = pick(rng_, tables_.studs);
      const auto kind = static_cast<PlacementKind>(weighted(rng_, {0.25, 0.63, 0.065, 0.055}));
      const RobotCommand cmd{free[i]->id, s.id, placement_of(kind)};
      history_ = append_action(std::move(history_), make_action_record(cmd, tables_));
    }
  }

  TargetPlan plan_target() {
    for (int attempt = 0; attempt < 32; ++attempt) {
      const auto family = static_cast<TargetFamily>(weighted(rng_, {0.35, 0.22, 0.10, 0.05, 0.06, 0.22}));
      if (auto plan = try_target(family)) return *plan;
    }
    TargetPlan plan;
    plan.gold = pick(rng_, uninstalled());
    return plan;
  }

  std::optional<TargetPlan> try_target(TargetFamily family) {
    TargetPlan plan;
    plan.family = family;
    const auto free = uninstalled();
    switch (family) {
      case TargetFamily::id:
        plan.gold = pick(rng_, free);
        return plan;
      case TargetFamily::numeric: {
        const Panel* p = pick(rng_, free);
        plan.gold = first_remaining([&](const Panel& q) { return q.w == p->w && q.l == p->l; });
        return plan;
      }
      case TargetFamily::size_word:
        plan.gold = first_remaining([](const Panel& q) { return q.w == 4.0 && q.l == 8.0; });
        if (!plan.gold) return std::nullopt;
        return plan;
      case TargetFamily::previous_size: {
        const auto last = latest_action(history_);
        if (!last) return std::nullopt;
        plan.gold = first_remaining([&](const Panel& q) { return q.w == last->w && q.l == last->l; });
        if (!plan.gold) return std::nullopt;
        return plan;
      }
      case TargetFamily::absolute: {
        std::vector<double> xs;
        for (const Panel* p : free) xs.push_back(p->floor_x);
        const auto columns = distinct_sorted(xs);
        plan.extreme = static_cast<Extreme>(weighted(rng_, {0.4, 0.35, 0.25}));
        if (plan.extreme == Extreme::middle && columns.size() < 3) plan.extreme = Extreme::leftmost;
        plan.bare_direction = plan.extreme != Extreme::middle && chance(rng_, 0.15);
        const std::size_t i = plan.extreme == Extreme::leftmost    ? 0
                              : plan.extreme == Extreme::rightmost ? columns.size() - 1
                                                                   : (columns.size() - 1) / 2;
        plan.gold = lowest_id_in_column(columns[i]);
        return plan;
      }
      case TargetFamily::relative: {
        std::vector<double> xs;
        for (const auto& p : tables_.panels) xs.push_back(p.floor_x);
        const auto columns = distinct_sorted(xs);
        const auto last = latest_action(history_);
        for (int attempt = 0; attempt < 16; ++attempt) {
          plan.ordinal = static_cast<int>(weighted(rng_, {0.7, 0.2, 0.1})) + 1;
          plan.direction = chance(rng_, 0.5) ? Direction::left : Direction::right;
          const Panel* ref = nullptr;
          if (last && chance(rng_, 0.3)) {
            plan.reference = nullptr;
            ref = tables_.find_panel(last->drywall_id);
          } else {
            ref = &pick(rng_, tables_.panels);
            plan.reference = ref;
          }
          const long c = column_of(columns, ref->floor_x) +
                         (plan.direction == Direction::left ? -plan.ordinal : plan.ordinal);
          if (c < 0 || c >= static_cast<long>(columns.size())) continue;
          plan.gold = lowest_id_in_column(columns[static_cast<std::size_t>(c)]);
          if (plan.gold) return plan;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  StudPlan plan_stud() {
    const auto& studs = tables_.studs;
    const long n = static_cast<long>(studs.size());
    StudPlan plan;
    plan.family = static_cast<StudFamily>(weighted(rng_, {0.35, 0.05, 0.60}));
    if (plan.family == StudFamily::relative && n < 2) plan.family = StudFamily::id;
    switch (plan.family) {
      case StudFamily::id:
        plan.gold = &pick(rng_, studs);
        break;
      case StudFamily::extreme:
        plan.extreme = chance(rng_, 0.5) ? Extreme::leftmost : Extreme::rightmost;
        plan.gold = plan.extreme == Extreme::leftmost ? &studs.front() : &studs.back();
        break;
      case StudFamily::relative:
        for (;;) {
          plan.ordinal = static_cast<int>(weighted(rng_, {0.45, 0.3, 0.15, 0.1})) + 1;
          plan.direction = chance(rng_, 0.5) ? Direction::left : Direction::right;
          long base = 0;
          if (chance(rng_, 0.8)) {
            plan.reference = &pick(rng_, studs);
            base = plan.reference->index;
          } else {
            plan.reference = nullptr;
            plan.reference_extreme = chance(rng_, 0.5) ? Extreme::leftmost : Extreme::rightmost;
            base = plan.reference_extreme == Extreme::leftmost ? 0 : n - 1;
          }
          const long i = base + (plan.direction == Direction::left ? -plan.ordinal : plan.ordinal);
          if (i >= 0 && i < n) {
            plan.gold = &studs[static_cast<std::size_t>(i)];
            break;
          }
        }
        break;
    }
    return plan;
  }

  // ---- phrasing ----

  Phrase noun(Tag tag) {
    Phrase p;
    add(p, pick_word(rng_, {"panel", "drywall", "piece", "wall panel", "drywall panel", "panel", "drywall"}), tag);
    return p;
  }

  Phrase bare_target() {
    Phrase p;
    add(p, chance(rng_, 0.8) ? "the" : "a", Tag::O);
    append(p, noun(trg()));
    return p;
  }

  // "third to the left" + "from" or "left" + "to".
  Phrase location_span(int ordinal, Direction d, Tag tag, double long_form) {
    Phrase p;
    static const char* const ordinals[] = {"", "first", "second", "third", "fourth"};
    const bool with_to = chance(rng_, long_form);
    if (with_to) {
      add(p, ordinal == 1 ? pick_word(rng_, {"first", "next"}) : ordinals[ordinal], tag);
      add(p, "to the", tag);
      add(p, direction_word(d), tag);
      add(p, pick_word(rng_, {"of", "from"}), Tag::O);
    } else {
      if (ordinal > 1) add(p, ordinals[ordinal], tag);
      add(p, direction_word(d), tag);
      add(p, "to", Tag::O);
    }
    return p;
  }

  struct Dims {
    std::string width, length, width_unit, length_unit;
  };

  Dims spoken_dims(const Panel& p) {
    Dims d;
    const bool whole_feet = std::abs(p.w - std::round(p.w)) < 1e-9;
    if (whole_feet && chance(rng_, 0.75)) {
      d.width = format_number(p.w);
      d.width_unit = "feet";
    } else {
      d.width = format_number(p.width_in());
      d.width_unit = "inches";
    }
    if (chance(rng_, whole_feet ? 0.8 : 0.4)) {
      d.length = format_number(p.l);
      d.length_unit = "feet";
    } else {
      d.length = format_number(p.length_in());
      d.length_unit = "inches";
    }
    if (d.width == "4" && d.length == "8" && chance(rng_, 0.15)) {
      d.width = "four";
      d.length = "eight";
    }
    return d;
  }

  // "W by L" carries no unit words, so both numbers use the width's unit.
  Phrase by_phrase(const Panel& panel, Dims d) {
    if (d.width_unit != d.length_unit) {
      d.length = format_number(d.width_unit == "feet" ? panel.l : panel.length_in());
    }
    Phrase p;
    add(p, d.width, Tag::width);
    add(p, chance(rng_, 0.85) ? "by" : "x", Tag::O);
    add(p, d.length, Tag::length);
    return p;
  }

  Phrase wide_long_phrase(const Dims& d) {
    Phrase p;
    add(p, d.width, Tag::width);
    add(p, d.width_unit + " wide and", Tag::O);
    add(p, d.length, Tag::length);
    add(p, d.length_unit + " long", Tag::O);
    return p;
  }

  Phrase panel_reference(const TargetPlan& t) {
    Phrase p;
    if (t.reference) {
      add(p, pick_word(rng_, {"the panel", "panel", "the drywall"}), Tag::O);
      add(p, to_string(t.reference->id), Tag::Dw_loc2);
    } else if (chance(rng_, 0.6)) {
      add(p, "the", Tag::O);
      add(p, "previously installed", Tag::Dw_loc2);
      add(p, "one", Tag::O);
    } else {
      add(p, "the", Tag::O);
      add(p, "last installed", Tag::Dw_loc2);
      add(p, pick_word(rng_, {"panel", "one"}), Tag::O);
    }
    return p;
  }

  // A bare "on the left" only stands in its own sentence; inline it would read
  // as a direction relative to the stud phrase that follows.
  Phrase target_extreme_words(const TargetPlan& t, bool allow_bare) {
    Phrase p;
    if (t.bare_direction && allow_bare) {
      add(p, "on the", Tag::O);
      add(p, t.extreme == Extreme::leftmost ? "left" : "right", Tag::Dw_loc1);
    } else if (t.extreme == Extreme::middle) {
      add(p, "in the", Tag::O);
      add(p, "middle", Tag::Dw_loc1);
    } else {
      add(p, "on the", Tag::O);
      add(p, t.extreme == Extreme::leftmost ? "far left" : "far right", Tag::Dw_loc1);
    }
    return p;
  }

  std::string size_word() { return pick_word(rng_, {"full-size", "full-size", "standard", "full-sized"}); }

  Phrase target_inline(const TargetPlan& t) {
    Phrase p;
    const Panel& g = *t.gold;
    switch (t.family) {
      case TargetFamily::id:
        switch (weighted(rng_, {0.55, 0.2, 0.15, 0.1})) {
          case 0: add(p, "the", Tag::O); append(p, noun(trg())); break;
          case 1: append(p, noun(trg())); break;
          case 2: add(p, "the", Tag::O); append(p, noun(trg())); add(p, "with the id", Tag::O); break;
          default: add(p, "the", Tag::O); append(p, noun(trg())); add(p, "number", Tag::O); break;
        }
        add(p, to_string(g.id), Tag::ID_wall);
        return p;
      case TargetFamily::numeric: {
        const auto d = spoken_dims(g);
        switch (weighted(rng_, {0.35, 0.35, 0.3})) {
          case 0:
            add(p, chance(rng_, 0.6) ? "the" : "a", Tag::O);
            append(p, by_phrase(g, d));
            append(p, noun(trg()));
            break;
          case 1:
            append(p, bare_target());
            if (chance(rng_, 0.75)) {
              add(p, "with a width of", Tag::O);
              add(p, d.width, Tag::width);
              add(p, "and a length of", Tag::O);
              add(p, d.length, Tag::length);
            } else {
              add(p, "with a length of", Tag::O);
              add(p, d.length, Tag::length);
              add(p, "and a width of", Tag::O);
              add(p, d.width, Tag::width);
            }
            break;
          default:
            append(p, bare_target());
            add(p, "that is", Tag::O);
            append(p, wide_long_phrase(d));
            break;
        }
        return p;
      }
      case TargetFamily::size_word:
        add(p, chance(rng_, 0.6) ? "the" : "a", Tag::O);
        add(p, size_word(), Tag::dim);
        append(p, noun(trg()));
        return p;
      case TargetFamily::previous_size:
        add(p, pick_word(rng_, {"the", "a", "another"}), Tag::O);
        append(p, noun(trg()));
        add(p, pick_word(rng_, {"with", "of"}), Tag::O);
        add(p, "the same size as the", Tag::O);
        add(p, chance(rng_, 0.6) ? "previously installed" : "last installed", Tag::dim);
        add(p, "one", Tag::O);
        return p;
      case TargetFamily::absolute:
        if (!t.bare_direction && t.extreme != Extreme::middle && chance(rng_, 0.6)) {
          add(p, "the", Tag::O);
          add(p, t.extreme == Extreme::leftmost ? "leftmost" : "rightmost", Tag::Dw_loc1);
          append(p, noun(trg()));
        } else if (t.extreme == Extreme::middle && chance(rng_, 0.3)) {
          add(p, "the", Tag::O);
          add(p, "middle", Tag::Dw_loc1);
          append(p, noun(trg()));
        } else {
          append(p, bare_target());
          append(p, target_extreme_words(t, false));
        }
        return p;
      case TargetFamily::relative:
        add(p, "the", Tag::O);
        append(p, noun(trg()));
        append(p, location_span(t.ordinal, t.direction, Tag::Dw_loc1, 0.25));
        append(p, panel_reference(t));
        return p;
    }
    return p;
  }

  Sentence target_sentence(const TargetPlan& t) {
    Sentence s;
    s.end = ".";
    Phrase& p = s.words;
    const Panel& g = *t.gold;
    auto subject = [&] {
      if (chance(rng_, 0.4)) {
        add(p, "it", trg());
      } else {
        add(p, "the", Tag::O);
        append(p, noun(trg()));
      }
    };
    switch (t.family) {
      case TargetFamily::id:
        switch (weighted(rng_, {0.4, 0.3, 0.3})) {
          case 0: add(p, "the id of the", Tag::O); append(p, noun(trg())); add(p, "is", Tag::O); break;
          case 1: add(p, "its", trg()); add(p, "id is", Tag::O); break;
          default: add(p, "use the", Tag::O); append(p, noun(trg())); break;
        }
        add(p, to_string(g.id), Tag::ID_wall);
        break;
      case TargetFamily::numeric: {
        const auto d = spoken_dims(g);
        switch (weighted(rng_, {0.35, 0.3, 0.2, 0.15})) {
          case 0: {
            const Phrase n = noun(trg());
            add(p, "the width of the", Tag::O);
            append(p, n);
            add(p, "is", Tag::O);
            add(p, d.width, Tag::width);
            add(p, "and the length of the", Tag::O);
            append(p, n);
            add(p, "is", Tag::O);
            add(p, d.length, Tag::length);
            break;
          }
          case 1:
            add(p, "the dimension of the", Tag::O);
            append(p, noun(trg()));
            add(p, "is", Tag::O);
            append(p, by_phrase(g, d));
            break;
          case 2:
            subject();
            add(p, "is", Tag::O);
            append(p, wide_long_phrase(d));
            break;
          default:
            add(p, "its", trg());
            add(p, "size is", Tag::O);
            append(p, by_phrase(g, d));
            break;
        }
        break;
      }
      case TargetFamily::size_word:
        if (chance(rng_, 0.5)) {
          add(p, "it", trg());
          add(p, "is a", Tag::O);
          add(p, size_word(), Tag::dim);
          append(p, noun(trg()));
        } else {
          add(p, "the", Tag::O);
          append(p, noun(trg()));
          add(p, "should be", Tag::O);
          add(p, size_word(), Tag::dim);
        }
        break;
      case TargetFamily::previous_size:
        subject();
        add(p, "has the same size as the", Tag::O);
        add(p, chance(rng_, 0.6) ? "previously installed" : "last installed", Tag::dim);
        add(p, "one", Tag::O);
        break;
      case TargetFamily::absolute:
        subject();
        add(p, "is", Tag::O);
        if (!t.bare_direction && t.extreme != Extreme::middle && chance(rng_, 0.5)) {
          add(p, "the", Tag::O);
          add(p, t.extreme == Extreme::leftmost ? "leftmost" : "rightmost", Tag::Dw_loc1);
          add(p, "one", Tag::O);
        } else {
          append(p, target_extreme_words(t, true));
        }
        break;
      case TargetFamily::relative:
        subject();
        add(p, pick_word(rng_, {"is", "is laying", "is located"}), Tag::O);
        append(p, location_span(t.ordinal, t.direction, Tag::Dw_loc1, 0.25));
        append(p, panel_reference(t));
        break;
    }
    return s;
  }

  Phrase stud_description(const StudPlan& st) {
    // the stud phrase without its preposition: "the stud 500107", "the leftmost stud", ...
    Phrase p;
    switch (st.family) {
      case StudFamily::id:
        switch (weighted(rng_, {0.7, 0.2, 0.1})) {
          case 0: add(p, "the", Tag::O); add(p, "stud", dst()); break;
          case 1: add(p, "stud", dst()); break;
          default: add(p, "the", Tag::O); add(p, "stud", dst()); add(p, "with the id", Tag::O); break;
        }
        add(p, to_string(st.gold->id), Tag::ID_stud);
        break;
      case StudFamily::extreme:
        add(p, "the", Tag::O);
        if (chance(rng_, 0.7)) {
          add(p, st.extreme == Extreme::leftmost ? "leftmost" : "rightmost", Tag::St_loc1);
          add(p, "stud", dst());
        } else {
          add(p, "stud", dst());
          add(p, "on the", Tag::O);
          add(p, st.extreme == Extreme::leftmost ? "far left" : "far right", Tag::St_loc1);
        }
        break;
      case StudFamily::relative:
        add(p, "the", Tag::O);
        if (st.ordinal > 1 && chance(rng_, 0.3)) {
          // "the third stud to the right of ..."
          static const char* const ordinals[] = {"", "first", "second", "third", "fourth"};
          add(p, ordinals[st.ordinal], Tag::St_loc1);
          add(p, "stud", dst());
          add(p, "to the", Tag::St_loc1);
          add(p, direction_word(st.direction), Tag::St_loc1);
          add(p, pick_word(rng_, {"of", "from"}), Tag::O);
          append(p, stud_reference(st));
          break;
        }
        add(p, "stud", dst());
        append(p, stud_relative_tail(st));
        break;
    }
    return p;
  }

  Phrase stud_relative_tail(const StudPlan& st) {
    Phrase p = location_span(st.ordinal, st.direction, Tag::St_loc1, 0.55);
    append(p, stud_reference(st));
    return p;
  }

  Phrase stud_reference(const StudPlan& st) {
    Phrase p;
    if (st.reference) {
      add(p, chance(rng_, 0.8) ? "the stud" : "stud", Tag::O);
      add(p, to_string(st.reference->id), Tag::St_loc2);
    } else {
      add(p, "the", Tag::O);
      add(p, st.reference_extreme == Extreme::leftmost ? "leftmost" : "rightmost", Tag::St_loc2);
      add(p, "stud", Tag::O);
    }
    return p;
  }

  Phrase dest_inline(const StudPlan& st) {
    Phrase p;
    add(p, pick_word(rng_, {"to", "on", "onto", "to", "on"}), Tag::O);
    append(p, stud_description(st));
    return p;
  }

  // A standalone sentence naming the stud; the main sentence may still say "to the stud".
  Sentence dest_sentence(const StudPlan& st, bool& main_mentions_stud) {
    Sentence s;
    s.end = ".";
    Phrase& p = s.words;
    main_mentions_stud = false;
    if (chance(rng_, 0.45)) {
      add(p, pick_word(rng_, {"place", "install", "put", "hang", "move"}), Tag::O);
      add(p, "it", trg());
      if (chance(rng_, 0.15)) add(p, "vertically", Tag::O);
      append(p, dest_inline(st));
      return s;
    }
    main_mentions_stud = chance(rng_, 0.7);
    add(p, "the", Tag::O);
    add(p, "stud", dst());
    switch (st.family) {
      case StudFamily::id:
        add(p, pick_word(rng_, {"is", "id is", "number is"}), Tag::O);
        add(p, to_string(st.gold->id), Tag::ID_stud);
        break;
      case StudFamily::extreme:
        add(p, "is", Tag::O);
        if (chance(rng_, 0.5)) {
          add(p, "the", Tag::O);
          add(p, st.extreme == Extreme::leftmost ? "leftmost" : "rightmost", Tag::St_loc1);
          add(p, "one", Tag::O);
        } else {
          add(p, "on the", Tag::O);
          add(p, st.extreme == Extreme::leftmost ? "far left" : "far right", Tag::St_loc1);
        }
        break;
      case StudFamily::relative:
        add(p, pick_word(rng_, {"is", "is laying", "is located"}), Tag::O);
        append(p, stud_relative_tail(st));
        break;
    }
    return s;
  }

  Phrase placement_inline(PlacementKind k) {
    Phrase p;
    switch (k) {
      case PlacementKind::center:
        switch (weighted(rng_, {0.25, 0.2, 0.2, 0.15, 0.1, 0.1})) {
          case 0: add(p, "on the", Tag::O); add(p, "center line", Tag::Vr_md); break;
          case 1: add(p, "into the", Tag::O); add(p, "middle line", Tag::Vr_md); break;
          case 2: add(p, "in the", Tag::O); add(p, "middle", Tag::Vr_md); add(p, "of the", Tag::O); add(p, "stud", dst()); break;
          case 3: add(p, "at the", Tag::O); add(p, "center", Tag::Vr_md); add(p, "of the", Tag::O); add(p, "stud", dst()); break;
          case 4: add(p, "along the", Tag::O); add(p, "center line", Tag::Vr_md); break;
          default: add(p, "on the", Tag::O); add(p, "middle line", Tag::Vr_md); add(p, "of the", Tag::O); add(p, "stud", dst()); break;
        }
        break;
      case PlacementKind::top:
        if (chance(rng_, 0.2)) add(p, "horizontally", Tag::O);
        add(p, pick_word(rng_, {"to the", "in the", "on the"}), Tag::O);
        add(p, pick_word(rng_, {"upper part", "upper horizontal row", "top part", "top row"}), Tag::Hr_top);
        break;
      case PlacementKind::bottom:
        if (chance(rng_, 0.2)) add(p, "horizontally", Tag::O);
        add(p, pick_word(rng_, {"to the", "in the", "on the"}), Tag::O);
        add(p, pick_word(rng_, {"lower part", "bottom row", "bottom part", "lower horizontal row"}), Tag::Hr_btm);
        break;
      case PlacementKind::none:
        break;
    }
    return p;
  }

  Sentence placement_sentence(PlacementKind k) {
    Sentence s;
    s.end = ".";
    Phrase& p = s.words;
    if (k == PlacementKind::center && chance(rng_, 0.15)) {
      add(p, "use the", Tag::O);
      add(p, pick_word(rng_, {"center line", "middle line"}), Tag::Vr_md);
      return s;
    }
    switch (weighted(rng_, {0.4, 0.25, 0.2, 0.15})) {
      case 0: add(p, "place", Tag::O); add(p, "it", trg()); break;
      case 1: add(p, "please hang the", Tag::O); append(p, noun(trg())); break;
      case 2: add(p, "put", Tag::O); add(p, "it", trg()); break;
      default: add(p, "install", Tag::O); add(p, "it", trg()); break;
    }
    append(p, placement_inline(k));
    return s;
  }

  Sentence filler() {
    Sentence s;
    s.end = ".";
    add(s.words, pick_word(rng_, {"thank you", "be careful", "go ahead", "let us start", "take your time"}), Tag::O);
    return s;
  }

  void render(const TargetPlan& target, const StudPlan& stud, PlacementKind placement, AnnotatedInstruction& out) {
    const int sentences = static_cast<int>(weighted(rng_, {0.29, 0.47, 0.17, 0.07})) + 1;
    enum Part { target_part, dest_part, placement_part };
    std::vector<Part> parts{target_part, dest_part};
    if (placement != PlacementKind::none) parts.push_back(placement_part);
    std::shuffle(parts.begin(), parts.end(), rng_);
    const std::size_t separate = std::min<std::size_t>(static_cast<std::size_t>(sentences - 1), parts.size());
    parts.resize(separate);
    const auto is_separate = [&](Part q) { return std::find(parts.begin(), parts.end(), q) != parts.end(); };
    const std::size_t fillers = static_cast<std::size_t>(sentences - 1) - separate;

    std::vector<Sentence> extra;
    bool main_mentions_stud = false;
    for (Part q : parts) {
      switch (q) {
        case target_part: extra.push_back(target_sentence(target)); break;
        case dest_part: extra.push_back(dest_sentence(stud, main_mentions_stud)); break;
        case placement_part: extra.push_back(placement_sentence(placement)); break;
      }
    }

    Sentence main;
    const bool question = chance(rng_, 0.3);
    const bool two_verbs = chance(rng_, 0.2);
    Phrase& m = main.words;
    if (question) {
      add(m, pick_word(rng_, {"can you", "could you", "can you please"}), Tag::O);
      add(m, pick_word(rng_, {"install", "hang", "move", "pick up", "place", "put"}), Tag::O);
    } else if (two_verbs) {
      add(m, pick_word(rng_, {"pick up", "please pick up", "please move", "grab"}), Tag::O);
    } else {
      add(m, pick_word(rng_, {"pick up", "install", "hang", "move", "place", "put", "mount", "please install",
                              "please move", "please pick up"}),
          Tag::O);
    }
    append(m, is_separate(target_part) ? bare_target() : target_inline(target));
    if (two_verbs && !question) {
      add(m, "and", Tag::O);
      add(m, pick_word(rng_, {"install", "move", "place", "hang", "put"}), Tag::O);
      add(m, "it", trg());
    }
    if (placement == PlacementKind::none && chance(rng_, 0.2)) add(m, "vertically", Tag::O);
    if (!is_separate(dest_part)) {
      append(m, dest_inline(stud));
    } else if (main_mentions_stud) {
      add(m, pick_word(rng_, {"to", "on", "in"}), Tag::O);
      add(m, "the", Tag::O);
      add(m, "stud", dst());
    }
    if (!is_separate(placement_part)) append(m, placement_inline(placement));
    main.end = question ? "?" : ".";

    std::vector<Sentence> all;
    all.push_back(std::move(main));
    for (auto& s : extra) all.push_back(std::move(s));
    for (std::size_t i = 0; i < fillers; ++i) {
      if (chance(rng_, 0.3)) {
        all.insert(all.begin(), filler());
      } else {
        all.push_back(filler());
      }
    }
    if (all.back().end == "." && chance(rng_, 0.15)) all.back().end.clear();

    for (const auto& s : all) {
      if (!out.text.empty()) out.text += ' ';
      for (std::size_t i = 0; i < s.words.size(); ++i) {
        std::string w = s.words[i].word;
        out.tokens.push_back(w);
        out.tags.push_back(s.words[i].tag);
        if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        if (i > 0) out.text += ' ';
        out.text += w;
      }
      if (!s.end.empty()) {
        out.text += s.end;
        out.tokens.push_back(s.end);
        out.tags.push_back(Tag::O);
      }
    }
  }

  const ComponentTables& tables_;
  bool coref_;
  Rng rng_;
  std::string id_;
  ActionHistory history_;
};

void check_tables(const ComponentTables& tables, std::size_t count) {
  if (count == 0) throw GenerationError("instruction count must be positive");
  if (tables.studs.empty()) throw GenerationError("component tables have no studs");
  if (tables.panels.empty()) throw GenerationError("component tables have no panels");
}

}  // namespace

AnnotatedInstruction generate_instruction(const ComponentTables& tables, std::uint64_t seed, std::size_t index,
                                          bool coreference) {
  check_tables(tables, 1);
  return Generator(tables, seed, index, coreference).run();
}

std::vector<AnnotatedInstruction> generate_dataset(const ComponentTables& tables, std::size_t count,
                                                   std::uint64_t seed, bool coreference) {
  check_tables(tables, count);
  std::vector<AnnotatedInstruction> out(count);
  const long n = static_cast<long>(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = Generator(tables, seed, static_cast<std::size_t>(i), coreference).run();
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<AnnotatedInstruction> generate_dataset_serial(const ComponentTables& tables, std::size_t count,
                                                          std::uint64_t seed, bool coreference) {
  check_tables(tables, count);
  std::vector<AnnotatedInstruction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(Generator(tables, seed, i, coreference).run());
  return out;
}

DatasetSplit split_dataset(std::span<const AnnotatedInstruction> data, std::uint64_t seed) {
  if (data.size() < 10) throw GenerationError("splitting needs at least 10 instructions");
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto held = static_cast<std::size_t>(std::lround(static_cast<double>(data.size()) / 10.0));
  const std::size_t n_train = data.size() - 2 * held;
  DatasetSplit split;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& dest = k < n_train ? split.train : (k < n_train + held ? split.validation : split.test);
    dest.push_back(data[order[k]]);
  }
  return split;
}

std::vector<TagSequence> sequences(std::span<const AnnotatedInstruction> data) {
  std::vector<TagSequence> out;
  out.reserve(data.size());
  for (const auto& d : data) out.push_back(d.sequence());
  return out;
}

void write_annotations(std::ostream& out, std::span<const AnnotatedInstruction> data) {
  for (const auto& d : data) {
    AnnotationBlock block;
    block.id = d.id;
    block.meta["text"] = d.text;
    block.meta["gold_command"] = to_json(d.gold_command).dump();
    if (!d.context.empty()) block.meta["context"] = to_json(d.context).dump();
    block.meta["sentence_count"] = std::to_string(d.sentence_count);
    block.sequence = d.sequence();
    write_annotation_block(out, block);
  }
}

void write_annotations_file(const std::filesystem::path& path, std::span<const AnnotatedInstruction> data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_annotations(out, data);
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<AnnotatedInstruction> read_annotations(std::istream& in) {
  std::vector<AnnotatedInstruction> out;
  for (auto& block : read_annotation_blocks(in)) {
    AnnotatedInstruction d;
    d.id = block.id.value_or(std::to_string(out.size() + 1));
    d.tokens = std::move(block.sequence.tokens);
    d.tags = std::move(block.sequence.tags);
    const auto meta = [&](const char* key) -> const std::string* {
      auto it = block.meta.find(key);
      return it == block.meta.end() ? nullptr : &it->second;
    };
    try {
      if (const auto* g = meta("gold_command")) {
        d.gold_command = robot_command_from_json(nlohmann::json::parse(*g));
      } else {
        throw FormatError("instruction " + d.id + " has no gold_command", 0);
      }
      if (const auto* c = meta("context")) d.context = action_history_from_json(nlohmann::json::parse(*c));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("instruction " + d.id + ": " + e.what(), 0);
    }
    if (const auto* t = meta("text")) {
      d.text = *t;
    } else {
      for (const auto& tok : d.tokens) d.text += (d.text.empty() ? "" : " ") + tok;
    }
    if (const auto* s = meta("sentence_count")) {
      try {
        d.sentence_count = std::stoi(*s);
      } catch (const std::exception&) {
        throw FormatError("instruction " + d.id + ": bad sentence_count '" + *s + "'", 0);
      }
    } else {
      d.sentence_count = tagger::count_sentences(d.tokens);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<AnnotatedInstruction> read_annotations_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string(), 0);
  return read_annotations(in);
}

}  // namespace dw::datagen
