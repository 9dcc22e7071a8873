#pragma once

// Information mapping: tagged words + component tables + action history
// -> executable robot command and the action record it produces.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dw/components.hpp"
#include "dw/error.hpp"
#include "dw/tags.hpp"

namespace dw {

struct Placement {
  VerHor orientation = VerHor::vertical;
  LeftCent line = LeftCent::left;
  TopBtm row = TopBtm::none;

  bool operator==(const Placement&) const = default;
};

struct RobotCommand {
  PanelId target_panel_id;
  StudId destination_stud_id;
  Placement placement;

  bool operator==(const RobotCommand&) const = default;
};

nlohmann::json to_json(const RobotCommand& cmd);
RobotCommand robot_command_from_json(const nlohmann::json& j);
std::string describe(const RobotCommand& cmd);  // "500320 -> 500100 vertical/left"

enum class Direction { left, right };
enum class Extreme { leftmost, rightmost, middle };

// Either a signed step (direction + ordinal) or an extreme position.
struct SpatialPhrase {
  Direction direction = Direction::left;
  int ordinal = 1;
  std::optional<Extreme> extreme;

  bool operator==(const SpatialPhrase&) const = default;
};

class GroundingError : public Error {
 public:
  enum class Kind {
    no_target,
    no_destination,
    unresolvable_location,
    unknown_id,
    out_of_range,
    already_installed,
    no_match,
    missing_antecedent,
    empty_column,
    ambiguous_placement,
    ambiguous_reference,
  };

  GroundingError(Kind kind, const std::string& message, std::string phrase = {})
      : Error(message), kind_(kind), phrase_(std::move(phrase)) {}

  Kind kind() const { return kind_; }
  // The words the failure is about; empty when no phrase applies.
  const std::string& phrase() const { return phrase_; }

 private:
  Kind kind_;
  std::string phrase_;
};

std::string_view to_string(GroundingError::Kind kind);

// Words tagged St_loc1 / Dw_loc1 (or an extreme reference) -> direction and
// ordinal, or an extreme. Connective words ("to", "the", "of", ...) are
// skipped.
SpatialPhrase parse_spatial(std::span<const std::string> words);

// A panel counts as installed when its table flag is set or the history
// already holds it.
bool is_installed(const Panel& panel, const ActionHistory& history);

const Stud& resolve_stud(const TagSequence& tagged, const ComponentTables& tables);
const Panel& resolve_target_by_dimension(const TagSequence& tagged, const ComponentTables& tables,
                                         const ActionHistory& history);
const Panel& resolve_target_by_id_or_position(const TagSequence& tagged, const ComponentTables& tables,
                                              const ActionHistory& history);
Placement resolve_placement(const TagSequence& tagged);

// Record for executing `cmd` on `tables`: left x from the stud line, right x
// from the panel size along the chosen orientation.
ActionRecord make_action_record(const RobotCommand& cmd, const ComponentTables& tables);

struct Grounding {
  RobotCommand command;
  ActionRecord record;
};

// Pure: picks resolvers by tag presence (ID_wall > dimension > position for
// the target, ID_stud > location for the stud). Trg/Dst are ignored.
// Geometry is not checked here.
Grounding ground(const TagSequence& tagged, const ComponentTables& tables, const ActionHistory& history);

// Same, and appends the record to `history`.
Grounding ground_and_record(const TagSequence& tagged, const ComponentTables& tables, ActionHistory& history);

}  // namespace dw
