#pragma once

// tokenize -> tag -> ground -> simulate for one instruction against a wall
// state, with failures attributed to the stage that raised them.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dw/error.hpp"
#include "dw/grounding.hpp"
#include "dw/simulator.hpp"
#include "dw/tagger.hpp"

namespace dw {

class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message, std::string phrase = {})
      : Error(message), stage_(std::move(stage)), phrase_(std::move(phrase)) {}

  // "tokenize", "tag", "ground" or "simulate"
  const std::string& stage() const { return stage_; }
  const std::string& phrase() const { return phrase_; }

 private:
  std::string stage_;
  std::string phrase_;
};

struct InstructionResult {
  TagSequence tagged;
  Grounding grounding;
  sim::WallState state;  // after the placement
};

// Does not touch `state`; throws StageError.
InstructionResult run_instruction(const tagger::TaggerModel& model, const sim::WallState& state,
                                  std::string_view text);

// Runs every line in order from `state`. A failing line throws StageError
// whose message starts with "line N: ".
sim::WallState replay(const tagger::TaggerModel& model, sim::WallState state, std::span<const std::string> lines);

}  // namespace dw
