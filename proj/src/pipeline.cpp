#include "dw/pipeline.hpp"

#include <algorithm>

namespace dw {

InstructionResult run_instruction(const tagger::TaggerModel& model, const sim::WallState& state,
                                  std::string_view text) {
  std::vector<std::string> tokens;
  try {
    tokens = tagger::tokenize(text);
  } catch (const Error& e) {
    throw StageError("tokenize", e.what());
  }

  InstructionResult result;
  result.tagged = model.predict(tokens);
  const auto& tags = result.tagged.tags;
  if (std::none_of(tags.begin(), tags.end(), is_target_tag)) {
    throw StageError("tag", "no target panel description was recognized", std::string(text));
  }
  if (std::none_of(tags.begin(), tags.end(), is_destination_tag)) {
    throw StageError("tag", "no destination stud description was recognized", std::string(text));
  }

  try {
    result.grounding = ground(result.tagged, state.tables, state.history);
  } catch (const GroundingError& e) {
    throw StageError("ground", std::string(to_string(e.kind())) + ": " + e.what(), e.phrase());
  }

  try {
    result.state = sim::apply(state, result.grounding.command);
  } catch (const sim::SimulationError& e) {
    throw StageError("simulate", std::string(to_string(e.kind())) + ": " + e.what(),
                     describe(result.grounding.command));
  }
  return result;
}

sim::WallState replay(const tagger::TaggerModel& model, sim::WallState state, std::span<const std::string> lines) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      state = run_instruction(model, state, lines[i]).state;
    } catch (const StageError& e) {
      throw StageError(e.stage(), "line " + std::to_string(i + 1) + ": " + e.what(), e.phrase());
    }
  }
  return state;
}

}  // namespace dw
