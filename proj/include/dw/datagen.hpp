#pragma once

// Seeded generator of annotated drywall instructions, the 80/10/10 split, and
// annotation-file I/O for generated corpora.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dw/components.hpp"
#include "dw/error.hpp"
#include "dw/grounding.hpp"
#include "dw/tags.hpp"

namespace dw::datagen {

class GenerationError : public Error {
 public:
  using Error::Error;
};

struct AnnotatedInstruction {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::vector<Tag> tags;
  RobotCommand gold_command;
  // Placements assumed to have happened before this instruction. Grounding
  // the gold tags against this history yields gold_command.
  ActionHistory context;
  int sentence_count = 0;

  TagSequence sequence() const { return {tokens, tags}; }
  bool operator==(const AnnotatedInstruction&) const = default;
};

// Instruction `index` of the corpus for `seed`. Each index draws from its own
// generator, so instructions can be produced in any order. The co-reference
// flag only changes tags: text and commands are identical in both modes.
AnnotatedInstruction generate_instruction(const ComponentTables& tables, std::uint64_t seed, std::size_t index,
                                          bool coreference = false);

// Throws GenerationError when count is 0 or the tables lack studs or panels.
// The OpenMP kernel and the serial reference return identical corpora.
std::vector<AnnotatedInstruction> generate_dataset(const ComponentTables& tables, std::size_t count,
                                                   std::uint64_t seed, bool coreference = false);
std::vector<AnnotatedInstruction> generate_dataset_serial(const ComponentTables& tables, std::size_t count,
                                                          std::uint64_t seed, bool coreference = false);

struct DatasetSplit {
  std::vector<AnnotatedInstruction> train;
  std::vector<AnnotatedInstruction> validation;
  std::vector<AnnotatedInstruction> test;
};

// Seeded shuffle, then validation = test = round(n / 10) and train gets the
// rest. Throws GenerationError for fewer than 10 instructions.
DatasetSplit split_dataset(std::span<const AnnotatedInstruction> data, std::uint64_t seed);

std::vector<TagSequence> sequences(std::span<const AnnotatedInstruction> data);

// Token-per-line format with `# text`, `# gold_command`, `# context` and
// `# sentence_count` metadata under each `# instruction_id`.
void write_annotations(std::ostream& out, std::span<const AnnotatedInstruction> data);
void write_annotations_file(const std::filesystem::path& path, std::span<const AnnotatedInstruction> data);
std::vector<AnnotatedInstruction> read_annotations(std::istream& in);
std::vector<AnnotatedInstruction> read_annotations_file(const std::filesystem::path& path);

}  // namespace dw::datagen
