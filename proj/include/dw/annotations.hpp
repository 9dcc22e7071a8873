#pragma once

// Token-per-line annotation files:
//
//   # instruction_id: 17
//   # text: Pick up the full-size drywall to the stud 500107
//   pick<TAB>O
//   ...
//   500107<TAB>ID_stud
//   <blank line after every sentence>
//
// `# key: value` lines before the first token of an instruction are kept as
// metadata; `# instruction_id:` starts a new instruction. Files without
// instruction ids are read as one sequence per blank-line-separated block.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dw/tags.hpp"

namespace dw {

struct AnnotationBlock {
  std::optional<std::string> id;
  std::map<std::string, std::string> meta;
  TagSequence sequence;

  bool operator==(const AnnotationBlock&) const = default;
};

// Throws FormatError naming the line for a missing tab, empty token or tag,
// or an unknown tag.
std::vector<AnnotationBlock> read_annotation_blocks(std::istream& in);
std::vector<AnnotationBlock> read_annotation_file(const std::filesystem::path& path);

// Sentences end after `.`, `?` or `!`; each is followed by a blank line.
void write_annotation_block(std::ostream& out, const AnnotationBlock& block);

// Sequences only, for plugging in predictions from an external tagger.
std::vector<TagSequence> read_external_tags(std::istream& in);
std::vector<TagSequence> read_external_tags_file(const std::filesystem::path& path);

}  // namespace dw
