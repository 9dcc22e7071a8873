#include "dw/annotations.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "dw/error.hpp"

namespace dw {

namespace {

constexpr std::string_view kIdKey = "instruction_id";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_sentence_end(const std::string& token) { return token == "." || token == "?" || token == "!"; }

}  // namespace

std::vector<AnnotationBlock> read_annotation_blocks(std::istream& in) {
  std::vector<AnnotationBlock> blocks;
  AnnotationBlock cur;
  bool open = false;         // cur has received an id, metadata or tokens
  bool saw_ids = false;      // the file delimits instructions with ids
  auto finish = [&] {
    if (open && (!cur.sequence.tokens.empty() || cur.id)) blocks.push_back(std::move(cur));
    cur = AnnotationBlock{};
    open = false;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      // without ids every blank-separated block is its own sequence
      if (!saw_ids && !cur.sequence.tokens.empty()) finish();
      continue;
    }
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(std::string_view(line).substr(1, colon - 1));
      const std::string value = trim(std::string_view(line).substr(colon + 1));
      if (key == kIdKey) {
        finish();
        saw_ids = true;
        cur.id = value;
        open = true;
      } else {
        if (!cur.sequence.tokens.empty() && !saw_ids) finish();
        cur.meta[key] = value;
        open = true;
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("expected token<TAB>tag", lineno);
    std::string token = line.substr(0, tab);
    std::string tag_name = trim(std::string_view(line).substr(tab + 1));
    if (token.empty()) throw FormatError("empty token", lineno);
    if (tag_name.empty()) throw FormatError("empty tag for token '" + token + "'", lineno);
    auto tag = tag_from_string(tag_name);
    if (!tag) throw FormatError("unknown tag '" + tag_name + "'", lineno);
    cur.sequence.tokens.push_back(std::move(token));
    cur.sequence.tags.push_back(*tag);
    open = true;
  }
  finish();
  return blocks;
}

std::vector<AnnotationBlock> read_annotation_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string(), 0);
  return read_annotation_blocks(in);
}

void write_annotation_block(std::ostream& out, const AnnotationBlock& block) {
  if (block.id) out << "# " << kIdKey << ": " << *block.id << '\n';
  for (const auto& [k, v] : block.meta) out << "# " << k << ": " << v << '\n';
  const auto& s = block.sequence;
  bool pending = false;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    out << s.tokens[i] << '\t' << to_string(s.tags[i]) << '\n';
    pending = true;
    if (is_sentence_end(s.tokens[i])) {
      out << '\n';
      pending = false;
    }
  }
  if (pending) out << '\n';
}

std::vector<TagSequence> read_external_tags(std::istream& in) {
  std::vector<TagSequence> out;
  for (auto& b : read_annotation_blocks(in)) out.push_back(std::move(b.sequence));
  return out;
}

std::vector<TagSequence> read_external_tags_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string(), 0);
  return read_external_tags(in);
}

}  // namespace dw
