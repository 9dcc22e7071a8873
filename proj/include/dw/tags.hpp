#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dw {

// Word-level slot labels. Declaration order is the lexicographic (ASCII)
// order of the names; decoders break ties by this order.
enum class Tag : std::uint8_t {
  Dst,  // co-reference only
  Dw_loc1,
  Dw_loc2,
  Hr_btm,
  Hr_top,
  ID_stud,
  ID_wall,
  O,
  St_loc1,
  St_loc2,
  Trg,  // co-reference only
  Vr_md,
  dim,
  length,
  width,
};

inline constexpr std::size_t kAllTagCount = 15;

std::string_view to_string(Tag t);
std::optional<Tag> tag_from_string(std::string_view s);

// Ordered set of tags a model or corpus works with.
class TagSet {
 public:
  static TagSet base();         // the 13 labels
  static TagSet coreference();  // base plus Trg and Dst
  static TagSet all() { return coreference(); }

  explicit TagSet(std::vector<Tag> tags);

  std::size_t size() const { return tags_.size(); }
  Tag at(std::size_t i) const { return tags_[i]; }
  const std::vector<Tag>& tags() const { return tags_; }
  std::optional<std::size_t> index_of(Tag t) const {
    auto i = index_[static_cast<std::size_t>(t)];
    return i < 0 ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(i));
  }
  bool contains(Tag t) const { return index_of(t).has_value(); }
  bool is_coreference() const { return contains(Tag::Trg); }

  bool operator==(const TagSet& o) const { return tags_ == o.tags_; }

 private:
  std::vector<Tag> tags_;
  std::array<int, kAllTagCount> index_{};
};

// Tokens paired 1:1 with labels.
struct TagSequence {
  std::vector<std::string> tokens;
  std::vector<Tag> tags;

  bool operator==(const TagSequence&) const = default;
};

// Argument families that a tag contributes to.
bool is_target_tag(Tag t);       // ID_wall, dim, length, width, Dw_loc1, Dw_loc2
bool is_destination_tag(Tag t);  // ID_stud, St_loc1, St_loc2
bool is_placement_tag(Tag t);    // Vr_md, Hr_top, Hr_btm

}  // namespace dw
