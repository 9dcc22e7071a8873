#include "dw/tags.hpp"

#include <algorithm>

#include "dw/error.hpp"

namespace dw {

namespace {

constexpr std::array<std::string_view, kAllTagCount> kNames{
    "Dst", "Dw_loc1", "Dw_loc2", "Hr_btm", "Hr_top", "ID_stud", "ID_wall", "O",
    "St_loc1", "St_loc2", "Trg", "Vr_md", "dim", "length", "width"};

}  // namespace

std::string_view to_string(Tag t) { return kNames[static_cast<std::size_t>(t)]; }

std::optional<Tag> tag_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == s) return static_cast<Tag>(i);
  }
  return std::nullopt;
}

TagSet::TagSet(std::vector<Tag> tags) : tags_(std::move(tags)) {
  std::sort(tags_.begin(), tags_.end());
  tags_.erase(std::unique(tags_.begin(), tags_.end()), tags_.end());
  index_.fill(-1);
  for (std::size_t i = 0; i < tags_.size(); ++i) index_[static_cast<std::size_t>(tags_[i])] = static_cast<int>(i);
}

TagSet TagSet::base() {
  return TagSet({Tag::Dw_loc1, Tag::Dw_loc2, Tag::Hr_btm, Tag::Hr_top, Tag::ID_stud, Tag::ID_wall, Tag::O,
                 Tag::St_loc1, Tag::St_loc2, Tag::Vr_md, Tag::dim, Tag::length, Tag::width});
}

TagSet TagSet::coreference() {
  auto tags = base().tags();
  tags.push_back(Tag::Trg);
  tags.push_back(Tag::Dst);
  return TagSet(std::move(tags));
}

bool is_target_tag(Tag t) {
  switch (t) {
    case Tag::ID_wall:
    case Tag::dim:
    case Tag::length:
    case Tag::width:
    case Tag::Dw_loc1:
    case Tag::Dw_loc2:
      return true;
    default:
      return false;
  }
}

bool is_destination_tag(Tag t) { return t == Tag::ID_stud || t == Tag::St_loc1 || t == Tag::St_loc2; }

bool is_placement_tag(Tag t) { return t == Tag::Vr_md || t == Tag::Hr_top || t == Tag::Hr_btm; }

}  // namespace dw
