#include <gtest/gtest.h>

#include <sstream>

#include "dw/annotations.hpp"
#include "dw/error.hpp"
#include "support.hpp"

namespace dw {
namespace {

std::size_t error_line(const std::string& doc) {
  std::istringstream in(doc);
  try {
    read_annotation_blocks(in);
  } catch (const FormatError& e) {
    return e.line();
  }
  return 0;
}

TEST(Annotations, RoundTrip) {
  AnnotationBlock b;
  b.id = "17";
  b.meta["text"] = "Pick up the full-size drywall. To the stud 500107";
  b.sequence = testing::tagged("pick up the full-size/dim drywall . to the stud 500107/ID_stud");
  std::ostringstream out;
  write_annotation_block(out, b);
  std::istringstream in(out.str());
  const auto back = read_annotation_blocks(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], b);
}

TEST(Annotations, OneLinePerTokenAndBlankSeparator) {
  AnnotationBlock b;
  b.sequence = testing::tagged("pick up the full-size/dim drywall to the stud 500107/ID_stud");
  std::ostringstream out;
  write_annotation_block(out, b);
  std::istringstream in(out.str());
  std::string line;
  int tokens = 0, blanks = 0;
  while (std::getline(in, line)) (line.empty() ? blanks : tokens)++;
  EXPECT_EQ(tokens, 9);
  EXPECT_EQ(blanks, 1);
}

TEST(Annotations, ErrorsNameTheLine) {
  EXPECT_EQ(error_line("pick\tO\nup O\n"), 2u);
  EXPECT_EQ(error_line("pick\tO\nup\t\n"), 2u);
  EXPECT_EQ(error_line("pick\tO\n\nup\tFoo\n"), 3u);
  EXPECT_EQ(error_line("\tO\n"), 1u);
}

TEST(ExternalTags, BlocksAndEmptyInput) {
  std::istringstream empty("");
  EXPECT_TRUE(read_external_tags(empty).empty());
  std::istringstream two("pick\tO\nit\tO\n\n500107\tID_stud\n");
  const auto seqs = read_external_tags(two);
  ASSERT_EQ(seqs.size(), 2u);
  EXPECT_EQ(seqs[1].tags, std::vector<Tag>{Tag::ID_stud});
}

TEST(Tags, NamesAndSets) {
  for (std::size_t i = 0; i < kAllTagCount; ++i) {
    const auto t = static_cast<Tag>(i);
    EXPECT_EQ(tag_from_string(to_string(t)), t);
    if (i > 0) {
      EXPECT_LT(to_string(static_cast<Tag>(i - 1)), to_string(t));
    }
  }
  EXPECT_FALSE(tag_from_string("Foo"));
  EXPECT_EQ(TagSet::base().size(), 13u);
  EXPECT_EQ(TagSet::coreference().size(), 15u);
  EXPECT_FALSE(TagSet::base().is_coreference());
  EXPECT_TRUE(is_target_tag(Tag::dim));
  EXPECT_TRUE(is_destination_tag(Tag::St_loc2));
  EXPECT_TRUE(is_placement_tag(Tag::Hr_btm));
}

}  // namespace
}  // namespace dw
