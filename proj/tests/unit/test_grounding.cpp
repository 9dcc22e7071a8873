#include <gtest/gtest.h>

#include "dw/grounding.hpp"
#include "support.hpp"

namespace dw {
namespace {

using testing::tagged;
using Kind = GroundingError::Kind;

const ComponentTables& tables() {
  static const ComponentTables t = default_fixture();
  return t;
}

Kind kind_of(const TagSequence& s, const ActionHistory& h = {}) {
  try {
    ground(s, tables(), h);
  } catch (const GroundingError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "grounding succeeded";
  return Kind::no_target;
}

ActionHistory installed(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> panels_on_studs) {
  ActionHistory h;
  for (auto [panel, stud] : panels_on_studs) {
    h = append_action(h, make_action_record({PanelId{panel}, StudId{stud}, {}}, tables()));
  }
  return h;
}

SpatialPhrase spatial(std::vector<std::string> words) { return parse_spatial(words); }

TEST(ParseSpatial, StepsAndExtremes) {
  EXPECT_EQ(spatial({"second", "left"}), (SpatialPhrase{Direction::left, 2, std::nullopt}));
  EXPECT_EQ(spatial({"right"}), (SpatialPhrase{Direction::right, 1, std::nullopt}));
  EXPECT_EQ(spatial({"third", "to", "the", "left"}), (SpatialPhrase{Direction::left, 3, std::nullopt}));
  EXPECT_EQ(spatial({"leftmost"}).extreme, Extreme::leftmost);
  EXPECT_EQ(spatial({"far", "right"}).extreme, Extreme::rightmost);
  EXPECT_EQ(spatial({"middle"}).extreme, Extreme::middle);
  EXPECT_THROW(spatial({"banana", "left"}), GroundingError);
  EXPECT_THROW(spatial({"second"}), GroundingError);
}

TEST(ResolveStud, RelativeDescriptions) {
  EXPECT_EQ(resolve_stud(tagged("the stud second/St_loc1 left/St_loc1 to the stud 500103/St_loc2"), tables()).id,
            StudId{500101});
  EXPECT_EQ(resolve_stud(tagged("the stud right/St_loc1 to the stud 500100/St_loc2"), tables()).id, StudId{500101});
  EXPECT_EQ(resolve_stud(tagged("third/St_loc1 to/St_loc1 the/St_loc1 left/St_loc1 from the stud 500105/St_loc2"),
                         tables())
                .id,
            StudId{500102});
  EXPECT_EQ(resolve_stud(tagged("the leftmost/St_loc1 stud"), tables()).id, StudId{500100});
  EXPECT_EQ(resolve_stud(tagged("the rightmost/St_loc1 stud"), tables()).id, StudId{500112});
  EXPECT_EQ(resolve_stud(tagged("the stud 500107/ID_stud"), tables()).id, StudId{500107});
  EXPECT_EQ(resolve_stud(tagged("right/St_loc1 to the leftmost/St_loc2 stud"), tables()).id, StudId{500101});
}

// Stepping k right then k left returns to the reference.
TEST(ResolveStud, OffsetSymmetry) {
  const std::vector<std::string> ordinals{"first", "second", "third", "fourth"};
  for (int ref = 4; ref <= 8; ++ref) {
    for (int k = 1; k <= 4; ++k) {
      const std::string ref_id = std::to_string(500100 + ref);
      const auto right = resolve_stud(
          tagged(ordinals[static_cast<std::size_t>(k - 1)] + "/St_loc1 right/St_loc1 to " + ref_id + "/St_loc2"),
          tables());
      const auto back = resolve_stud(tagged(ordinals[static_cast<std::size_t>(k - 1)] + "/St_loc1 left/St_loc1 to " +
                                            to_string(right.id) + "/St_loc2"),
                                     tables());
      EXPECT_EQ(right.index, ref + k);
      EXPECT_EQ(back.id.value, 500100u + static_cast<unsigned>(ref));
    }
  }
}

TEST(ResolveStud, Errors) {
  EXPECT_EQ(kind_of(tagged("panel 500300/ID_wall on stud 500199/ID_stud")), Kind::unknown_id);
  EXPECT_EQ(kind_of(tagged("panel 500300/ID_wall on left/St_loc1 of 500100/St_loc2")), Kind::out_of_range);
  EXPECT_EQ(kind_of(tagged("panel 500300/ID_wall to the 500100/ID_stud or 500101/ID_stud")),
            Kind::ambiguous_reference);
  EXPECT_EQ(kind_of(tagged("panel 500300/ID_wall over there")), Kind::no_destination);
}

TEST(ResolveTarget, ByDimension) {
  EXPECT_EQ(resolve_target_by_dimension(tagged("the full-size/dim drywall"), tables(), {}).id, PanelId{500300});
  const auto h = installed({{500300, 500101}});
  EXPECT_EQ(resolve_target_by_dimension(tagged("the 4/width by 8/length panel"), tables(), h).id, PanelId{500301});
  EXPECT_EQ(resolve_target_by_dimension(tagged("the 48/width by 96/length panel"), tables(), h).id, PanelId{500301});
  EXPECT_EQ(resolve_target_by_dimension(tagged("the 16/width by 96/length panel"), tables(), {}).id, PanelId{500320});
  EXPECT_EQ(resolve_target_by_dimension(
                tagged("same size as the previously/dim installed/dim one"), tables(), installed({{500310, 500100}}))
                .id,
            PanelId{500311});
}

TEST(ResolveTarget, DimensionErrors) {
  EXPECT_EQ(kind_of(tagged("same size as the previously/dim installed/dim one to 500101/ID_stud")),
            Kind::missing_antecedent);
  EXPECT_EQ(kind_of(tagged("the 5/width by 9/length panel to 500101/ID_stud")), Kind::no_match);
}

TEST(ResolveTarget, ByIdOrPosition) {
  EXPECT_EQ(resolve_target_by_id_or_position(tagged("the piece 500310/ID_wall"), tables(), {}).id, PanelId{500310});
  EXPECT_EQ(resolve_target_by_id_or_position(tagged("the panel in the middle/Dw_loc1"), tables(), {}).floor_column, 1);
  EXPECT_EQ(resolve_target_by_id_or_position(tagged("the leftmost/Dw_loc1 panel"), tables(), {}).id, PanelId{500300});
  const auto h = installed({{500301, 500104}});
  EXPECT_EQ(resolve_target_by_id_or_position(tagged("the panel left/Dw_loc1 of the previous/Dw_loc2 one"), tables(), h)
                .floor_column,
            0);
  EXPECT_EQ(resolve_target_by_id_or_position(tagged("the panel right/Dw_loc1 to 500300/Dw_loc2"), tables(), {}).id,
            PanelId{500301});
}

TEST(ResolveTarget, PositionErrors) {
  EXPECT_EQ(kind_of(tagged("panel 500399/ID_wall to 500101/ID_stud")), Kind::unknown_id);
  EXPECT_EQ(kind_of(tagged("panel 500300/ID_wall to 500101/ID_stud"), installed({{500300, 500104}})),
            Kind::already_installed);
  EXPECT_EQ(kind_of(tagged("panel left/Dw_loc1 of 500300/Dw_loc2 to 500101/ID_stud")), Kind::out_of_range);
  EXPECT_EQ(kind_of(tagged("the stud 500101/ID_stud")), Kind::no_target);
  const auto column0 = installed({{500300, 500100}, {500310, 500104}, {500320, 500108}});
  EXPECT_EQ(kind_of(tagged("panel left/Dw_loc1 of 500301/Dw_loc2 to 500101/ID_stud"), column0), Kind::empty_column);
}

TEST(ResolvePlacement, Rules) {
  EXPECT_EQ(resolve_placement(tagged("hang it")), (Placement{VerHor::vertical, LeftCent::left, TopBtm::none}));
  EXPECT_EQ(resolve_placement(tagged("on the middle/Vr_md line/Vr_md")),
            (Placement{VerHor::vertical, LeftCent::center, TopBtm::none}));
  EXPECT_EQ(resolve_placement(tagged("in the bottom/Hr_btm row/Hr_btm")),
            (Placement{VerHor::horizontal, LeftCent::left, TopBtm::bottom}));
  EXPECT_EQ(resolve_placement(tagged("in the upper/Hr_top row/Hr_top")),
            (Placement{VerHor::horizontal, LeftCent::left, TopBtm::top}));
  EXPECT_EQ(kind_of(tagged("panel 500300/ID_wall to 500101/ID_stud top/Hr_top middle/Vr_md")),
            Kind::ambiguous_placement);
}

TEST(Ground, FirstLayoutInstruction) {
  const auto g = ground(tagged("pick up the drywall 500320/ID_wall and install it on the leftmost/St_loc1 stud"),
                        tables(), {});
  EXPECT_EQ(g.command, (RobotCommand{PanelId{500320}, StudId{500100}, {}}));
  EXPECT_DOUBLE_EQ(g.record.installed_x_left, -0.75);
  EXPECT_DOUBLE_EQ(g.record.installed_x_right, 15.25);
  EXPECT_DOUBLE_EQ(g.record.l, 8);
}

TEST(Ground, ComposedExample) {
  const auto g = ground(tagged("can you install the piece 500310/ID_wall vertically in the stud ? the stud is laying "
                               "third/St_loc1 to/St_loc1 the/St_loc1 left/St_loc1 from the stud 500105/St_loc2 . "
                               "please hang the panel into the middle/Vr_md line/Vr_md ."),
                        tables(), {});
  EXPECT_EQ(g.command,
            (RobotCommand{PanelId{500310}, StudId{500102}, {VerHor::vertical, LeftCent::center, TopBtm::none}}));
  EXPECT_EQ(g.record.left_cent, LeftCent::center);
  EXPECT_DOUBLE_EQ(g.record.installed_x_left, 32);
  EXPECT_DOUBLE_EQ(g.record.installed_x_right, 64);
}

TEST(Ground, IdTakesPrecedenceAndCorefTagsIgnored) {
  const auto g = ground(tagged("the full-size/dim panel 500311/ID_wall to/Dst the leftmost/St_loc1 stud/Dst"),
                        tables(), {});
  EXPECT_EQ(g.command.target_panel_id, PanelId{500311});
}

TEST(Ground, RecordsIntoHistory) {
  ActionHistory h;
  ground_and_record(tagged("panel 500300/ID_wall to 500101/ID_stud"), tables(), h);
  EXPECT_EQ(h.size(), 1u);
  EXPECT_EQ(kind_of(tagged("panel 500300/ID_wall to 500105/ID_stud"), h), Kind::already_installed);
}

TEST(ActionRecordGeometry, WidthRule) {
  for (const auto& panel : tables().panels) {
    for (auto orientation : {VerHor::vertical, VerHor::horizontal}) {
      Placement p{orientation, LeftCent::center, orientation == VerHor::vertical ? TopBtm::none : TopBtm::top};
      const auto r = make_action_record({panel.id, StudId{500103}, p}, tables());
      const double span = r.installed_x_right - r.installed_x_left;
      EXPECT_DOUBLE_EQ(span, 12 * (orientation == VerHor::vertical ? panel.w : panel.l));
      EXPECT_DOUBLE_EQ(r.installed_x_left, 48);
      EXPECT_NO_THROW(validate(r));
    }
  }
}

TEST(RobotCommandJson, RoundTrip) {
  const RobotCommand c{PanelId{500301}, StudId{500107}, {VerHor::horizontal, LeftCent::left, TopBtm::bottom}};
  EXPECT_EQ(robot_command_from_json(to_json(c)), c);
  EXPECT_NE(describe(c).find("500301"), std::string::npos);
}

}  // namespace
}  // namespace dw
