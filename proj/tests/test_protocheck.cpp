#include <gtest/gtest.h>

#include <random>

#include "bac/protocheck.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bac;
using bactest::catalog;
using bactest::mapping;

namespace {

PrototypeControl ctl(std::string id, std::string type, std::optional<std::string> text,
                     std::optional<std::string> group = std::nullopt) {
    return PrototypeControl{std::move(id), bactest::kNs + type, std::move(text), std::move(group), 0};
}

std::set<std::string> supported(const char* behavior) { return supported_control_types(behavior, catalog(), mapping()); }

}  // namespace

TEST(Prototype, ParsesPercentEncodedText) {
    auto p = parse_prototype_xml(R"(<mockup><controls>
      <control controlID="1" controlTypeID="com.balsamiq.mockups::BrowserWindow" isInGroup="-1">
        <controlProperties><text>Book%20Flights</text></controlProperties></control>
      <control controlID="2" controlTypeID="com.balsamiq.mockups::Button"/>
    </controls></mockup>)",
                                 "p.bmml");
    ASSERT_EQ(p.controls.size(), 2u);
    EXPECT_EQ(p.controls[0].text, std::optional<std::string>("Book Flights"));
    EXPECT_FALSE(p.controls[0].group_id);
    EXPECT_FALSE(p.controls[1].text);
}

TEST(Prototype, EmptyAndBroken) {
    EXPECT_TRUE(parse_prototype_xml("<mockup><controls/></mockup>", "e").controls.empty());
    EXPECT_THROW(parse_prototype_xml("<mockup><controls><control controlID=\"1\"/></controls></mockup>", "b"),
                 ParseError);
    EXPECT_THROW(parse_prototype_xml("<mockup><controls>", "b"), ParseError);
}

TEST(Prototype, NestedGroupChildren) {
    auto p = parse_prototype_xml(R"(<mockup><controls>
      <control controlID="5" controlTypeID="__group__">
        <groupChildrenDescriptors>
          <control controlID="0" controlTypeID="com.balsamiq.mockups::Label"><controlProperties><text>Email</text></controlProperties></control>
          <control controlID="1" controlTypeID="com.balsamiq.mockups::TextInput"/>
        </groupChildrenDescriptors>
      </control></controls></mockup>)",
                                 "g");
    ASSERT_EQ(p.controls.size(), 3u);
    EXPECT_EQ(p.controls[1].group_id, p.controls[2].group_id);
    EXPECT_TRUE(p.controls[1].group_id);
    EXPECT_EQ(count_matching_elements("Email", supported("setInTheField"), p), 1);
}

TEST(Prototype, InvalidEscapeWarns) {
    auto p = parse_prototype_xml(R"(<mockup><controls><control controlID="1" controlTypeID="com.balsamiq.mockups::Button">
      <controlProperties><text>100%zz</text></controlProperties></control></controls></mockup>)",
                                 "w");
    EXPECT_EQ(p.controls[0].text, std::optional<std::string>("100%zz"));
    EXPECT_EQ(p.warnings.size(), 1u);
}

TEST(Prototype, SupportedTypes) {
    auto s = supported("setInTheField");
    EXPECT_TRUE(s.count("com.balsamiq.mockups::DateChooser"));
    EXPECT_TRUE(s.count("com.balsamiq.mockups::TextInput"));
    EXPECT_TRUE(supported("selectFromDataSet").empty());
    ConcreteMapping partial = parse_mapping("Button = Button\n", "m");
    EXPECT_THROW(supported_control_types("setInTheField", catalog(), partial), MappingGap);
}

TEST(Prototype, CountExamples) {
    Prototype round;
    round.controls = {ctl("1", "RadioButton", "Round Trip"), ctl("2", "RadioButton", "One Way")};
    EXPECT_EQ(count_matching_elements("Round Trip", supported("choose"), round), 1);

    Prototype companies;
    for (int g = 0; g < 3; ++g) {
        auto gid = "g" + std::to_string(g);
        companies.controls.push_back(ctl("l" + gid, "Label", "Companies", gid));
        companies.controls.push_back(ctl("s" + gid, "SearchBox", std::nullopt, gid));
    }
    EXPECT_EQ(count_matching_elements("Companies", supported("setInTheField"), companies), 3);

    Prototype split;
    split.controls = {ctl("1", "Label", "Departure Date", "g1"), ctl("2", "Calendar", std::nullopt, "g2")};
    auto c = count_elements("Departure Date", supported("setInTheField"), split);
    EXPECT_EQ(c.count, 0);
    EXPECT_TRUE(c.label_in_other_group);
}

TEST(Prototype, PerControlCount) {
    Prototype p;
    p.controls = {ctl("1", "Label", "Companies", "g"), ctl("2", "SearchBox", std::nullopt, "g"),
                  ctl("3", "SearchBox", std::nullopt, "g"), ctl("4", "SearchBox", std::nullopt, "g")};
    auto c = count_elements("Companies", supported("setInTheField"), p);
    EXPECT_EQ(c.count, 1);
    EXPECT_EQ(c.per_control_count, 3);
}

TEST(Prototype, TypeRejected) {
    Prototype p;
    p.controls = {ctl("1", "CheckBox", "Remember me")};
    auto c = count_elements("Remember me", supported("clickOn"), p);
    EXPECT_EQ(c.count, 0);
    EXPECT_TRUE(c.type_rejected);
}

TEST(Prototype, AssessFailFast) {
    Prototype p;
    p.controls = {ctl("0", "BrowserWindow", "Flight Search"), ctl("1", "Button", "Search")};
    auto story = bactest::story_from(
        "T\nScenario: s\nGiven I go to \"Book Flights\"\nWhen I click on \"Search\"\nThen will be displayed \"x\"\n");
    auto r = assess_prototype(story, p, catalog(), mapping());
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].status, Status::Failed);
    EXPECT_EQ(r[0].classification, InconsistencyKind::InexistentElement);
    EXPECT_EQ(r[1].status, Status::NotPerformed);
    EXPECT_EQ(r[2].status, Status::NotPerformed);

    auto cont = assess_prototype(story, p, catalog(), mapping(), Mode::Continue);
    EXPECT_EQ(cont[1].status, Status::Passed);
    EXPECT_EQ(cont[2].classification, InconsistencyKind::UntraceableInteraction);

    Story none;
    none.title = "T";
    EXPECT_TRUE(assess_prototype(none, p, catalog(), mapping()).empty());
}

TEST(Prototype, PageIdentityByMockupName) {
    Prototype p;
    p.mockup_name = "Book Flights";
    auto story = bactest::story_from("T\nScenario: s\nGiven I go to \"Book Flights\"\n");
    EXPECT_EQ(assess_prototype(story, p, catalog(), mapping())[0].status, Status::Passed);
}

TEST(Prototype, SkippedWithoutPrototypeColumn) {
    Prototype p;
    auto story = bactest::story_from("T\nScenario: s\nGiven I define the variable \"a\" with the value \"b\"\n");
    EXPECT_EQ(assess_prototype(story, p, catalog(), mapping())[0].status, Status::Skipped);
}

TEST(PrototypeProperty, OracleEquivalence) {
    std::mt19937 rng(41);
    for (int i = 0; i < 1000; ++i) {
        auto inst = bactest::generate_proto_instance(rng);
        ASSERT_EQ(count_matching_elements(inst.field, inst.supported, inst.proto),
                  bactest::proto_oracle(inst.field, inst.supported, inst.proto))
            << "instance " << i;
    }
}

TEST(PrototypeProperty, Trichotomy) {
    std::mt19937 rng(42);
    auto types = supported("setInTheField");
    for (int i = 0; i < 1000; ++i) {
        auto inst = bactest::generate_proto_instance(rng);
        auto story = bactest::story_from("T\nScenario: s\nWhen I set \"x\" in the field \"" + inst.field + "\"\n");
        auto r = assess_prototype(story, inst.proto, catalog(), mapping());
        ASSERT_EQ(r.size(), 1u);
        int n = bactest::proto_oracle(inst.field, types, inst.proto);
        ASSERT_EQ(r[0].actual, std::to_string(n));
        if (n == 1) {
            ASSERT_EQ(r[0].status, Status::Passed);
        } else {
            ASSERT_EQ(r[0].status, Status::Failed);
            if (n >= 2) ASSERT_EQ(r[0].classification, InconsistencyKind::AmbiguousElement);
        }
    }
}

TEST(PrototypeProperty, RenameAndUppercaseInvariance) {
    std::mt19937 rng(43);
    static const std::vector<std::string> behaviors = {"I set \"x\" in the field \"%\"", "I click on \"%\"",
                                                       "I choose \"%\""};
    for (int i = 0; i < 300; ++i) {
        auto inst = bactest::generate_proto_instance(rng);
        std::string body;
        for (char ch : bactest::pick_from(rng, behaviors)) {
            if (ch == '%') body += inst.field;
            else body += ch;
        }
        auto story = bactest::story_from("T\nScenario: s\nWhen " + body + "\n");
        auto base = assess_prototype(story, inst.proto, catalog(), mapping());

        auto renamed = inst.proto;
        for (auto& c : renamed.controls) c.control_id = "x" + c.control_id + "y";
        auto upper = inst.proto;
        for (auto& c : upper.controls) {
            if (!c.text) continue;
            for (auto& ch : *c.text) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        }
        for (const auto* variant : {&renamed, &upper}) {
            auto other = assess_prototype(story, *variant, catalog(), mapping());
            ASSERT_EQ(other[0].status, base[0].status);
            ASSERT_EQ(other[0].classification, base[0].classification);
            ASSERT_EQ(other[0].actual, base[0].actual);
        }
    }
}
