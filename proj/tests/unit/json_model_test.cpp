#include <gtest/gtest.h>

#include "easepatch/json_model.hpp"
#include "support/expect.hpp"

namespace easepatch {
namespace {

using Tokens = std::vector<std::string>;

TEST(JsonPointerTest, SplitsTokens) {
  EXPECT_EQ(parse_pointer("/scene/weather").tokens(), (Tokens{"scene", "weather"}));
  EXPECT_TRUE(parse_pointer("").tokens().empty());
  EXPECT_EQ(parse_pointer("/a~1b/m~0n").tokens(), (Tokens{"a/b", "m~n"}));
}

TEST(JsonPointerTest, SlashLessInputIsNormalized) {
  const auto p = parse_pointer("users/0/name");
  EXPECT_EQ(p.tokens(), (Tokens{"users", "0", "name"}));
  EXPECT_EQ(p.to_string(), "/users/0/name");
}

TEST(JsonPointerTest, EmptyTokensSurvive) {
  EXPECT_EQ(parse_pointer("/").tokens(), (Tokens{""}));
  EXPECT_EQ(parse_pointer("/a//b/").tokens(), (Tokens{"a", "", "b", ""}));
  EXPECT_EQ(parse_pointer("/").to_string(), "/");
}

TEST(JsonPointerTest, EscapeOrderMatters) {
  // "~01" is "~" followed by "1", not "/".
  EXPECT_EQ(parse_pointer("/~01").tokens(), (Tokens{"~1"}));
  EXPECT_EQ(escape_token("~/"), "~0~1");
  EXPECT_EQ(parse_pointer("/~0~1").tokens(), (Tokens{"~/"}));
}

TEST(JsonPointerTest, BadEscapesAreRejected) {
  for (const char* text : {"/a~", "/a~2", "/~x/b"}) {
    EXPECT_THROWS_KIND(parse_pointer(text), InvalidEscape) << text;
  }
}

TEST(JsonPointerTest, RenderRoundTrip) {
  for (const char* text : {"", "/", "/a~1b/m~0n", "/x/0/-", "/ü/ /~0~1"}) {
    EXPECT_EQ(parse_pointer(text).to_string(), text);
    EXPECT_EQ(parse_pointer(parse_pointer(text).to_string()), parse_pointer(text));
  }
}

TEST(JsonPointerTest, ParentAndLeaf) {
  auto [parent, leaf] = parent_and_leaf(parse_pointer("/users/0/name"));
  EXPECT_EQ(parent.to_string(), "/users/0");
  EXPECT_EQ(leaf, "name");

  std::tie(parent, leaf) = parent_and_leaf(parse_pointer("/a"));
  EXPECT_EQ(parent.to_string(), "");
  EXPECT_EQ(leaf, "a");

  EXPECT_THROWS_KIND(parent_and_leaf(JsonPointer{}), EmptyPointer);
}

TEST(JsonPointerTest, PrefixRelation) {
  EXPECT_TRUE(parse_pointer("").is_prefix_of(parse_pointer("/a")));
  EXPECT_TRUE(parse_pointer("/a").is_prefix_of(parse_pointer("/a/b")));
  EXPECT_TRUE(parse_pointer("/a").is_prefix_of(parse_pointer("/a")));
  EXPECT_FALSE(parse_pointer("/a").is_prefix_of(parse_pointer("/ab")));
  EXPECT_FALSE(parse_pointer("/a/b").is_prefix_of(parse_pointer("/a")));
}

TEST(ArrayIndexTest, FollowsRfc6901Grammar) {
  EXPECT_EQ(parse_array_index("0"), 0u);
  EXPECT_EQ(parse_array_index("17"), 17u);
  EXPECT_FALSE(parse_array_index("01"));
  EXPECT_FALSE(parse_array_index("-"));
  EXPECT_FALSE(parse_array_index("-1"));
  EXPECT_FALSE(parse_array_index("1a"));
  EXPECT_FALSE(parse_array_index(""));
  EXPECT_FALSE(parse_array_index("+1"));
  // Too large for size_t is still a valid index, just out of range.
  EXPECT_EQ(parse_array_index("99999999999999999999999"), std::numeric_limits<std::size_t>::max());
}

TEST(ResolveTest, FindsValues) {
  const Json doc = parse_json(R"({"users":[{"name":"Ann"}]})");
  EXPECT_EQ(resolve(doc, parse_pointer("/users/0/name")), "Ann");
  EXPECT_TRUE(json_equal(resolve(doc, JsonPointer{}), doc));
  EXPECT_EQ(resolve(parse_json(R"({"":{"":3}})"), parse_pointer("//")), 3);
}

TEST(ResolveTest, ReportsMissingLocations) {
  const Json doc = parse_json(R"({"a":1,"list":[10,20]})");
  EXPECT_THROWS_KIND(resolve(doc, parse_pointer("/b")), PathNotFound);
  EXPECT_THROWS_KIND(resolve(doc, parse_pointer("/list/2")), PathNotFound);
  EXPECT_THROWS_KIND(resolve(doc, parse_pointer("/list/-")), PathNotFound);
  EXPECT_THROWS_KIND(resolve(doc, parse_pointer("/a/x")), TypeMismatch);
  EXPECT_THROWS_KIND(resolve(doc, parse_pointer("/list/x")), TypeMismatch);
  EXPECT_THROWS_KIND(resolve(doc, parse_pointer("/list/01")), TypeMismatch);
  EXPECT_EQ(find(doc, parse_pointer("/nope/deeper")), nullptr);
  EXPECT_NE(find(doc, parse_pointer("/list/1")), nullptr);
}

TEST(ResolveTest, MutableOverloadWritesThrough) {
  Json doc = parse_json(R"({"a":{"b":[1,2]}})");
  resolve(doc, parse_pointer("/a/b/1")) = "two";
  EXPECT_EQ(serialize_compact(doc), R"({"a":{"b":[1,"two"]}})");
}

TEST(JsonEqualTest, IgnoresKeyOrderAndNumberClass) {
  EXPECT_TRUE(json_equal(parse_json(R"({"a":1,"b":[1,2.0]})"), parse_json(R"({"b":[1.0,2],"a":1.0})")));
  EXPECT_FALSE(json_equal(parse_json("[1,2]"), parse_json("[2,1]")));
  EXPECT_FALSE(json_equal(parse_json("1"), parse_json("\"1\"")));
  EXPECT_FALSE(json_equal(parse_json("1"), parse_json("1.5")));
  EXPECT_FALSE(json_equal(parse_json("{\"a\":1}"), parse_json("{\"a\":1,\"b\":null}")));
  EXPECT_TRUE(json_equal(parse_json("-0.0"), parse_json("0")));
  EXPECT_FALSE(json_equal(parse_json("true"), parse_json("1")));
}

TEST(JsonEqualTest, LargeIntegersCompareExactly) {
  EXPECT_FALSE(json_equal(parse_json("9007199254740993"), parse_json("9007199254740992")));
  EXPECT_TRUE(json_equal(parse_json("18446744073709551615"), parse_json("18446744073709551615")));
  EXPECT_FALSE(json_equal(parse_json("-1"), parse_json("18446744073709551615")));
}

TEST(SerializeTest, CanonicalForm) {
  const Json doc = parse_json(R"({"z":1,"a":[true,null],"m":"ü"})");
  EXPECT_EQ(serialize(doc), "{\n  \"z\": 1,\n  \"a\": [\n    true,\n    null\n  ],\n  \"m\": \"ü\"\n}\n");
  EXPECT_EQ(serialize_compact(doc), R"({"z":1,"a":[true,null],"m":"ü"})");
  // Lexical class survives: 1.0 stays a float.
  EXPECT_EQ(serialize_compact(parse_json("[1.0,1]")), "[1.0,1]");
}

TEST(ParseTest, RejectsGarbage) {
  EXPECT_THROWS_KIND(parse_json("{\"a\":"), ParseError);
  EXPECT_THROWS_KIND(parse_json(""), ParseError);
  EXPECT_THROWS_KIND(parse_json("[1] 2"), ParseError);
}

}  // namespace
}  // namespace easepatch
