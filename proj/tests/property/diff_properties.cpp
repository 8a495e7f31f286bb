#include <gtest/gtest.h>

#include "easepatch/diff.hpp"
#include "easepatch/ease_codec.hpp"
#include "support/generators.hpp"

namespace easepatch {
namespace {

using testing::Rng;

TEST(DiffProperties, PatchReachesTarget) {
  for (ArrayStrategy strategy : {ArrayStrategy::Lcs, ArrayStrategy::Positional}) {
    Rng rng(51);
    DiffOptions options;
    options.array_strategy = strategy;
    for (int i = 0; i < 1000; ++i) {
      const Json a = testing::random_document(rng);
      const Json b = testing::chance(rng, 0.8) ? testing::mutate(a, rng) : testing::random_document(rng);
      const Patch p = diff(a, b, options);
      ASSERT_TRUE(json_equal(apply_patch(a, p), b)) << serialize_compact(a) << "\n" << serialize_compact(b);
    }
  }
}

TEST(DiffProperties, EqualDocumentsGiveEmptyPatch) {
  Rng rng(53);
  for (int i = 0; i < 500; ++i) {
    const Json a = testing::random_document(rng);
    ASSERT_TRUE(diff(a, Json(a)).empty());
  }
}

TEST(DiffProperties, EaseDiffReachesTargetAndKeepsKeys) {
  Rng rng(57);
  for (int i = 0; i < 1000; ++i) {
    const Json a = encode(testing::random_document(rng), KeyPolicy{rng()});
    const Json b = testing::mutate_ease(a, rng);
    const Patch p = diff_ease(a, b);
    const Json reached = apply_patch(a, p);
    ASSERT_TRUE(json_equal(reached, b));
    ASSERT_TRUE(validate_ease(reached).empty());
    DiffOptions aware;
    aware.ease_aware = true;
    ASSERT_EQ(serialize_compact(to_json(diff(a, b, aware))), serialize_compact(to_json(p)));
  }
}

// Reordering a keyed list never costs more than one operation.
TEST(DiffProperties, ReorderIsOneOperation) {
  Rng rng(59);
  for (int i = 0; i < 500; ++i) {
    Json plain = Json::array();
    const std::size_t n = testing::uniform(rng, 2, 20);
    for (std::size_t k = 0; k < n; ++k) plain.push_back(testing::random_document(rng, {2, 4, 10}));
    const Json a = encode(Json::object({{"items", plain}}), KeyPolicy{rng()});
    auto order = list_order(a.at("items"));
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng() % k]);
    Json b = a;
    b["items"]["list_display_order"] = format_display_order(order);
    const Patch p = diff_ease(a, b);
    ASSERT_LE(p.size(), 1u);
    ASSERT_TRUE(json_equal(apply_patch(a, p), b));
  }
}

TEST(DiffProperties, ThereAndBackAgain) {
  Rng rng(61);
  for (int i = 0; i < 1000; ++i) {
    const Json a = testing::random_document(rng);
    const Json b = testing::mutate(a, rng);
    const Json there = apply_patch(a, diff(a, b));
    ASSERT_TRUE(json_equal(apply_patch(there, diff(b, a)), a));
  }
}

}  // namespace
}  // namespace easepatch
