#include <gtest/gtest.h>

#include <algorithm>

#include "easepatch/ease_codec.hpp"
#include "easepatch/patch.hpp"
#include "support/generators.hpp"

namespace easepatch {
namespace {

using testing::Rng;

TEST(PatchProperties, ValidateAgreesWithApply) {
  Rng rng(31);
  int failures = 0;
  for (int i = 0; i < 2000; ++i) {
    const Json doc = testing::random_document(rng);
    const Patch patch = testing::random_patch(doc, rng, 6);
    const auto issues = validate_patch(patch, doc);
    const ApplyOutcome outcome = try_apply_patch(doc, patch);
    ASSERT_EQ(issues.empty(), outcome.ok()) << serialize_compact(to_json(patch));
    if (!outcome.ok()) {
      ++failures;
      ASSERT_EQ(issues.front().op_index, outcome.error->op_index());
      ASSERT_EQ(issues.front().kind, outcome.error->kind());
      ASSERT_EQ(serialize(outcome.doc), serialize(doc));
    }
  }
  EXPECT_GT(failures, 200);
  EXPECT_LT(failures, 1900);
}

TEST(PatchProperties, ApplyDoesNotTouchItsInput) {
  Rng rng(37);
  for (int i = 0; i < 1000; ++i) {
    const Json doc = testing::random_document(rng);
    const std::string before = serialize(doc);
    const Patch patch = testing::random_patch(doc, rng, 5);
    try {
      (void)apply_patch(doc, patch);
    } catch (const Error&) {
    }
    ASSERT_EQ(serialize(doc), before);
  }
}

TEST(PatchProperties, PatchIsItsOpsInSequence) {
  Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    const Json doc = testing::random_document(rng);
    const Patch patch = testing::random_patch(doc, rng, 5);
    const ApplyOutcome whole = try_apply_patch(doc, patch);
    if (!whole.ok()) continue;
    Json stepwise = doc;
    for (const auto& op : patch) stepwise = apply_op(stepwise, op);
    ASSERT_EQ(serialize(stepwise), serialize(whole.doc));
  }
}

// Key-addressed edits with prefix-free paths commute. Member order inside
// objects may differ, so documents are compared structurally.
TEST(PatchProperties, EasePatchesAreOrderInvariant) {
  Rng rng(43);
  int permutations = 0;
  for (int i = 0; i < 500; ++i) {
    const Json encoded = encode(testing::random_document(rng), KeyPolicy{rng()});
    Patch patch = testing::random_ease_patch(encoded, rng);
    const Json expected = apply_patch(encoded, patch);
    std::vector<std::size_t> order(patch.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    for (int p = 0; p < 24; ++p) {
      for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng() % k]);
      Patch shuffled;
      for (std::size_t k : order) shuffled.push_back(patch[k]);
      ASSERT_TRUE(json_equal(apply_patch(encoded, shuffled), expected)) << serialize_compact(to_json(shuffled));
      ++permutations;
      if (patch.size() < 2) break;
    }
  }
  EXPECT_GT(permutations, 2000);
}

}  // namespace
}  // namespace easepatch
