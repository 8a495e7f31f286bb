#pragma once

#include "easepatch/json_model.hpp"
#include "easepatch/patch.hpp"

namespace easepatch {

enum class ArrayStrategy {
  // Longest common subsequence of deeply-equal elements; unmatched runs are
  // aligned pairwise (recursing into them) and the surplus removed or added.
  Lcs,
  // Element i against element i, then tail add/remove.
  Positional,
};

struct DiffOptions {
  ArrayStrategy array_strategy = ArrayStrategy::Lcs;
  // Diff EASE lists by key (see diff_ease). Both inputs must validate.
  bool ease_aware = false;
};

/// A patch p with apply_patch(a, p) structurally equal to b. Within an
/// array, element edits come first, then removals in descending index order,
/// then insertions in ascending order, so every index is valid at the moment
/// its operation runs. Never emits move or copy.
Patch diff(const Json& a, const Json& b, const DiffOptions& options = {});

/// Key-stable diff of two EASE documents that share keys for the same
/// logical elements. Per list: remove for keys only in `a`, add for keys only
/// in `b`, recursion for shared keys and a single replace of the order string
/// when it changed. Throws Error(NotEase) if either input fails validation.
Patch diff_ease(const Json& a, const Json& b);

}  // namespace easepatch
