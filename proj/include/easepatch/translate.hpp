#pragma once

// Conversions between index-addressed (standard) and key-addressed (EASE)
// patches and pointers.

#include <vector>

#include "easepatch/ease_codec.hpp"
#include "easepatch/json_model.hpp"
#include "easepatch/patch.hpp"

namespace easepatch {

/// Lowers a patch written against encode(original, policy) to a standard
/// patch on `original`: encode, apply, decode, then diff against the
/// original. Only apply-equivalence is promised, not op-for-op fidelity.
///
/// Throws EncodeError, PatchApplyError or DecodeError.
Patch ease_patch_to_standard(const Json& original, const KeyPolicy& policy, const Patch& ease_patch);

/// Lifts a standard patch on `original` to a patch on encode(original,
/// policy). Elements keep their keys; inserted elements get fresh keys from
/// the same generator stream. Every list whose membership or order changed
/// gets exactly one trailing replace of its order string.
///
/// Throws EncodeError or PatchApplyError.
Patch standard_patch_to_ease(const Json& original, const KeyPolicy& policy, const Patch& standard_patch);

/// Same lift against an arbitrary valid EASE document; `fresh_keys` only
/// supplies keys for inserted elements. Throws NotEase or PatchApplyError.
Patch lift_standard_patch(const Json& encoded, const Patch& standard_patch, KeyGenerator& fresh_keys);

/// Rewrites array-index tokens into the key at that position of the
/// corresponding list in `encoded`. Throws NotEase or PathNotFound.
std::vector<JsonPointer> standard_patch_paths_to_ease(const Json& encoded,
                                                      const std::vector<JsonPointer>& standard_paths);

/// Inverse of standard_patch_paths_to_ease.
std::vector<JsonPointer> ease_paths_to_standard(const Json& encoded,
                                                const std::vector<JsonPointer>& ease_paths);

}  // namespace easepatch
