#include "easepatch/diff.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "easepatch/ease_codec.hpp"

namespace easepatch {

namespace {

struct Gap {
  std::size_t a_begin, a_end;
  std::size_t b_begin, b_end;
};

// Unmatched runs between LCS matches, in increasing order.
std::vector<Gap> lcs_gaps(const Json& a, const Json& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();

  std::size_t prefix = 0;
  while (prefix < n && prefix < m && json_equal(a[prefix], b[prefix])) ++prefix;
  std::size_t suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix &&
         json_equal(a[n - 1 - suffix], b[m - 1 - suffix])) {
    ++suffix;
  }

  const std::size_t rows = n - prefix - suffix;
  const std::size_t cols = m - prefix - suffix;
  // table[i][j] = LCS length of a[prefix+i..] and b[prefix+j..]
  std::vector<std::vector<std::size_t>> table(rows + 1, std::vector<std::size_t>(cols + 1, 0));
  for (std::size_t i = rows; i-- > 0;) {
    for (std::size_t j = cols; j-- > 0;) {
      table[i][j] = json_equal(a[prefix + i], b[prefix + j])
                        ? table[i + 1][j + 1] + 1
                        : std::max(table[i + 1][j], table[i][j + 1]);
    }
  }

  std::vector<Gap> gaps;
  std::size_t i = 0, j = 0, gap_i = 0, gap_j = 0;
  auto close_gap = [&]() {
    if (gap_i != i || gap_j != j) gaps.push_back({prefix + gap_i, prefix + i, prefix + gap_j, prefix + j});
  };
  while (i < rows && j < cols) {
    if (json_equal(a[prefix + i], b[prefix + j])) {
      close_gap();
      ++i;
      ++j;
      gap_i = i;
      gap_j = j;
    } else if (table[i + 1][j] >= table[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  i = rows;
  j = cols;
  close_gap();
  return gaps;
}

class Differ {
 public:
  Differ(const DiffOptions& options, bool ease) : options_(options), ease_(ease) {}

  Patch run(const Json& a, const Json& b) {
    value(a, b, JsonPointer{});
    return std::move(out_);
  }

 private:
  void value(const Json& a, const Json& b, const JsonPointer& path) {
    if (json_equal(a, b)) return;
    if (ease_ && is_ease_list(a) && is_ease_list(b)) {
      ease_list(a, b, path);
    } else if (a.is_object() && b.is_object() &&
               (!ease_ || (!is_ease_list(a) && !is_ease_list(b)))) {
      object(a, b, path);
    } else if (a.is_array() && b.is_array()) {
      if (options_.array_strategy == ArrayStrategy::Lcs) {
        lcs_array(a, b, path);
      } else {
        positional_array(a, b, path);
      }
    } else {
      out_.push_back(PatchOp::replace(path, b));
    }
  }

  void object(const Json& a, const Json& b, const JsonPointer& path) {
    for (const auto& [key, member] : a.items()) {
      auto it = b.find(key);
      if (it == b.end()) {
        out_.push_back(PatchOp::remove(path / key));
      } else {
        value(member, *it, path / key);
      }
    }
    for (const auto& [key, member] : b.items()) {
      if (!a.contains(key)) out_.push_back(PatchOp::add(path / key, member));
    }
  }

  void lcs_array(const Json& a, const Json& b, const JsonPointer& path) {
    std::vector<std::size_t> removals;
    std::vector<std::size_t> insertions;
    for (const auto& gap : lcs_gaps(a, b)) {
      const std::size_t aligned = std::min(gap.a_end - gap.a_begin, gap.b_end - gap.b_begin);
      for (std::size_t t = 0; t < aligned; ++t) {
        value(a[gap.a_begin + t], b[gap.b_begin + t], path / std::to_string(gap.a_begin + t));
      }
      for (std::size_t i = gap.a_begin + aligned; i < gap.a_end; ++i) removals.push_back(i);
      for (std::size_t j = gap.b_begin + aligned; j < gap.b_end; ++j) insertions.push_back(j);
    }
    emit_removals_and_insertions(removals, insertions, b, path);
  }

  void positional_array(const Json& a, const Json& b, const JsonPointer& path) {
    const std::size_t common = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < common; ++i) value(a[i], b[i], path / std::to_string(i));
    std::vector<std::size_t> removals;
    std::vector<std::size_t> insertions;
    for (std::size_t i = common; i < a.size(); ++i) removals.push_back(i);
    for (std::size_t j = common; j < b.size(); ++j) insertions.push_back(j);
    emit_removals_and_insertions(removals, insertions, b, path);
  }

  void emit_removals_and_insertions(const std::vector<std::size_t>& removals,
                                    const std::vector<std::size_t>& insertions, const Json& b,
                                    const JsonPointer& path) {
    for (auto it = removals.rbegin(); it != removals.rend(); ++it) {
      out_.push_back(PatchOp::remove(path / std::to_string(*it)));
    }
    for (std::size_t j : insertions) {
      out_.push_back(PatchOp::add(path / std::to_string(j), b[j]));
    }
  }

  void ease_list(const Json& a, const Json& b, const JsonPointer& path) {
    const auto order_a = list_order(a);
    const auto order_b = list_order(b);
    for (const auto& key : order_a) {
      auto it = b.find(key);
      if (it == b.end()) {
        out_.push_back(PatchOp::remove(path / key));
      } else {
        value(a.at(key), *it, path / key);
      }
    }
    for (const auto& key : order_b) {
      if (!a.contains(key)) out_.push_back(PatchOp::add(path / key, b.at(key)));
    }
    const std::string order_key(kOrderKey);
    if (a.at(order_key) != b.at(order_key)) {
      out_.push_back(PatchOp::replace(path / order_key, b.at(order_key)));
    }
  }

  const DiffOptions& options_;
  bool ease_;
  Patch out_;
};

void require_ease(const Json& doc, const char* which) {
  const auto violations = validate_ease(doc);
  if (!violations.empty()) {
    throw Error(ErrorKind::NotEase, std::string(which) + " is not a valid EASE document: at '" +
                                        violations.front().location.to_string() + "': " +
                                        violations.front().message);
  }
}

}  // namespace

Patch diff(const Json& a, const Json& b, const DiffOptions& options) {
  if (options.ease_aware) {
    require_ease(a, "source");
    require_ease(b, "target");
  }
  return Differ(options, options.ease_aware).run(a, b);
}

Patch diff_ease(const Json& a, const Json& b) {
  DiffOptions options;
  options.ease_aware = true;
  return diff(a, b, options);
}

}  // namespace easepatch
