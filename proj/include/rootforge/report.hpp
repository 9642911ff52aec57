#pragma once

/// @file report.hpp
/// @brief Check reports shared by verification, classification, and algebra
/// layers: a list of named checks, each pass/fail/skip with witnesses and
/// checked/unchecked counts, plus free-form metadata.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rf {

struct CheckItem {
  std::string axiom;                   // stable check identifier
  std::string status = "pass";         // "pass" | "fail" | "skip"
  std::vector<std::string> witnesses;  // counterexamples or certificates
  long long checked_count = 0;
  long long unchecked_count = 0;       // out-of-window work, never failures

  void fail(std::string witness) {
    status = "fail";
    witnesses.push_back(std::move(witness));
  }
};

struct Report {
  std::vector<CheckItem> items;
  std::vector<std::pair<std::string, std::string>> meta;  // ordered key/value

  /// True iff no item failed (skips and unchecked counts do not fail a run).
  bool ok() const;

  CheckItem& add(std::string axiom);
  const CheckItem* find(std::string_view axiom) const;
  void set_meta(std::string key, std::string value);
  const std::string* get_meta(std::string_view key) const;

  /// Appends another report's items and metadata (for pipeline stages).
  void absorb(const Report& other, const std::string& prefix);

  /// Human-readable rendering, one line per item.
  std::string text() const;
};

}  // namespace rf
