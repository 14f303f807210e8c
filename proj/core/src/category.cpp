// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy2label/category.hpp"

namespace policy2label {
namespace {

constexpr std::array<std::string_view, kCategoryCount> kNames{
    "First-Party Collection/Use",
    "Third-Party Sharing/Collection",
    "User Access, Edit and Deletion",
    "Data Retention",
    "Data Security",
    "International & Specific Audiences",
    "Do Not Track",
    "Policy Change",
    "User Choice/Control",
    "Introductory/Generic",
    "Practice not covered",
    "Privacy contact information",
};

}  // namespace

std::string_view category_name(DataPracticeCategory category) {
  return kNames[index_of(category)];
}

std::optional<DataPracticeCategory> parse_category(std::string_view name) {
  for (auto c : kAllCategories) {
    if (kNames[index_of(c)] == name) return c;
  }
  return std::nullopt;
}

std::vector<DataPracticeCategory> CategorySet::members() const {
  std::vector<DataPracticeCategory> out;
  for (auto c : kAllCategories) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

}  // namespace policy2label
