// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

namespace policy2label {

/// The twelve high-level data-practice categories used to tag segments.
enum class DataPracticeCategory : std::size_t {
  FirstPartyCollection,
  ThirdPartySharing,
  UserAccessEditDeletion,
  DataRetention,
  DataSecurity,
  InternationalSpecificAudiences,
  DoNotTrack,
  PolicyChange,
  UserChoiceControl,
  IntroductoryGeneric,
  PracticeNotCovered,
  PrivacyContactInformation,
};

inline constexpr std::size_t kCategoryCount = 12;

inline constexpr std::array<DataPracticeCategory, kCategoryCount> kAllCategories{
    DataPracticeCategory::FirstPartyCollection,
    DataPracticeCategory::ThirdPartySharing,
    DataPracticeCategory::UserAccessEditDeletion,
    DataPracticeCategory::DataRetention,
    DataPracticeCategory::DataSecurity,
    DataPracticeCategory::InternationalSpecificAudiences,
    DataPracticeCategory::DoNotTrack,
    DataPracticeCategory::PolicyChange,
    DataPracticeCategory::UserChoiceControl,
    DataPracticeCategory::IntroductoryGeneric,
    DataPracticeCategory::PracticeNotCovered,
    DataPracticeCategory::PrivacyContactInformation,
};

/// Stable serialized name, e.g. "First-Party Collection/Use".
std::string_view category_name(DataPracticeCategory category);
std::optional<DataPracticeCategory> parse_category(std::string_view name);

constexpr std::size_t index_of(DataPracticeCategory category) {
  return static_cast<std::size_t>(category);
}

class CategorySet {
 public:
  CategorySet() = default;
  CategorySet(std::initializer_list<DataPracticeCategory> categories) {
    for (auto c : categories) insert(c);
  }

  void insert(DataPracticeCategory c) { bits_.set(index_of(c)); }
  void erase(DataPracticeCategory c) { bits_.reset(index_of(c)); }
  bool contains(DataPracticeCategory c) const { return bits_.test(index_of(c)); }
  bool intersects(const CategorySet& other) const {
    return (bits_ & other.bits_).any();
  }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }

  /// Members in enumeration order.
  std::vector<DataPracticeCategory> members() const;

  friend bool operator==(const CategorySet&, const CategorySet&) = default;

 private:
  std::bitset<kCategoryCount> bits_;
};

}  // namespace policy2label
