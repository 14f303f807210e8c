// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

// Contents of core/data/*, compiled in at configure time.
namespace policy2label::data {

extern const std::string_view kAbbreviations;
extern const std::string_view kKeywordRules;
extern const std::string_view kMockRules;

}  // namespace policy2label::data
