// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <regex>
#include <string>

namespace policy2label::detail {

struct UrlParts {
  std::string scheme_host_port;  // "http://host:port"
  std::string path;              // always starts with '/'
};

inline std::optional<UrlParts> split_url(const std::string& url) {
  static const std::regex pattern(R"(^(https?://[^/?#\s]+)([^\s]*)$)",
                                  std::regex::icase);
  std::smatch match;
  if (!std::regex_match(url, match, pattern)) return std::nullopt;
  UrlParts parts{match[1].str(), match[2].str()};
  if (parts.path.empty() || parts.path.front() != '/') parts.path.insert(0, "/");
  return parts;
}

}  // namespace policy2label::detail
