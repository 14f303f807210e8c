// Copyright 2026 The policy2label Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "http_util.hpp"
#include "policy2label/document.hpp"
#include "policy2label/errors.hpp"

namespace policy2label {

RawDocument fetch_policy(const std::string& url, std::chrono::seconds timeout) {
  auto parts = detail::split_url(url);
  if (!parts) throw NetworkError("not an http(s) URL: " + url);

  httplib::Client client(parts->scheme_host_port);
  if (!client.is_valid()) throw NetworkError("unsupported URL (TLS unavailable?): " + url);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_follow_location(true);

  auto response = client.Get(parts->path);
  if (!response) {
    throw NetworkError("GET " + url + " failed: " + httplib::to_string(response.error()));
  }
  if (response->status < 200 || response->status >= 300) throw HttpError(response->status);

  RawDocument doc;
  doc.source_id = url;
  doc.content = response->body;
  doc.fetched_from = url;
  auto type = response->get_header_value("Content-Type");
  doc.media_kind = type.rfind("text/plain", 0) == 0 ? MediaKind::PlainText : MediaKind::Html;
  if (doc.content.empty()) throw EmptyDocument(url + " returned an empty body");
  return doc;
}

}  // namespace policy2label
