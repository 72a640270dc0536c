// Copyright 2026 The flminer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flminer {

enum class ArticleStatus { kPending, kScored, kAnnotated, kDiscarded };

std::string_view article_status_name(ArticleStatus status) noexcept;
std::optional<ArticleStatus> parse_article_status(std::string_view name) noexcept;

/// Forward-only: pending -> scored -> {annotated, discarded}; skipping ahead is
/// allowed, staying put is allowed, going back is not.
bool status_transition_allowed(ArticleStatus from, ArticleStatus to) noexcept;

struct ArticleRecord {
  std::string article_id;
  std::string title;
  std::string body;
  std::string source;
  std::string url;
  std::string publication_date;  // YYYY-MM-DD as reported by the feed
  std::string retrieved_at;      // ISO-8601 UTC
  std::vector<std::string> matched_keywords;
  ArticleStatus status = ArticleStatus::kPending;
  std::optional<double> relevance_score;

  friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

std::string normalize_url(std::string_view url);

/// First 16 hex digits of SHA-256 over the normalized URL, or over the
/// normalized title and date when the URL is empty.
std::string make_article_id(std::string_view url, std::string_view title,
                            std::string_view publication_date);

}  // namespace flminer
