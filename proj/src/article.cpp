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

#include "flminer/article.hpp"

#include <algorithm>
#include <cctype>

#include <openssl/evp.h>

#include <fmt/format.h>

namespace flminer {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace

std::string_view article_status_name(ArticleStatus status) noexcept {
  switch (status) {
    case ArticleStatus::kPending: return "pending";
    case ArticleStatus::kScored: return "scored";
    case ArticleStatus::kAnnotated: return "annotated";
    case ArticleStatus::kDiscarded: return "discarded";
  }
  return "pending";
}

std::optional<ArticleStatus> parse_article_status(std::string_view name) noexcept {
  for (auto s : {ArticleStatus::kPending, ArticleStatus::kScored, ArticleStatus::kAnnotated,
                 ArticleStatus::kDiscarded}) {
    if (article_status_name(s) == name) return s;
  }
  return std::nullopt;
}

bool status_transition_allowed(ArticleStatus from, ArticleStatus to) noexcept {
  auto rank = [](ArticleStatus s) {
    switch (s) {
      case ArticleStatus::kPending: return 0;
      case ArticleStatus::kScored: return 1;
      default: return 2;
    }
  };
  if (from == to) return true;
  return rank(to) > rank(from);
}

std::string normalize_url(std::string_view url) {
  std::string u = trim(url);
  if (const auto hash = u.find('#'); hash != std::string::npos) u.erase(hash);
  std::size_t host_begin = 0;
  if (const auto scheme = u.find("://"); scheme != std::string::npos) {
    for (std::size_t i = 0; i < scheme; ++i) {
      u[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(u[i])));
    }
    host_begin = scheme + 3;
  }
  const auto host_end = std::min(u.find_first_of("/?", host_begin), u.size());
  for (std::size_t i = host_begin; i < host_end; ++i) {
    u[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(u[i])));
  }
  const auto query = u.find('?');
  const auto path_end = query == std::string::npos ? u.size() : query;
  if (path_end > host_end + 1 && u[path_end - 1] == '/') u.erase(path_end - 1, 1);
  return u;
}

std::string make_article_id(std::string_view url, std::string_view title,
                            std::string_view publication_date) {
  const std::string u = normalize_url(url);
  const std::string key = !u.empty()
                              ? "url:" + u
                              : "title:" + lower(collapse_spaces(title)) + "|date:" +
                                    trim(publication_date);
  return sha256_hex(key).substr(0, 16);
}

}  // namespace flminer
