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

#include <cstdlib>
#include <string>

#include <httplib.h>

#include "flminer/error.hpp"

namespace flminer::detail {

/// Authorization header from the named environment variable; empty name
/// means no credential.
inline httplib::Headers auth_headers(const std::string& credential_env) {
  httplib::Headers headers;
  if (credential_env.empty()) return headers;
  const char* token = std::getenv(credential_env.c_str());
  if (!token || !*token) {
    throw Error(ErrorCode::kAuthFailure,
                "credential environment variable " + credential_env + " is not set");
  }
  headers.emplace("Authorization", std::string("Bearer ") + token);
  return headers;
}

}  // namespace flminer::detail
