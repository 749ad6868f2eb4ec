// SPDX-License-Identifier: Apache-2.0
//
// beamtrack: continuous-discrete beam tracking for mobile mmWave receivers
// Copyright (C) 2026 The beamtrack authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamtrack/log.hpp"

#include <iostream>
#include <map>
#include <mutex>
#include <string>

namespace beamtrack {

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, std::uint64_t, std::less<>>& registry() {
  static std::map<std::string, std::uint64_t, std::less<>> counts;
  return counts;
}

}  // namespace

void warn_once(std::string_view key, std::string_view message) {
  std::lock_guard lock(registry_mutex());
  auto& counts = registry();
  auto it = counts.find(key);
  if (it == counts.end()) {
    counts.emplace(std::string(key), 1);
    std::cerr << "beamtrack: warning: " << message << '\n';
    return;
  }
  ++it->second;
}

std::uint64_t warning_count(std::string_view key) {
  std::lock_guard lock(registry_mutex());
  const auto& counts = registry();
  const auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

}  // namespace beamtrack
