// SPDX-License-Identifier: Apache-2.0
//
// dragonfly-sim: TDM-MIMO FMCW radar simulator and backscatter tag localizer
// Copyright (C) 2026 The dragonfly-sim authors
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

#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace dragonfly {

/// A configuration or scenario document failed validation. key() is the
/// dotted path of the offending entry.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key))
    {
    }
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

namespace schema {

/// Rejects any key of `obj` not listed in `allowed`.
void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& path);

const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& path);

double number(const nlohmann::json& obj, const char* key, const std::string& path);
double number_or(const nlohmann::json& obj, const char* key, double fallback, const std::string& path);
std::size_t count(const nlohmann::json& obj, const char* key, const std::string& path);

inline std::string join(const std::string& path, std::string_view key)
{
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

}  // namespace schema
}  // namespace dragonfly
