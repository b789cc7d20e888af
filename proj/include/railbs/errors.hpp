// SPDX-License-Identifier: Apache-2.0
//
// railbs - rail-mounted reconfigurable antenna array simulator
// Copyright (C) 2026 The railbs authors
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

#include <stdexcept>
#include <string>

namespace railbs
{

enum class ConfigErrorKind
{
    Parse,  // malformed file
    Schema, // unknown key or wrong type
    Value,  // well-formed but physically inconsistent
};

// Invalid user input or configuration. Messages name the offending key.
class ConfigError : public std::invalid_argument
{
public:
    explicit ConfigError(const std::string &what, ConfigErrorKind kind = ConfigErrorKind::Value)
        : std::invalid_argument(what), kind_(kind)
    {
    }

    ConfigErrorKind kind() const { return kind_; }

private:
    ConfigErrorKind kind_;
};

// No feasible position exists for an array given its neighbours.
class InfeasibleError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Non-finite values or failed factorizations during evaluation.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace railbs
