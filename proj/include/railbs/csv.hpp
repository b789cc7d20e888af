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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace railbs
{

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

// Lower-case hex with 16 digits.
std::string format_hash(std::uint64_t hash);

/// CSV file with a provenance comment line and a header row.
class CsvWriter
{
public:
    CsvWriter(const std::filesystem::path &path, std::uint64_t seed, std::uint64_t config_hash,
              const std::vector<std::string> &header);

    CsvWriter &cell(const std::string &text);
    CsvWriter &cell(double value);
    CsvWriter &cell(long long value);
    CsvWriter &cell(int value) { return cell(static_cast<long long>(value)); }
    CsvWriter &cell(std::uint64_t value);
    void end_row();

    const std::filesystem::path &path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t pending_ = 0;
};

} // namespace railbs
