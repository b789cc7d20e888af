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

#include "railbs/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace railbs
{

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_hash(std::uint64_t hash)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path &path, std::uint64_t seed, std::uint64_t config_hash,
                     const std::vector<std::string> &header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size())
{
    if (!out_)
        throw std::runtime_error("cannot write " + path.string());
    out_ << "# railbs seed=" << seed << " config_hash=" << format_hash(config_hash) << '\n';
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter &CsvWriter::cell(const std::string &text)
{
    if (pending_ == columns_)
        throw std::logic_error("CsvWriter: too many cells in row");
    out_ << (pending_ ? "," : "") << text;
    ++pending_;
    return *this;
}

CsvWriter &CsvWriter::cell(double value)
{
    return cell(format_number(value));
}

CsvWriter &CsvWriter::cell(long long value)
{
    return cell(std::to_string(value));
}

CsvWriter &CsvWriter::cell(std::uint64_t value)
{
    return cell(std::to_string(value));
}

void CsvWriter::end_row()
{
    if (pending_ != columns_)
        throw std::logic_error("CsvWriter: incomplete row");
    out_ << '\n';
    pending_ = 0;
    if (!out_)
        throw std::runtime_error("write failed: " + path_.string());
}

} // namespace railbs
