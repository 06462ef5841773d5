// Copyright 2026 The Sheetcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

namespace sheetcheck::detail {

// Minimal read-only ZIP archive: central directory scan plus stored/deflate
// extraction with CRC verification. ZIP64 and encryption are rejected.
class ZipReader {
 public:
  // Throws IngestError when the archive structure is invalid.
  explicit ZipReader(std::span<const std::uint8_t> bytes);

  bool contains(const std::string& name) const;
  // Throws IngestError if the entry is missing or corrupt.
  std::string read(const std::string& name) const;
  std::optional<std::string> read_if_present(const std::string& name) const;

  const auto& entries() const { return entries_; }

 private:
  struct Entry {
    std::uint16_t method;
    std::uint16_t flags;
    std::uint32_t crc;
    std::uint32_t compressed_size;
    std::uint32_t uncompressed_size;
    std::uint32_t local_header_offset;
  };

  std::span<const std::uint8_t> bytes_;
  std::map<std::string, Entry> entries_;
};

}  // namespace sheetcheck::detail
