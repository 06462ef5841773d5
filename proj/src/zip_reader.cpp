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

#include "zip_reader.hpp"

#include <zlib.h>

#include <algorithm>

#include "sheetcheck/error.hpp"

namespace sheetcheck::detail {

namespace {

constexpr std::uint32_t kEndOfCentralDir = 0x06054b50;
constexpr std::uint32_t kCentralHeader = 0x02014b50;
constexpr std::uint32_t kLocalHeader = 0x04034b50;

std::uint16_t u16(std::span<const std::uint8_t> b, std::size_t at) {
  if (at + 2 > b.size()) throw IngestError("corrupt ZIP: truncated record");
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t u32(std::span<const std::uint8_t> b, std::size_t at) {
  if (at + 4 > b.size()) throw IngestError("corrupt ZIP: truncated record");
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

}  // namespace

ZipReader::ZipReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
  if (bytes.size() < 22) throw IngestError("corrupt ZIP: file too small");
  // The end-of-central-directory record sits in the last 64 KiB + 22 bytes.
  std::size_t lowest = bytes.size() > 65557 ? bytes.size() - 65557 : 0;
  std::optional<std::size_t> eocd;
  for (std::size_t i = bytes.size() - 22 + 1; i-- > lowest;) {
    if (u32(bytes, i) == kEndOfCentralDir) {
      eocd = i;
      break;
    }
  }
  if (!eocd) throw IngestError("corrupt ZIP: no end of central directory");
  std::uint16_t count = u16(bytes, *eocd + 10);
  std::uint32_t dir_offset = u32(bytes, *eocd + 16);
  if (dir_offset == 0xFFFFFFFFu || count == 0xFFFF) {
    throw IngestError("ZIP64 archives are not supported");
  }

  std::size_t at = dir_offset;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(bytes, at) != kCentralHeader) {
      throw IngestError("corrupt ZIP: bad central directory entry");
    }
    Entry e;
    e.flags = u16(bytes, at + 8);
    e.method = u16(bytes, at + 10);
    e.crc = u32(bytes, at + 16);
    e.compressed_size = u32(bytes, at + 20);
    e.uncompressed_size = u32(bytes, at + 24);
    std::uint16_t name_len = u16(bytes, at + 28);
    std::uint16_t extra_len = u16(bytes, at + 30);
    std::uint16_t comment_len = u16(bytes, at + 32);
    e.local_header_offset = u32(bytes, at + 42);
    if (at + 46 + name_len > bytes.size()) {
      throw IngestError("corrupt ZIP: truncated file name");
    }
    std::string name(reinterpret_cast<const char*>(bytes.data() + at + 46),
                     name_len);
    std::replace(name.begin(), name.end(), '\\', '/');
    entries_[name] = e;
    at += 46 + name_len + extra_len + comment_len;
  }
}

bool ZipReader::contains(const std::string& name) const {
  return entries_.count(name) != 0;
}

std::optional<std::string> ZipReader::read_if_present(
    const std::string& name) const {
  if (!contains(name)) return std::nullopt;
  return read(name);
}

std::string ZipReader::read(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw IngestError("missing part '" + name + "'");
  }
  const Entry& e = it->second;
  if (e.flags & 0x1) throw IngestError("encrypted part '" + name + "'");
  std::size_t at = e.local_header_offset;
  if (u32(bytes_, at) != kLocalHeader) {
    throw IngestError("corrupt ZIP: bad local header for '" + name + "'");
  }
  std::size_t data = at + 30 + u16(bytes_, at + 26) + u16(bytes_, at + 28);
  if (data + e.compressed_size > bytes_.size()) {
    throw IngestError("corrupt ZIP: truncated data for '" + name + "'");
  }
  const std::uint8_t* src = bytes_.data() + data;

  std::string out;
  if (e.method == 0) {
    out.assign(reinterpret_cast<const char*>(src), e.compressed_size);
  } else if (e.method == 8) {
    out.resize(e.uncompressed_size);
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
      throw IngestError("zlib initialisation failed");
    }
    zs.next_in = const_cast<Bytef*>(src);
    zs.avail_in = e.compressed_size;
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = e.uncompressed_size;
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != e.uncompressed_size) {
      throw IngestError("corrupt ZIP: cannot inflate '" + name + "'");
    }
  } else {
    throw IngestError("unsupported compression method " +
                      std::to_string(e.method) + " for '" + name + "'");
  }
  auto crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data()),
                   static_cast<uInt>(out.size()));
  if (crc != e.crc) throw IngestError("corrupt ZIP: CRC mismatch in '" + name + "'");
  return out;
}

}  // namespace sheetcheck::detail
