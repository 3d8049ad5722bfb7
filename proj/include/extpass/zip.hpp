/*
 * Copyright (c) 2026 The extpass Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "extpass/error.hpp"

namespace extpass {

namespace detail {

inline uint16_t read_u16(std::string_view b, size_t off) {
  return static_cast<uint16_t>(static_cast<unsigned char>(b[off]) |
                               (static_cast<unsigned char>(b[off + 1]) << 8));
}

inline uint32_t read_u32(std::string_view b, size_t off) {
  return static_cast<uint32_t>(static_cast<unsigned char>(b[off])) |
         (static_cast<uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8) |
         (static_cast<uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16) |
         (static_cast<uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24);
}

inline std::string inflate_raw(std::string_view compressed, size_t expected_size,
                               size_t hard_limit) {
  std::string out;
  out.resize(expected_size);
  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK)
    raise(ErrorCode::CorruptContainer, "inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  bool ok = (rc == Z_STREAM_END) && zs.total_out == expected_size;
  inflateEnd(&zs);
  if (!ok || expected_size > hard_limit)
    raise(ErrorCode::CorruptContainer, "deflate stream is damaged or truncated");
  return out;
}

}  // namespace detail

struct ZipEntry {
  std::string name;
  uint16_t method = 0;
  uint32_t crc32 = 0;
  uint32_t compressed_size = 0;
  uint32_t uncompressed_size = 0;
  uint32_t local_offset = 0;
  bool is_directory = false;
  bool encrypted = false;
};

// Central-directory driven reader for the subset of ZIP that extension
// containers use: stored and deflated entries, no zip64, no encryption.
class ZipReader {
 public:
  explicit ZipReader(std::string bytes) : bytes_(std::move(bytes)) {
    parse_central_directory();
  }

  const std::vector<ZipEntry>& entries() const { return entries_; }

  uint64_t total_uncompressed() const {
    uint64_t sum = 0;
    for (const ZipEntry& e : entries_) sum += e.uncompressed_size;
    return sum;
  }

  std::string read(const ZipEntry& entry) const {
    std::string_view b = bytes_;
    if (entry.encrypted)
      raise(ErrorCode::CorruptContainer, "encrypted entry: " + entry.name);
    size_t off = entry.local_offset;
    if (off + 30 > b.size() || detail::read_u32(b, off) != 0x04034b50)
      raise(ErrorCode::CorruptContainer, "bad local header for " + entry.name);
    uint16_t name_len = detail::read_u16(b, off + 26);
    uint16_t extra_len = detail::read_u16(b, off + 28);
    size_t data_off = off + 30 + name_len + extra_len;
    if (data_off + entry.compressed_size > b.size())
      raise(ErrorCode::CorruptContainer, "truncated entry data: " + entry.name);
    std::string_view payload = b.substr(data_off, entry.compressed_size);

    std::string data;
    if (entry.method == 0) {
      if (payload.size() != entry.uncompressed_size)
        raise(ErrorCode::CorruptContainer, "stored size mismatch: " + entry.name);
      data.assign(payload);
    } else if (entry.method == 8) {
      data = detail::inflate_raw(payload, entry.uncompressed_size,
                                 entry.uncompressed_size);
    } else {
      raise(ErrorCode::CorruptContainer,
            "unsupported compression method in " + entry.name);
    }
    uint32_t crc = static_cast<uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                static_cast<uInt>(data.size())));
    if (crc != entry.crc32)
      raise(ErrorCode::CorruptContainer, "CRC mismatch in " + entry.name);
    return data;
  }

 private:
  std::string bytes_;
  std::vector<ZipEntry> entries_;

  void parse_central_directory() {
    std::string_view b = bytes_;
    if (b.size() < 22) raise(ErrorCode::CorruptContainer, "file too small");
    // EOCD scan from the end (comment can be up to 64K).
    size_t scan_start = b.size() >= 22 + 0xFFFF ? b.size() - 22 - 0xFFFF : 0;
    size_t eocd = std::string::npos;
    for (size_t i = b.size() - 22 + 1; i-- > scan_start;) {
      if (detail::read_u32(b, i) == 0x06054b50) {
        eocd = i;
        break;
      }
    }
    if (eocd == std::string::npos)
      raise(ErrorCode::CorruptContainer, "end-of-central-directory not found");
    uint16_t count = detail::read_u16(b, eocd + 10);
    uint32_t cd_size = detail::read_u32(b, eocd + 12);
    uint32_t cd_off = detail::read_u32(b, eocd + 16);
    if (cd_off == 0xFFFFFFFF || count == 0xFFFF)
      raise(ErrorCode::CorruptContainer, "zip64 archives are not supported");
    if (static_cast<uint64_t>(cd_off) + cd_size > b.size())
      raise(ErrorCode::CorruptContainer, "central directory out of bounds");

    size_t off = cd_off;
    for (uint16_t i = 0; i < count; ++i) {
      if (off + 46 > b.size() || detail::read_u32(b, off) != 0x02014b50)
        raise(ErrorCode::CorruptContainer, "bad central directory record");
      ZipEntry e;
      uint16_t flags = detail::read_u16(b, off + 8);
      e.encrypted = (flags & 0x1) != 0;
      e.method = detail::read_u16(b, off + 10);
      e.crc32 = detail::read_u32(b, off + 16);
      e.compressed_size = detail::read_u32(b, off + 20);
      e.uncompressed_size = detail::read_u32(b, off + 24);
      uint16_t name_len = detail::read_u16(b, off + 28);
      uint16_t extra_len = detail::read_u16(b, off + 30);
      uint16_t comment_len = detail::read_u16(b, off + 32);
      e.local_offset = detail::read_u32(b, off + 42);
      if (e.compressed_size == 0xFFFFFFFF || e.uncompressed_size == 0xFFFFFFFF)
        raise(ErrorCode::CorruptContainer, "zip64 entries are not supported");
      if (off + 46 + name_len > b.size())
        raise(ErrorCode::CorruptContainer, "truncated entry name");
      e.name.assign(b.substr(off + 46, name_len));
      for (char& c : e.name)
        if (c == '\\') c = '/';
      e.is_directory = !e.name.empty() && e.name.back() == '/';
      entries_.push_back(std::move(e));
      off += 46u + name_len + extra_len + comment_len;
    }
  }
};

// CRX containers are a versioned header in front of a ZIP payload.
//   v2: magic, version, pubkey length, signature length, then both blobs.
//   v3: magic, version, header length, then a protobuf header blob.
inline std::string_view crx_zip_payload(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 4) != "Cr24")
    raise(ErrorCode::UnsupportedContainer, "not a CRX container");
  uint32_t version = detail::read_u32(bytes, 4);
  size_t zip_start = 0;
  if (version == 2) {
    uint32_t key_len = detail::read_u32(bytes, 8);
    uint32_t sig_len = detail::read_u32(bytes, 12);
    zip_start = 16ull + key_len + sig_len;
  } else if (version == 3) {
    uint32_t header_len = detail::read_u32(bytes, 8);
    zip_start = 12ull + header_len;
  } else {
    raise(ErrorCode::UnsupportedContainer,
          "unknown CRX version " + std::to_string(version));
  }
  if (zip_start >= bytes.size())
    raise(ErrorCode::CorruptContainer, "CRX header exceeds file size");
  return bytes.substr(zip_start);
}

// Scratch directory removed (recursively) when the last reference drops.
struct ScratchDir {
  std::filesystem::path path;
  explicit ScratchDir(std::filesystem::path p) : path(std::move(p)) {}
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

// A relative path that stays inside the extraction root.
inline bool is_safe_entry_path(const std::string& name) {
  if (name.empty() || name.front() == '/') return false;
  if (name.size() >= 2 && name[1] == ':') return false;  // drive letter
  size_t start = 0;
  while (start <= name.size()) {
    size_t end = name.find('/', start);
    std::string_view part(name.data() + start,
                          (end == std::string::npos ? name.size() : end) - start);
    if (part == "..") return false;
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return true;
}

// Extracts every safe entry below dest. Unsafe names are skipped and
// reported through warnings. The total uncompressed size is capped before
// any byte is inflated.
inline void extract_zip(std::string bytes, const std::filesystem::path& dest,
                        std::vector<std::string>& warnings,
                        uint64_t max_total_bytes) {
  ZipReader reader(std::move(bytes));
  if (reader.total_uncompressed() > max_total_bytes)
    raise(ErrorCode::CorruptContainer,
          "archive expands beyond the configured size limit");
  std::filesystem::create_directories(dest);
  for (const ZipEntry& e : reader.entries()) {
    if (!is_safe_entry_path(e.name)) {
      warnings.push_back("skipped archive entry with unsafe path: " + e.name);
      continue;
    }
    std::filesystem::path target = dest / e.name;
    if (e.is_directory) {
      std::filesystem::create_directories(target);
      continue;
    }
    std::filesystem::create_directories(target.parent_path());
    std::string data = reader.read(e);
    std::ofstream out(target, std::ios::binary);
    if (!out) {
      warnings.push_back("could not write extracted file: " + e.name);
      continue;
    }
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
  }
}

inline std::string read_file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + p.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace extpass
