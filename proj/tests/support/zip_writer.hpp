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

// Test-only ZIP/CRX writer, independent of the reader under test.

#pragma once

#include <zlib.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace extpass::test {

struct ZipInputFile {
  std::string name;
  std::string content;
  bool deflate = false;
};

namespace detail {

inline void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

inline std::string deflate_raw(const std::string& data) {
  z_stream zs{};
  deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8,
               Z_DEFAULT_STRATEGY);
  std::string out;
  out.resize(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  return out;
}

}  // namespace detail

inline std::string make_zip(const std::vector<ZipInputFile>& files) {
  std::string out;
  struct Central {
    std::string name;
    uint16_t method;
    uint32_t crc;
    uint32_t csize;
    uint32_t usize;
    uint32_t offset;
  };
  std::vector<Central> centrals;

  for (const ZipInputFile& f : files) {
    uint32_t crc = static_cast<uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(f.content.data()),
                static_cast<uInt>(f.content.size())));
    std::string payload = f.deflate ? detail::deflate_raw(f.content) : f.content;
    uint16_t method = f.deflate ? 8 : 0;
    Central c{f.name, method, crc, static_cast<uint32_t>(payload.size()),
              static_cast<uint32_t>(f.content.size()),
              static_cast<uint32_t>(out.size())};
    detail::put_u32(out, 0x04034b50);
    detail::put_u16(out, 20);      // version needed
    detail::put_u16(out, 0);       // flags
    detail::put_u16(out, method);
    detail::put_u16(out, 0);       // mod time
    detail::put_u16(out, 0);       // mod date
    detail::put_u32(out, crc);
    detail::put_u32(out, c.csize);
    detail::put_u32(out, c.usize);
    detail::put_u16(out, static_cast<uint16_t>(f.name.size()));
    detail::put_u16(out, 0);       // extra len
    out += f.name;
    out += payload;
    centrals.push_back(std::move(c));
  }

  uint32_t cd_start = static_cast<uint32_t>(out.size());
  for (const Central& c : centrals) {
    detail::put_u32(out, 0x02014b50);
    detail::put_u16(out, 20);  // version made by
    detail::put_u16(out, 20);  // version needed
    detail::put_u16(out, 0);   // flags
    detail::put_u16(out, c.method);
    detail::put_u16(out, 0);   // time
    detail::put_u16(out, 0);   // date
    detail::put_u32(out, c.crc);
    detail::put_u32(out, c.csize);
    detail::put_u32(out, c.usize);
    detail::put_u16(out, static_cast<uint16_t>(c.name.size()));
    detail::put_u16(out, 0);   // extra
    detail::put_u16(out, 0);   // comment
    detail::put_u16(out, 0);   // disk
    detail::put_u16(out, 0);   // internal attrs
    detail::put_u32(out, 0);   // external attrs
    detail::put_u32(out, c.offset);
    out += c.name;
  }
  uint32_t cd_size = static_cast<uint32_t>(out.size()) - cd_start;

  detail::put_u32(out, 0x06054b50);
  detail::put_u16(out, 0);  // disk number
  detail::put_u16(out, 0);  // cd disk
  detail::put_u16(out, static_cast<uint16_t>(centrals.size()));
  detail::put_u16(out, static_cast<uint16_t>(centrals.size()));
  detail::put_u32(out, cd_size);
  detail::put_u32(out, cd_start);
  detail::put_u16(out, 0);  // comment len
  return out;
}

// CRX2: Cr24 | version=2 | key_len | sig_len | key | sig | zip
inline std::string wrap_crx2(const std::string& zip) {
  std::string key(64, '\x11');
  std::string sig(72, '\x22');
  std::string out = "Cr24";
  detail::put_u32(out, 2);
  detail::put_u32(out, static_cast<uint32_t>(key.size()));
  detail::put_u32(out, static_cast<uint32_t>(sig.size()));
  out += key;
  out += sig;
  out += zip;
  return out;
}

// CRX3: Cr24 | version=3 | header_len | header | zip
inline std::string wrap_crx3(const std::string& zip) {
  std::string header(37, '\x33');  // opaque signed header blob
  std::string out = "Cr24";
  detail::put_u32(out, 3);
  detail::put_u32(out, static_cast<uint32_t>(header.size()));
  out += header;
  out += zip;
  return out;
}

// Zips a fixture directory tree (file order sorted for determinism).
inline std::string zip_directory(const std::filesystem::path& dir,
                                 bool deflate = false) {
  std::vector<ZipInputFile> files;
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    files.push_back(ZipInputFile{
        std::filesystem::relative(p, dir).generic_string(), std::move(content),
        deflate});
  }
  return make_zip(files);
}

inline void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace extpass::test
