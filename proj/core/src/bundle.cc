// Copyright 2026 The lscd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lscd/bundle.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include <nlohmann/json.hpp>

#include "lscd/error.h"

namespace lscd {
namespace fs = std::filesystem;
namespace {

constexpr char kHex[] = "0123456789ABCDEF";

bool IsPathSafe(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c >= 0x80;
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string TensorFileName(Period period) {
  return std::string(PeriodName(period)) + ".bin";
}

void WriteTensorFile(const fs::path& path, const UsageTensor& tensor) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  std::vector<char> buffer(tensor.data().size() * 4);
  char* p = buffer.data();
  for (float v : tensor.data()) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
    // Little-endian regardless of host order.
    for (int b = 0; b < 4; ++b) *p++ = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::vector<float> ReadTensorFile(const fs::path& path, std::size_t count) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error("missing tensor file '" + path.string() + "'");
  }
  const auto size = fs::file_size(path, ec);
  if (ec) throw Error("cannot stat '" + path.string() + "': " + ec.message());
  if (size != count * 4) {
    throw Error("size mismatch: '" + path.string() + "' has " +
                std::to_string(size) + " bytes, manifest implies " +
                std::to_string(count * 4));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes(count * 4);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw Error("short read on '" + path.string() + "'");
  }
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(bytes[i * 4 + b]) << (8 * b);
    }
    values[i] = std::bit_cast<float>(bits);
  }
  return values;
}

std::size_t ReadCount(const nlohmann::json& j, const char* key,
                      const fs::path& path) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw Error("manifest '" + path.string() + "' lacks unsigned field '" +
                key + "'");
  }
  return j[key].get<std::size_t>();
}

}  // namespace

std::string EncodeWordForPath(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (unsigned char c : word) {
    if (IsPathSafe(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string DecodeWordFromPath(std::string_view encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] == '%' && i + 2 < encoded.size() &&
        HexValue(encoded[i + 1]) >= 0 && HexValue(encoded[i + 2]) >= 0) {
      out.push_back(static_cast<char>(HexValue(encoded[i + 1]) * 16 +
                                      HexValue(encoded[i + 2])));
      i += 2;
    } else {
      out.push_back(encoded[i]);
    }
  }
  return out;
}

fs::path BundleDir(const fs::path& root, std::string_view word) {
  return root / EncodeWordForPath(word);
}

fs::path WriteBundle(const fs::path& root, std::string_view word,
                     const UsageTensor& t1, const UsageTensor& t2) {
  if (word.empty()) throw Error("bundle word must not be empty");
  if (t1.word() != word || t2.word() != word) {
    throw Error("bundle tensors must both belong to '" + std::string(word) +
                "'");
  }
  if (t1.period() != Period::kT1 || t2.period() != Period::kT2) {
    throw Error("bundle tensors must be tagged t1 and t2");
  }
  if (t1.layers() != t2.layers()) {
    throw Error("layer mismatch: t1 has " + std::to_string(t1.layers()) +
                " layers, t2 has " + std::to_string(t2.layers()));
  }
  if (t1.dim() != t2.dim()) {
    throw Error("dim mismatch: t1 has dim " + std::to_string(t1.dim()) +
                ", t2 has dim " + std::to_string(t2.dim()));
  }

  const fs::path dir = BundleDir(root, word);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error("cannot create bundle directory '" + dir.string() +
                "': " + ec.message());
  }

  WriteTensorFile(dir / TensorFileName(Period::kT1), t1);
  WriteTensorFile(dir / TensorFileName(Period::kT2), t2);

  nlohmann::ordered_json manifest;
  manifest["word"] = std::string(word);
  manifest["dim"] = t1.dim();
  manifest["layers"] = t1.layers();
  manifest["n_t1"] = t1.occurrences();
  manifest["n_t2"] = t2.occurrences();
  manifest["dtype"] = std::string(kBundleDtype);
  manifest["layout"] = std::string(kBundleLayout);

  const fs::path manifest_path = dir / kBundleManifestFile;
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) {
    throw Error("cannot open '" + manifest_path.string() + "' for writing");
  }
  out << manifest.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + manifest_path.string() + "'");
  return dir;
}

BundleManifest ReadBundleManifest(const fs::path& bundle_dir) {
  const fs::path path = bundle_dir / kBundleManifestFile;
  std::ifstream in(path);
  if (!in) throw Error("missing manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed manifest '" + path.string() + "': " + e.what());
  }
  if (!j.is_object()) throw Error("manifest '" + path.string() + "' is not an object");
  if (!j.contains("word") || !j["word"].is_string()) {
    throw Error("manifest '" + path.string() + "' lacks string field 'word'");
  }
  if (j.value("dtype", "") != kBundleDtype) {
    throw Error("manifest '" + path.string() + "' has unsupported dtype");
  }
  if (j.value("layout", "") != kBundleLayout) {
    throw Error("manifest '" + path.string() + "' has unsupported layout");
  }
  BundleManifest m;
  m.word = j["word"].get<std::string>();
  m.dim = ReadCount(j, "dim", path);
  m.layers = ReadCount(j, "layers", path);
  m.n_t1 = ReadCount(j, "n_t1", path);
  m.n_t2 = ReadCount(j, "n_t2", path);
  if (m.dim == 0 || m.layers == 0) {
    throw Error("manifest '" + path.string() + "' must have dim, layers >= 1");
  }
  return m;
}

std::pair<UsageTensor, UsageTensor> LoadBundle(const fs::path& bundle_dir) {
  const BundleManifest m = ReadBundleManifest(bundle_dir);
  const std::size_t per_occurrence = m.layers * m.dim;
  auto load = [&](Period period, std::size_t n) {
    std::vector<float> values =
        ReadTensorFile(bundle_dir / TensorFileName(period), n * per_occurrence);
    return UsageTensor(m.word, period, n, m.layers, m.dim, std::move(values));
  };
  UsageTensor t1 = load(Period::kT1, m.n_t1);
  UsageTensor t2 = load(Period::kT2, m.n_t2);
  return {std::move(t1), std::move(t2)};
}

std::vector<BundleEntry> ListBundles(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error("bundle root '" + root.string() + "' is not a directory");
  }
  std::vector<BundleEntry> entries;
  for (const auto& item : fs::directory_iterator(root)) {
    if (!item.is_directory()) continue;
    const fs::path dir = item.path();
    if (!fs::exists(dir / kBundleManifestFile)) continue;
    entries.push_back({ReadBundleManifest(dir).word, dir});
  }
  std::sort(entries.begin(), entries.end(),
            [](const BundleEntry& a, const BundleEntry& b) {
              return a.word < b.word;
            });
  return entries;
}

}  // namespace lscd
