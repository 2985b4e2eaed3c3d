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

#ifndef LSCD_BUNDLE_H_
#define LSCD_BUNDLE_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lscd/usage.h"

namespace lscd {

// On-disk usage bundle: one directory per word holding
//
//   manifest.json  {word, dim, layers, n_t1, n_t2, dtype: "f32le",
//                   layout: "n-l-d"}
//   t1.bin, t2.bin little-endian IEEE-754 float32, occurrence-major, then
//                  layer, then dimension; no header.
//
// The directory name is the percent-encoded word (see EncodeWordForPath); the
// manifest carries the word verbatim.
struct BundleManifest {
  std::string word;
  std::size_t dim = 0;
  std::size_t layers = 0;
  std::size_t n_t1 = 0;
  std::size_t n_t2 = 0;
};

inline constexpr std::string_view kBundleManifestFile = "manifest.json";
inline constexpr std::string_view kBundleDtype = "f32le";
inline constexpr std::string_view kBundleLayout = "n-l-d";

// Bytes outside [A-Za-z0-9_-] and below 0x80 become %XX. UTF-8 sequences pass
// through unchanged.
std::string EncodeWordForPath(std::string_view word);
std::string DecodeWordFromPath(std::string_view encoded);

std::filesystem::path BundleDir(const std::filesystem::path& root,
                                std::string_view word);

// Writes <root>/<encoded word>/ and returns that directory. Both tensors must
// carry `word`, share layer count and dimensionality, and be tagged with
// periods t1 and t2 respectively.
std::filesystem::path WriteBundle(const std::filesystem::path& root,
                                  std::string_view word,
                                  const UsageTensor& t1,
                                  const UsageTensor& t2);

BundleManifest ReadBundleManifest(const std::filesystem::path& bundle_dir);

// Loads a bundle directory written by WriteBundle. Throws lscd::Error on a
// missing file, a tensor file whose size disagrees with the manifest, or
// non-finite values.
std::pair<UsageTensor, UsageTensor> LoadBundle(
    const std::filesystem::path& bundle_dir);

struct BundleEntry {
  std::string word;
  std::filesystem::path dir;
};

// Every immediate subdirectory of `root` holding a manifest, sorted by word.
std::vector<BundleEntry> ListBundles(const std::filesystem::path& root);

}  // namespace lscd

#endif  // LSCD_BUNDLE_H_
