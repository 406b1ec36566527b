// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kbloch/hamiltonian.hpp"

namespace kbloch {

inline constexpr int kFormatVersion = 1;

/// One complex array stored as <name>.bin: interleaved (re, im) float64,
/// little-endian, row-major in the declared shape.
struct NamedArray {
  std::string name;
  std::vector<std::int64_t> shape;
  std::vector<cplx> data;
};

/// Directory holding manifest.json plus one .bin file per array.
/// `meta` entries are copied verbatim into the manifest as strings.
struct Bundle {
  std::string kind;
  std::array<int, 3> dims{1, 1, 1};
  int n_spatial = 0;
  std::map<std::string, std::string> meta;
  std::vector<NamedArray> arrays;

  const NamedArray& get(const std::string& name) const;
};

void write_bundle(const std::filesystem::path& dir, const Bundle& b);
Bundle read_bundle(const std::filesystem::path& dir);

void write_hamiltonian(const std::filesystem::path& dir, const KHamiltonian& H,
                       const std::map<std::string, std::string>& meta = {});
KHamiltonian read_hamiltonian(const std::filesystem::path& dir);

}  // namespace kbloch
