// SPDX-License-Identifier: Apache-2.0
#include "kbloch/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace kbloch {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void put_f64(std::ofstream& os, double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof u);
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  os.write(reinterpret_cast<const char*>(&u), sizeof u);
}

double get_f64(const char* p) {
  std::uint64_t u;
  std::memcpy(&u, p, sizeof u);
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  double x;
  std::memcpy(&x, &u, sizeof x);
  return x;
}

std::int64_t product(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

}  // namespace

const NamedArray& Bundle::get(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return a;
  throw DataError("bundle has no array named '" + name + "'");
}

void write_bundle(const std::filesystem::path& dir, const Bundle& b) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json man;
  man["format_version"] = kFormatVersion;
  man["kind"] = b.kind;
  man["dims"] = b.dims;
  man["n_spatial"] = b.n_spatial;
  man["dtype"] = "c128le";
  nlohmann::ordered_json shapes = nlohmann::ordered_json::object();
  for (const auto& a : b.arrays) {
    if (product(a.shape) != static_cast<std::int64_t>(a.data.size()))
      throw DataError("array '" + a.name + "' size does not match its shape");
    shapes[a.name] = a.shape;
    std::ofstream os(dir / (a.name + ".bin"), std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write " + (dir / (a.name + ".bin")).string());
    for (const auto& z : a.data) {
      put_f64(os, z.real());
      put_f64(os, z.imag());
    }
  }
  man["shapes"] = shapes;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : b.meta) meta[k] = v;
  man["meta"] = meta;
  std::ofstream ms(dir / "manifest.json", std::ios::trunc);
  if (!ms) throw DataError("cannot write manifest in " + dir.string());
  ms << man.dump(2) << "\n";
}

Bundle read_bundle(const std::filesystem::path& dir) {
  std::ifstream ms(dir / "manifest.json");
  if (!ms) throw DataError("missing manifest.json in " + dir.string());
  nlohmann::json man;
  try {
    ms >> man;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  Bundle b;
  try {
    if (man.at("format_version").get<int>() != kFormatVersion)
      throw DataError("unsupported format_version");
    if (man.at("dtype").get<std::string>() != "c128le") throw DataError("unsupported dtype");
    b.kind = man.value("kind", std::string{});
    b.dims = man.at("dims").get<std::array<int, 3>>();
    b.n_spatial = man.at("n_spatial").get<int>();
    if (man.contains("meta"))
      for (auto it = man["meta"].begin(); it != man["meta"].end(); ++it)
        b.meta[it.key()] = it.value().get<std::string>();
    for (auto it = man.at("shapes").begin(); it != man.at("shapes").end(); ++it) {
      NamedArray a;
      a.name = it.key();
      a.shape = it.value().get<std::vector<std::int64_t>>();
      const auto path = dir / (a.name + ".bin");
      std::ifstream is(path, std::ios::binary);
      if (!is) throw DataError("missing " + path.string());
      std::vector<char> raw((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
      const std::int64_t count = product(a.shape);
      if (static_cast<std::int64_t>(raw.size()) != count * 16)
        throw DataError("size of " + path.string() + " does not match manifest shape");
      a.data.resize(static_cast<std::size_t>(count));
      for (std::int64_t i = 0; i < count; ++i)
        a.data[static_cast<std::size_t>(i)] = {get_f64(raw.data() + 16 * i), get_f64(raw.data() + 16 * i + 8)};
      b.arrays.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  return b;
}

void write_hamiltonian(const std::filesystem::path& dir, const KHamiltonian& H,
                       const std::map<std::string, std::string>& meta) {
  check_shape(H);
  Bundle b;
  b.kind = "hamiltonian";
  b.dims = H.mesh.dims();
  b.n_spatial = H.n;
  b.meta = meta;
  const std::int64_t K = H.nk(), n = H.n;
  b.arrays.push_back({"h", {K, n, n}, H.h});
  b.arrays.push_back({"v", {K, K, K, n, n, n, n}, H.V});
  write_bundle(dir, b);
}

KHamiltonian read_hamiltonian(const std::filesystem::path& dir) {
  Bundle b = read_bundle(dir);
  if (b.kind != "hamiltonian") throw DataError("bundle in " + dir.string() + " is not a hamiltonian");
  KHamiltonian H(Mesh(b.dims), b.n_spatial);
  const auto& h = b.get("h");
  const auto& v = b.get("v");
  if (h.data.size() != H.h.size() || v.data.size() != H.V.size())
    throw DataError("hamiltonian arrays do not match dims and n_spatial");
  H.h = h.data;
  H.V = v.data;
  return H;
}

}  // namespace kbloch
