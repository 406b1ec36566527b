// SPDX-License-Identifier: Apache-2.0
// kbloch command-line driver.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 data error.
// Every artifact carries {format_version, config_hash, seed}; the hash covers
// the effective configuration minus worker counts and output paths, so runs
// that differ only in parallelism produce identical bytes.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kbloch/costmodel.hpp"
#include "kbloch/factorize.hpp"
#include "kbloch/io.hpp"
#include "kbloch/lambda.hpp"
#include "kbloch/oracle.hpp"
#include "kbloch/parallel.hpp"
#include "kbloch/physical.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace kbloch;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}
std::string sci(double v) { return fmt("%.6e", v); }
// Round-trip exact, locale independent.
std::string exact(double v) { return fmt("%.17g", v); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Provenance {
  ordered_json config;
  std::string seed = "none";

  std::string hash() const { return hex16(fnv1a(config.dump())); }
  ordered_json json() const {
    return {{"tool", "kbloch"},
            {"format_version", kFormatVersion},
            {"config_hash", hash()},
            {"seed", seed},
            {"config", config}};
  }
  std::string comment(const std::string& command) const {
    return "# kbloch " + command + " format_version=" + std::to_string(kFormatVersion) + " config_hash=" + hash() +
           " seed=" + seed;
  }
  std::map<std::string, std::string> meta() const {
    return {{"config_hash", hash()}, {"seed", seed}, {"tool", "kbloch"}, {"config", config.dump()}};
  }
};

Mesh parse_mesh(const std::string& s) {
  std::array<int, 3> d{};
  std::stringstream ss(s);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i == 3) throw UsageError("mesh '" + s + "' must have three extents");
    try {
      std::size_t used = 0;
      d[i] = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("mesh '" + s + "' is not a list of integers");
    }
    ++i;
  }
  if (i != 3) throw UsageError("mesh '" + s + "' must have three extents");
  for (int v : d)
    if (v < 1) throw UsageError("mesh extents must be >= 1");
  return Mesh(d);
}

// Each value may itself hold several meshes separated by ';'.
std::vector<Mesh> parse_meshes(const std::vector<std::string>& values) {
  std::vector<Mesh> out;
  for (const std::string& s : values) {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';'))
      if (!tok.empty()) out.push_back(parse_mesh(tok));
  }
  if (out.empty()) throw UsageError("no meshes given");
  return out;
}

ordered_json dims_json(const Mesh& m) { return {m.dims()[0], m.dims()[1], m.dims()[2]}; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  os << text;
}

std::string meta_or_none(const fs::path& dir, const std::string& key) {
  const Bundle b = read_bundle(dir);
  auto it = b.meta.find(key);
  return it == b.meta.end() ? "none" : it->second;
}
std::string seed_of(const fs::path& dir) { return meta_or_none(dir, "seed"); }
std::string input_hash(const fs::path& dir) { return meta_or_none(dir, "config_hash"); }

// ---------------------------------------------------------------- THC bundles

void write_thc(const fs::path& dir, const THCFactors& T, const std::map<std::string, std::string>& meta) {
  Bundle b;
  b.kind = "thc";
  b.dims = T.mesh.dims();
  b.n_spatial = T.n;
  b.meta = meta;
  b.meta["M"] = std::to_string(T.M);
  const std::int64_t K = T.mesh.nk();
  b.arrays.push_back({"chi", {K, T.n, T.M}, T.chi});
  b.arrays.push_back({"zeta", {K, 8, 8, T.M, T.M}, T.zeta});
  write_bundle(dir, b);
}

THCFactors read_thc(const fs::path& dir) {
  const Bundle b = read_bundle(dir);
  if (b.kind != "thc") throw DataError("bundle in " + dir.string() + " is not a thc factorization");
  const NamedArray& chi = b.get("chi");
  const NamedArray& zeta = b.get("zeta");
  if (chi.shape.size() != 3) throw DataError("chi must have shape [Nk, n, M]");
  const Mesh mesh(b.dims);
  const int M = static_cast<int>(chi.shape[2]);
  if (chi.shape[0] != mesh.nk() || chi.shape[1] != b.n_spatial || zeta.data.size() != thc_zeta_size(mesh, M))
    throw DataError("thc arrays do not match dims, n_spatial and M");
  return ingest_thc(chi.data, zeta.data, mesh, b.n_spatial, M, 1e-10);
}

std::optional<THCFactors> maybe_thc(const fs::path& ham) {
  if (!fs::exists(ham / "thc" / "manifest.json")) return std::nullopt;
  return read_thc(ham / "thc");
}

// ---------------------------------------------------------------- shared factor options

struct FactorOpts {
  double threshold = 0.0;
  double tol = 0.0;
  double eigtol = 0.0;
  bool relative = false;

  void add(CLI::App* c) {
    c->add_option("--threshold", threshold, "sparse keep threshold on max(|Re|,|Im|)")->check(CLI::NonNegativeNumber);
    c->add_option("--tol", tol, "Cholesky residual tolerance")->check(CLI::NonNegativeNumber);
    c->add_option("--eigtol", eigtol, "DF eigenvalue cutoff")->check(CLI::NonNegativeNumber);
    c->add_flag("--relative", relative, "DF cutoff relative to the largest eigenvalue per block");
  }
  void to(ordered_json& j) const {
    j["threshold"] = threshold;
    j["tol"] = tol;
    j["eigtol"] = eigtol;
    j["relative"] = relative;
  }
};

struct BitOpts {
  CostParams P;
  void add(CLI::App* c) {
    c->add_option("--eps", P.eps, "phase estimation accuracy in Hartree")->check(CLI::PositiveNumber);
    c->add_option("--aleph", P.aleph, "sparse / THC state preparation bits")->check(CLI::PositiveNumber);
    c->add_option("--aleph1", P.aleph1, "first-stage preparation bits")->check(CLI::PositiveNumber);
    c->add_option("--aleph2", P.aleph2, "second-stage preparation bits")->check(CLI::PositiveNumber);
    c->add_option("--br", P.br, "equal superposition rotation bits")->check(CLI::PositiveNumber);
    c->add_option("--beth", P.beth, "Givens rotation angle bits")->check(CLI::PositiveNumber);
  }
  void to(ordered_json& j) const {
    j["eps"] = P.eps;
    j["aleph"] = P.aleph;
    j["aleph1"] = P.aleph1;
    j["aleph2"] = P.aleph2;
    j["br"] = P.br;
    j["beth"] = P.beth;
  }
};

struct Derived {
  CostParams P;
  LambdaReport lambda;
};

// Cost inputs measured on a concrete Hamiltonian.
Derived derive(Lcu lcu, const KHamiltonian& H, const std::optional<THCFactors>& thc, const FactorOpts& f,
               CostParams base, int workers) {
  Derived out;
  out.P = base;
  out.P.N = H.N();
  out.P.mesh = H.mesh;
  switch (lcu) {
    case Lcu::Sparse: {
      const SparseEntries S = sparsify(H, f.threshold);
      out.lambda = lambda_sparse(S);
      out.P.d = std::max<std::int64_t>(2, S.d);
      break;
    }
    case Lcu::SF: {
      const CholeskyFactors C = cholesky_sf(H, f.tol, workers);
      out.lambda = lambda_sf(H, C);
      out.P.M = std::max(1, C.M);
      break;
    }
    case Lcu::DF: {
      const CholeskyFactors C = cholesky_sf(H, f.tol, workers);
      const DFFactors D = double_factorize(C, f.eigtol, f.relative, workers);
      out.lambda = lambda_df(H, D);
      out.P.M = std::max(1, C.M);
      out.P.Xi = std::max(1.0, D.xi);
      break;
    }
    case Lcu::THC: {
      if (!thc) throw DataError("THC needs factors in <input>/thc (gen writes them)");
      out.lambda = lambda_thc(H, *thc);
      out.P.M = thc->M;
      break;
    }
  }
  out.P.lambda = out.lambda.total;
  return out;
}

ordered_json lambda_json(const LambdaReport& l) {
  return {{"lcu", lcu_name(l.lcu)},
          {"lambda_one", l.one_body},
          {"lambda_two", l.two_body},
          {"lambda_total", l.total},
          {"lambda_per_cell", l.per_cell}};
}

ordered_json params_json(const CostParams& P) {
  return {{"N", P.N},     {"dims", dims_json(P.mesh)}, {"Nk", P.mesh.nk()}, {"M", P.M},
          {"Xi", P.Xi},   {"d", P.d},                  {"aleph", P.aleph},  {"aleph1", P.aleph1},
          {"aleph2", P.aleph2}, {"br", P.br},          {"beth", P.beth},    {"eps", P.eps},
          {"lambda", P.lambda}};
}

ordered_json report_json(const CostReport& r) {
  ordered_json items = ordered_json::array(), qubits = ordered_json::array(), blocks = ordered_json::object();
  for (const auto& it : r.items) items.push_back({{"name", it.name}, {"toffoli", it.value}});
  for (const auto& it : r.qubit_items) qubits.push_back({{"name", it.name}, {"qubits", it.value}});
  for (const auto& [k, v] : r.block_sizes) blocks[k] = v;
  return {{"lcu", lcu_name(r.lcu)},       {"items", items},          {"qubit_items", qubits},
          {"block_sizes", blocks},        {"per_step_toffoli", r.per_step}, {"qubits", r.qubits},
          {"iterations", r.iterations},   {"total_toffoli", r.total}, {"floored", r.floored}};
}

const char* kCsvHeader = "lcu,Nk,N,per_step_toffoli,qubits,lambda,iterations,total_toffoli,variant\n";

std::string csv_row(const CostReport& r, const CostParams& P, int Nk, int N, bool supercell) {
  std::ostringstream os;
  os << lcu_name(r.lcu) << ',' << Nk << ',' << N << ',' << r.per_step << ',' << r.qubits << ','
     << exact(P.lambda) << ',' << r.iterations << ',' << r.total << ',' << (supercell ? "supercell" : "kpoint")
     << '\n';
  return os.str();
}

// ---------------------------------------------------------------- commands

struct Common {
  int workers = 1;
};

int cmd_gen(const std::string& mesh_s, int n, std::uint64_t seed, const std::string& model, int rank, double decay,
            const std::string& out) {
  const Mesh mesh = parse_mesh(mesh_s);
  if (n < 1) throw UsageError("--n must be >= 1");
  Provenance pv;
  pv.seed = std::to_string(seed);
  pv.config = {{"command", "gen"}, {"dims", dims_json(mesh)}, {"n", n}, {"model", model}};
  std::optional<SyntheticTHC> syn;
  KHamiltonian H;
  if (model == "thc") {
    const int M = rank > 0 ? rank : n + 1;
    pv.config["rank"] = M;
    syn = generate_synthetic_thc(mesh, n, seed, M);
    H = syn->H;
  } else if (model == "gram") {
    pv.config["rank"] = rank;
    pv.config["decay"] = decay;
    H = generate_synthetic(mesh, n, seed, decay, rank);
  } else {
    throw UsageError("--model must be thc or gram");
  }
  auto meta = pv.meta();
  write_hamiltonian(out, H, meta);
  if (syn) write_thc(fs::path(out) / "thc", syn->thc, meta);
  std::cout << "gen " << mesh.str() << " n=" << n << " seed=" << seed << " model=" << model
            << " config_hash=" << pv.hash() << " -> " << out << '\n';
  return 0;
}

int cmd_factor(const std::string& in, const std::string& method, const FactorOpts& f, const std::string& out,
               const Common& c) {
  const KHamiltonian H = read_hamiltonian(in);
  const Lcu lcu = parse_lcu(method);
  Provenance pv;
  pv.seed = seed_of(in);
  pv.config = {{"command", "factor"}, {"method", lcu_name(lcu)}, {"input_config_hash", input_hash(in)}};
  f.to(pv.config);
  auto meta = pv.meta();
  const std::int64_t K = H.nk(), n = H.n;
  Bundle b;
  b.dims = H.mesh.dims();
  b.n_spatial = H.n;
  std::string summary;
  switch (lcu) {
    case Lcu::Sparse: {
      const SparseEntries S = sparsify(H, f.threshold);
      b.kind = "factor_sparse";
      b.arrays.push_back({"v", {K, K, K, n, n, n, n}, reconstruct(S)});
      b.arrays.push_back({"h_eff", {K, n, n}, effective_one_body(H)});
      meta["d"] = std::to_string(S.d);
      meta["two_body_orbits"] = std::to_string(S.two_body.size());
      meta["one_body_entries"] = std::to_string(S.one_body.size());
      summary = "d=" + std::to_string(S.d);
      break;
    }
    case Lcu::SF: {
      const CholeskyFactors C = cholesky_sf(H, f.tol, c.workers);
      b.kind = "factor_sf";
      b.arrays.push_back({"L", {K, C.M, K, n, n}, C.L});
      meta["M"] = std::to_string(C.M);
      std::string ranks;
      for (int r : C.rank) ranks += (ranks.empty() ? "" : ",") + std::to_string(r);
      meta["rank_per_Q"] = ranks;
      summary = "M=" + std::to_string(C.M) + " residual=" + sci(max_abs_diff(reconstruct(C), H.V));
      break;
    }
    case Lcu::DF: {
      const CholeskyFactors C = cholesky_sf(H, f.tol, c.workers);
      const DFFactors D = double_factorize(C, f.eigtol, f.relative, c.workers);
      b.kind = "factor_df";
      const std::int64_t nb = static_cast<std::int64_t>(D.blocks.size()), w = 2 * n;
      std::vector<cplx> info(nb * 6), fv(nb * w), U(nb * w * w);
      for (std::int64_t i = 0; i < nb; ++i) {
        const DFBlock& B = D.blocks[i];
        const double row[6] = {double(B.Q), double(B.j), double(B.k), B.is_b ? 1.0 : 0.0, double(B.rank()),
                               double(B.givens)};
        for (int t = 0; t < 6; ++t) info[i * 6 + t] = row[t];
        for (int a = 0; a < B.rank(); ++a) {
          fv[i * w + a] = B.f(a);
          for (int r = 0; r < B.dim(); ++r) U[(i * w + r) * w + a] = B.U(r, a);
        }
      }
      b.arrays.push_back({"block_info", {nb, 6}, info});
      b.arrays.push_back({"f", {nb, w}, fv});
      b.arrays.push_back({"U", {nb, w, w}, U});
      meta["M"] = std::to_string(D.M);
      meta["total_rank"] = std::to_string(D.total_rank);
      meta["xi"] = exact(D.xi);
      summary = "M=" + std::to_string(D.M) + " total_rank=" + std::to_string(D.total_rank) + " xi=" + exact(D.xi);
      break;
    }
    case Lcu::THC: {
      const auto T = maybe_thc(in);
      if (!T) throw DataError("THC needs factors in <input>/thc (gen writes them)");
      meta["residual"] = sci(max_abs_diff(reconstruct(*T), H.V));
      write_thc(out, *T, meta);
      std::cout << "factor thc M=" << T->M << " residual=" << meta["residual"] << " config_hash=" << pv.hash()
                << " -> " << out << '\n';
      return 0;
    }
  }
  b.meta = meta;
  write_bundle(out, b);
  std::cout << "factor " << lcu_name(lcu) << ' ' << summary << " config_hash=" << pv.hash() << " -> " << out << '\n';
  return 0;
}

int cmd_lambda(const std::string& in, const std::string& lcu_s, const FactorOpts& f, const std::string& out,
               const Common& c) {
  const KHamiltonian H = read_hamiltonian(in);
  const Lcu lcu = parse_lcu(lcu_s);
  Provenance pv;
  pv.seed = seed_of(in);
  pv.config = {{"command", "lambda"}, {"lcu", lcu_name(lcu)}, {"input_config_hash", input_hash(in)}};
  f.to(pv.config);
  const Derived d = derive(lcu, H, maybe_thc(in), f, CostParams{}, c.workers);
  std::cout << "lambda lcu=" << lcu_name(lcu) << " one=" << sci(d.lambda.one_body) << " two=" << sci(d.lambda.two_body)
            << " total=" << sci(d.lambda.total) << " per_cell=" << sci(d.lambda.per_cell) << '\n';
  if (!out.empty()) {
    ordered_json j = lambda_json(d.lambda);
    j["provenance"] = pv.json();
    write_text(out, j.dump(2) + "\n");
  }
  return 0;
}

struct CostArgs {
  std::string input, mesh = "1,1,1", lcu, out;
  int n = 1;
  std::int64_t M = 1, d = 2, d_sc = 0;
  double Xi = 1.0, Xi_sc = 0.0, lambda = 1.0;
  bool supercell = false, csv = false;
  FactorOpts f;
  BitOpts bits;
};

int cmd_cost(const CostArgs& a, const Common& c) {
  const Lcu lcu = parse_lcu(a.lcu);
  Provenance pv;
  pv.config = {{"command", "cost"}, {"lcu", lcu_name(lcu)}, {"supercell", a.supercell}};
  a.bits.to(pv.config);
  CostParams P;
  std::optional<LambdaReport> lam;
  if (!a.input.empty()) {
    const KHamiltonian H = read_hamiltonian(a.input);
    const auto thc = maybe_thc(a.input);
    pv.seed = seed_of(a.input);
    pv.config["input_config_hash"] = input_hash(a.input);
    a.f.to(pv.config);
    Derived kp = derive(lcu, H, thc, a.f, a.bits.P, c.workers);
    P = kp.P;
    lam = kp.lambda;
    if (a.supercell) {
      if (lcu == Lcu::THC) {
        P = supercell_params(P, 2, 1.0);
      } else {
        const Derived sc = derive(lcu, fold_to_supercell(H), std::nullopt, a.f, a.bits.P, c.workers);
        P = sc.P;
        lam = sc.lambda;
      }
    }
  } else {
    P = a.bits.P;
    P.N = 2 * a.n;
    P.mesh = parse_mesh(a.mesh);
    P.M = a.M;
    P.Xi = a.Xi;
    P.d = a.d;
    P.lambda = a.lambda;
    pv.config["params"] = params_json(P);
    if (a.supercell) {
      const double Nk = P.mesh.nk();
      const std::int64_t dsc = a.d_sc > 0 ? a.d_sc : std::max<std::int64_t>(2, static_cast<std::int64_t>(a.d * Nk));
      P = supercell_params(P, dsc, a.Xi_sc > 0 ? a.Xi_sc : a.Xi);
      pv.config["d_sc"] = dsc;
      pv.config["Xi_sc"] = P.Xi;
    }
  }
  const CostReport r = cost(lcu, P);
  const int Nk_cells = a.input.empty() ? parse_mesh(a.mesh).nk() : read_hamiltonian(a.input).nk();
  const int N_cell = a.input.empty() ? 2 * a.n : P.N / (a.supercell ? Nk_cells : 1);
  if (a.csv) {
    std::cout << pv.comment("cost") << '\n' << kCsvHeader << csv_row(r, P, Nk_cells, N_cell, a.supercell);
  } else {
    std::cout << "cost lcu=" << lcu_name(lcu) << (a.supercell ? " supercell" : "") << " per_step=" << r.per_step
              << " qubits=" << r.qubits << " iterations=" << r.iterations << " total=" << r.total
              << " config_hash=" << pv.hash() << '\n';
  }
  if (!a.out.empty()) {
    ordered_json j = report_json(r);
    j["variant"] = a.supercell ? "supercell" : "kpoint";
    j["params"] = params_json(P);
    if (lam) j["lambda"] = lambda_json(*lam);
    j["provenance"] = pv.json();
    write_text(a.out, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_phys(std::int64_t toffoli, std::int64_t logical, const std::string& profile, const std::string& out) {
  if (toffoli < 1 || logical < 1) throw UsageError("--toffoli and --logical must be >= 1");
  const PhysicalParams prof = profile.empty() ? default_profile() : load_profile(profile);
  Provenance pv;
  pv.config = {{"command", "phys"}, {"toffoli", toffoli}, {"logical", logical},
               {"profile", ordered_json::parse(profile_to_json(prof))}};
  const PhysicalReport r = estimate_physical(toffoli, logical, prof);
  std::cout << "phys profile=" << prof.name << " distance=" << r.distance
            << " physical_qubits=" << sci(r.physical_qubits) << " runtime_days=" << sci(r.runtime_days) << '\n';
  ordered_json j = {{"profile", prof.name},
                    {"toffoli", toffoli},
                    {"logical_qubits", logical},
                    {"distance", r.distance},
                    {"physical_qubits", r.physical_qubits},
                    {"runtime_days", r.runtime_days},
                    {"cycles_per_toffoli", r.cycles_per_toffoli},
                    {"logical_error", r.logical_error},
                    {"provenance", pv.json()}};
  if (!out.empty()) write_text(out, j.dump(2) + "\n");
  return 0;
}

struct SweepArgs {
  std::string lcu, out;
  std::vector<std::string> meshes;
  bool supercell = false;
  SweepModel model;
  BitOpts bits;
};

int cmd_sweep(const SweepArgs& a, const Common& c) {
  const Lcu lcu = parse_lcu(a.lcu);
  const std::vector<Mesh> meshes = parse_meshes(a.meshes);
  Provenance pv;
  ordered_json ml = ordered_json::array();
  for (const Mesh& m : meshes) ml.push_back(dims_json(m));
  pv.config = {{"command", "sweep"},
               {"lcu", lcu_name(lcu)},
               {"meshes", ml},
               {"supercell", a.supercell},
               {"model",
                {{"n", a.model.n},
                 {"chol_per_orbital", a.model.chol_per_orbital},
                 {"xi", a.model.xi},
                 {"c_thc", a.model.c_thc},
                 {"lambda_per_cell", a.model.lambda_per_cell}}}};
  a.bits.to(pv.config);
  std::vector<std::string> rows(meshes.size());
  parallel_for(meshes.size(), c.workers, [&](std::size_t i) {
    const CostParams P = sweep_params(lcu, meshes[i], a.model, a.supercell, a.bits.P);
    rows[i] = csv_row(cost(lcu, P), P, meshes[i].nk(), 2 * a.model.n, a.supercell);
  });
  std::string text = pv.comment("sweep") + "\n" + kCsvHeader;
  for (const auto& r : rows) text += r;
  write_text(a.out, text);
  return 0;
}

struct CsvRow {
  std::string lcu, variant;
  double Nk = 0;
  std::map<std::string, double> values;
};

std::vector<CsvRow> read_sweep_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read " + path);
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, ',')) out.push_back(t);
    return out;
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != header.size()) throw DataError(path + ": row width does not match header");
    CsvRow r;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (header[i] == "lcu") {
        r.lcu = cells[i];
      } else if (header[i] == "variant") {
        r.variant = cells[i];
      } else {
        try {
          r.values[header[i]] = std::stod(cells[i]);
        } catch (const std::exception&) {
          throw DataError(path + ": non-numeric value '" + cells[i] + "' in column " + header[i]);
        }
      }
    }
    if (!r.values.count("Nk")) throw DataError(path + ": missing Nk column");
    r.Nk = r.values["Nk"];
    rows.push_back(r);
  }
  if (header.empty()) throw DataError(path + ": no header");
  return rows;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& column, double fit_min, double fit_max,
               const std::string& out) {
  Provenance pv;
  pv.config = {{"command", "report"}, {"column", column}, {"fit_min", fit_min}, {"fit_max", fit_max}};
  std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& path : inputs)
    for (const CsvRow& r : read_sweep_csv(path)) {
      if (r.Nk < fit_min || (fit_max > 0 && r.Nk > fit_max)) continue;
      auto it = r.values.find(column);
      if (it == r.values.end()) throw DataError(path + ": missing column " + column);
      auto& g = groups[{r.lcu, r.variant}];
      g.first.push_back(r.Nk);
      g.second.push_back(it->second);
    }
  ordered_json fits = ordered_json::array();
  for (const auto& [key, xy] : groups) {
    const PowerFit fit = fit_power_law(xy.first, xy.second);
    std::cout << "fit lcu=" << key.first << " variant=" << key.second << " column=" << column
              << " exponent=" << fmt("%.4f", fit.exponent) << " r2=" << fmt("%.6f", fit.r2) << " points=" << fit.points
              << '\n';
    fits.push_back({{"lcu", key.first},
                    {"variant", key.second},
                    {"column", column},
                    {"exponent", fit.exponent},
                    {"intercept", fit.intercept},
                    {"r2", fit.r2},
                    {"points", fit.points}});
  }
  if (!out.empty()) write_text(out, ordered_json({{"fits", fits}, {"provenance", pv.json()}}).dump(2) + "\n");
  return 0;
}

int cmd_verify(const std::string& in, const std::string& mesh_s, int n, std::uint64_t seed, int rank, double tol,
               const std::string& out, const Common& c) {
  Provenance pv;
  pv.config = {{"command", "verify"}, {"tol", tol}};
  KHamiltonian H;
  std::optional<THCFactors> thc;
  if (!in.empty()) {
    H = read_hamiltonian(in);
    thc = maybe_thc(in);
    pv.seed = seed_of(in);
    pv.config["input_config_hash"] = input_hash(in);
  } else {
    const Mesh mesh = parse_mesh(mesh_s);
    if (n < 1) throw UsageError("--n must be >= 1");
    const int M = rank > 0 ? rank : n + 1;
    SyntheticTHC syn = generate_synthetic_thc(mesh, n, seed, M);
    H = std::move(syn.H);
    thc = std::move(syn.thc);
    pv.seed = std::to_string(seed);
    pv.config["dims"] = dims_json(mesh);
    pv.config["n"] = n;
    pv.config["rank"] = M;
  }
  if (2 * H.n * H.nk() > kMaxModes)
    throw UsageError("verify is limited to " + std::to_string(kMaxModes) + " spin orbitals in total");
  const VerifyReport rep = verify_instance(H, thc ? &*thc : nullptr, c.workers, tol);
  ordered_json checks = ordered_json::array();
  for (const VerifyCheck& ch : rep.checks) {
    std::cout << (ch.pass ? "PASS " : "FAIL ") << ch.name << " value=" << sci(ch.value)
              << " tolerance=" << sci(ch.tolerance) << '\n';
    checks.push_back({{"name", ch.name}, {"value", ch.value}, {"tolerance", ch.tolerance}, {"pass", ch.pass}});
  }
  std::cout << (rep.pass() ? "verify: all checks passed\n" : "verify: FAILED\n");
  if (!out.empty())
    write_text(out, ordered_json({{"pass", rep.pass()}, {"checks", checks}, {"provenance", pv.json()}}).dump(2) + "\n");
  return rep.pass() ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-point LCU resource estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kbloch format " + std::to_string(kFormatVersion));
  Common common;
  auto workers = [&](CLI::App* c) {
    c->add_option("--workers", common.workers, "worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
  };

  // gen
  std::string g_mesh, g_out, g_model = "thc";
  int g_n = 1, g_rank = 0;
  std::uint64_t g_seed = 1;
  double g_decay = 0.5;
  auto* gen = app.add_subcommand("gen", "generate a synthetic k-point Hamiltonian");
  gen->add_option("--mesh", g_mesh, "mesh extents, e.g. 1,1,2")->required();
  gen->add_option("--n", g_n, "spatial orbitals per cell")->required();
  gen->add_option("--seed", g_seed, "random seed");
  gen->add_option("--model", g_model, "thc (exact THC structure) or gram (decaying Gram form)")
      ->check(CLI::IsMember({"thc", "gram"}));
  gen->add_option("--rank", g_rank, "THC rank M or Gram rank (0 picks n+1)");
  gen->add_option("--decay", g_decay, "gram model decay");
  gen->add_option("-o,--output", g_out, "output directory")->required();

  // factor
  std::string f_in, f_method, f_out;
  FactorOpts f_opts;
  auto* factor = app.add_subcommand("factor", "factorize a Hamiltonian");
  factor->add_option("-i,--input", f_in, "hamiltonian directory")->required();
  factor->add_option("--method", f_method, "sparse, sf, df or thc")->required();
  factor->add_option("-o,--output", f_out, "output directory")->required();
  f_opts.add(factor);
  workers(factor);

  // lambda
  std::string l_in, l_lcu, l_out;
  FactorOpts l_opts;
  auto* lambda = app.add_subcommand("lambda", "L1 norm of one representation");
  lambda->add_option("-i,--input", l_in, "hamiltonian directory")->required();
  lambda->add_option("--lcu", l_lcu, "sparse, sf, df or thc")->required();
  lambda->add_option("-o,--output", l_out, "JSON report path");
  l_opts.add(lambda);
  workers(lambda);

  // cost
  CostArgs ca;
  auto* costc = app.add_subcommand("cost", "per-step Toffoli, qubit and total cost");
  costc->add_option("--lcu", ca.lcu, "sparse, sf, df or thc")->required();
  costc->add_option("-i,--input", ca.input, "hamiltonian directory; factor sizes and lambda are measured on it");
  costc->add_option("--mesh", ca.mesh, "mesh when no input is given");
  costc->add_option("--n", ca.n, "spatial orbitals per cell when no input is given");
  costc->add_option("--M", ca.M, "SF / DF / THC rank when no input is given");
  costc->add_option("--xi", ca.Xi, "DF average rank when no input is given");
  costc->add_option("--d", ca.d, "sparse unique entries when no input is given");
  costc->add_option("--lambda", ca.lambda, "lambda when no input is given")->check(CLI::PositiveNumber);
  costc->add_option("--d-sc", ca.d_sc, "supercell sparse count (default d N_k)");
  costc->add_option("--xi-sc", ca.Xi_sc, "supercell DF average rank (default xi)");
  costc->add_flag("--supercell", ca.supercell, "cost the Gamma-point supercell baseline");
  costc->add_flag("--csv", ca.csv, "print a CSV row instead of the summary line");
  costc->add_option("-o,--output", ca.out, "JSON report path");
  ca.f.add(costc);
  ca.bits.add(costc);
  workers(costc);

  // phys
  std::int64_t p_toff = 0, p_log = 0;
  std::string p_prof, p_out;
  auto* phys = app.add_subcommand("phys", "surface-code physical qubits and runtime");
  phys->add_option("--toffoli", p_toff, "Toffoli count")->required();
  phys->add_option("--logical", p_log, "logical qubits")->required();
  phys->add_option("--profile", p_prof, "model profile JSON (default: KBLOCH_PROFILE_DIR/diamond_v1.json)");
  phys->add_option("-o,--output", p_out, "JSON report path");

  // sweep
  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "formula-level cost sweep over meshes");
  sweep->add_option("--lcu", sa.lcu, "sparse, sf, df or thc")->required();
  sweep->add_option("--meshes", sa.meshes, "meshes, e.g. '2,2,2;3,3,3' or 2,2,2 3,3,3")->required();
  sweep->add_flag("--supercell", sa.supercell, "supercell variant");
  sweep->add_option("--n", sa.model.n, "spatial orbitals per cell");
  sweep->add_option("--chol-per-orbital", sa.model.chol_per_orbital, "Cholesky rank per orbital");
  sweep->add_option("--xi", sa.model.xi, "DF average rank");
  sweep->add_option("--c-thc", sa.model.c_thc, "THC rank per orbital");
  sweep->add_option("--lambda-per-cell", sa.model.lambda_per_cell, "lambda per cell")->check(CLI::PositiveNumber);
  sweep->add_option("-o,--output", sa.out, "CSV path (default stdout)");
  sa.bits.add(sweep);
  workers(sweep);

  // report
  std::vector<std::string> r_in;
  std::string r_col = "per_step_toffoli", r_out;
  double r_min = 0.0, r_max = 0.0;
  auto* report = app.add_subcommand("report", "log-log exponent fits over sweep CSVs");
  report->add_option("-i,--input", r_in, "sweep CSV files")->required();
  report->add_option("--column", r_col, "column to fit against Nk");
  report->add_option("--fit-min", r_min, "smallest Nk in the fit");
  report->add_option("--fit-max", r_max, "largest Nk in the fit (0 for no limit)");
  report->add_option("-o,--output", r_out, "JSON report path");

  // verify
  std::string v_in, v_mesh = "1,1,2", v_out;
  int v_n = 1, v_rank = 0;
  std::uint64_t v_seed = 1;
  double v_tol = 1e-9;
  auto* verify = app.add_subcommand("verify", "dense oracle checks on a small instance");
  verify->add_option("-i,--input", v_in, "hamiltonian directory");
  verify->add_option("--mesh", v_mesh, "mesh for a generated instance");
  verify->add_option("--n", v_n, "spatial orbitals for a generated instance");
  verify->add_option("--seed", v_seed, "seed for a generated instance");
  verify->add_option("--rank", v_rank, "THC rank for a generated instance (0 picks n+1)");
  verify->add_option("--tol", v_tol, "spectrum tolerance");
  verify->add_option("-o,--output", v_out, "JSON report path");
  workers(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(g_mesh, g_n, g_seed, g_model, g_rank, g_decay, g_out);
    if (*factor) return cmd_factor(f_in, f_method, f_opts, f_out, common);
    if (*lambda) return cmd_lambda(l_in, l_lcu, l_opts, l_out, common);
    if (*costc) return cmd_cost(ca, common);
    if (*phys) return cmd_phys(p_toff, p_log, p_prof, p_out);
    if (*sweep) return cmd_sweep(sa, common);
    if (*report) return cmd_report(r_in, r_col, r_min, r_max, r_out);
    if (*verify) return cmd_verify(v_in, v_mesh, v_n, v_seed, v_rank, v_tol, v_out, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    // DataError, NotPsdError, InfeasibleError, I/O failures.
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
