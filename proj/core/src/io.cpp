#include "exg/io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace exg {

namespace {
void write_exact(std::ofstream& out, const void* p, size_t bytes) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
}
void read_exact(std::ifstream& in, void* p, size_t bytes) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
  if (!in) throw std::runtime_error("table read: truncated file");
}
}  // namespace

void save_green_table(const GreenTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const char magic[4] = {'E', 'X', 'G', 'T'};
  write_exact(out, magic, 4);
  int32_t n = table.n, d = table.d;
  write_exact(out, &n, 4);
  write_exact(out, &d, 4);
  write_exact(out, table.values.data(), table.values.size() * sizeof(double));
}

GreenTable load_green_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  read_exact(in, magic, 4);
  if (std::memcmp(magic, "EXGT", 4) != 0) throw std::runtime_error("bad green table magic");
  int32_t n, d;
  read_exact(in, &n, 4);
  read_exact(in, &d, 4);
  Torus t(n, d);
  GreenTable g;
  g.n = n;
  g.d = d;
  g.values.resize(t.sites());
  read_exact(in, g.values.data(), g.values.size() * sizeof(double));
  // rebuild derived quantities
  g.g0 = g.values[0];
  double n2 = static_cast<double>(n) * n;
  double resid = 0.0, bond = 0.0, s = 0.0, s2 = 0.0;
  for (int64_t i = 0; i < t.sites(); ++i) {
    s += g.values[i];
    s2 += g.values[i] * g.values[i];
    double lapl = 0.0;
    for (int ax = 0; ax < d; ++ax) {
      double gp = g.values[t.neighbor(i, ax, +1)];
      double gm = g.values[t.neighbor(i, ax, -1)];
      lapl += gp + gm - 2.0 * g.values[i];
      bond += (gp - g.values[i]) * (gp - g.values[i]);
    }
    double lhs = g.values[i] - n2 * lapl;
    resid = std::max(resid, std::abs(lhs - (i == 0 ? 1.0 : 0.0)));
  }
  g.sum = s;
  g.sq_norm = s2;
  g.bond_energy = bond;
  g.gradient_energy = 2.0 * bond;
  g.residual_inf = resid;
  return g;
}

void save_flow(const Flow& flow, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const char magic[4] = {'E', 'X', 'G', 'F'};
  write_exact(out, magic, 4);
  int32_t ell = flow.ell, d = flow.d;
  write_exact(out, &ell, 4);
  write_exact(out, &d, 4);
  for (int ax = 0; ax < d; ++ax)
    write_exact(out, flow.edge[ax].data(), flow.edge[ax].size() * sizeof(double));
}

Flow load_flow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  read_exact(in, magic, 4);
  if (std::memcmp(magic, "EXGF", 4) != 0) throw std::runtime_error("bad flow magic");
  int32_t ell, d;
  read_exact(in, &ell, 4);
  read_exact(in, &d, 4);
  Flow f = build_flow(1, d);  // shape only
  f.ell = ell;
  f.d = d;
  f.m = 2 * ell - 1;
  int64_t per_axis = 1;
  for (int i = 0; i < d; ++i) per_axis *= f.m;
  per_axis = per_axis / f.m * (f.m - 1);
  double bond_energy = 0.0;
  for (int ax = 0; ax < d; ++ax) {
    f.edge[ax].resize(per_axis);
    read_exact(in, f.edge[ax].data(), per_axis * sizeof(double));
    for (double v : f.edge[ax]) bond_energy += v * v;
  }
  f.energy_bond = bond_energy;
  f.energy = 2.0 * bond_energy;
  return f;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  out.precision(17);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

GreenTable green_table_cached(int n, int d, const std::string& cache_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(cache_dir);
  std::string path = cache_dir + "/green_n" + std::to_string(n) + "_d" +
                     std::to_string(d) + ".exgt";
  if (fs::exists(path)) return load_green_table(path);
  GreenTable g = green_function(n, d);
  save_green_table(g, path);
  return g;
}

}  // namespace exg
