#include "nbtri/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nbtri {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string chain_to_csv(const ChainRun& run) {
  std::ostringstream out;
  const int n = run.params.empty() ? 0 : run.params[0].n();
  out << "draw";
  for (int i = 1; i <= n; ++i) out << ",alpha_" << i;
  for (int j = 1; j <= n; ++j) out << ",gamma_" << j;
  for (int j = 1; j <= n; ++j) out << ",pi_" << j;
  out << '\n';
  for (std::size_t t = 0; t < run.params.size(); ++t) {
    const ModelParams& p = run.params[t];
    out << t;
    for (long long a : p.alpha) out << ',' << a;
    for (double g : p.gamma) out << ',' << format_double(g);
    for (double v : p.pi) out << ',' << format_double(v);
    out << '\n';
  }
  return out.str();
}

namespace {
template <typename Get>
std::string latents_to_csv(const ChainRun& run, const Triangle& x, Get get) {
  std::ostringstream out;
  const auto cells = x.observed_cells();
  out << "draw";
  for (const Cell& c : cells) out << ",c_" << c.i << '_' << c.j;
  out << '\n';
  for (std::size_t t = 0; t < run.latents.size(); ++t) {
    out << t;
    for (const Cell& c : cells) out << ',' << get(run.latents[t], c.i, c.j);
    out << '\n';
  }
  return out.str();
}
}  // namespace

std::string latents_y_to_csv(const ChainRun& run, const Triangle& x) {
  return latents_to_csv(run, x, [](const LatentState& s, int i, int j) {
    return std::to_string(s.y.get(i, j));
  });
}

std::string latents_z_to_csv(const ChainRun& run, const Triangle& x) {
  return latents_to_csv(run, x, [](const LatentState& s, int i, int j) {
    return format_double(s.z.get(i, j));
  });
}

std::string acceptance_to_text(const ChainRun& run) {
  std::ostringstream out;
  for (int b = 0; b < 5; ++b) {
    out << "accept_rate_" << kBlockNames[b] << " = "
        << format_double(run.acceptance[b].rate()) << '\n';
    out << "proposals_" << kBlockNames[b] << " = "
        << run.acceptance[b].proposals << '\n';
  }
  for (int b = 0; b < 5; ++b)
    out << "final_delta_" << kBlockNames[b] << " = "
        << format_double(run.final_delta[b]) << '\n';
  return out.str();
}

namespace {
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ls(line);
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}
}  // namespace

ChainRun chain_from_csv(const std::string& chain_csv, const std::string& y_csv,
                        const std::string& z_csv, const Triangle& x, int q) {
  const auto rows = parse_csv(chain_csv);
  const auto yrows = parse_csv(y_csv);
  const auto zrows = parse_csv(z_csv);
  if (rows.size() < 2 || yrows.size() != rows.size() ||
      zrows.size() != rows.size())
    throw IoError("chain_from_csv: inconsistent chain files");
  const int n = x.size();
  const auto cells = x.observed_cells();
  ChainRun run;
  run.config.q = q;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (static_cast<int>(f.size()) != 1 + 3 * n)
      throw IoError("chain_from_csv: bad column count");
    ModelParams p;
    p.q = q;
    for (int i = 0; i < n; ++i) p.alpha.push_back(std::stoll(f[1 + i]));
    for (int j = 0; j < n; ++j) p.gamma.push_back(std::stod(f[1 + n + j]));
    for (int j = 0; j < n; ++j) p.pi.push_back(std::stod(f[1 + 2 * n + j]));
    LatentState s;
    s.y = Grid<long long>(n);
    s.z = Grid<double>(n);
    const auto& yf = yrows[r];
    const auto& zf = zrows[r];
    if (yf.size() != cells.size() + 1 || zf.size() != cells.size() + 1)
      throw IoError("chain_from_csv: bad latent column count");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      s.y.set(cells[c].i, cells[c].j, std::stoll(yf[c + 1]));
      s.z.set(cells[c].i, cells[c].j, std::stod(zf[c + 1]));
    }
    run.params.push_back(std::move(p));
    run.latents.push_back(std::move(s));
  }
  return run;
}

std::string keyvalues_to_text(const KeyValues& kv) {
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  return out.str();
}

KeyValues keyvalues_from_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find(" = ");
    if (pos == std::string::npos) continue;
    kv[line.substr(0, pos)] = line.substr(pos + 3);
  }
  return kv;
}

}  // namespace nbtri
