#include "nbtri/triangle.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace nbtri {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  if (out.empty()) out.push_back("");
  return out;
}

bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

}  // namespace

Triangle::Triangle(std::vector<std::vector<std::optional<long long>>> cells)
    : n_(static_cast<int>(cells.size())), cells_(std::move(cells)) {
  if (n_ == 0) throw TriangleError("empty triangle");
  for (int i = 1; i <= n_; ++i) {
    if (static_cast<int>(cells_[i - 1].size()) != n_)
      throw TriangleError("row " + std::to_string(i) + " is not of length n");
    for (int j = 1; j <= n_; ++j) {
      const auto& c = cells_[i - 1][j - 1];
      if (j <= n_ - i + 1) {
        if (!c)
          throw TriangleError("blank cell inside observed region at (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              ")");
        if (*c < 0)
          throw TriangleError("negative count at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      } else if (c) {
        throw TriangleError("value inside unobserved region at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

Triangle Triangle::from_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() && rows.empty()) continue;
    if (trim(line).empty()) break;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw TriangleError("empty input");
  long long tmp;
  if (!parse_int(rows[0][0], tmp)) rows.erase(rows.begin());  // header row
  if (rows.empty()) throw TriangleError("no data rows");

  const int n = static_cast<int>(rows.size());
  std::vector<std::vector<std::optional<long long>>> cells(
      n, std::vector<std::optional<long long>>(n));
  for (int i = 1; i <= n; ++i) {
    if (static_cast<int>(rows[i - 1].size()) != n)
      throw TriangleError("ragged row " + std::to_string(i) + ": expected " +
                          std::to_string(n) + " fields, got " +
                          std::to_string(rows[i - 1].size()));
    for (int j = 1; j <= n; ++j) {
      const std::string& f = rows[i - 1][j - 1];
      if (f.empty()) continue;
      long long v;
      if (!parse_int(f, v))
        throw TriangleError("non-integer cell at (" + std::to_string(i) + "," +
                            std::to_string(j) + "): '" + f + "'");
      cells[i - 1][j - 1] = v;
    }
  }
  return Triangle(std::move(cells));
}

Triangle Triangle::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TriangleError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_csv(ss.str());
}

long long Triangle::at(int i, int j) const {
  if (i < 1 || i > n_ || !observed(i, j))
    throw TriangleError("cell (" + std::to_string(i) + "," +
                        std::to_string(j) + ") is not observed");
  return *cells_[i - 1][j - 1];
}

std::string Triangle::to_csv() const {
  std::ostringstream out;
  for (int i = 1; i <= n_; ++i) {
    for (int j = 1; j <= n_; ++j) {
      if (j > 1) out << ',';
      if (observed(i, j)) out << at(i, j);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<Cell> Triangle::observed_cells() const {
  std::vector<Cell> out;
  out.reserve(n_ * (n_ + 1) / 2);
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_ - i + 1; ++j) out.push_back({i, j, at(i, j)});
  return out;
}

long long Triangle::observed_row_sum(int i) const {
  long long s = 0;
  for (int j = 1; j <= n_ - i + 1; ++j) s += at(i, j);
  return s;
}

long long CumulativeTriangle::at(int i, int j) const {
  const auto& c = cells.at(i - 1).at(j - 1);
  if (!c) throw TriangleError("cumulative cell not observed");
  return *c;
}

CumulativeTriangle to_cumulative(const Triangle& t) {
  const int n = t.size();
  CumulativeTriangle c;
  c.n = n;
  c.cells.assign(n, std::vector<std::optional<long long>>(n));
  for (int i = 1; i <= n; ++i) {
    long long s = 0;
    for (int j = 1; j <= n - i + 1; ++j) {
      s += t.at(i, j);
      c.cells[i - 1][j - 1] = s;
    }
  }
  return c;
}

}  // namespace nbtri
