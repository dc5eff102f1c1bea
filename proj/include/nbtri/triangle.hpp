#ifndef NBTRI_TRIANGLE_HPP
#define NBTRI_TRIANGLE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nbtri {

struct TriangleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Cell {
  int i;  // origin year, 1-based
  int j;  // development year, 1-based
  long long x;
};

// Run-off triangle of claim counts. Observed region is the upper-left
// staircase {(i,j): 1 <= i <= n, j <= n-i+1}; all indices are 1-based.
class Triangle {
 public:
  // Grid must be n x n with values exactly on the staircase.
  explicit Triangle(std::vector<std::vector<std::optional<long long>>> cells);

  // Wide CSV, one row per origin year, blank = unobserved. An optional
  // header row is ignored when its first field is non-numeric.
  static Triangle from_csv(const std::string& text);
  static Triangle from_file(const std::string& path);

  int size() const { return n_; }
  bool observed(int i, int j) const { return j >= 1 && j <= n_ - i + 1; }
  long long at(int i, int j) const;

  std::string to_csv() const;
  std::vector<Cell> observed_cells() const;
  long long observed_row_sum(int i) const;

 private:
  int n_;
  std::vector<std::vector<std::optional<long long>>> cells_;
};

struct CumulativeTriangle {
  int n;
  // cell(i,j) = sum_{k<=j} X_{i,k} over the observed region, absent elsewhere
  std::vector<std::vector<std::optional<long long>>> cells;
  long long at(int i, int j) const;
};

CumulativeTriangle to_cumulative(const Triangle& t);

}  // namespace nbtri

#endif
