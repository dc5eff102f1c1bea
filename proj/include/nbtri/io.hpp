#ifndef NBTRI_IO_HPP
#define NBTRI_IO_HPP

#include <map>
#include <string>

#include "nbtri/predict.hpp"

namespace nbtri {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string fnv1a_hex(const std::string& bytes);

// Chain draws as CSV: one row per kept draw, columns draw, alpha_1..n,
// gamma_1..n, pi_1..n. Latent grids go to separate files with one
// column per observed cell.
std::string chain_to_csv(const ChainRun& run);
std::string latents_y_to_csv(const ChainRun& run, const Triangle& x);
std::string latents_z_to_csv(const ChainRun& run, const Triangle& x);
std::string acceptance_to_text(const ChainRun& run);

// Rebuilds a ChainRun (params + latents) from the three chain files.
ChainRun chain_from_csv(const std::string& chain_csv,
                        const std::string& y_csv, const std::string& z_csv,
                        const Triangle& x, int q);

// Plain "key = value" manifest files.
using KeyValues = std::map<std::string, std::string>;
std::string keyvalues_to_text(const KeyValues& kv);
KeyValues keyvalues_from_text(const std::string& text);

std::string format_double(double v);

}  // namespace nbtri

#endif
