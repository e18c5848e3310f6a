#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sobolev/cutoff.hpp"
#include "sobolev/grid.hpp"
#include "sobolev/variational.hpp"

namespace sobolev::io {

using json = nlohmann::ordered_json;

// Shortest-roundtrip decimal formatting; identical runs produce identical
// bytes.
std::string format_double(double v);

// GridFunction rows: coordinates..., value. EdgeFunction rows:
// from-coordinates..., to-coordinates..., value.
void write_grid_csv(const calculus::GridFunction& u, const std::filesystem::path& path);
void write_edge_csv(const calculus::EdgeFunction& a, const std::filesystem::path& path);
void write_ball_csv(const cayley::CayleyBall& ball, const std::filesystem::path& path);
void write_decay_csv(const cutoff::DecayTable& table, const std::filesystem::path& path);
// Plot-ready two-column file (x y per line) for one record kind.
void write_decay_plot(const cutoff::DecayTable& table, const std::string& kind,
                      const std::filesystem::path& path);
void write_tail_csv(const variational::TailProfile& prof, const std::filesystem::path& path);
void write_json(const json& j, const std::filesystem::path& path);

calculus::GridFunction read_grid_csv(const cayley::BallPtr& ball,
                                     const std::filesystem::path& path);

// Run configuration file: `key = value` lines, '#' comments. Keys are
// exactly: group, N, p, q, radius, init, seed, tol_grad, max_iter.
// Missing or unknown keys raise UsageError naming the key.
variational::MinimizationConfig parse_config_file(const std::filesystem::path& path);
variational::MinimizationConfig parse_config_text(const std::string& text);
json config_echo(const variational::MinimizationConfig& cfg);

// Manifest written by every CLI command before it exits, on success and
// failure alike. The timestamp honors SOURCE_DATE_EPOCH so that identical
// (config, seed) runs can be byte-identical.
class RunManifest {
 public:
  RunManifest(std::string command, const std::filesystem::path& out_dir);
  void set_config(const json& cfg);
  void set_seed(std::uint64_t seed);
  void add_output(const std::filesystem::path& p);
  void set_summary(const json& s);
  void set_status(const std::string& status);
  void write();  // out_dir / "manifest.json"

 private:
  std::filesystem::path out_dir_;
  json j_;
};

}  // namespace sobolev::io
