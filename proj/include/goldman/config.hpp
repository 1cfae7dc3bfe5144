#pragma once

// Run configuration. Text form: one `key = value` per line, `#` starts a
// comment, blank lines are ignored. JSON form: an object with the same keys.
//
//   genus              2
//   mode               zero | coboundary | solved | file
//   seed               42        solved mode, and the flag sampler
//   amplitude          0.1       solved mode, Euclidean norm of the cocycle
//   coboundary         3,-1      coboundary mode, the point p
//   cocycle_file       path      file mode, JSON {"translations": [[u,v], ...]}
//   twist_generator    0         generator whose linear part gets a homothety
//   twist              0         log of the homothety, or "boundary" for the
//                                largest value allowed by that generator alone
//   max_len            8         sweep depth, at most 10
//   threads            1
//   out                out
//   chart              affine | affine-y | ray
//   zoom               x0,y0,x1,y1 in chart coordinates (empty: automatic)
//   flags              10000     flags sampled by the foliation stage
//   equivariance_pairs 200
//   spectral_gate      1e-8
//   dedup_tol          1e-10
//   dead_zone          1e-6
//   pure_above         1e-6
//   not_pure_below     1e-8

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "goldman/curve.hpp"

namespace goldman {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CocycleMode { Zero, Coboundary, Solved, File };

const char* to_string(CocycleMode m);
CocycleMode cocycle_mode_from_string(const std::string& s);

inline constexpr int kMaxLenCap = 10;

struct RunConfig {
  int genus = 2;
  CocycleMode mode = CocycleMode::Solved;
  std::uint64_t seed = 42;
  double amplitude = 0.1;
  double coboundary_x = 3.0;
  double coboundary_y = -1.0;
  std::string cocycle_file;
  int twist_generator = 0;
  std::string twist = "0";
  int max_len = 8;
  int threads = 1;
  std::string out = "out";
  Chart chart = Chart::Affine;
  std::optional<Window> zoom;
  std::size_t flags = 10000;
  std::size_t equivariance_pairs = 200;
  double spectral_gate = 1e-8;
  double dedup_tol = 1e-10;
  double dead_zone = 1e-6;
  double pure_above = 1e-6;
  double not_pure_below = 1e-8;

  /// Sets one key from its text value; throws ConfigError on unknown keys or
  /// malformed values.
  void set(const std::string& key, const std::string& value);

  /// Range and consistency checks.
  void validate() const;

  /// Resolved configuration as `key = value` lines in a fixed order. Execution
  /// settings (threads, out) are left out: they do not change any result.
  std::vector<std::string> echo() const;
  std::string echo_text() const;
};

RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig parse_config_json(const std::string& text, RunConfig base = {});
/// Dispatches on content: a document starting with '{' is JSON.
RunConfig load_config(const std::string& path, RunConfig base = {});

std::string format_window(const Window& w);
Window parse_window(const std::string& s);

}  // namespace goldman
