// Copyright 2026 The fockchannel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Configuration, execution and serialization for the command-line front end.
//
// A configuration is a flat "key = value" document; '#' starts a comment.
// Complex values are written "re,im" or as a plain real. Output is JSON
// (numbers as 17-significant-digit strings) or CSV.

#ifndef FOCKCHANNEL_CLI_HPP
#define FOCKCHANNEL_CLI_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fockchannel/pipeline.hpp"

namespace fockchannel {

/// Malformed or invalid configuration. Messages carry the line number or key.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class Command { Channel, Control, Raman, Stats, Charfunc, Verify, Sweep };
enum class OutputFormat { Json, Csv };

std::string_view to_string(Command command);
std::string_view to_string(OutputFormat format);

/// Stage of the scheme whose characteristic function is sampled.
enum class CharStage { Input, Splitter, Absorber, Output };
std::string_view to_string(CharStage stage);

struct RunConfig {
  Command command = Command::Channel;

  Complex alpha;
  int n = 0;
  /// Resolved splitter and couplings; matched to g = f = 1/sqrt2 when unset.
  double theta = 0.0, g = 0.0, f = 0.0;

  /// Absorber source: Mz alone, R with z, or N_occ and gamma with z.
  std::optional<double> Mz, R, N_occ, gamma;
  double z = 1.0;
  double v = 1.0;

  int epsilon = 0;
  double Omega = 0.0;
  double omega0 = 1.0;

  std::optional<int> n_max;
  int margin = kDefaultMargin;
  int n_max_cap = kDefaultCutoffCap;
  AbsorberModel model = AbsorberModel::Analytic;
  double dt = 1e-2;
  SplitterOrientation second_splitter = SplitterOrientation::Inverse;
  double leakage_threshold = kDefaultLeakageThreshold;

  // verify
  int atoms = 2;
  double relaxation = 0.0;
  std::optional<double> duration;
  int samples = 50;

  // charfunc
  CharStage stage = CharStage::Output;
  int grid_points = 11;
  double beta_max = 2.0;
  double phase1 = 0.0;
  double phase2 = 0.0;

  // sweep
  std::string sweep_param;
  double sweep_start = 0.0;
  double sweep_stop = 0.0;
  int sweep_count = 0;
  Command sweep_command = Command::Channel;

  std::string out;
  OutputFormat format = OutputFormat::Json;

  /// Explicitly set keys after overrides, as written.
  std::map<std::string, std::string> entries;

  SchemeParams scheme() const;
  /// Throws ConfigError when no absorber source is set.
  AbsorberParams absorber() const;
  ChannelOptions channel_options() const;
  FrequencySpec frequencies() const;
};

using Override = std::pair<std::string, std::string>;

/// Every recognized configuration key, in echo order.
const std::vector<std::string>& config_keys();

/// Parses `text`, applies `overrides` in order and validates the result.
/// Throws ConfigError with "line N:" for syntax problems and the key name plus
/// the violated invariant for bad values.
RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {});

/// Resolves a key map directly (used for sweep points).
RunConfig resolve_config(const std::map<std::string, std::string>& entries);

/// Shortest round-trip-safe text for a real: 17 significant digits, "-0" folded
/// to "0", and integral values keep a ".0".
std::string format_real(double x);

struct RunOutput {
  std::string text;
  bool contract_ok = true;
};

/// Runs the configured command and renders its output. Library errors propagate.
RunOutput run_config(const RunConfig& config);

/// run_config plus output writing and error mapping: 0 success, 1 validation
/// failure, 2 numerical-contract failure. Diagnostics go to `diagnostics`;
/// output goes to config.out, or `stdout_stream` when no path is set.
int execute(const RunConfig& config, std::ostream& stdout_stream, std::ostream& diagnostics);

}  // namespace fockchannel

#endif  // FOCKCHANNEL_CLI_HPP
