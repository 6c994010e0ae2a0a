#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace quadagg {

/// Run-wide knobs shared by the CLI and the scripted reproductions. All
/// randomness flows from the single seed through counter-based streams.
struct RunConfig {
  std::uint64_t seed = 7052025;
  double eig_tol = 1e-9;
  double psd_tol = 1e-9;
  double margin = 1e-9;
  int grid = 64;
  int samples = 1000000;  // rejection-sampling proposals
  double box_lo = -3.0;
  double box_hi = 3.0;
  std::string out_dir = ".";

  void validate() const {
    if (eig_tol <= 0 || psd_tol <= 0 || margin < 0) {
      throw std::invalid_argument("RunConfig: tolerances must be positive");
    }
    if (samples < 1) throw std::invalid_argument("RunConfig: samples must be >= 1");
    if (grid < 2) throw std::invalid_argument("RunConfig: grid must be >= 2");
    if (!(box_lo < box_hi)) throw std::invalid_argument("RunConfig: box must be nonempty");
  }
};

}  // namespace quadagg
