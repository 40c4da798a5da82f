// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Flags: --skip-sde, --seed N, --n-traj N.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "triopo/commands.hpp"

int main(int argc, char** argv) {
  triopo::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--skip-sde") {
      opt.include_sde = false;
    } else if (arg == "--seed" && i + 1 < argc) {
      opt.sde_seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--n-traj" && i + 1 < argc) {
      opt.sde_trajectories = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::cerr << "usage: " << argv[0] << " [--skip-sde] [--seed N] [--n-traj N]\n";
      return triopo::exit_code::kBadConfig;
    }
  }
  return triopo::cmd_validate(opt, std::cout);
}
