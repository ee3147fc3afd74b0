#pragma once

// Scenario runner: turns a resolved configuration into one deterministic
// table per scenario. Column schemas are fixed:
//   fig3b          t_us, p_f1
//   fig3c          detuning_mhz, p_f1
//   fig4b          phi_r_rad, rabi_clock_mhz, rabi_sigma_plus_mhz, rabi_sigma_minus_mhz
//   fig5           z_um, rabi_mhz
//   fig6           scale, p_simple, p_sk1, p_bb1
//   fig7           z_um, n, p_f1           (long format, sorted by z then n)
//   scaling-check  epsilon, infidelity_{simple,sk1,bb1}, analytic_{simple,sk1,bb1}

#include "mwion/config.hpp"
#include "mwion/csv.hpp"

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mwion {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. fn must only
/// write to slot i of its output, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += threads) fn(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

const std::vector<std::string>& scenario_columns(ScenarioId id);

struct RunOptions {
  unsigned threads = 1;
};

/// Computes the scenario table. Comments carry the scenario id, the resolved
/// config (`config: {...}`), and scenario notes. Throws ConfigError for
/// parameters the models reject.
Table run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Fig. 3b/3c/7 couplings: polarization from the drive, clock line pinned to
/// the axial profile at z.
TransitionRabis profile_calibrated_rabis(const ResolvedConfig& cfg, const DriveSettings& drive,
                                         double z_um);

}  // namespace mwion
