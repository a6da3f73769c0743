#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schedge/datagen.hpp"
#include "schedge/model.hpp"
#include "schedge/rng.hpp"

namespace schedge::churn {

enum class Direction : uint8_t { add, remove };

inline const char* direction_name(Direction d) { return d == Direction::add ? "add" : "remove"; }

enum class CapMode : uint8_t {
  flip,    // a capped draw fires in the opposite direction
  suppress // a capped draw fires nothing
};

struct ScriptDirective {
  Direction action = Direction::add;
  std::optional<Tier> tier; // required for add
};

// Per-cycle probabilistic device join/leave. Additions follow the configured
// tier mix (never Cloud); at most max_consecutive same-direction events may
// occur in a row.
struct ChurnConfig {
  bool enabled = true;
  double event_probability = 0.0075;
  uint32_t max_consecutive = 3;
  double mec_add_fraction = 1.0 / 3.0; // IoT gets the remainder
  CapMode cap_mode = CapMode::flip;
  std::map<uint64_t, ScriptDirective> manual_script; // cycle -> directive
};

void validate_churn_config(const ChurnConfig& cfg);

// Manual script CSV: header `cycle,action,tier`, action in {add, remove},
// tier required for add and empty for remove. One directive per cycle.
std::map<uint64_t, ScriptDirective> load_churn_script(const std::filesystem::path& path);

struct ChurnLogEntry {
  uint64_t cycle = 0;
  Direction direction = Direction::add;
  std::string device_id;
};

struct ChurnHistory {
  uint32_t consecutive_count = 0;
  std::optional<Direction> last_direction;
  uint64_t total_added = 0;
  uint64_t total_removed = 0;
  std::vector<ChurnLogEntry> log;
};

struct ChurnEvent {
  Direction direction = Direction::add;
  std::string device_id;
  Tier tier = Tier::IoT;                  // meaningful for additions
  std::vector<std::string> requeued_tasks; // displaced by a removal
};

// Registers a fresh device of `tier` drawn from the datagen defaults; the id
// is unique within the fleet.
const DeviceSpec& add_device(SimState& state, Tier tier, Rng& rng,
                             const datagen::GenConfig& gen_cfg);

struct RemovedDevice {
  std::string device_id;
  std::vector<std::string> requeued_tasks;
};

// Deregisters a uniformly chosen non-Cloud device; its queued and running
// tasks return to the remaining ledger. Error(Errc::config) if only the
// Cloud device remains.
RemovedDevice remove_device(SimState& state, Rng& rng);

// One churn step for the current state.cycle. A manual directive for this
// cycle overrides the probabilistic draw (and bypasses the consecutive cap);
// otherwise an event fires with cfg.event_probability, direction uniform,
// with the cap applied per cfg.cap_mode. A remove with no removable device
// flips to add. History is updated with whatever fired.
std::optional<ChurnEvent> maybe_churn(SimState& state, const ChurnConfig& cfg,
                                      ChurnHistory& history, Rng& rng,
                                      const datagen::GenConfig& gen_cfg);

// ---------------------------------------------------------------------------
// Probability sweep
// ---------------------------------------------------------------------------

struct ChurnCounts {
  uint64_t added = 0;
  uint64_t removed = 0;
};

struct SweepRow {
  double probability = 0;
  double mean_added = 0;
  double mean_removed = 0;
  double stddev_added = 0;  // population, across seeds
  double stddev_removed = 0;
};

// Runs `run(probability, seed, cycles)` (an engine-backed functor supplied by
// the driver) for every probability x seed pair and aggregates per-probability
// means. Probabilities must lie in [0, 1].
using ChurnRunFn = std::function<ChurnCounts(double probability, uint64_t seed, uint64_t cycles)>;

std::vector<SweepRow> churn_sweep(const ChurnRunFn& run, const std::vector<double>& probabilities,
                                  uint64_t cycles, const std::vector<uint64_t>& seeds);

inline constexpr const char* kSweepHeader =
    "probability,mean_added,mean_removed,stddev_added,stddev_removed";

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

} // namespace schedge::churn
