#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ldmp/exec/executor.hpp"

namespace ldmp::bench {

constexpr std::size_t kMaxFrame = 64 * 1024;  // bytes per NDJSON line, newline excluded
constexpr int kSnapshotEvery = 5;             // motion steps; 20 Hz at dt = 0.01

class PortBusy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServeOptions {
  std::filesystem::path demo;
  std::optional<std::filesystem::path> world;  // defaults to the demo's template world
  std::string host = "127.0.0.1";
  int port = 8765;  // 0 picks a free port
  exec::RunOptions run;
  std::function<void(int port)> on_listen;  // called once the socket listens
};

struct ServeOutcome {
  exec::RunReport report;  // the last run of the session
  nlohmann::json journal;  // start world plus every accepted command
};

/// Serves one client: the executor starts paused and runs Logic-DMP while
/// streaming snapshots; returns when the client disconnects. Throws PortBusy
/// when the address is taken, std::system_error on other socket failures.
ServeOutcome serve(const ServeOptions& options);

/// Re-runs the last run of a journal offline, applying move_object and
/// add_object commands at the recorded (executed actions, step) points.
exec::RunReport replay_journal(const exec::Setup& setup, const nlohmann::json& journal,
                               const exec::RunOptions& options = {});

/// Converts a move_object / add_object command into a manual disturbance.
/// Throws sim::InvalidDisturbance on bad arguments.
sim::Disturbance disturbance_from_cmd(const sim::WorldState& world, const nlohmann::json& cmd);

}  // namespace ldmp::bench
