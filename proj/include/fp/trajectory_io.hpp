#pragma once

#include <string>

#include "fp/flow.hpp"

namespace fp {

/// Self-describing trajectory container: magic, JSON header (spec, loss,
/// flow config, seed, format version, counts), then per-checkpoint blocks of
/// raw little-endian doubles (t, loss, theta, dtheta_dt) plus a u32 flag
/// word. Round-trips bit-exactly.
void save_trajectory(const std::string& path, const TrajectoryRecord& record);
TrajectoryRecord load_trajectory(const std::string& path);

}  // namespace fp
