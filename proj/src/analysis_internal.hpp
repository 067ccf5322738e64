#pragma once

// Graph helpers shared by the dumbbell and W-pattern searches.

#include <optional>
#include <string>
#include <vector>

#include "sst/core.hpp"

namespace sst::detail {

std::vector<bool> accessible_states(const Sst& sst);
std::vector<bool> coaccessible_states(const Sst& sst);

/// reach[p][q]: q is reachable from p (p reaches itself).
std::vector<std::vector<bool>> reachability(const Sst& sst);

/// Shortest run from an initial state to q, or from q to a final state.
/// Ties go to the lower state index, then the transition order.
std::optional<Run> shortest_access(const Sst& sst, StateId q);
std::optional<Run> shortest_exit(const Sst& sst, StateId q);

/// Injective byte encoding of an update, for hashing and deduplication.
std::string update_key(const Update& u);
std::string image_key(const Image& image);

}  // namespace sst::detail
