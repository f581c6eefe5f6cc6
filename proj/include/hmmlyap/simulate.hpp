#pragma once

#include <cstdint>
#include <vector>

#include "hmmlyap/model.hpp"
#include "hmmlyap/rng.hpp"

namespace hmmlyap {

// A stationary sample of length T: x[t] is the hidden state at time t,
// z[t] the observation emitted at time t, both 1-indexed symbols, t = 0..T-1.
struct SamplePath {
    std::vector<int> x;
    std::vector<int> z;
    std::uint64_t seed = 0;
};

// A block of observations labelled by the time of its first symbol, so
// symbols[i] sits at time origin + i. Windows ending at the present have
// origin < 0; windows describing the future have origin >= 1.
struct ObservationWindow {
    std::vector<int> symbols;
    long long origin = 0;
};

// Draws x[0] ~ pi, then alternates z[t] ~ q(. | x[t]), x[t+1] ~ p(. | x[t]).
// The draw order is part of the reproducibility contract.
SamplePath sample_path(const HmmModel& model, long long T, std::uint64_t seed);

// Last n observations of the path, placed at times -n..-1. The symbol at
// time -1 is the most recent one.
ObservationWindow past_window(const SamplePath& path, long long n);

// First n observations of the path, placed at times 1..n.
ObservationWindow future_window(const SamplePath& path, long long n);

} // namespace hmmlyap
