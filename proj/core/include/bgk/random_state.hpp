#pragma once

#include <random>

#include "bgk/full_solver.hpp"
#include "bgk/phase_space.hpp"

namespace bgk {

/// Random positive density in [0.5, 1.5] and random positive g in
/// [0.5, 1.5] rescaled row-wise to unit discrete moment.
FullState random_normalized_state(const PhaseSpace& ps, std::mt19937_64& rng);

}  // namespace bgk
