#pragma once

#include <ostream>
#include <span>

#include "contagion/laplace.hpp"
#include "contagion/simulator.hpp"

namespace contagion {

/// time,kind,mark_y,mark_z1,mark_z2,generation
void write_events_csv(std::ostream& out, const EventHistory& history);

/// t,lambda1,lambda2 at the given nondecreasing times.
void write_intensity_csv(std::ostream& out, const EventHistory& history,
                         const ModelParams& params, std::span<const double> times);

/// t,l_1,...,l_m,c
void write_laplace_grid_csv(std::ostream& out, const LaplaceGrid& grid);

}  // namespace contagion
