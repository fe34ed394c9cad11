#pragma once

#include "pulsefront/model.hpp"

namespace fixtures {

inline pulsefront::ModelParams example_params() { return {0.10, 0.10, 0.35, 0.11, 0.10, 20.0, 200.0, 1.0, 2.0}; }
inline pulsefront::GrowthSpec example_growth() { return pulsefront::GrowthSpec::saturating(0.5, 10.0); }
inline pulsefront::GrowthSpec spreading_growth() { return pulsefront::GrowthSpec::saturating(0.5, 1.0); }
inline pulsefront::PulseSpec bh_pulse() { return pulsefront::PulseSpec::beverton_holt(0.1, 10.0); }
inline pulsefront::KernelSpec bump3() { return pulsefront::KernelSpec::bump(3.0); }

}  // namespace fixtures
