#pragma once

// Reference-controller return floors, measured over seeds 0..19 before any
// agent work and frozen here (measured: pendulum -116, cart-pole 2500,
// lander +273).
namespace fixtures {

inline constexpr double kPendulumReferenceFloor = -150.0;
inline constexpr double kCartPoleReferenceFloor = 2500.0;
inline constexpr double kLanderReferenceFloor = 200.0;

}  // namespace fixtures
