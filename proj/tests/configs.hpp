#pragma once

// Canonical JSON problem configurations shared between the unit and
// acceptance binaries: the golden-mean pendulum, the two-torus instance with
// frequency (1, sqrt(2)-1), and a deliberately resonant variant.

namespace testutil {

inline const char* kGoldenConfig = R"JSON({
  "dimension": 1,
  "gevrey": {"sigma": 2.0, "mu": 4.0, "lambda": 5.0, "rho": 3.0},
  "delta": {"kind": "polynomial", "exponent": 2.0},
  "kappa": 0.05,
  "frequency": {"form": "polynomial", "components": [[
    {"exponents": [0], "t_poly": [1.6180339887498949]},
    {"exponents": [1], "t_poly": [1.0]}
  ]]},
  "base_action": [1.6180339887498949],
  "truncations": {"h_order": 6, "fourier_radius": 8, "taylor_degree": 2},
  "t_values": [0.0],
  "symbol_terms": [
    {"j": 0, "mode": [0], "taylor": [0], "coeff": 1.3090169943749475},
    {"j": 0, "mode": [0], "taylor": [1], "coeff": 1.6180339887498949},
    {"j": 0, "mode": [0], "taylor": [2], "coeff": 0.5},
    {"j": 2, "mode": [1], "taylor": [0], "coeff": 0.5},
    {"j": 2, "mode": [-1], "taylor": [0], "coeff": 0.5}
  ],
  "run_flags": {"optimal_truncation": true},
  "h_values": [0.1, 0.05]
})JSON";

inline const char* kTwoTorusConfig = R"JSON({
  "dimension": 2,
  "gevrey": {"sigma": 2.0, "mu": 4.0, "lambda": 5.0, "rho": 3.0},
  "delta": {"kind": "polynomial", "exponent": 2.0},
  "kappa": 0.05,
  "frequency": {"form": "constant", "omega": [1.0, 0.41421356237309515]},
  "base_action": [0.3, 0.4],
  "truncations": {"h_order": 5, "fourier_radius": 6, "taylor_degree": 2},
  "t_values": [0.0],
  "symbol_terms": [
    {"j": 0, "mode": [0,0], "taylor": [0,0], "coeff": 0.46568542494923804},
    {"j": 0, "mode": [0,0], "taylor": [1,0], "coeff": 1.0},
    {"j": 0, "mode": [0,0], "taylor": [0,1], "coeff": 0.41421356237309515},
    {"j": 2, "mode": [1,0], "taylor": [0,0], "coeff": 0.5},
    {"j": 2, "mode": [-1,0], "taylor": [0,0], "coeff": 0.5},
    {"j": 2, "mode": [1,0], "taylor": [1,0], "coeff": 0.5},
    {"j": 2, "mode": [-1,0], "taylor": [1,0], "coeff": 0.5},
    {"j": 2, "mode": [0,1], "taylor": [0,0], "coeff": 0.35},
    {"j": 2, "mode": [0,-1], "taylor": [0,0], "coeff": 0.35},
    {"j": 2, "mode": [0,1], "taylor": [0,1], "coeff": 0.175},
    {"j": 2, "mode": [0,-1], "taylor": [0,1], "coeff": 0.175}
  ]
})JSON";

inline const char* kResonantConfig = R"JSON({
  "dimension": 2,
  "gevrey": {"sigma": 2.0, "mu": 4.0, "lambda": 5.0, "rho": 3.0},
  "delta": {"kind": "polynomial", "exponent": 2.0},
  "kappa": 0.05,
  "frequency": {"form": "constant", "omega": [1.0, 1.0]},
  "base_action": [0.3, 0.4],
  "truncations": {"h_order": 4, "fourier_radius": 5, "taylor_degree": 2},
  "t_values": [0.0],
  "symbol_terms": [
    {"j": 0, "mode": [0,0], "taylor": [1,0], "coeff": 1.0},
    {"j": 0, "mode": [0,0], "taylor": [0,1], "coeff": 1.0},
    {"j": 2, "mode": [1,0], "taylor": [0,0], "coeff": 0.5},
    {"j": 2, "mode": [-1,0], "taylor": [0,0], "coeff": 0.5}
  ]
})JSON";

} // namespace testutil
