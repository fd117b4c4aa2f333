#pragma once

#include "qlin/qubo.hpp"

namespace qlin {

// Fixed-point binary encoding of a real value by R bits:
//
//   x = c * sum_{r=0}^{R-1} 2^{-r} q_r - d,   q_r in {0,1}
//
// covering the half-open range [-d, 2c - d) on a uniform grid of step
// c * 2^{1-R}.  The default (c, d) = (2, 1) spans [-1, 3).
struct BinaryEncoding {
  int resolution = 4;
  double c = 2.0;
  double d = 1.0;

  bool admissible() const { return resolution >= 1 && c > 0.0 && d > 0.0; }
  double min_value() const { return -d; }
  double sup_value() const { return 2.0 * c - d; }  // exclusive
  double grid_step() const;                         // c * 2^(1-R)
  double quantization_bound() const;                // half a step: c * 2^(-R)
};

double decode(const BinaryState& bits, const BinaryEncoding& enc);

// Nearest representable value; exact midpoint ties resolve toward the smaller
// decoded value (equivalently the smaller state integer).  x must lie in
// [min_value, sup_value).
BinaryState encode_nearest(double x, const BinaryEncoding& enc);

// floor(log2(v)) for v > 0, found by doubling/halving comparisons only (no
// division), saturating at +-64 steps.
int floor_exponent(double v);

struct ExponentOffset {
  int offset = 0;
  bool exact_zero = false;  // numerator was exactly zero
};

// Power-of-two normalisation for a ratio num/den without dividing:
//   offset = floor_exponent(|num|) - floor_exponent(|den|) + 1
// guarantees |num / den| * 2^{-offset} lies in (1/4, 1].  A zero numerator
// short-circuits with offset 0 and the exact_zero flag set; a zero or
// non-finite denominator is a domain error.
ExponentOffset exponent_offset(double num, double den);

}  // namespace qlin
