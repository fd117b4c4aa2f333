#include "qlin/encoding.hpp"

#include <cmath>
#include <stdexcept>

namespace qlin {

double BinaryEncoding::grid_step() const { return c * std::ldexp(1.0, 1 - resolution); }

double BinaryEncoding::quantization_bound() const { return c * std::ldexp(1.0, -resolution); }

double decode(const BinaryState& bits, const BinaryEncoding& enc) {
  if (static_cast<int>(bits.size()) != enc.resolution)
    throw std::invalid_argument("bit count does not match the encoding resolution");
  double chi = 0.0;
  for (int r = 0; r < enc.resolution; ++r)
    if (bits[r]) chi += std::ldexp(1.0, -r);
  return enc.c * chi - enc.d;
}

BinaryState encode_nearest(double x, const BinaryEncoding& enc) {
  if (!enc.admissible()) throw std::invalid_argument("inadmissible encoding");
  if (!std::isfinite(x) || x < enc.min_value() || x >= enc.sup_value())
    throw std::domain_error("value outside the encodable range");
  // Grid levels are K * step - d for K = 0 .. 2^R - 1 with step = c * 2^{1-R}.
  const double t = (x + enc.d) / enc.c * std::ldexp(1.0, enc.resolution - 1);
  // Round half toward the smaller level.
  long long k = static_cast<long long>(std::ceil(t - 0.5));
  const long long max_k = (1ll << enc.resolution) - 1;
  if (k < 0) k = 0;
  if (k > max_k) k = max_k;
  BinaryState bits(enc.resolution);
  for (int r = 0; r < enc.resolution; ++r)
    bits[r] = static_cast<std::uint8_t>((k >> (enc.resolution - 1 - r)) & 1);
  return bits;
}

int floor_exponent(double v) {
  if (!std::isfinite(v) || v <= 0.0) throw std::domain_error("floor_exponent needs v > 0");
  int e = 0;
  double x = 1.0;
  if (v >= 1.0) {
    while (x * 2.0 <= v && e < 64) {
      x *= 2.0;
      ++e;
    }
  } else {
    while (x > v && e > -64) {
      x *= 0.5;
      --e;
    }
  }
  return e;
}

ExponentOffset exponent_offset(double num, double den) {
  if (!std::isfinite(num) || !std::isfinite(den))
    throw std::domain_error("exponent_offset needs finite arguments");
  if (den == 0.0) throw std::domain_error("zero denominator");
  if (num == 0.0) return {0, true};
  return {floor_exponent(std::abs(num)) - floor_exponent(std::abs(den)) + 1, false};
}

}  // namespace qlin
