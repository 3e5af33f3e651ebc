#include "seqkd/angle.hpp"

#include <cmath>

namespace seqkd {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// cosine table at multiples of 45 degrees, index = (deg / 45) mod 8
constexpr double kCos45Table[8] = {1.0,       kInvSqrt2, 0.0, -kInvSqrt2,
                                   -1.0,      -kInvSqrt2, 0.0, kInvSqrt2};

double reduce(double deg, double period) {
  double r = std::fmod(deg, period);
  if (r < 0.0) r += period;
  // fmod of a negative multiple can yield exactly `period` after the fixup
  if (r == period) r = 0.0;
  return r;
}

double cos_deg(double deg) {
  double r = reduce(deg, 360.0);
  double idx = r / 45.0;
  if (idx == std::floor(idx)) return kCos45Table[static_cast<int>(idx) & 7];
  return std::cos(r * kPi / 180.0);
}

}  // namespace

Angle::Angle(double degrees) : deg_(reduce(degrees, 180.0)) {}

double cos_between(Angle a, Angle b) { return cos_deg(a.degrees() - b.degrees()); }

double sin_between(Angle a, Angle b) { return cos_deg(a.degrees() - b.degrees() - 90.0); }

double cos2_between(Angle a, Angle b) {
  double r = reduce(a.degrees() - b.degrees(), 180.0);
  if (r == 0.0) return 1.0;
  if (r == 90.0) return 0.0;
  if (r == 45.0 || r == 135.0) return 0.5;
  double c = std::cos(r * kPi / 180.0);
  return c * c;
}

}  // namespace seqkd
