#pragma once

namespace seqkd {

/// Polarization angle in degrees, canonical range [0, 180). Polarization is a
/// line, not a direction, so arithmetic is modulo 180. The four protocol
/// angles 0, 45, 90, 135 are exactly representable and trig at multiples of
/// 45 degrees is table-driven so that cos^2 yields exactly 1, 1/2 or 0.
class Angle {
 public:
  Angle() = default;
  explicit Angle(double degrees);

  double degrees() const { return deg_; }

  Angle operator+(Angle other) const { return Angle(deg_ + other.deg_); }
  Angle orthogonal() const { return Angle(deg_ + 90.0); }

  friend bool operator==(Angle a, Angle b) { return a.deg_ == b.deg_; }
  friend bool operator!=(Angle a, Angle b) { return !(a == b); }

 private:
  double deg_ = 0.0;
};

/// cos of (a - b) in degrees; exact at multiples of 45.
double cos_between(Angle a, Angle b);
/// sin of (a - b) in degrees; exact at multiples of 45.
double sin_between(Angle a, Angle b);
/// cos^2 of the angle between the two polarization lines; exact dyadic
/// (1, 1/2, 0) at multiples of 45.
double cos2_between(Angle a, Angle b);

}  // namespace seqkd
