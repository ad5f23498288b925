#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace hmf {

using cplx = std::complex<double>;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3() = default;
  Vec3(double a, double b, double c) : x(a), y(b), z(c) {}

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm2(const Vec3& a) { return dot(a, a); }

// Point of S^2; normalized on construction.
class UnitVector3 {
public:
  UnitVector3() : v_(0, 0, 1) {}
  explicit UnitVector3(const Vec3& v) : v_(v / norm(v)) {}
  UnitVector3(double a, double b, double c) : UnitVector3(Vec3(a, b, c)) {}

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double operator[](int i) const { return v_[i]; }

private:
  Vec3 v_;
};

// Inner variable y with polar accessors; theta(0) = 0.
struct PlanePoint {
  double y1 = 0, y2 = 0;

  PlanePoint() = default;
  PlanePoint(double a, double b) : y1(a), y2(b) {}
  static PlanePoint polar(double rho, double theta) {
    return {rho * std::cos(theta), rho * std::sin(theta)};
  }

  double rho() const { return std::hypot(y1, y2); }
  double theta() const { return (y1 == 0.0 && y2 == 0.0) ? 0.0 : std::atan2(y2, y1); }
};

struct ModulationState {
  double lambda = 1.0;
  double omega = 0.0;
  std::array<double, 2> xi{1.0, 0.0};

  cplx p() const { return std::polar(lambda, omega); }
  static ModulationState from_p(cplx p, std::array<double, 2> xi) {
    return {std::abs(p), std::arg(p), xi};
  }
};

} // namespace hmf
