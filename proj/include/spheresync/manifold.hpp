#pragma once

#include <Eigen/Dense>

#include "spheresync/errors.hpp"

namespace spheresync {

/// Tolerance on |‖x‖ − 1| accepted at construction. Values whose drift exceeds
/// it are renormalized by the operations that produce them.
inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kTangencyTolerance = 1e-10;
inline constexpr double kRotationTolerance = 1e-10;

/**
 * @brief Point on the unit sphere S^n, stored as n+1 ambient coordinates.
 */
class UnitVector {
 public:
  /// Throws InputError unless |‖coords‖ − 1| ≤ kUnitTolerance and n ≥ 1.
  explicit UnitVector(Eigen::VectorXd coords);

  /// Accepts any nonzero finite vector; rescales only when the drift exceeds
  /// kUnitTolerance, so already-unit input is returned bit-for-bit.
  static UnitVector normalized(Eigen::VectorXd v);

  /// The i-th standard basis vector of R^{n+1}.
  static UnitVector basis(int sphere_dim, int i);

  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  int ambient_dim() const { return static_cast<int>(coords_.size()); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  UnitVector operator-() const;

 private:
  struct Trusted {};
  UnitVector(Eigen::VectorXd coords, Trusted) : coords_(std::move(coords)) {}

  Eigen::VectorXd coords_;
};

/// Ambient vector tangent to the sphere at `at`.
class TangentVector {
 public:
  /// Throws InputError on dimension mismatch or |⟨at, components⟩| > kTangencyTolerance.
  TangentVector(UnitVector at, Eigen::VectorXd components);

  const UnitVector& at() const { return at_; }
  const Eigen::VectorXd& components() const { return components_; }
  double norm() const { return components_.norm(); }

 private:
  UnitVector at_;
  Eigen::VectorXd components_;
};

/**
 * @brief Unit quaternion q = (w, v) acting on R^3 by the Hamilton convention.
 *
 * q and −q represent the same rotation. Coefficient order in coeffs() and in
 * every serialized form is (w, x, y, z).
 */
class Quaternion {
 public:
  Quaternion(double w, double x, double y, double z);
  Quaternion(double w, const Eigen::Vector3d& v);

  static Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }
  /// Renormalizes when the drift exceeds kUnitTolerance.
  static Quaternion normalized(const Eigen::Vector4d& wxyz);
  static Quaternion from_unit_vector(const UnitVector& x);
  /// Rotation by `angle` radians about the unit axis.
  static Quaternion from_axis_angle(const Eigen::Vector3d& axis, double angle);

  double w() const { return w_; }
  const Eigen::Vector3d& vec() const { return v_; }
  Eigen::Vector4d coeffs() const { return {w_, v_.x(), v_.y(), v_.z()}; }
  UnitVector to_unit_vector() const;

  Quaternion conjugate() const { return Quaternion(w_, -v_, Unchecked{}); }
  Quaternion operator-() const { return Quaternion(-w_, -v_, Unchecked{}); }

 private:
  struct Unchecked {};
  Quaternion(double w, const Eigen::Vector3d& v, Unchecked) : w_(w), v_(v) {}

  double w_;
  Eigen::Vector3d v_;
};

/// Element of SO(3). Construction checks ‖RᵀR − I‖_F and det(R) against kRotationTolerance.
class RotationMatrix {
 public:
  explicit RotationMatrix(const Eigen::Matrix3d& m);
  static RotationMatrix identity() { return RotationMatrix(Eigen::Matrix3d::Identity()); }

  const Eigen::Matrix3d& matrix() const { return m_; }
  RotationMatrix transpose() const { return RotationMatrix(m_.transpose()); }
  RotationMatrix operator*(const RotationMatrix& other) const { return RotationMatrix(m_ * other.m_); }

 private:
  Eigen::Matrix3d m_;
};

/// v − ⟨x, v⟩x, the orthogonal projection onto the tangent space at x.
TangentVector tangent_project(const UnitVector& x, const Eigen::VectorXd& v);

/// Great-circle angle in [0, π].
double geodesic_distance(const UnitVector& x, const UnitVector& y);

/// Exponential map: follows the great circle from x with initial velocity v for unit time.
UnitVector sphere_exp(const UnitVector& x, const TangentVector& v);

/// Hamilton product.
Quaternion quat_mul(const Quaternion& p, const Quaternion& q);
inline Quaternion operator*(const Quaternion& p, const Quaternion& q) { return quat_mul(p, q); }

/// The double-cover map S^3 → SO(3).
RotationMatrix quat_to_rotmat(const Quaternion& q);

/// Inverse of quat_to_rotmat with scalar part ≥ 0; at scalar part exactly 0 the
/// first nonzero vector component is made positive.
Quaternion rotmat_to_quat(const RotationMatrix& r);

/// Image R·b of the body axis b, a point on S².
UnitVector reduced_attitude(const RotationMatrix& r, const UnitVector& b);

}  // namespace spheresync
