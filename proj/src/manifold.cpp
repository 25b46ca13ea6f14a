#include "spheresync/manifold.hpp"

#include <cmath>
#include <string>

namespace spheresync {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Rescale only when |‖v‖ − 1| exceeds the unit tolerance.
void renormalize_if_drifted(Eigen::VectorXd& v) {
  const double n = v.norm();
  if (std::abs(n - 1.0) > kUnitTolerance) v /= n;
}

}  // namespace

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw InputError("UnitVector: need at least 2 coordinates (sphere dimension >= 1)");
  }
  if (!all_finite(coords_)) throw InputError("UnitVector: non-finite coordinate");
  const double drift = std::abs(coords_.norm() - 1.0);
  if (drift > kUnitTolerance) {
    throw InputError("UnitVector: norm differs from 1 by " + std::to_string(drift));
  }
}

UnitVector UnitVector::normalized(Eigen::VectorXd v) {
  if (v.size() < 2) throw InputError("UnitVector: need at least 2 coordinates");
  if (!all_finite(v)) throw InputError("UnitVector: non-finite coordinate");
  const double n = v.norm();
  if (n == 0.0) throw InputError("UnitVector: cannot normalize the zero vector");
  renormalize_if_drifted(v);
  return UnitVector(std::move(v), Trusted{});
}

UnitVector UnitVector::basis(int sphere_dim, int i) {
  if (sphere_dim < 1 || i < 0 || i > sphere_dim) throw InputError("UnitVector::basis: index out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(sphere_dim + 1);
  e[i] = 1.0;
  return UnitVector(std::move(e), Trusted{});
}

UnitVector UnitVector::operator-() const { return UnitVector(-coords_, Trusted{}); }

TangentVector::TangentVector(UnitVector at, Eigen::VectorXd components)
    : at_(std::move(at)), components_(std::move(components)) {
  if (components_.size() != at_.coords().size()) {
    throw InputError("TangentVector: dimension mismatch");
  }
  if (!all_finite(components_)) throw InputError("TangentVector: non-finite component");
  const double normal = at_.coords().dot(components_);
  if (std::abs(normal) > kTangencyTolerance) {
    throw InputError("TangentVector: not tangent, <x, v> = " + std::to_string(normal));
  }
}

Quaternion::Quaternion(double w, double x, double y, double z) : Quaternion(w, Eigen::Vector3d(x, y, z)) {}

Quaternion::Quaternion(double w, const Eigen::Vector3d& v) : w_(w), v_(v) {
  if (!std::isfinite(w) || !v.allFinite()) throw InputError("Quaternion: non-finite coefficient");
  const double drift = std::abs(std::sqrt(w * w + v.squaredNorm()) - 1.0);
  if (drift > kUnitTolerance) {
    throw InputError("Quaternion: norm differs from 1 by " + std::to_string(drift));
  }
}

Quaternion Quaternion::normalized(const Eigen::Vector4d& wxyz) {
  if (!wxyz.allFinite()) throw InputError("Quaternion: non-finite coefficient");
  const double n = wxyz.norm();
  if (n == 0.0) throw InputError("Quaternion: cannot normalize the zero quaternion");
  Eigen::Vector4d q = wxyz;
  if (std::abs(n - 1.0) > kUnitTolerance) q /= n;
  return Quaternion(q[0], Eigen::Vector3d(q[1], q[2], q[3]), Unchecked{});
}

Quaternion Quaternion::from_unit_vector(const UnitVector& x) {
  if (x.dim() != 3) throw InputError("Quaternion::from_unit_vector: expected a point on S^3");
  const auto& c = x.coords();
  return Quaternion(c[0], Eigen::Vector3d(c[1], c[2], c[3]), Unchecked{});
}

Quaternion Quaternion::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(angle)) throw InputError("Quaternion::from_axis_angle: bad axis or angle");
  const double half = 0.5 * angle;
  return normalized(Eigen::Vector4d(std::cos(half), std::sin(half) * axis.x() / n, std::sin(half) * axis.y() / n,
                                    std::sin(half) * axis.z() / n));
}

UnitVector Quaternion::to_unit_vector() const { return UnitVector::normalized(coeffs()); }

RotationMatrix::RotationMatrix(const Eigen::Matrix3d& m) : m_(m) {
  if (!m_.allFinite()) throw InputError("RotationMatrix: non-finite entry");
  const double orth = (m_.transpose() * m_ - Eigen::Matrix3d::Identity()).norm();
  const double det = m_.determinant();
  if (orth > kRotationTolerance || std::abs(det - 1.0) > kRotationTolerance) {
    throw InputError("RotationMatrix: not a rotation (orthogonality error " + std::to_string(orth) +
                     ", det " + std::to_string(det) + ")");
  }
}

TangentVector tangent_project(const UnitVector& x, const Eigen::VectorXd& v) {
  if (v.size() != x.coords().size()) throw InputError("tangent_project: dimension mismatch");
  Eigen::VectorXd p = v - x.coords().dot(v) * x.coords();
  return TangentVector(x, std::move(p));
}

double geodesic_distance(const UnitVector& x, const UnitVector& y) {
  if (x.ambient_dim() != y.ambient_dim()) throw InputError("geodesic_distance: dimension mismatch");
  // 2·atan2(‖x − y‖, ‖x + y‖) equals arccos⟨x, y⟩ for unit vectors and keeps
  // full relative accuracy near 0 and π.
  const double chord = (x.coords() - y.coords()).norm();
  const double cochord = (x.coords() + y.coords()).norm();
  return 2.0 * std::atan2(chord, cochord);
}

UnitVector sphere_exp(const UnitVector& x, const TangentVector& v) {
  if (v.at().ambient_dim() != x.ambient_dim() || (v.at().coords() - x.coords()).cwiseAbs().maxCoeff() > kUnitTolerance) {
    throw InputError("sphere_exp: tangent vector is attached to a different point");
  }
  const double speed = v.norm();
  if (speed == 0.0) return x;
  Eigen::VectorXd out = std::cos(speed) * x.coords() + (std::sin(speed) / speed) * v.components();
  return UnitVector::normalized(std::move(out));
}

Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  const double w = p.w() * q.w() - p.vec().dot(q.vec());
  const Eigen::Vector3d v = p.w() * q.vec() + q.w() * p.vec() + p.vec().cross(q.vec());
  return Quaternion::normalized(Eigen::Vector4d(w, v.x(), v.y(), v.z()));
}

RotationMatrix quat_to_rotmat(const Quaternion& q) {
  const double w = q.w();
  const double x = q.vec().x();
  const double y = q.vec().y();
  const double z = q.vec().z();
  Eigen::Matrix3d r;
  r << w * w + x * x - y * y - z * z, 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),  //
      2.0 * (x * y + w * z), w * w - x * x + y * y - z * z, 2.0 * (y * z - w * x),   //
      2.0 * (x * z - w * y), 2.0 * (y * z + w * x), w * w - x * x - y * y + z * z;
  return RotationMatrix(r);
}

Quaternion rotmat_to_quat(const RotationMatrix& rot) {
  const Eigen::Matrix3d& r = rot.matrix();
  const double trace = r.trace();
  Eigen::Vector4d q;
  // Branch on the largest of (trace, diagonal) so the divisor stays ≥ 1/2.
  if (trace >= r(0, 0) && trace >= r(1, 1) && trace >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + trace);
    q << 0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    q << (r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    q << (r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    q << (r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s;
  }

  bool flip = q[0] < 0.0;
  if (q[0] == 0.0) {
    for (int i = 1; i < 4; ++i) {
      if (q[i] != 0.0) {
        flip = q[i] < 0.0;
        break;
      }
    }
  }
  if (flip) q = -q;
  return Quaternion::normalized(q);
}

UnitVector reduced_attitude(const RotationMatrix& r, const UnitVector& b) {
  if (b.dim() != 2) throw InputError("reduced_attitude: body axis must lie on S^2");
  return UnitVector::normalized(r.matrix() * b.coords());
}

}  // namespace spheresync
