#include "ftc/thruster_allocation.hpp"

namespace ftc {

namespace {

// Relative tolerance on det(T T^T) against the product of its row norms.
constexpr double kRankTol = 1e-12;

}  // namespace

Mat43 pseudo_inverse(const Mat34& t_conf)
{
  const Mat3 gram = t_conf * t_conf.transpose();
  const double scale = gram.diagonal().prod();
  const double det = gram.determinant();
  if (!(scale > 0.0) || std::abs(det) <= kRankTol * scale) {
    throw ValidationError("configuration matrix is rank deficient");
  }
  return t_conf.transpose() * gram.inverse();
}

Allocation allocate(const Wrench& tau_c, const ThrusterBank& bank, const ThrusterGeometry& geom,
                    const AllocationOptions& opts)
{
  Allocation out;
  Mat34 t = geom.t_conf;
  int n_dropped = 0;
  for (int i = 0; i < kNumThrusters; ++i) {
    if (!(bank.W_hat(i) >= bank.w_min)) {
      throw ValidationError("estimated weight W_hat" + std::to_string(i + 1) +
                            " below w_min");
    }
    // Any three columns of the X layout span the plane; two do not.
    if (opts.drop_failed && bank.W_hat(i) <= bank.w_min && n_dropped == 0) {
      out.dropped[static_cast<std::size_t>(i)] = true;
      t.col(i).setZero();
      ++n_dropped;
    }
  }

  const Vec4 forces = pseudo_inverse(t) * tau_c.vec();
  out.raw = forces.cwiseQuotient(bank.K.cwiseProduct(bank.W_hat));
  out.clamped = out.raw.cwiseMax(-bank.u_max).cwiseMin(bank.u_max);
  out.saturated = (out.raw.cwiseAbs().array() > bank.u_max).any();
  return out;
}

Wrench achieved_wrench(const Vec4& u_cmd, const ThrusterBank& bank, const ThrusterGeometry& geom)
{
  return Wrench::from(geom.t_conf * thrust_forces(u_cmd, bank));
}

}  // namespace ftc
