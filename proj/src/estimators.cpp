#include "specbound/estimators.hpp"

#include <cmath>

namespace specbound::est {

namespace {

std::vector<double> gaussian_vector(GaussianStream& g, std::size_t dim) {
  std::vector<double> x(dim);
  g.fill(x);
  return x;
}

double vanilla_base(const core::LinearOperator& op, int k, RandomSource rng) {
  if (k < 1) throw contract_error("vanilla: k >= 1 required");
  GaussianStream g(rng);
  double best = 0.0;
  for (int i = 0; i < k; ++i) {
    auto x = gaussian_vector(g, op.cols());
    best = std::max(best, core::norm2(op.apply(x)));
  }
  return best;
}

double dixon_base(const core::LinearOperator& op, RandomSource rng) {
  if (!op.adjoint_available()) throw capability_error("dixon estimator needs the adjoint");
  GaussianStream g(rng);
  auto x1 = gaussian_vector(g, op.cols());
  auto x2 = gaussian_vector(g, op.cols());
  auto y1 = op.apply(x1);
  auto z = op.apply_adjoint(y1);
  auto y2 = op.apply(x2);
  return std::max(std::sqrt(core::norm2(z)), core::norm2(y2));
}

double counterbalance_base(const core::LinearOperator& op, RandomSource rng) {
  if (!op.adjoint_available())
    throw capability_error("counterbalance estimator needs the adjoint");
  GaussianStream g(rng);
  auto x1 = gaussian_vector(g, op.cols());
  auto x2 = gaussian_vector(g, op.cols());
  auto y1 = op.apply(x1);
  double ny1 = core::norm2(y1);
  if (ny1 == 0.0) throw degenerate_draw_error(rng.seed, rng.stream_id);
  auto z = op.apply_adjoint(y1);
  auto y2 = op.apply(x2);
  double ratio = core::norm2(z) / ny1;
  double ny2 = core::norm2(y2);
  return std::sqrt(ratio * ratio + ny2 * ny2);
}

EstimatorReport make_report(double base, double theta, EstimatorKind kind, RandomSource rng) {
  EstimatorReport r;
  r.value = theta * base;
  r.theta = theta;
  r.matvec_count = kind.matvecs();
  r.sequential_depth = kind.sequential_depth();
  r.seed = rng.seed;
  r.kind = kind;
  return r;
}

}  // namespace

EstimatorReport vanilla(const core::LinearOperator& op, double theta, int k, RandomSource rng) {
  if (theta < 0.0) throw contract_error("vanilla: theta >= 0 required");
  return make_report(vanilla_base(op, k, rng), theta, EstimatorKind::vanilla(k), rng);
}

EstimatorReport dixon(const core::LinearOperator& op, double theta, RandomSource rng) {
  if (theta < 0.0) throw contract_error("dixon: theta >= 0 required");
  return make_report(dixon_base(op, rng), theta, EstimatorKind::dixon(), rng);
}

EstimatorReport counterbalance(const core::LinearOperator& op, double theta, RandomSource rng) {
  if (theta < 1.0) throw contract_error("counterbalance: theta >= 1 required");
  return make_report(counterbalance_base(op, rng), theta, EstimatorKind::counterbalance(), rng);
}

double power_ratio(const core::LinearOperator& op, RandomSource rng) {
  if (!op.adjoint_available()) throw capability_error("power_ratio needs the adjoint");
  GaussianStream g(rng);
  auto y = gaussian_vector(g, op.cols());
  auto ay = op.apply(y);
  double nay = core::norm2(ay);
  if (nay == 0.0) throw degenerate_draw_error(rng.seed, rng.stream_id);
  return core::norm2(op.apply_adjoint(ay)) / nay;
}

double base_statistic(const core::LinearOperator& op, EstimatorKind kind, RandomSource rng) {
  switch (kind.tag) {
    case EstimatorKind::Tag::vanilla: return vanilla_base(op, kind.k, rng);
    case EstimatorKind::Tag::dixon: return dixon_base(op, rng);
    default: return counterbalance_base(op, rng);
  }
}

EstimatorReport run(const core::LinearOperator& op, EstimatorKind kind, double theta,
                    RandomSource rng) {
  switch (kind.tag) {
    case EstimatorKind::Tag::vanilla: return vanilla(op, theta, kind.k, rng);
    case EstimatorKind::Tag::dixon: return dixon(op, theta, rng);
    default: return counterbalance(op, theta, rng);
  }
}

}  // namespace specbound::est
