#pragma once
#include <cstdint>
#include <string>

#include "specbound/linear_operator.hpp"
#include "specbound/rng.hpp"

namespace specbound::est {

struct EstimatorKind {
  enum class Tag { vanilla, dixon, counterbalance } tag = Tag::counterbalance;
  int k = 1;  // vanilla only

  static EstimatorKind vanilla(int k) { return {Tag::vanilla, k}; }
  static EstimatorKind dixon() { return {Tag::dixon, 0}; }
  static EstimatorKind counterbalance() { return {Tag::counterbalance, 0}; }

  std::string name() const {
    switch (tag) {
      case Tag::vanilla: return "vanilla" + std::to_string(k);
      case Tag::dixon: return "dixon";
      default: return "counterbalance";
    }
  }
  int matvecs() const { return tag == Tag::vanilla ? k : 3; }
  int sequential_depth() const { return tag == Tag::vanilla ? 1 : 2; }
};

struct EstimatorReport {
  double value = 0.0;
  double theta = 1.0;
  int matvec_count = 0;
  int sequential_depth = 1;
  std::uint64_t seed = 0;
  EstimatorKind kind;
};

// T^v_k = theta * max_i ||A X_i||, k independent Gaussians; forward-only.
EstimatorReport vanilla(const core::LinearOperator& op, double theta, int k, RandomSource rng);

// T^d = theta * max(sqrt(||A^T A X_1||), ||A X_2||)
EstimatorReport dixon(const core::LinearOperator& op, double theta, RandomSource rng);

// T^cb = theta * sqrt((||A^T A X_1|| / ||A X_1||)^2 + ||A X_2||^2)
EstimatorReport counterbalance(const core::LinearOperator& op, double theta, RandomSource rng);

// ||A^T A Y|| / ||A Y|| for one Gaussian Y: a lower bound on ||A||, exact on rank-1.
double power_ratio(const core::LinearOperator& op, RandomSource rng);

// every statistic is theta * (a theta-free base value); the bench harness and
// the oracle-theta procedure both lean on this
double base_statistic(const core::LinearOperator& op, EstimatorKind kind, RandomSource rng);

EstimatorReport run(const core::LinearOperator& op, EstimatorKind kind, double theta,
                    RandomSource rng);

}  // namespace specbound::est
