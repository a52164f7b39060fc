#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace specbound {

// dimension/shape/argument violations of an operation's contract
struct contract_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// estimator needs a capability (adjoint) the operator lacks
struct capability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ||A X1|| = 0: the statistic's distribution is undefined for this draw
struct degenerate_draw_error : std::runtime_error {
  std::uint64_t seed;
  std::uint64_t stream_id;
  degenerate_draw_error(std::uint64_t seed_, std::uint64_t stream_id_)
      : std::runtime_error("degenerate draw: ||A X1|| = 0 (seed=" + std::to_string(seed_) +
                           ", stream=" + std::to_string(stream_id_) + ")"),
        seed(seed_), stream_id(stream_id_) {}
};

// adaptive quadrature failed to reach the requested tolerance
struct quadrature_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace specbound
