#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dopt/tfmatrix.hpp"

namespace dopt {

inline constexpr double kDefaultLaplacianScale = 0.5;

enum class Topology { Ring, Complete, Star, Random };

Topology topology_from_string(const std::string& s);

struct Network {
  int n = 0;
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd laplacian;
  double scale = kDefaultLaplacianScale;
};

// Undirected topology, Laplacian scaled to the requested spectral radius,
// connectivity verified. Random topologies resample until connected.
Network build_network(Topology topology, int n,
                      double scale = kDefaultLaplacianScale,
                      unsigned seed = 0, double density = 0.5);

struct StateSpace {
  Eigen::MatrixXd A, B, C, D;
  int nx = 0, nu = 0, ny = 0;
};

// Entrywise controllable-canonical realization, composed block-diagonally.
// Not minimal; Markov parameters match the transfer matrix exactly.
StateSpace realize(const RfMatrix<double>& M);
StateSpace realize(const RationalFunction<double>& r);
StateSpace realize_partitioned(const PartitionedMatrix<double>& M);

// Markov parameters h_0 .. h_{count-1} of output row `i`, input col `j`.
std::vector<double> markov(const StateSpace& ss, int i, int j, int count);

struct Objective {
  enum class Type { Zero, Quadratic, Tanh };
  Type type = Type::Zero;
  double eps = 0.0;
  std::vector<double> ystar;  // per agent

  static Objective zero() { return {}; }
  static Objective quadratic(double eps, std::vector<double> ystar) {
    return {Type::Quadratic, eps, std::move(ystar)};
  }
  static Objective tanh(double eps, std::vector<double> ystar) {
    return {Type::Tanh, eps, std::move(ystar)};
  }

  double grad(int agent, double y) const;
  bool linear() const { return type != Type::Tanh; }
  double target_mean() const;
};

struct Trajectory {
  int n = 0;
  int T = 0;
  Eigen::MatrixXd y;          // T x n
  Eigen::MatrixXd u;          // T x n
  Eigen::MatrixXd opt_state;  // T x n, per-agent optimizer state norm (probes)
  std::string scenario;
  unsigned seed = 0;

  // max_i |y_i^t - ref| over the last step
  double final_error(double ref) const;
  // CSV rows `t, agent, channel, value` for channels y (always) and
  // opt_state when recorded.
  std::string to_csv() const;
};

// Closed loop of Lemma 3's interconnection: u_i = grad f_i(y_i),
// v = (L (x) I_m) z, executed per channel without forming the Kronecker
// product.
Trajectory simulate_distributed(const PartitionedMatrix<double>& H,
                                const Network& net, const Objective& obj,
                                int T);

enum class Arrangement { Fig1, Fig2 };

// Decomposed/factored arrangements. Fig1 runs g_opt ahead of the full
// second-order estimator (not internally stable); Fig2 interleaves the
// optimization method between the two first-order factors. Both record
// the optimization method's internal state.
Trajectory simulate_distributed_fig1(const RationalFunction<double>& g_opt,
                                     const PartitionedMatrix<double>& g_con,
                                     const Network& net, const Objective& obj,
                                     int T);
Trajectory simulate_distributed_fig2(const RationalFunction<double>& g_opt,
                                     const PartitionedMatrix<double>& g_con1,
                                     const PartitionedMatrix<double>& g_con2,
                                     const Network& net, const Objective& obj,
                                     int T);

// Per-agent input signals w_i(t) = sum_k coeffs(i,k) t^k; coefficients of
// every positive power must sum to zero across agents (constant mean).
struct PolynomialInputs {
  Eigen::MatrixXd coeffs;  // n x (degree+1)
  double mean() const;     // the constant mean w*
  double eval(int agent, int t) const;
  void validate_constant_mean() const;
};

Trajectory simulate_consensus(const PartitionedMatrix<double>& G,
                              const Network& net, const PolynomialInputs& w,
                              int T);
Trajectory simulate_consensus_factored(const PartitionedMatrix<double>& g_con1,
                                       const PartitionedMatrix<double>& g_con2,
                                       const Network& net,
                                       const PolynomialInputs& w, int T);

// Single-agent loop y = G_opt u, u = grad f(y). Proper-but-not-strictly
// feedthrough is resolved in closed form for linear gradients only.
Trajectory simulate_optimization(const RationalFunction<double>& g_opt,
                                 const Objective& obj, int T);

// Scalar eigenmode loop: y = H_lambda u, u = eps (y - target). This is
// the decoupled system the Lemma 2/3 proofs diagonalize into.
std::vector<double> simulate_lambda_loop(const RationalFunction<double>& h_lambda,
                                         double eps, double target, int T);

}  // namespace dopt
