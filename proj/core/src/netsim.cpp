#include "dopt/netsim.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace dopt {

namespace {

constexpr double kFeedthroughTol = 1e-12;

bool connected(const Eigen::MatrixXd& adj) {
  const int n = static_cast<int>(adj.rows());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (!seen[j] && adj(i, j) > 0.0) {
        seen[j] = true;
        stack.push_back(j);
        ++count;
      }
    }
  }
  return count == n;
}

// Controllable canonical form of a single proper entry.
StateSpace realize_entry(const RationalFunction<double>& r) {
  if (!r.is_proper()) throw ImproperError("cannot realize an improper entry");
  StateSpace ss;
  ss.nu = ss.ny = 1;
  const int d = r.den().degree();
  ss.nx = r.is_zero() ? 0 : d;
  ss.A = Eigen::MatrixXd::Zero(ss.nx, ss.nx);
  ss.B = Eigen::MatrixXd::Zero(ss.nx, 1);
  ss.C = Eigen::MatrixXd::Zero(1, ss.nx);
  ss.D = Eigen::MatrixXd::Zero(1, 1);
  if (r.is_zero()) return ss;
  // canonical form keeps the denominator monic
  const double lead = r.den().leading();
  const double feed = d == r.num().degree() ? r.num().leading() / lead : 0.0;
  ss.D(0, 0) = feed;
  if (d == 0) return ss;
  for (int i = 0; i + 1 < d; ++i) ss.A(i, i + 1) = 1.0;
  for (int i = 0; i < d; ++i) ss.A(d - 1, i) = -r.den().at(i) / lead;
  ss.B(d - 1, 0) = 1.0;
  for (int i = 0; i < d; ++i)
    ss.C(0, i) = r.num().at(i) / lead - feed * r.den().at(i) / lead;
  return ss;
}

struct Part {
  int m = 0;
  Eigen::MatrixXd A, Bu, Bv, Cy, Cz, Dyv, Dzu, Dzv;
  double Dyu = 0.0;
  int nx = 0;
};

Part split(const PartitionedMatrix<double>& M) {
  M.validate();
  RfMatrix<double> full(1 + M.m, 1 + M.m);
  full(0, 0) = M.b11;
  for (int j = 0; j < M.m; ++j) full(0, 1 + j) = M.b12(0, j);
  for (int i = 0; i < M.m; ++i) full(1 + i, 0) = M.b21(i, 0);
  for (int i = 0; i < M.m; ++i)
    for (int j = 0; j < M.m; ++j) full(1 + i, 1 + j) = M.b22(i, j);
  StateSpace ss = realize(full);
  Part p;
  p.m = M.m;
  p.nx = ss.nx;
  p.A = ss.A;
  p.Bu = ss.B.col(0);
  p.Bv = ss.B.rightCols(M.m);
  p.Cy = ss.C.row(0);
  p.Cz = ss.C.bottomRows(M.m);
  p.Dyu = ss.D(0, 0);
  p.Dyv = ss.D.block(0, 1, 1, M.m);
  p.Dzu = ss.D.block(1, 0, M.m, 1);
  p.Dzv = ss.D.block(1, 1, M.m, M.m);
  return p;
}

// SISO realization with the pieces named for a w->y / v->z estimator.
struct Siso {
  Eigen::MatrixXd A, B, C;
  double D = 0.0;
  int nx = 0;
};

Siso siso(const RationalFunction<double>& r) {
  StateSpace ss = realize_entry(r);
  return {ss.A, ss.B, ss.C, ss.D(0, 0), ss.nx};
}

void require_strictly_causal_network(const Part& p, const char* who) {
  if (p.Dzv.norm() > kFeedthroughTol)
    throw AlgebraicLoopError(std::string(who) +
                             ": network block has direct feedthrough");
}

Trajectory make_traj(int n, int T, std::string scenario, bool probe) {
  Trajectory tr;
  tr.n = n;
  tr.T = T;
  tr.y = Eigen::MatrixXd::Zero(T, n);
  tr.u = Eigen::MatrixXd::Zero(T, n);
  if (probe) tr.opt_state = Eigen::MatrixXd::Zero(T, n);
  tr.scenario = std::move(scenario);
  return tr;
}

// Resolves u_i = grad f(y_i) with y_i = a_i + dyu * u_i (no cross-agent
// instantaneous terms by construction).
void close_gradient(const Objective& obj, double dyu,
                    const Eigen::RowVectorXd& a, Eigen::RowVectorXd& y,
                    Eigen::RowVectorXd& u) {
  const int n = static_cast<int>(a.cols());
  if (obj.type == Objective::Type::Zero || std::abs(dyu) <= kFeedthroughTol) {
    y = a;
    for (int i = 0; i < n; ++i) u(i) = obj.grad(i, y(i));
    y += dyu * u;
    return;
  }
  if (obj.type != Objective::Type::Quadratic)
    throw AlgebraicLoopError(
        "direct gradient feedthrough requires a linear (quadratic-objective) "
        "gradient");
  for (int i = 0; i < n; ++i) {
    u(i) = obj.eps * (a(i) - obj.ystar[i]) / (1.0 - obj.eps * dyu);
    y(i) = a(i) + dyu * u(i);
  }
}

}  // namespace

Topology topology_from_string(const std::string& s) {
  if (s == "ring") return Topology::Ring;
  if (s == "complete") return Topology::Complete;
  if (s == "star") return Topology::Star;
  if (s == "random") return Topology::Random;
  throw Error("unknown topology: " + s);
}

Network build_network(Topology topology, int n, double scale, unsigned seed,
                      double density) {
  if (n < 1) throw Error("a network needs at least one agent");
  if (scale <= 0.0) throw Error("Laplacian scale must be positive");
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  auto link = [&](int i, int j) { adj(i, j) = adj(j, i) = 1.0; };
  switch (topology) {
    case Topology::Ring:
      for (int i = 0; i < n; ++i) link(i, (i + 1) % n);
      break;
    case Topology::Complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) link(i, j);
      break;
    case Topology::Star:
      for (int i = 1; i < n; ++i) link(0, i);
      break;
    case Topology::Random: {
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      bool ok = false;
      for (int attempt = 0; attempt < 256 && !ok; ++attempt) {
        adj.setZero();
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (coin(rng) < density) link(i, j);
        ok = connected(adj);
      }
      if (!ok)
        throw Error("random topology stayed disconnected; raise density");
      break;
    }
  }
  if (!connected(adj)) throw Error("topology is disconnected");

  Network net;
  net.n = n;
  net.adjacency = adj;
  Eigen::MatrixXd lap = adj.rowwise().sum().asDiagonal();
  lap -= adj;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  net.laplacian = rho > 0.0 ? (scale / rho) * lap : lap;  // n==1: L = 0
  net.scale = scale;
  return net;
}

StateSpace realize(const RationalFunction<double>& r) {
  return realize_entry(r);
}

StateSpace realize(const RfMatrix<double>& M) {
  const int p = M.rows(), q = M.cols();
  std::vector<StateSpace> entries;
  int nx = 0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) {
      entries.push_back(realize_entry(M(i, j)));
      nx += entries.back().nx;
    }
  StateSpace ss;
  ss.nx = nx;
  ss.nu = q;
  ss.ny = p;
  ss.A = Eigen::MatrixXd::Zero(nx, nx);
  ss.B = Eigen::MatrixXd::Zero(nx, q);
  ss.C = Eigen::MatrixXd::Zero(p, nx);
  ss.D = Eigen::MatrixXd::Zero(p, q);
  int off = 0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) {
      const StateSpace& e = entries[i * q + j];
      ss.A.block(off, off, e.nx, e.nx) = e.A;
      ss.B.block(off, j, e.nx, 1) = e.B;
      ss.C.block(i, off, 1, e.nx) = e.C;
      ss.D(i, j) = e.D(0, 0);
      off += e.nx;
    }
  return ss;
}

StateSpace realize_partitioned(const PartitionedMatrix<double>& M) {
  M.validate();
  RfMatrix<double> full(1 + M.m, 1 + M.m);
  full(0, 0) = M.b11;
  for (int j = 0; j < M.m; ++j) full(0, 1 + j) = M.b12(0, j);
  for (int i = 0; i < M.m; ++i) full(1 + i, 0) = M.b21(i, 0);
  for (int i = 0; i < M.m; ++i)
    for (int j = 0; j < M.m; ++j) full(1 + i, 1 + j) = M.b22(i, j);
  return realize(full);
}

std::vector<double> markov(const StateSpace& ss, int i, int j, int count) {
  std::vector<double> h(static_cast<size_t>(count), 0.0);
  if (count == 0) return h;
  h[0] = ss.D(i, j);
  Eigen::VectorXd x = ss.B.col(j);
  for (int k = 1; k < count; ++k) {
    h[k] = ss.C.row(i).dot(x);
    x = ss.A * x;
  }
  return h;
}

double Objective::grad(int agent, double y) const {
  switch (type) {
    case Type::Zero: return 0.0;
    case Type::Quadratic: return eps * (y - ystar[agent]);
    case Type::Tanh: return eps * std::tanh(y - ystar[agent]);
  }
  return 0.0;
}

double Objective::target_mean() const {
  if (ystar.empty()) return 0.0;
  double s = 0.0;
  for (double v : ystar) s += v;
  return s / static_cast<double>(ystar.size());
}

double Trajectory::final_error(double ref) const {
  return (y.row(T - 1).array() - ref).abs().maxCoeff();
}

std::string Trajectory::to_csv() const {
  std::ostringstream os;
  os << "t,agent,channel,value\n";
  const bool probe = opt_state.size() > 0;
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < n; ++i) {
      os << t << ',' << i << ",y," << y(t, i) << '\n';
      if (probe) os << t << ',' << i << ",opt_state," << opt_state(t, i) << '\n';
    }
  return os.str();
}

Trajectory simulate_distributed(const PartitionedMatrix<double>& H,
                                const Network& net, const Objective& obj,
                                int T) {
  Part p = split(H);
  require_strictly_causal_network(p, "simulate_distributed");
  // Lemma 3(iv)'s second half: no instantaneous u -> y path through the
  // network. This is what keeps the step explicit below.
  if ((p.Dzu * p.Dyv).norm() > kFeedthroughTol)
    throw AlgebraicLoopError(
        "simulate_distributed: H21*H12 has direct feedthrough");
  if (obj.type != Objective::Type::Zero &&
      static_cast<int>(obj.ystar.size()) != net.n)
    throw Error("objective targets do not match agent count");

  const Eigen::MatrixXd Lt = net.laplacian.transpose();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(p.nx, net.n);
  Trajectory tr = make_traj(net.n, T, "distributed", false);
  Eigen::RowVectorXd y(net.n), u(net.n);
  for (int t = 0; t < T; ++t) {
    Eigen::MatrixXd Zx = p.Cz * X;                      // m x n
    Eigen::RowVectorXd a = p.Cy * X + p.Dyv * (Zx * Lt);
    close_gradient(obj, p.Dyu, a, y, u);
    Eigen::MatrixXd Z = Zx + p.Dzu * u;
    Eigen::MatrixXd V = Z * Lt;
    X = p.A * X + p.Bu * u + p.Bv * V;
    tr.y.row(t) = y;
    tr.u.row(t) = u;
  }
  return tr;
}

Trajectory simulate_distributed_fig1(const RationalFunction<double>& g_opt,
                                     const PartitionedMatrix<double>& g_con,
                                     const Network& net, const Objective& obj,
                                     int T) {
  Siso o = siso(g_opt);
  if (std::abs(o.D) > kFeedthroughTol)
    throw AlgebraicLoopError(
        "decomposed simulation requires a strictly proper optimization method");
  Part c = split(g_con);
  require_strictly_causal_network(c, "simulate_distributed_fig1");

  const Eigen::MatrixXd Lt = net.laplacian.transpose();
  Eigen::MatrixXd Xo = Eigen::MatrixXd::Zero(o.nx, net.n);
  Eigen::MatrixXd Xc = Eigen::MatrixXd::Zero(c.nx, net.n);
  Trajectory tr = make_traj(net.n, T, "fig1", true);
  Eigen::RowVectorXd y(net.n), u(net.n);
  for (int t = 0; t < T; ++t) {
    Eigen::RowVectorXd r = o.C * Xo;
    Eigen::MatrixXd Z = c.Cz * Xc + c.Dzu * r;
    Eigen::MatrixXd V = Z * Lt;
    y = c.Cy * Xc + c.Dyu * r + c.Dyv * V;
    for (int i = 0; i < net.n; ++i) u(i) = obj.grad(i, y(i));
    Xo = o.A * Xo + o.B * u;
    Xc = c.A * Xc + c.Bu * r + c.Bv * V;
    tr.y.row(t) = y;
    tr.u.row(t) = u;
    tr.opt_state.row(t) = Xo.colwise().norm();
  }
  return tr;
}

Trajectory simulate_distributed_fig2(const RationalFunction<double>& g_opt,
                                     const PartitionedMatrix<double>& g_con1,
                                     const PartitionedMatrix<double>& g_con2,
                                     const Network& net, const Objective& obj,
                                     int T) {
  Siso o = siso(g_opt);
  if (std::abs(o.D) > kFeedthroughTol)
    throw AlgebraicLoopError(
        "factored simulation requires a strictly proper optimization method");
  Part c1 = split(g_con1);
  Part c2 = split(g_con2);
  require_strictly_causal_network(c1, "simulate_distributed_fig2");
  require_strictly_causal_network(c2, "simulate_distributed_fig2");

  const Eigen::MatrixXd Lt = net.laplacian.transpose();
  Eigen::MatrixXd Xo = Eigen::MatrixXd::Zero(o.nx, net.n);
  Eigen::MatrixXd X1 = Eigen::MatrixXd::Zero(c1.nx, net.n);
  Eigen::MatrixXd X2 = Eigen::MatrixXd::Zero(c2.nx, net.n);
  Trajectory tr = make_traj(net.n, T, "fig2", true);
  Eigen::RowVectorXd y(net.n), u(net.n);
  for (int t = 0; t < T; ++t) {
    Eigen::RowVectorXd r = o.C * Xo;  // optimizer output, feeds g_con1
    Eigen::MatrixXd Z1 = c1.Cz * X1 + c1.Dzu * r;
    Eigen::MatrixXd V1 = Z1 * Lt;
    y = c1.Cy * X1 + c1.Dyu * r + c1.Dyv * V1;
    for (int i = 0; i < net.n; ++i) u(i) = obj.grad(i, y(i));
    Eigen::MatrixXd Z2 = c2.Cz * X2 + c2.Dzu * u;
    Eigen::MatrixXd V2 = Z2 * Lt;
    Eigen::RowVectorXd s = c2.Cy * X2 + c2.Dyu * u + c2.Dyv * V2;
    Xo = o.A * Xo + o.B * s;
    X1 = c1.A * X1 + c1.Bu * r + c1.Bv * V1;
    X2 = c2.A * X2 + c2.Bu * u + c2.Bv * V2;
    tr.y.row(t) = y;
    tr.u.row(t) = u;
    tr.opt_state.row(t) = Xo.colwise().norm();
  }
  return tr;
}

double PolynomialInputs::mean() const {
  return coeffs.col(0).mean();
}

double PolynomialInputs::eval(int agent, int t) const {
  double v = 0.0, tp = 1.0;
  for (int k = 0; k < coeffs.cols(); ++k) {
    v += coeffs(agent, k) * tp;
    tp *= static_cast<double>(t);
  }
  return v;
}

void PolynomialInputs::validate_constant_mean() const {
  for (int k = 1; k < coeffs.cols(); ++k)
    if (std::abs(coeffs.col(k).sum()) >
        1e-9 * std::max(1.0, coeffs.cwiseAbs().maxCoeff()))
      throw Error("consensus inputs must have constant mean (degree " +
                  std::to_string(k) + " coefficients do not cancel)");
}

Trajectory simulate_consensus(const PartitionedMatrix<double>& G,
                              const Network& net, const PolynomialInputs& w,
                              int T) {
  if (w.coeffs.rows() != net.n) throw Error("input rows must match agents");
  w.validate_constant_mean();
  Part p = split(G);
  require_strictly_causal_network(p, "simulate_consensus");

  const Eigen::MatrixXd Lt = net.laplacian.transpose();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(p.nx, net.n);
  Trajectory tr = make_traj(net.n, T, "consensus", false);
  Eigen::RowVectorXd wt(net.n);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < net.n; ++i) wt(i) = w.eval(i, t);
    Eigen::MatrixXd Z = p.Cz * X + p.Dzu * wt;
    Eigen::MatrixXd V = Z * Lt;
    Eigen::RowVectorXd y = p.Cy * X + p.Dyu * wt + p.Dyv * V;
    X = p.A * X + p.Bu * wt + p.Bv * V;
    tr.y.row(t) = y;
    tr.u.row(t) = wt;
  }
  return tr;
}

Trajectory simulate_consensus_factored(const PartitionedMatrix<double>& g_con1,
                                       const PartitionedMatrix<double>& g_con2,
                                       const Network& net,
                                       const PolynomialInputs& w, int T) {
  if (w.coeffs.rows() != net.n) throw Error("input rows must match agents");
  w.validate_constant_mean();
  Part c1 = split(g_con1);
  Part c2 = split(g_con2);
  require_strictly_causal_network(c1, "simulate_consensus_factored");
  require_strictly_causal_network(c2, "simulate_consensus_factored");

  const Eigen::MatrixXd Lt = net.laplacian.transpose();
  Eigen::MatrixXd X1 = Eigen::MatrixXd::Zero(c1.nx, net.n);
  Eigen::MatrixXd X2 = Eigen::MatrixXd::Zero(c2.nx, net.n);
  Trajectory tr = make_traj(net.n, T, "consensus_factored", false);
  Eigen::RowVectorXd wt(net.n);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < net.n; ++i) wt(i) = w.eval(i, t);
    Eigen::MatrixXd Z2 = c2.Cz * X2 + c2.Dzu * wt;
    Eigen::MatrixXd V2 = Z2 * Lt;
    Eigen::RowVectorXd s = c2.Cy * X2 + c2.Dyu * wt + c2.Dyv * V2;
    Eigen::MatrixXd Z1 = c1.Cz * X1 + c1.Dzu * s;
    Eigen::MatrixXd V1 = Z1 * Lt;
    Eigen::RowVectorXd y = c1.Cy * X1 + c1.Dyu * s + c1.Dyv * V1;
    X1 = c1.A * X1 + c1.Bu * s + c1.Bv * V1;
    X2 = c2.A * X2 + c2.Bu * wt + c2.Bv * V2;
    tr.y.row(t) = y;
    tr.u.row(t) = wt;
  }
  return tr;
}

Trajectory simulate_optimization(const RationalFunction<double>& g_opt,
                                 const Objective& obj, int T) {
  Siso o = siso(g_opt);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(o.nx);
  Trajectory tr = make_traj(1, T, "optimization", false);
  for (int t = 0; t < T; ++t) {
    const double a = o.nx > 0 ? (o.C * x)(0, 0) : 0.0;
    double y, u;
    if (obj.type == Objective::Type::Zero || std::abs(o.D) <= kFeedthroughTol) {
      y = a;
      u = obj.grad(0, y);
      y += o.D * u;
    } else if (obj.type == Objective::Type::Quadratic) {
      u = obj.eps * (a - obj.ystar[0]) / (1.0 - obj.eps * o.D);
      y = a + o.D * u;
    } else {
      throw AlgebraicLoopError(
          "direct feedthrough requires a linear (quadratic-objective) gradient");
    }
    x = o.A * x + o.B.col(0) * u;
    tr.y(t, 0) = y;
    tr.u(t, 0) = u;
  }
  return tr;
}

std::vector<double> simulate_lambda_loop(
    const RationalFunction<double>& h_lambda, double eps, double target,
    int T) {
  Siso o = siso(h_lambda);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(o.nx);
  std::vector<double> out(static_cast<size_t>(T), 0.0);
  for (int t = 0; t < T; ++t) {
    const double a = o.nx > 0 ? (o.C * x)(0, 0) : 0.0;
    const double u = eps * (a - target) / (1.0 - eps * o.D);
    const double y = a + o.D * u;
    x = o.A * x + o.B.col(0) * u;
    out[static_cast<size_t>(t)] = y;
  }
  return out;
}

}  // namespace dopt
