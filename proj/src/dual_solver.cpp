#include "durp/dual_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace durp {

LossModel LossModel::smoothed_hinge(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("smoothed hinge: gamma must be positive");
  return {Kind::kSmoothedHinge, gamma};
}

double LossModel::value(double z) const {
  if (kind == Kind::kHinge) return std::max(0.0, 1.0 - z);
  if (z >= 1.0) return 0.0;
  if (z >= 1.0 - gamma) return (1.0 - z) * (1.0 - z) / (2.0 * gamma);
  return 1.0 - z - gamma / 2.0;
}

double LossModel::derivative(double z) const {
  if (z >= 1.0) return 0.0;
  if (kind == Kind::kHinge || z < 1.0 - gamma) return -1.0;
  return -(1.0 - z) / gamma;
}

double LossModel::conjugate(double a) const {
  if (a < -1.0 || a > 0.0) {
    throw std::domain_error("loss conjugate: dual variable " + std::to_string(a) +
                            " outside [-1, 0]");
  }
  return a + 0.5 * conjugate_curvature() * a * a;
}

std::string_view to_string(LossModel::Kind kind) {
  return kind == LossModel::Kind::kHinge ? "hinge" : "smoothed_hinge";
}

SolverState make_solver_state(const GramView& view, const LossModel& loss, double lambda,
                              std::uint64_t seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("solver: lambda must be positive");
  SolverState state;
  state.alpha = Eigen::VectorXd::Zero(view.size());
  state.accumulator = Eigen::MatrixXd::Zero(view.dim(), view.dim());
  state.lambda = lambda;
  state.loss = loss;
  state.rng = Rng(seed);
  return state;
}

Eigen::MatrixXd symmetric_accumulator(const SolverState& state) {
  return state.accumulator.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd primal_metric(const SolverState& state) {
  const auto n = static_cast<double>(state.alpha.size());
  return -symmetric_accumulator(state) / (state.lambda * n);
}

double refresh_accumulator(SolverState& state, const GramView& view) {
  const auto& c = view.cache();
  Eigen::MatrixXd rebuilt = c.u * state.alpha.asDiagonal() * c.u.transpose() -
                            c.v * state.alpha.asDiagonal() * c.v.transpose();
  const Eigen::MatrixXd previous = symmetric_accumulator(state);
  const double scale = state.alpha.cwiseAbs().dot(c.uu + c.vv);
  const double drift = scale > 0.0 ? (previous - rebuilt).norm() / scale : (previous - rebuilt).norm();
  state.accumulator = std::move(rebuilt);
  return drift;
}

namespace {

void check_feasible(const Eigen::VectorXd& alpha) {
  for (Index t = 0; t < alpha.size(); ++t) {
    if (!(alpha(t) >= -1.0 && alpha(t) <= 0.0)) {
      throw std::domain_error("dual variable " + std::to_string(t) + " = " +
                              std::to_string(alpha(t)) + " outside [-1, 0]");
    }
  }
}

double conjugate_sum(const SolverState& state) {
  double sum = 0.0;
  for (Index t = 0; t < state.alpha.size(); ++t) sum += state.loss.conjugate(state.alpha(t));
  return sum;
}

// (G alpha)_t = <S, A_t> for every t.
Eigen::VectorXd margins_times_scale(const Eigen::MatrixXd& s, const TripletCache& c) {
  const Eigen::MatrixXd su = s * c.u;
  const Eigen::MatrixXd sv = s * c.v;
  return ((c.u.array() * su.array()).colwise().sum() - (c.v.array() * sv.array()).colwise().sum())
      .transpose();
}

}  // namespace

double dual_objective(const SolverState& state, const GramView& view) {
  check_feasible(state.alpha);
  const double ln = state.lambda * static_cast<double>(view.size());
  if (view.size() == 0) return 0.0;
  return -conjugate_sum(state) - symmetric_accumulator(state).squaredNorm() / (2.0 * ln);
}

double duality_gap(const SolverState& state, const GramView& view) {
  const Index n = view.size();
  if (n == 0) return 0.0;
  const double ln = state.lambda * static_cast<double>(n);
  const Eigen::MatrixXd s = symmetric_accumulator(state);
  const Eigen::VectorXd g_alpha = margins_times_scale(s, view.cache());
  double loss = 0.0;
  for (Index t = 0; t < n; ++t) loss += state.loss.value(-g_alpha(t) / ln);
  const double primal =
      0.5 * state.lambda * s.squaredNorm() / (ln * ln) + loss / static_cast<double>(n);
  return primal - dual_objective(state, view) / static_cast<double>(n);
}

void sdca_update(SolverState& state, const GramView& view, Index t) {
  const auto& c = view.cache();
  const auto s = state.accumulator.selfadjointView<Eigen::Lower>();
  const auto u = c.u.col(t);
  const auto v = c.v.col(t);
  const double ln = state.lambda * static_cast<double>(view.size());
  const double g_tt = view.diag(t);
  const double current = state.alpha(t);
  const double g_alpha_t = u.dot(s * u) - v.dot(s * v);
  // Contribution of every other coordinate to (G alpha)_t.
  const double others = g_alpha_t - current * g_tt;

  double next;
  if (state.loss.kind == LossModel::Kind::kHinge && g_tt <= 0.0) {
    // Objective is linear in alpha_t with slope -(1 + others/ln); a zero slope keeps 0.
    next = (1.0 + others / ln) > 0.0 ? -1.0 : 0.0;
  } else {
    const double denom = state.loss.conjugate_curvature() * ln + g_tt;
    next = std::clamp(-(ln + others) / denom, -1.0, 0.0);
  }
  const double delta = next - current;
  if (delta == 0.0) return;
  state.accumulator.selfadjointView<Eigen::Lower>().rankUpdate(u, delta);
  state.accumulator.selfadjointView<Eigen::Lower>().rankUpdate(v, -delta);
  state.alpha(t) = next;
}

void sgd_epoch(SolverState& state, const GramView& view, std::span<const std::int64_t> order) {
  const auto& c = view.cache();
  if (static_cast<Index>(order.size()) != view.size()) {
    throw std::invalid_argument("sgd_epoch: order length does not match triplet count");
  }
  if (!state.alpha.isZero(0.0)) throw std::logic_error("sgd_epoch: state is not fresh");
  std::int64_t step = 0;
  for (const std::int64_t t : order) {
    ++step;
    double margin = 0.0;
    if (step > 1) {
      const auto s = state.accumulator.selfadjointView<Eigen::Lower>();
      const double g_alpha_t = c.u.col(t).dot(s * c.u.col(t)) - c.v.col(t).dot(s * c.v.col(t));
      margin = -g_alpha_t / (state.lambda * static_cast<double>(step - 1));
    }
    const double a = state.loss.derivative(margin);
    if (a == 0.0) continue;
    state.alpha(t) = a;
    state.accumulator.selfadjointView<Eigen::Lower>().rankUpdate(c.u.col(t), a);
    state.accumulator.selfadjointView<Eigen::Lower>().rankUpdate(c.v.col(t), -a);
  }
  refresh_accumulator(state, view);
  ++state.epoch;
}

DualSolution csdca_solve(const TripletCache& cache, const LossModel& loss, double lambda,
                         const CsdcaOptions& options, std::uint64_t seed) {
  if (options.epochs < 1) throw std::invalid_argument("csdca_solve: epochs must be >= 1");
  using Clock = std::chrono::steady_clock;
  const GramView view(cache);
  SolverState state = make_solver_state(view, loss, lambda, seed);
  DualSolution solution;
  solution.lambda = lambda;
  solution.loss = loss;

  auto record = [&](Clock::time_point start) {
    const double objective = dual_objective(state, view);
    const double gap = duality_gap(state, view);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    solution.trace.push_back({state.epoch, objective, gap, seconds});
  };

  auto start = Clock::now();
  const auto first_order = state.rng.permutation(view.size());
  sgd_epoch(state, view, first_order);
  record(start);

  auto keep_going = [&] {
    if (state.epoch < options.epochs) return true;
    return options.target_gap > 0.0 && state.epoch < options.max_epochs &&
           solution.trace.back().duality_gap > options.target_gap;
  };
  while (keep_going()) {
    start = Clock::now();
    for (const std::int64_t t : state.rng.permutation(view.size())) sdca_update(state, view, t);
    solution.max_refresh_drift =
        std::max(solution.max_refresh_drift, refresh_accumulator(state, view));
    ++state.epoch;
    record(start);
  }

  solution.alpha = state.alpha;
  solution.objective = solution.trace.back().dual_objective;
  solution.gap = solution.trace.back().duality_gap;
  solution.accumulator = symmetric_accumulator(state);
  return solution;
}

void write_trace_csv(std::ostream& out, const std::vector<EpochRecord>& trace) {
  out << "epoch,dual_objective,duality_gap,seconds\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : trace) {
    out << r.epoch << ',' << r.dual_objective << ',' << r.duality_gap << ',' << r.seconds << '\n';
  }
  out.precision(old_precision);
}

}  // namespace durp
