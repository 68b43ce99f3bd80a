#include "qconstructor/nogo.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

#include "qconstructor/rng.hpp"

namespace qcon {

CMat UnitaryParametrization::hermitian(const RVec& params) const {
  if (params.size() != param_count()) {
    throw std::invalid_argument("UnitaryParametrization: wrong parameter count");
  }
  CMat h(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) h(i, i) = params(k++);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const cxd v(params(k), params(k + 1));
      k += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

Operator UnitaryParametrization::unitary(const RVec& params) const {
  const CMat h = hermitian(params);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  CVec phases(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    phases(i) = std::exp(cxd(0.0, es.eigenvalues()(i)));
  }
  CMat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return Operator(std::move(u));
}

ReplicationObjective::ReplicationObjective(const std::vector<AlphabetEntry>& alphabet,
                                           const ConstructorLayout& layout,
                                           bool control_out_free)
    : parametrization_(layout.window_dim()),
      control_dim_(layout.control_dim),
      control_out_free_(control_out_free),
      count_(static_cast<int>(alphabet.size())) {
  if (alphabet.empty()) {
    throw std::invalid_argument("ReplicationObjective: empty alphabet");
  }
  const long long d = layout.window_dim();
  const CVec control = StateVector::basis(layout.control_dim, 0).amps();
  inputs_.resize(d, count_);
  targets_.resize(d, count_);
  target_bases_.resize(d / control_dim_, count_);
  for (int i = 0; i < count_; ++i) {
    inputs_.col(i) = assemble_input_window(alphabet[i], layout, control);
    targets_.col(i) = assemble_ideal_output(alphabet[i], layout, control);
    // Control is the trailing output factor; strip it for the free branch.
    const StateVector padded = pad_program(alphabet[i].program, layout.K_padded());
    CVec base = alphabet[i].species.amps();
    {
      CVec tmp(base.size() * padded.dim());
      for (Eigen::Index a = 0; a < base.size(); ++a) {
        tmp.segment(a * padded.dim(), padded.dim()) = base(a) * padded.amps();
      }
      base = std::move(tmp);
    }
    {
      CVec tmp(base.size() * alphabet[i].species.dim());
      for (Eigen::Index a = 0; a < base.size(); ++a) {
        tmp.segment(a * alphabet[i].species.dim(), alphabet[i].species.dim()) =
            base(a) * alphabet[i].species.amps();
      }
      base = std::move(tmp);
    }
    {
      CVec tmp(base.size() * padded.dim());
      for (Eigen::Index a = 0; a < base.size(); ++a) {
        tmp.segment(a * padded.dim(), padded.dim()) = base(a) * padded.amps();
      }
      base = std::move(tmp);
    }
    target_bases_.col(i) = base;
  }
}

double ReplicationObjective::operator()(const RVec& params) const {
  const CMat h = parametrization_.hermitian(params);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  CVec phases(parametrization_.d);
  for (Eigen::Index i = 0; i < parametrization_.d; ++i) {
    phases(i) = std::exp(cxd(0.0, es.eigenvalues()(i)));
  }
  // U x = V (e^{i lambda} (V' x)) without forming U.
  const CMat mapped =
      es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * inputs_));

  if (!control_out_free_ || control_dim_ == 1) {
    double total = 0.0;
    for (int i = 0; i < count_; ++i) {
      total += 1.0 - std::norm(targets_.col(i).dot(mapped.col(i)));
    }
    return total / count_;
  }

  // Shared free control output: the best |C'> is the top eigenvector of the
  // partial-overlap accumulator.
  const Eigen::Index base_dim = target_bases_.rows();
  CMat w(control_dim_, count_);
  for (int i = 0; i < count_; ++i) {
    const Eigen::Map<const Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(mapped.col(i).data(), base_dim, control_dim_);
    w.col(i) = (target_bases_.col(i).adjoint() * m).adjoint();
  }
  Eigen::SelfAdjointEigenSolver<CMat> accum(w * w.adjoint(), Eigen::EigenvaluesOnly);
  return 1.0 - accum.eigenvalues().maxCoeff() / count_;
}

double objective(const RVec& params, const std::vector<AlphabetEntry>& alphabet,
                 const ConstructorLayout& layout, bool control_out_free) {
  return ReplicationObjective(alphabet, layout, control_out_free)(params);
}

RVec fd_gradient(const std::function<double(const RVec&)>& f, const RVec& x, double step) {
  RVec g(x.size());
  RVec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + step;
    const double up = f(probe);
    probe(i) = x(i) - step;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * step);
  }
  return g;
}

namespace {

struct RestartOutcome {
  double best = 1.0;
  RVec params;
  std::vector<double> trace;
};

// L-BFGS two-loop descent on finite-difference gradients with Armijo
// backtracking. The evaluation budget covers every objective call made after
// scoring the start point.
RestartOutcome descend(const ReplicationObjective& f, RVec x, long long budget) {
  constexpr int kHistory = 10;
  constexpr double kArmijo = 1e-4;
  const double fd_step = 1e-5;

  long long evals = 0;
  auto eval = [&](const RVec& p) {
    ++evals;
    return f(p);
  };

  RestartOutcome out;
  double fx = f(x);  // start point, not counted against the budget
  out.best = fx;
  out.params = x;
  out.trace.push_back(fx);

  const Eigen::Index n = x.size();
  std::deque<RVec> s_hist, y_hist;
  std::deque<double> rho_hist;
  RVec grad(n);
  bool grad_valid = false;

  auto record = [&](const RVec& point, double value) {
    out.trace.push_back(value);
    if (value < out.best) {
      out.best = value;
      out.params = point;
    }
  };

  while (true) {
    if (!grad_valid) {
      if (evals + 2 * n > budget) break;
      grad = fd_gradient([&](const RVec& p) { return eval(p); }, x, fd_step);
      grad_valid = true;
    }
    if (grad.lpNorm<Eigen::Infinity>() < 1e-11) break;

    // Two-loop recursion.
    RVec q = grad;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    RVec direction = -q;
    double slope = grad.dot(direction);
    if (slope >= 0.0) {  // fall back to steepest descent
      direction = -grad;
      slope = -grad.squaredNorm();
    }

    double step = s_hist.empty() ? 1.0 / std::max(1.0, grad.norm()) : 1.0;
    double fnew = fx;
    RVec xnew = x;
    bool accepted = false;
    for (int ls = 0; ls < 30 && evals < budget; ++ls) {
      xnew = x + step * direction;
      fnew = eval(xnew);
      if (fnew <= fx + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    if (evals + 2 * n > budget) {
      record(xnew, fnew);
      break;
    }
    const RVec g_new = fd_gradient([&](const RVec& p) { return eval(p); }, xnew, fd_step);
    const RVec s = xnew - x;
    const RVec y = g_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(xnew);
    fx = fnew;
    grad = g_new;
    record(x, fx);
    if (fx < 1e-14) break;
  }
  return out;
}

}  // namespace

SearchResult optimize(const std::vector<AlphabetEntry>& alphabet,
                      const ConstructorLayout& layout, int restarts,
                      std::uint64_t seed, long long budget, bool control_out_free) {
  if (restarts < 1) {
    throw std::invalid_argument("optimize: need at least one restart");
  }
  if (budget < 0) {
    throw std::invalid_argument("optimize: budget must be nonnegative");
  }
  if (layout.window_dim() > 64) {
    throw std::invalid_argument(
        "optimize: window dimension above 64 is beyond the desk-scale search");
  }
  const ReplicationObjective f(alphabet, layout, control_out_free);
  const Eigen::Index n = f.param_count();

  SearchResult result;
  result.feasibility_floor = feasibility_gap(alphabet);
  result.best_params = RVec::Zero(n);

  for (int r = 0; r < restarts; ++r) {
    SplitMix64 rng(SplitMix64::substream(seed, static_cast<std::uint64_t>(r)));
    RVec x0(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x0(i) = rng.next_uniform(-std::numbers::pi, std::numbers::pi);
    }
    RestartOutcome outcome = descend(f, std::move(x0), budget);
    result.residual_trace.push_back(std::move(outcome.trace));
    ++result.restarts;
    if (outcome.best < result.best_residual) {
      result.best_residual = outcome.best;
      result.best_params = std::move(outcome.params);
    }
    if (result.best_residual < 1e-10) break;
  }
  return result;
}

GapDetail feasibility_gap_detail(const std::vector<AlphabetEntry>& alphabet, double tol) {
  const FeasibilityReport report = classify(alphabet, tol);
  GapDetail detail;
  if (report.classification == Classification::DeterministicFeasible) {
    return detail;
  }
  for (const auto& ev : report.pair_classes) {
    if (ev.cls != PairClass::Infeasible) continue;
    const double a = ev.species_overlap * ev.program_overlap;
    const double mismatch = a - a * a;
    if (mismatch > detail.worst_mismatch) {
      detail.worst_mismatch = mismatch;
      detail.label_i = ev.label_i;
      detail.label_j = ev.label_j;
    }
  }
  const double root = std::sqrt(1.0 + detail.worst_mismatch) - 1.0;
  detail.floor = root * root / static_cast<double>(alphabet.size());
  return detail;
}

double feasibility_gap(const std::vector<AlphabetEntry>& alphabet, double tol) {
  return feasibility_gap_detail(alphabet, tol).floor;
}

}  // namespace qcon
