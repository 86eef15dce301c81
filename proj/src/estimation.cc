// Copyright 2026 The noisytomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noisytomo/estimation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "noisytomo/stats.h"

namespace noisytomo {

namespace {

constexpr double kMinStep = 1e-12;
constexpr double kDegeneracyTolerance = 1e-12;
constexpr double kTiePerturbation = 1e-8;

void check_counts(const CountVector& counts, const EffectiveMeasurement& meas) {
  if (counts.counts.size() != static_cast<std::size_t>(meas.size())) {
    throw std::invalid_argument("count vector length does not match the measurement");
  }
  for (auto k : counts.counts) {
    if (k < 0) throw std::invalid_argument("counts must be non-negative");
  }
}

std::vector<double> cell_probabilities(const EffectiveMeasurement& meas, const PureState& state) {
  const auto lambda = event_probabilities(meas, state);
  std::vector<double> p(lambda.size());
  double total = 0.0;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    p[j] = meas.weights()[j] * std::max(lambda[j], 0.0) / meas.n();
    total += p[j];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw NumericalError("cell probabilities sum to " + std::to_string(total) +
                         "; the measurement does not decompose unity");
  }
  return p;
}

// Λ_j c for every row.
std::vector<ComplexVector> apply_all(const EffectiveMeasurement& meas, const ComplexVector& c) {
  std::vector<ComplexVector> out;
  out.reserve(meas.operators().size());
  for (const auto& op : meas.operators()) out.push_back(op * c);
  return out;
}

// Newton step for Σ k_j ln λ_j on the unit sphere, in the doubled-real
// tangent space orthogonal to c and to its global-phase direction ic.
// Empty when the reduced Hessian is not negative definite.
std::optional<ComplexVector> newton_candidate(const ComplexVector& c,
                                              const std::vector<ComplexOperator>& ops,
                                              const std::vector<ComplexVector>& applied,
                                              const std::vector<double>& lambda,
                                              const CountVector& counts) {
  const Eigen::Index s = c.size();
  ComplexOperator weighted = ComplexOperator::Zero(s, s);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(2 * s);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(2 * s, 2 * s);
  for (std::size_t j = 0; j < ops.size(); ++j) {
    if (counts.counts[j] == 0) continue;
    const double k = static_cast<double>(counts.counts[j]);
    const RealState v = realify_state(applied[j]);
    weighted += (k / lambda[j]) * ops[j];
    grad += (2.0 * k / lambda[j]) * v;
    hess.noalias() -= (4.0 * k / (lambda[j] * lambda[j])) * v * v.transpose();
  }
  hess.topLeftCorner(s, s) += 2.0 * weighted.real();
  hess.topRightCorner(s, s) -= 2.0 * weighted.imag();
  hess.bottomLeftCorner(s, s) += 2.0 * weighted.imag();
  hess.bottomRightCorner(s, s) += 2.0 * weighted.real();

  const RealState x = realify_state(c);
  // Lagrange multiplier of |x|² = 1.
  const double mu = 0.5 * x.dot(grad);
  hess.diagonal().array() -= 2.0 * mu;

  Eigen::MatrixXd frame(2 * s, 2);
  frame.col(0) = x;
  frame.col(1) = realify_state(ComplexVector(Complex(0.0, 1.0) * c));
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
  const Eigen::MatrixXd q =
      (qr.householderQ() * Eigen::MatrixXd::Identity(2 * s, 2 * s)).rightCols(2 * s - 2);
  const Eigen::LLT<Eigen::MatrixXd> llt(-(q.transpose() * hess * q));
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd step = q * llt.solve(q.transpose() * grad);
  if (!step.allFinite()) return std::nullopt;
  const RealState moved = x + step;
  ComplexVector out(s);
  out.real() = moved.head(s);
  out.imag() = moved.tail(s);
  return ComplexVector(out.normalized());
}

}  // namespace

std::string_view to_string(SamplingModel model) {
  return model == SamplingModel::kPoisson ? "poisson" : "multinomial";
}

std::optional<SamplingModel> parse_sampling_model(std::string_view name) {
  if (name == "multinomial") return SamplingModel::kMultinomial;
  if (name == "poisson") return SamplingModel::kPoisson;
  return std::nullopt;
}

std::int64_t CountVector::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

CountVector sample_counts(const EffectiveMeasurement& meas, const PureState& state,
                          std::uint64_t seed, SamplingModel model) {
  const auto p = cell_probabilities(meas, state);
  CountVector out;
  out.weights = meas.weights();
  out.n = meas.n();
  out.seed = seed;
  out.model = model;
  out.counts.assign(p.size(), 0);
  Rng rng(seed);

  if (model == SamplingModel::kPoisson) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double expected = p[j] * meas.n();
      if (expected > 0.0) {
        out.counts[j] = std::poisson_distribution<std::int64_t>(expected)(rng);
      }
    }
    return out;
  }

  const double rounded = std::round(meas.n());
  if (std::abs(rounded - meas.n()) > 1e-9 * meas.n()) {
    throw std::invalid_argument("multinomial sampling needs an integer sample size");
  }
  // Sequential conditional binomials: k_j ~ Bin(remaining, p_j / mass_left).
  auto remaining = static_cast<std::int64_t>(rounded);
  double mass_left = std::accumulate(p.begin(), p.end(), 0.0);
  for (std::size_t j = 0; j + 1 < p.size() && remaining > 0; ++j) {
    const double q = mass_left > 0.0 ? std::clamp(p[j] / mass_left, 0.0, 1.0) : 0.0;
    const std::int64_t k =
        q > 0.0 ? std::binomial_distribution<std::int64_t>(remaining, q)(rng) : 0;
    out.counts[j] = k;
    remaining -= k;
    mass_left -= p[j];
  }
  if (remaining > 0) {
    // Whatever is left lands in the last cell that can hold it.
    std::size_t last = p.size() - 1;
    while (last > 0 && p[last] <= 0.0) --last;
    out.counts[last] += remaining;
  }
  return out;
}

CountVector expected_counts(const EffectiveMeasurement& meas, const PureState& state) {
  const auto p = cell_probabilities(meas, state);
  CountVector out;
  out.weights = meas.weights();
  out.n = meas.n();
  out.counts.reserve(p.size());
  for (double pj : p) out.counts.push_back(static_cast<std::int64_t>(std::llround(pj * meas.n())));
  return out;
}

double log_likelihood(const ComplexVector& c, const CountVector& counts,
                      const EffectiveMeasurement& meas, double floor) {
  check_counts(counts, meas);
  if (c.size() != meas.dim()) {
    throw std::invalid_argument("log_likelihood: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < counts.counts.size(); ++j) {
    if (counts.counts[j] == 0) continue;
    const double lambda = c.dot(meas.operators()[j] * c).real();
    total += static_cast<double>(counts.counts[j]) * std::log(std::max(lambda, floor));
  }
  return total;
}

double log_likelihood(const PureState& c, const CountVector& counts,
                      const EffectiveMeasurement& meas, double floor) {
  return log_likelihood(c.amplitudes(), counts, meas, floor);
}

ComplexVector ReconstructionResult::unnormalized_estimate() const {
  return std::sqrt(norm_squared) * estimate.amplitudes();
}

PureState initial_guess(const CountVector& counts, const EffectiveMeasurement& meas) {
  check_counts(counts, meas);
  const int s = meas.dim();
  ComplexOperator b = ComplexOperator::Zero(s, s);
  for (std::size_t j = 0; j < counts.counts.size(); ++j) {
    b += (static_cast<double>(counts.counts[j]) / counts.n) * meas.operators()[j];
  }
  Eigen::SelfAdjointEigenSolver<ComplexOperator> solver(hermitian_part(b));
  const auto& values = solver.eigenvalues();  // ascending
  const double top = values[s - 1];
  int first = s - 1;
  while (first > 0 && top - values[first - 1] <= kDegeneracyTolerance * std::max(1.0, top)) {
    --first;
  }
  ComplexVector v = solver.eigenvectors().col(first);
  if (first < s - 1) {
    v += kTiePerturbation * solver.eigenvectors().col(first + 1);
  }
  return PureState(std::move(v));
}

namespace {

ReconstructionResult ascend(const CountVector& counts, const EffectiveMeasurement& meas,
                            const ReconstructionOptions& options, ComplexVector c) {
  const double k_total = static_cast<double>(counts.total());
  const double floor = options.probability_floor;
  const auto& ops = meas.operators();
  const std::size_t m = ops.size();

  ReconstructionResult result;
  result.norm_squared = k_total / meas.n();
  result.initial_log_likelihood = log_likelihood(c, counts, meas, floor);

  std::vector<ComplexVector> applied = apply_all(meas, c);
  std::vector<double> lambda(m);
  auto refresh_lambda = [&] {
    for (std::size_t j = 0; j < m; ++j) lambda[j] = std::max(c.dot(applied[j]).real(), floor);
  };
  refresh_lambda();

  auto r_times_c = [&] {
    ComplexVector rc = ComplexVector::Zero(c.size());
    for (std::size_t j = 0; j < m; ++j) {
      if (counts.counts[j] == 0) continue;
      rc += (static_cast<double>(counts.counts[j]) / lambda[j]) * applied[j];
    }
    return ComplexVector(rc / k_total);
  };

  // Likelihood change evaluated through δ = candidate − c so that tiny
  // improvements near the optimum are not lost to cancellation. The
  // likelihood is taken as Σk ln(λ/|c|²), so rounding in the normalization
  // of either vector cancels to first order.
  auto likelihood_gain = [&](const ComplexVector& candidate) {
    const ComplexVector delta = candidate - c;
    const double norm_change = delta.dot(2.0 * c + delta).real() / c.squaredNorm();
    double gain = -k_total * std::log1p(norm_change);
    for (std::size_t j = 0; j < m; ++j) {
      if (counts.counts[j] == 0) continue;
      const double change = delta.dot(ops[j] * (2.0 * c + delta)).real();
      const double updated = std::max(lambda[j] + change, floor);
      gain += static_cast<double>(counts.counts[j]) * std::log1p((updated - lambda[j]) / lambda[j]);
    }
    return gain;
  };

  int iteration = 0;
  for (; iteration < options.max_iterations; ++iteration) {
    const ComplexVector rc = r_times_c();
    const double residual = (rc - c).norm();
    result.final_residual = residual;
    if (residual <= options.tolerance) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    auto try_accept = [&](ComplexVector candidate) {
      const double gain = likelihood_gain(candidate);
      if (!(gain >= 0.0)) return false;
      c = std::move(candidate);
      applied = apply_all(meas, c);
      refresh_lambda();
      if (options.keep_history) result.likelihood_increments.push_back(gain);
      return true;
    };
    if (options.newton_polish) {
      if (auto candidate = newton_candidate(c, ops, applied, lambda, counts)) accepted = try_accept(*candidate);
    }
    double step = options.step;
    while (!accepted && step >= kMinStep) {
      ComplexVector candidate = (1.0 - step) * c + step * rc;
      candidate.normalize();
      accepted = try_accept(std::move(candidate));
      step *= 0.5;
    }
    if (!accepted) {
      // No ascent direction resolvable at machine precision.
      break;
    }
  }
  if (iteration == options.max_iterations) {
    result.final_residual = (r_times_c() - c).norm();
    result.converged = result.final_residual <= options.tolerance;
  }

  result.iterations = iteration;
  result.estimate = PureState(c);
  result.log_likelihood = log_likelihood(c, counts, meas, floor);
  for (std::size_t j = 0; j < m; ++j) {
    if (counts.counts[j] > 0 && c.dot(applied[j]).real() < floor) ++result.regularized_cells;
  }
  return result;
}

}  // namespace

PureState linear_inversion_guess(const CountVector& counts, const EffectiveMeasurement& meas) {
  check_counts(counts, meas);
  const int s = meas.dim();
  const auto& ops = meas.operators();
  const double k_total = static_cast<double>(counts.total());
  // Tr(Λ_j ρ) = Σ_ab Λ_j(b,a) ρ(a,b) against the observed frequency.
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(ops.size()), s * s);
  Eigen::VectorXcd b(static_cast<Eigen::Index>(ops.size()));
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    for (int x = 0; x < s; ++x) {
      for (int y = 0; y < s; ++y) a(row, x * s + y) = ops[j](y, x);
    }
    const double freq = k_total > 0.0 ? static_cast<double>(counts.counts[j]) / k_total : 0.0;
    b[row] = freq * meas.n() / meas.weights()[j];
  }
  const Eigen::VectorXcd flat = a.completeOrthogonalDecomposition().solve(b);
  ComplexOperator rho(s, s);
  for (int x = 0; x < s; ++x) {
    for (int y = 0; y < s; ++y) rho(x, y) = flat[x * s + y];
  }
  Eigen::SelfAdjointEigenSolver<ComplexOperator> solver(hermitian_part(rho));
  return PureState(ComplexVector(solver.eigenvectors().col(s - 1)));
}

ReconstructionResult reconstruct(const CountVector& counts, const EffectiveMeasurement& meas,
                                 const ReconstructionOptions& options) {
  check_counts(counts, meas);
  if (counts.total() <= 0) {
    throw std::invalid_argument("reconstruct: no counts to reconstruct from");
  }
  const PureState start = initial_guess(counts, meas);
  ReconstructionResult best = ascend(counts, meas, options, start.amplitudes());
  if (!options.linear_inversion_restart) return best;
  const PureState second = linear_inversion_guess(counts, meas);
  if (fidelity(second, start) > 1.0 - 1e-8 || fidelity(second, best.estimate) > 1.0 - 1e-8) return best;
  ReconstructionResult other = ascend(counts, meas, options, second.amplitudes());
  if (other.log_likelihood > best.log_likelihood) {
    other.initial_log_likelihood = best.initial_log_likelihood;
    best = std::move(other);
  }
  return best;
}

}  // namespace noisytomo
