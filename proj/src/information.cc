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

#include "noisytomo/information.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "noisytomo/stats.h"

namespace noisytomo {

InformationMatrix information_matrix(const PureState& state, const EffectiveMeasurement& meas) {
  if (state.dim() != meas.dim()) {
    throw std::invalid_argument("information_matrix: dimension mismatch");
  }
  const ComplexVector& c = state.amplitudes();
  const int s = state.dim();
  InformationMatrix info;
  info.n = meas.n();
  info.dim = s;
  info.h = Eigen::MatrixXd::Zero(2 * s, 2 * s);
  for (std::size_t j = 0; j < meas.operators().size(); ++j) {
    // Λ̃_j c̃ is the doubled-real form of Λ_j c.
    const ComplexVector lc = meas.operators()[j] * c;
    const double lambda = c.dot(lc).real();
    if (lambda < kSkipProbability) {
      ++info.skipped_rows;
      continue;
    }
    const RealState v = realify_state(lc);
    info.h.noalias() += (2.0 * meas.weights()[j] / lambda) * (v * v.transpose());
  }
  if (info.skipped_rows == meas.size()) {
    throw NumericalError("information_matrix: every row has zero probability for this state");
  }
  info.h = 0.5 * (info.h + info.h.transpose());
  return info;
}

LossSpectrum loss_spectrum(const InformationMatrix& info) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(info.h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& s = solver.eigenvalues();  // ascending
  const Eigen::Index size = s.size();
  const double zero = kZeroEigenvalue * info.n;
  int near_zero = 0;
  for (Eigen::Index i = 0; i < size; ++i) {
    if (s[i] < zero) ++near_zero;
  }
  if (near_zero > 1) {
    throw NumericalError("loss_spectrum: " + std::to_string(near_zero) +
                         " eigenvalues of H are numerically zero; the measurement is not "
                         "tomographically complete at this state");
  }
  if (near_zero == 0) {
    throw NumericalError("loss_spectrum: H has no global-phase zero eigenvalue (smallest " +
                         std::to_string(s[0]) + ")");
  }
  LossSpectrum out;
  out.n = info.n;
  out.excluded_zero = s[0];
  out.excluded_max = s[size - 1];
  out.d.reserve(static_cast<std::size_t>(size - 2));
  for (Eigen::Index i = 1; i + 1 < size; ++i) {
    out.d.push_back(1.0 / (2.0 * s[i]));
  }
  return out;
}

LossMoments loss_moments(const LossSpectrum& spectrum) {
  LossMoments m;
  for (double d : spectrum.d) {
    m.mean += d;
    m.variance += 2.0 * d * d;
  }
  return m;
}

double scaled_loss(const LossSpectrum& spectrum, double n) { return n * loss_moments(spectrum).mean; }

double scaled_loss_at(const PureState& state, const EffectiveMeasurement& meas) {
  return scaled_loss(loss_spectrum(information_matrix(state, meas)));
}

std::vector<double> sample_loss_distribution(const LossSpectrum& spectrum, std::size_t count,
                                             std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(count);
  for (auto& x : out) {
    double acc = 0.0;
    for (double d : spectrum.d) {
      const double xi = normal(rng);
      acc += d * xi * xi;
    }
    x = acc;
  }
  return out;
}

double chi2_statistic(const PureState& truth, const ComplexVector& estimate,
                      const InformationMatrix& info) {
  if (estimate.size() != truth.dim() || info.dim != truth.dim()) {
    throw std::invalid_argument("chi2_statistic: dimension mismatch");
  }
  const ComplexVector aligned = alignment_phase(truth.amplitudes(), estimate) * estimate;
  const RealState dc = realify_state(ComplexVector(aligned - truth.amplitudes()));
  return 2.0 * dc.dot(info.h * dc);
}

namespace {

struct PointValue {
  double loss = std::numeric_limits<double>::quiet_NaN();
  bool regular = false;
};

PointValue evaluate(const PureState& state, const EffectiveMeasurement& meas) {
  const InformationMatrix info = information_matrix(state, meas);
  PointValue v;
  if (info.skipped_rows == 0) {
    v.loss = scaled_loss(loss_spectrum(info));
    v.regular = true;
    return v;
  }
  try {
    v.loss = scaled_loss(loss_spectrum(info));
  } catch (const NumericalError&) {
    // Singular point; leave NaN.
  }
  return v;
}

using Vec3 = std::array<double, 3>;

Vec3 normalize(Vec3 v) {
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / r, v[1] / r, v[2] / r};
}

// Minimizes f over a 2D tangent plane with a Nelder–Mead simplex.
std::array<double, 2> nelder_mead(const std::function<double(double, double)>& f, double scale) {
  std::array<std::array<double, 2>, 3> x{{{0.0, 0.0}, {scale, 0.0}, {0.0, scale}}};
  std::array<double, 3> fx{f(0.0, 0.0), f(scale, 0.0), f(0.0, scale)};
  for (int it = 0; it < 2000; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0];
    const int mid = order[1];
    const int worst = order[2];
    const double size = std::max(std::hypot(x[mid][0] - x[best][0], x[mid][1] - x[best][1]),
                                 std::hypot(x[worst][0] - x[best][0], x[worst][1] - x[best][1]));
    if (size < 1e-10) break;
    const std::array<double, 2> centroid{(x[best][0] + x[mid][0]) / 2, (x[best][1] + x[mid][1]) / 2};
    auto along = [&](double t) {
      return std::array<double, 2>{centroid[0] + t * (x[worst][0] - centroid[0]),
                                   centroid[1] + t * (x[worst][1] - centroid[1])};
    };
    const auto reflected = along(-1.0);
    const double fr = f(reflected[0], reflected[1]);
    if (fr < fx[best]) {
      const auto expanded = along(-2.0);
      const double fe = f(expanded[0], expanded[1]);
      if (fe < fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
    } else if (fr < fx[mid]) {
      x[worst] = reflected;
      fx[worst] = fr;
    } else {
      const auto contracted = fr < fx[worst] ? along(-0.5) : along(0.5);
      const double fc = f(contracted[0], contracted[1]);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = contracted;
        fx[worst] = fc;
      } else {
        for (int k : {mid, worst}) {
          x[k] = {(x[k][0] + x[best][0]) / 2, (x[k][1] + x[best][1]) / 2};
          fx[k] = f(x[k][0], x[k][1]);
        }
      }
    }
  }
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (fx[k] < fx[best]) best = k;
  }
  return x[best];
}

// Local search for an extremum of L near the Bloch direction `start`.
// sign = +1 minimizes, -1 maximizes.
BlochExtremum polish(const EffectiveMeasurement& meas, const BlochVector& start, double sign,
                     double scale) {
  const Vec3 r0{start.x, start.y, start.z};
  // Orthonormal tangent basis at r0.
  Vec3 e1 = std::abs(r0[2]) < 0.9 ? Vec3{-r0[1], r0[0], 0.0} : Vec3{0.0, -r0[2], r0[1]};
  e1 = normalize(e1);
  const Vec3 e2{r0[1] * e1[2] - r0[2] * e1[1], r0[2] * e1[0] - r0[0] * e1[2],
                r0[0] * e1[1] - r0[1] * e1[0]};
  auto point = [&](double u, double v) {
    return normalize({r0[0] + u * e1[0] + v * e2[0], r0[1] + u * e1[1] + v * e2[1],
                      r0[2] + u * e1[2] + v * e2[2]});
  };
  auto objective = [&](double u, double v) {
    const Vec3 p = point(u, v);
    const PointValue val = evaluate(state_from_bloch({p[0], p[1], p[2]}), meas);
    if (!val.regular || std::isnan(val.loss)) return std::numeric_limits<double>::infinity();
    return sign * val.loss;
  };
  const auto uv = nelder_mead(objective, scale);
  const Vec3 p = point(uv[0], uv[1]);
  BlochExtremum out;
  out.theta = std::acos(std::clamp(p[2], -1.0, 1.0));
  out.phi = std::atan2(p[1], p[0]);
  if (out.phi < 0.0) out.phi += 2.0 * std::numbers::pi;
  out.loss = sign * objective(uv[0], uv[1]);
  return out;
}

}  // namespace

BlochMap bloch_loss_map(const EffectiveMeasurement& meas, const BlochMapOptions& options) {
  if (meas.dim() != 2) {
    throw std::invalid_argument("bloch_loss_map: single-qubit measurement required");
  }
  if (options.theta_points < 2 || options.phi_points < 1) {
    throw std::invalid_argument("bloch_loss_map: grid needs at least 2 theta and 1 phi points");
  }
  BlochMap map;
  map.protocol_label = meas.label();
  const double pi = std::numbers::pi;
  for (int i = 0; i < options.theta_points; ++i) {
    const double theta = pi * i / (options.theta_points - 1);
    const bool pole = i == 0 || i == options.theta_points - 1;
    const int phis = pole ? 1 : options.phi_points;
    for (int k = 0; k < phis; ++k) {
      const double phi = 2.0 * pi * k / options.phi_points;
      const PointValue v = evaluate(state_from_angles(theta, phi), meas);
      map.grid.push_back({theta, phi, v.loss, v.regular});
      if (!v.regular) ++map.irregular_points;
    }
  }

  std::vector<std::size_t> regular;
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    if (map.grid[i].regular) regular.push_back(i);
  }
  if (regular.empty()) {
    throw NumericalError("bloch_loss_map: no regular grid point");
  }
  // Index order breaks ties so the result is independent of evaluation order.
  auto by_loss = [&](std::size_t a, std::size_t b) {
    return map.grid[a].loss < map.grid[b].loss || (map.grid[a].loss == map.grid[b].loss && a < b);
  };
  std::vector<std::size_t> ascending = regular;
  std::stable_sort(ascending.begin(), ascending.end(), by_loss);
  const auto to_extremum = [&](std::size_t i) {
    return BlochExtremum{map.grid[i].theta, map.grid[i].phi, map.grid[i].loss};
  };
  map.min = to_extremum(ascending.front());
  map.max = to_extremum(ascending.back());

  if (options.refine) {
    const double scale = 0.5 * pi / (options.theta_points - 1);
    const std::size_t k =
        std::min<std::size_t>(ascending.size(), static_cast<std::size_t>(options.refine_candidates));
    for (std::size_t c = 0; c < k; ++c) {
      const auto& lo = map.grid[ascending[c]];
      const auto cand_min = polish(meas, bloch_from_angles(lo.theta, lo.phi), 1.0, scale);
      if (cand_min.loss < map.min.loss) map.min = cand_min;
      const auto& hi = map.grid[ascending[ascending.size() - 1 - c]];
      const auto cand_max = polish(meas, bloch_from_angles(hi.theta, hi.phi), -1.0, scale);
      if (cand_max.loss > map.max.loss) map.max = cand_max;
    }
  }
  return map;
}

BlochMap bloch_loss_map(const Protocol& protocol, const QuantumChannel& channel,
                        const BlochMapOptions& options) {
  BlochMap map = bloch_loss_map(fold_channel(measurement_operators(protocol), channel), options);
  map.protocol_label = protocol.label();
  map.channel_label = channel.label();
  return map;
}

}  // namespace noisytomo
