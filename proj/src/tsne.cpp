// Copyright 2026 The ecgfuse Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ecgfuse/tsne.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "ecgfuse/io_util.hpp"
#include "ecgfuse/rng.hpp"

namespace ecgfuse {

void TsneConfig::validate(std::size_t n) const {
  auto fail = [](const std::string& what) { throw ConfigError("tsne: " + what); };
  if (n < 3) fail("need at least 3 points");
  if (!(perplexity > 1.0 && perplexity < static_cast<double>(n) - 1.0)) {
    fail("perplexity must satisfy 1 < perplexity < n - 1 (n = " + std::to_string(n) + ")");
  }
  if (n_iter < 1) fail("n_iter must be positive");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(early_exaggeration_factor > 0.0)) fail("early_exaggeration_factor must be positive");
  if (early_exaggeration_iters < 0) fail("early_exaggeration_iters must be >= 0");
  if (!(momentum_initial >= 0.0 && momentum_initial < 1.0) ||
      !(momentum_final >= 0.0 && momentum_final < 1.0)) {
    fail("momentum must be in [0, 1)");
  }
  if (momentum_switch_iter < 0) fail("momentum_switch_iter must be >= 0");
}

EmbeddingSet subsample_balanced(const EmbeddingSet& set, std::size_t per_class,
                                std::uint64_t seed) {
  if (per_class == 0) throw ValidationError("per_class must be at least 1");
  std::vector<std::size_t> members[2];
  for (std::size_t i = 0; i < set.size(); ++i) members[set.labels()[i]].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (members[c].size() < per_class) {
      throw ValidationError("class " + std::to_string(c) + " has " +
                            std::to_string(members[c].size()) + " rows, " +
                            std::to_string(per_class) + " requested");
    }
  }
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(2 * per_class);
  for (auto& m : members) {
    rng.shuffle_prefix(std::span<std::size_t>(m), per_class);
    chosen.insert(chosen.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(per_class));
  }
  std::sort(chosen.begin(), chosen.end());
  return set.subset(chosen);
}

namespace {

Matrix<double> squared_distances(const FeatureMatrix& x) {
  const std::size_t n = x.rows();
  Matrix<double> d(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto xj = x.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) {
        const double diff = static_cast<double>(xi[k]) - static_cast<double>(xj[k]);
        s += diff * diff;
      }
      d(i, j) = s;
      d(j, i) = s;
    }
  }
  return d;
}

// Entropy in bits of p_j proportional to exp(-beta * e_j); fills `w` with the
// unnormalized weights.
double row_entropy(std::span<const double> e, double beta, std::vector<double>& w) {
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    w[j] = std::exp(-beta * e[j]);
    total += w[j];
    weighted += w[j] * e[j];
  }
  return (std::log(total) + beta * weighted / total) / std::numbers::ln2;
}

}  // namespace

ConditionalAffinities conditional_affinities(const FeatureMatrix& x, double perplexity) {
  const std::size_t n = x.rows();
  if (n < 3) throw ValidationError("affinities need at least 3 points");
  if (!(perplexity > 1.0)) throw ConfigError("perplexity must exceed 1");
  for (float v : x.data()) {
    if (!std::isfinite(v)) throw ValidationError("affinity input must be finite");
  }
  const Matrix<double> dist = squared_distances(x);
  const double target = std::log2(perplexity);
  const double uniform_entropy = std::log2(static_cast<double>(n - 1));
  constexpr int kMaxSteps = 50;

  ConditionalAffinities out{Matrix<double>(n, n, 0.0), std::vector<double>(n),
                            std::vector<double>(n)};
  std::vector<double> e(n - 1), w(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Distances to the other points, shifted to start at 0 and scaled to end
    // at 1 so the search bracket is independent of the data scale.
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) e[k++] = dist(i, j);
    }
    const double lo_d = *std::min_element(e.begin(), e.end());
    const double hi_d = *std::max_element(e.begin(), e.end());
    const double scale = hi_d - lo_d;
    for (double& v : e) v = scale > 0.0 ? (v - lo_d) / scale : 0.0;

    double beta = 0.0;
    double entropy = uniform_entropy;
    if (std::abs(uniform_entropy - target) <= kEntropyTolerance) {
      row_entropy(e, 0.0, w);
    } else if (target > uniform_entropy) {
      throw DegenerateAffinityError(i, "perplexity exceeds the number of neighbours");
    } else {
      // Entropy decreases monotonically in log(beta).
      double lo = -30.0;
      double hi = 50.0;
      if (row_entropy(e, std::exp(hi), w) > target) {
        throw DegenerateAffinityError(
            i, "too many coincident neighbours to reach perplexity " +
                   std::to_string(perplexity));
      }
      for (int step = 0; step < kMaxSteps; ++step) {
        const double mid = 0.5 * (lo + hi);
        entropy = row_entropy(e, std::exp(mid), w);
        beta = std::exp(mid);
        if (std::abs(entropy - target) < 1e-10) break;
        (entropy > target ? lo : hi) = mid;
      }
      if (std::abs(entropy - target) > kEntropyTolerance) {
        throw DegenerateAffinityError(i, "bandwidth search did not converge");
      }
    }

    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double h = 0.0;
    k = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double pj = w[k++] / total;
      out.p(i, j) = pj;
      if (pj > 0.0) h -= pj * std::log2(pj);
    }
    out.entropy_bits[i] = h;
    // Report beta in the caller's distance units.
    out.beta[i] = scale > 0.0 ? beta / scale : 0.0;
  }
  return out;
}

Matrix<double> pairwise_affinities(const FeatureMatrix& x, double perplexity) {
  const auto cond = conditional_affinities(x, perplexity);
  const std::size_t n = x.rows();
  Matrix<double> p(n, n, 0.0);
  double total = 0.0;
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      p(i, j) = std::max((cond.p(i, j) + cond.p(j, i)) / denom, kAffinityFloor);
      total += p(i, j);
    }
  }
  for (double& v : p.data()) v /= total;
  return p;
}

namespace {

// Student-t kernel (1 + |y_i - y_j|^2)^-1; returns the sum over i != j.
double student_kernel(const Matrix<double>& y, Matrix<double>& num) {
  const std::size_t n = y.rows();
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = y(i, 0) - y(j, 0);
      const double dy = y(i, 1) - y(j, 1);
      const double q = 1.0 / (1.0 + dx * dx + dy * dy);
      num(i, j) = q;
      num(j, i) = q;
      z += 2.0 * q;
    }
  }
  return z;
}

double kl_from_kernel(const Matrix<double>& p, const Matrix<double>& num, double z) {
  const std::size_t n = p.rows();
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || p(i, j) <= 0.0) continue;
      const double q = std::max(num(i, j) / z, std::numeric_limits<double>::min());
      kl += p(i, j) * std::log(p(i, j) / q);
    }
  }
  return kl;
}

}  // namespace

double kl_divergence(const Matrix<double>& p, const Matrix<double>& y) {
  if (p.rows() != y.rows() || y.cols() != 2) {
    throw ValidationError("kl_divergence: shape mismatch");
  }
  Matrix<double> num(y.rows(), y.rows());
  const double z = student_kernel(y, num);
  return kl_from_kernel(p, num, z);
}

TsneResult tsne_embed(const FeatureMatrix& x, const TsneConfig& config) {
  const std::size_t n = x.rows();
  config.validate(n);
  const Matrix<double> p = pairwise_affinities(x, config.perplexity);

  TsneResult result{Matrix<double>(n, 2), {}};
  Matrix<double>& y = result.coords;
  Rng rng(config.seed);
  for (double& v : y.data()) v = 1e-4 * rng.normal();

  Matrix<double> num(n, n);
  Matrix<double> grad(n, 2), update(n, 2, 0.0), gains(n, 2, 1.0);
  constexpr int kCheckpointEvery = 50;
  constexpr double kMinGain = 0.01;

  for (int iter = 0; iter < config.n_iter; ++iter) {
    const double z = student_kernel(y, num);
    if (iter % kCheckpointEvery == 0) {
      result.kl_trace.push_back({iter, kl_from_kernel(p, num, z)});
    }
    const double exaggeration =
        iter < config.early_exaggeration_iters ? config.early_exaggeration_factor : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double coeff = (exaggeration * p(i, j) - num(i, j) / z) * num(i, j);
        gx += coeff * (y(i, 0) - y(j, 0));
        gy += coeff * (y(i, 1) - y(j, 1));
      }
      grad(i, 0) = 4.0 * gx;
      grad(i, 1) = 4.0 * gy;
    }

    const double momentum =
        iter < config.momentum_switch_iter ? config.momentum_initial : config.momentum_final;
    for (std::size_t k = 0; k < y.data().size(); ++k) {
      double& g = gains.data()[k];
      const double gk = grad.data()[k];
      double& u = update.data()[k];
      g = ((gk > 0.0) != (u > 0.0)) ? g + 0.2 : g * 0.8;
      g = std::max(g, kMinGain);
      u = momentum * u - config.learning_rate * g * gk;
      y.data()[k] += u;
    }
    for (std::size_t c = 0; c < 2; ++c) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += y(i, c);
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) y(i, c) -= mean;
    }
  }
  result.kl_trace.push_back({config.n_iter, kl_divergence(p, y)});
  return result;
}

// ---------------------------------------------------------------------------
// Export

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void check_embedding(const Embedding2D& e) {
  const std::size_t n = e.coords.rows();
  if (e.coords.cols() != 2) throw ValidationError("embedding must have 2 columns");
  if (e.labels.size() != n || e.ids.size() != n) {
    throw ValidationError("embedding ids/labels do not match coordinate rows");
  }
  for (double v : e.coords.data()) {
    if (!std::isfinite(v)) throw ValidationError("embedding coordinates must be finite");
  }
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
};

Axis padded_range(const Matrix<double>& c, std::size_t col) {
  if (c.rows() == 0) return {};
  double lo = c(0, col), hi = c(0, col);
  for (std::size_t i = 1; i < c.rows(); ++i) {
    lo = std::min(lo, c(i, col));
    hi = std::max(hi, c(i, col));
  }
  const double span = hi - lo;
  if (span <= 0.0) return {lo - 1.0, hi + 1.0};
  return {lo - 0.05 * span, hi + 0.05 * span};
}

constexpr const char* kClassColor[2] = {"#1f77b4", "#d62728"};
constexpr const char* kClassName[2] = {"non-ACS (0)", "ACS (1)"};

}  // namespace

std::string scatter_svg(const Embedding2D& embedding, const std::string& title) {
  check_embedding(embedding);
  constexpr double kWidth = 640.0, kHeight = 640.0;
  constexpr double kLeft = 40.0, kRight = 160.0, kTop = 40.0, kBottom = 40.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const Axis ax = padded_range(embedding.coords, 0);
  const Axis ay = padded_range(embedding.coords, 1);

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    s << "<text x=\"" << kLeft << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
  }
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
    << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  s << "<g stroke=\"none\" fill-opacity=\"0.7\">\n";
  for (std::size_t i = 0; i < embedding.coords.rows(); ++i) {
    const double px = kLeft + (embedding.coords(i, 0) - ax.lo) / (ax.hi - ax.lo) * plot_w;
    const double py = kTop + (ay.hi - embedding.coords(i, 1)) / (ay.hi - ay.lo) * plot_h;
    s << "<circle cx=\"" << fixed3(px) << "\" cy=\"" << fixed3(py) << "\" r=\"3\" fill=\""
      << kClassColor[embedding.labels[i] ? 1 : 0] << "\"/>\n";
  }
  s << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int c = 0; c < 2; ++c) {
    const double ly = kTop + 16.0 + 20.0 * c;
    s << "<rect x=\"" << (kWidth - kRight + 16.0) << "\" y=\"" << (ly - 9.0)
      << "\" width=\"10\" height=\"10\" fill=\"" << kClassColor[c] << "\"/>\n"
      << "<text x=\"" << (kWidth - kRight + 32.0) << "\" y=\"" << ly << "\">"
      << xml_escape(kClassName[c]) << "</text>\n";
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

void export_scatter_svg(const Embedding2D& embedding, std::ostream& sink,
                        const std::string& title) {
  const std::string svg = scatter_svg(embedding, title);
  write_all(sink, std::span<const std::uint8_t>(
                      reinterpret_cast<const std::uint8_t*>(svg.data()), svg.size()));
}

std::string coords_csv(const Embedding2D& embedding) {
  check_embedding(embedding);
  std::string out = "id,label,x,y\n";
  for (std::size_t i = 0; i < embedding.coords.rows(); ++i) {
    out += embedding.ids[i];
    out += embedding.labels[i] ? ",1," : ",0,";
    out += shortest(embedding.coords(i, 0));
    out += ',';
    out += shortest(embedding.coords(i, 1));
    out += '\n';
  }
  return out;
}

}  // namespace ecgfuse
