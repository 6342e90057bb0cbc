#include "ccsim/mollify.hpp"

#include <cmath>
#include <stdexcept>

#include "ccsim/ops.hpp"
#include "ccsim/parallel.hpp"

namespace ccsim {

namespace {
// Even reflection for arbitrary offsets (period-2n folding).
inline int reflect(int i, int n) {
  const int p = ((i % (2 * n)) + 2 * n) % (2 * n);
  return p < n ? p : 2 * n - 1 - p;
}
inline int wrap(int i, int n) { return ((i % n) + n) % n; }
}  // namespace

std::vector<double> MollifierSpec::weights(double delta, double eps_width) const {
  const double sigma = eps_width > 0 ? eps_width : delta;
  int m = static_cast<int>(std::ceil(cutoff * sigma / delta));
  if (m < 1) m = 1;
  std::vector<double> w(static_cast<size_t>(2 * m + 1));
  double sum = 0.0;
  for (int k = -m; k <= m; ++k) {
    const double x = k * delta / sigma;
    w[static_cast<size_t>(k + m)] = std::exp(-0.5 * x * x);
    sum += w[static_cast<size_t>(k + m)];
  }
  for (auto& x : w) x /= sum;
  double resid = 1.0;
  for (int k = 0; k < 2 * m + 1; ++k)
    if (k != m) resid -= w[static_cast<size_t>(k)];
  w[static_cast<size_t>(m)] = resid;  // exact unit sum
  return w;
}

ScalarField convolve_axis(const ScalarField& f, int axis, double eps, const MollifierSpec& spec) {
  const Grid& g = *f.grid;
  const double sigma = spec.width(g, eps);
  ScalarField out(g);
  const int n0 = g.n0, n1 = g.n1;
  if (axis == 0) {
    const std::vector<double> w = spec.weights(g.h0, sigma);
    const int m = (static_cast<int>(w.size()) - 1) / 2;
    par::for_n(g.ncells(), [&](int c) {
      const int j = c / n0, i = c % n0;
      double s = 0.0;
      for (int k = -m; k <= m; ++k)
        s += w[static_cast<size_t>(k + m)] * f[g.idx(reflect(i + k, n0), j)];
      out[c] = s;
    });
  } else {
    if (g.dim != 2) throw std::invalid_argument("convolve_axis: no axis 1 on a 1D grid");
    if (g.periodic1) {
      // Azimuthal spacing varies with radius, so the kernel does too.
      std::vector<std::vector<double>> wr(static_cast<size_t>(n0));
      for (int i = 0; i < n0; ++i)
        wr[static_cast<size_t>(i)] = spec.weights(g.f1_dist[static_cast<size_t>(i)], sigma);
      par::for_n(g.ncells(), [&](int c) {
        const int j = c / n0, i = c % n0;
        const auto& w = wr[static_cast<size_t>(i)];
        int m = (static_cast<int>(w.size()) - 1) / 2;
        double s = 0.0;
        if (2 * m + 1 >= n1) {
          // Kernel wider than the ring: fold the wrapped weights first.
          std::vector<double> folded(static_cast<size_t>(n1), 0.0);
          for (int k = -m; k <= m; ++k)
            folded[static_cast<size_t>(wrap(j + k, n1))] += w[static_cast<size_t>(k + m)];
          for (int jj = 0; jj < n1; ++jj) s += folded[static_cast<size_t>(jj)] * f[g.idx(i, jj)];
        } else {
          for (int k = -m; k <= m; ++k)
            s += w[static_cast<size_t>(k + m)] * f[g.idx(i, wrap(j + k, n1))];
        }
        out[c] = s;
      });
    } else {
      const std::vector<double> w = spec.weights(g.h1, sigma);
      const int m = (static_cast<int>(w.size()) - 1) / 2;
      par::for_n(g.ncells(), [&](int c) {
        const int j = c / n0, i = c % n0;
        double s = 0.0;
        for (int k = -m; k <= m; ++k)
          s += w[static_cast<size_t>(k + m)] * f[g.idx(i, reflect(j + k, n1))];
        out[c] = s;
      });
    }
  }
  return out;
}

namespace {
ScalarField convolve(const ScalarField& f, double eps, const MollifierSpec& spec) {
  ScalarField out = convolve_axis(f, 0, eps, spec);
  if (f.grid->dim == 2) out = convolve_axis(out, 1, eps, spec);
  return out;
}
}  // namespace

ScalarField mollify_u0(const ScalarField& raw, double eps, const MollifierSpec& spec) {
  for (int c = 0; c < raw.size(); ++c)
    if (raw[c] < 0) throw std::invalid_argument("mollify_u0: raw field has a negative cell");
  const double mass = integrate(raw);
  if (!(mass > 0)) throw std::invalid_argument("mollify_u0: raw field is identically zero");
  ScalarField out = convolve(raw, eps, spec);
  const double scale = mass / integrate(out);
  par::for_n(out.size(), [&](int c) { out[c] *= scale; });
  return out;
}

ScalarField mollify_v0(const ScalarField& raw, double eps, const MollifierSpec& spec) {
  ScalarField root(*raw.grid);
  for (int c = 0; c < raw.size(); ++c) {
    if (!(raw[c] > 0)) throw std::invalid_argument("mollify_v0: raw field has a nonpositive cell");
    root[c] = std::sqrt(raw[c]);
  }
  ScalarField w = convolve(root, eps, spec);
  par::for_n(w.size(), [&](int c) { w[c] *= w[c]; });
  return w;
}

double entropy(const ScalarField& f) {
  const Grid& g = *f.grid;
  for (int c = 0; c < f.size(); ++c)
    if (f[c] < 0) throw std::domain_error("entropy: negative cell value");
  return par::sum_n(f.size(), [&](int c) {
    const double x = f[c];
    return x > 0 ? x * std::log(x) * g.vol[static_cast<size_t>(c)] : 0.0;
  });
}

}  // namespace ccsim
