#include "seemd/emd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seemd/errors.hpp"

namespace seemd {

Extrema find_extrema(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3)
    throw TooShort("extrema search needs at least 3 samples, got " +
                   std::to_string(n));
  Extrema ex;
  std::size_t i = 1;
  while (i + 1 < n) {
    // Walk the run of equal samples starting at i; an interior run is an
    // extremum when the signal rises into it and falls out (or vice versa).
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[j]) ++j;
    if (j + 1 < n) {
      const std::size_t c = (i + j) / 2;
      if (x[i] > x[i - 1] && x[j + 1] < x[j])
        ex.maxima.emplace_back(c, x[c]);
      else if (x[i] < x[i - 1] && x[j + 1] > x[j])
        ex.minima.emplace_back(c, x[c]);
    }
    i = j + 1;
  }
  return ex;
}

namespace {

struct Knot {
  double t;
  double y;
};

// Natural cubic spline through the knots, sampled at integer positions
// 0..length-1. Outside the knot span the end cubic pieces extend as
// polynomials, matching the usual natural-spline extrapolation.
std::vector<double> natural_spline_eval(const std::vector<Knot>& kn,
                                        std::size_t length) {
  const std::size_t n = kn.size();
  std::vector<double> out(length);
  if (n == 2) {
    const double slope = (kn[1].y - kn[0].y) / (kn[1].t - kn[0].t);
    for (std::size_t i = 0; i < length; ++i)
      out[i] = kn[0].y + slope * (static_cast<double>(i) - kn[0].t);
    return out;
  }

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = kn[i + 1].t - kn[i].t;

  // Second derivatives M[i]; natural boundary pins M[0] = M[n-1] = 0 and the
  // interior rows form a tridiagonal system solved by Thomas elimination.
  std::vector<double> diag(n, 1.0), sup(n, 0.0), rhs(n, 0.0), M(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    diag[i] = (h[i - 1] + h[i]) / 3.0;
    sup[i] = h[i] / 6.0;
    rhs[i] = (kn[i + 1].y - kn[i].y) / h[i] -
             (kn[i].y - kn[i - 1].y) / h[i - 1];
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = (h[i - 1] / 6.0) / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    M[i] = (rhs[i] - sup[i] * M[i + 1]) / diag[i];
    if (i == 1) break;
  }

  std::size_t seg = 0;
  for (std::size_t i = 0; i < length; ++i) {
    const double t = static_cast<double>(i);
    while (seg + 2 < n && t > kn[seg + 1].t) ++seg;
    const double hs = h[seg];
    const double a = (kn[seg + 1].t - t) / hs;
    const double b = (t - kn[seg].t) / hs;
    out[i] = a * kn[seg].y + b * kn[seg + 1].y +
             ((a * a * a - a) * M[seg] + (b * b * b - b) * M[seg + 1]) *
                 (hs * hs) / 6.0;
  }
  return out;
}

}  // namespace

std::vector<double> spline_envelope(
    std::span<const std::pair<std::size_t, double>> points,
    std::size_t length) {
  if (points.size() < 2)
    throw InsufficientExtrema("envelope needs at least 2 extrema, got " +
                              std::to_string(points.size()));
  if (length < 2) throw TooShort("envelope target length must be >= 2");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].first <= points[i - 1].first)
      throw ConfigInvalid("envelope points must be strictly increasing");

  const double edge = static_cast<double>(length - 1);
  std::vector<Knot> knots;
  knots.reserve(points.size() + 4);

  // Mirror up to two extrema across each edge so the spline has support
  // outside the signal. A point sitting exactly on an edge would reflect
  // onto itself and is skipped.
  Knot left[2];
  std::size_t nleft = 0;
  for (std::size_t i = 0; i < points.size() && nleft < 2; ++i) {
    if (points[i].first == 0) continue;
    left[nleft++] = {-static_cast<double>(points[i].first), points[i].second};
  }
  while (nleft > 0) knots.push_back(left[--nleft]);

  for (const auto& p : points)
    knots.push_back({static_cast<double>(p.first), p.second});

  std::size_t nright = 0;
  for (std::size_t i = points.size(); i > 0 && nright < 2; --i) {
    const auto& p = points[i - 1];
    if (p.first == length - 1) continue;
    knots.push_back({2.0 * edge - static_cast<double>(p.first), p.second});
    ++nright;
  }

  return natural_spline_eval(knots, length);
}

SiftResult sift_one_imf(std::span<const double> x, const SiftConfig& cfg) {
  const std::size_t n = x.size();
  if (n < 3)
    throw TooShort("sifting needs at least 3 samples, got " +
                   std::to_string(n));

  std::vector<double> h(x.begin(), x.end());
  SiftResult res;
  for (int iter = 1; iter <= cfg.max_sift_iters; ++iter) {
    const Extrema ex = find_extrema(h);
    if (ex.maxima.size() < 2 || ex.minima.size() < 2) {
      if (iter == 1)
        throw InsufficientExtrema(
            "signal has too few oscillations to sift (maxima=" +
            std::to_string(ex.maxima.size()) +
            ", minima=" + std::to_string(ex.minima.size()) + ")");
      // Extrema ran out mid-sift: keep what we have as an unconverged IMF.
      res.converged = false;
      break;
    }

    const auto upper = spline_envelope(ex.maxima, n);
    const auto lower = spline_envelope(ex.minima, n);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = 0.5 * (upper[i] + lower[i]);
      num += m * m;
      den += h[i] * h[i];
      h[i] -= m;
    }
    res.iterations = iter;
    const double sd = den > 0.0 ? num / den : 0.0;
    if (sd < cfg.sd_threshold) {
      res.converged = true;
      break;
    }
    res.converged = false;
  }

  res.imf = std::move(h);
  res.proto_residue.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    res.proto_residue[i] = x[i] - res.imf[i];
  return res;
}

Decomposition emd(const Signal& x, const SiftConfig& cfg) {
  validate(x);
  const std::size_t n = x.samples.size();

  std::size_t cap;
  if (cfg.max_imfs > 0) {
    cap = static_cast<std::size_t>(cfg.max_imfs);
  } else {
    cap = static_cast<std::size_t>(std::floor(std::log2(
        static_cast<double>(n))));
    cap = std::max<std::size_t>(cap, 1);
  }

  Decomposition d;
  d.method = Method::emd;
  d.sample_rate = x.sample_rate;
  d.emd_calls = 1;

  std::vector<double> residue = x.samples;
  while (d.imfs.size() < cap) {
    SiftResult sr;
    try {
      sr = sift_one_imf(residue, cfg);
    } catch (const InsufficientExtrema&) {
      break;  // no oscillation left, the rest is the trend
    }
    ++d.sift_invocations;
    d.imfs.push_back(std::move(sr.imf));
    residue = std::move(sr.proto_residue);
  }

  d.residue = std::move(residue);
  d.imf_stats.reserve(d.imfs.size());
  for (const auto& imf : d.imfs) d.imf_stats.push_back(summarize(imf));
  return d;
}

}  // namespace seemd
