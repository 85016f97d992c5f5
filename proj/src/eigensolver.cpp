#include "ddestab/eigensolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace ddestab {

namespace {

constexpr double kMaxPhaseStep = std::numbers::pi / 4.0;
constexpr double kMinSegment = 2e-8;
constexpr int kMaxNudges = 5;
constexpr int kMaxDepth = 40;
constexpr int kMaxNewtonIters = 100;
constexpr double kClusterSize = 1e-7;

// Split positions along the longer side. Deliberately off-centre so that the
// real axis and -delta, which are usually at the centre of symmetric boxes, do not
// land on a cut.
constexpr std::array<double, 6> kSplitFractions = {0.4873, 0.5361, 0.4419, 0.5813, 0.3967, 0.6229};

enum class Side { Bottom, Right, Top, Left };

struct BoundaryHit {
  Side side;
};

double residual_scale(Complex z) noexcept { return 1e-10 * (1.0 + std::norm(z)); }

class WindingCounter {
 public:
  explicit WindingCounter(const SystemParams& p)
      : p_(p), density_(4.0 * (p.tau() + p.transit_time()) + 8.0) {}

  // Throws BoundaryHit when a zero sits on or next to the boundary.
  int count(const ContourBox& b) const {
    const std::array<Complex, 4> corners = {Complex{b.re_min, b.im_min}, Complex{b.re_max, b.im_min},
                                            Complex{b.re_max, b.im_max}, Complex{b.re_min, b.im_max}};
    std::array<Complex, 4> values{};
    for (int i = 0; i < 4; ++i) {
      values[i] = eval_H(p_, corners[i]);
      if (values[i] == Complex{0.0, 0.0}) throw BoundaryHit{static_cast<Side>(i)};
    }
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
      const int j = (i + 1) % 4;
      total += edge(corners[i], values[i], corners[j], values[j], static_cast<Side>(i));
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-3) {
      throw Error(ErrorCode::QuadratureNonInteger, "winding integral is not an integer");
    }
    return static_cast<int>(rounded);
  }

 private:
  double edge(Complex a, Complex ha, Complex b, Complex hb, Side side) const {
    const double len = std::abs(b - a);
    const int n = std::max(32, static_cast<int>(std::ceil(len * density_)));
    double total = 0.0;
    Complex prev = a, hprev = ha;
    for (int k = 1; k <= n; ++k) {
      const Complex z = (k == n) ? b : a + (b - a) * (static_cast<double>(k) / n);
      const Complex hz = (k == n) ? hb : eval_H(p_, z);
      if (hz == Complex{0.0, 0.0}) throw BoundaryHit{side};
      total += segment(prev, hprev, z, hz, side);
      prev = z;
      hprev = hz;
    }
    return total;
  }

  double segment(Complex a, Complex ha, Complex b, Complex hb, Side side) const {
    const double step = std::arg(hb / ha);
    if (std::abs(step) < kMaxPhaseStep) return step;
    if (std::abs(b - a) < kMinSegment) throw BoundaryHit{side};
    const Complex m = 0.5 * (a + b);
    const Complex hm = eval_H(p_, m);
    if (hm == Complex{0.0, 0.0}) throw BoundaryHit{side};
    return segment(a, ha, m, hm, side) + segment(m, hm, b, hb, side);
  }

  const SystemParams& p_;
  double density_;
};

std::optional<int> try_count(const WindingCounter& counter, const ContourBox& box) {
  try {
    return counter.count(box);
  } catch (const BoundaryHit&) {
    return std::nullopt;
  }
}

ContourBox grow(const ContourBox& box, Side side) {
  ContourBox out = box;
  const double d = 1e-4 * (1.0 + box.diameter());
  switch (side) {
    case Side::Bottom: out.im_min -= d; break;
    case Side::Right: out.re_max += d; break;
    case Side::Top: out.im_max += d; break;
    case Side::Left: out.re_min -= d; break;
  }
  return out;
}

class RootFinder {
 public:
  RootFinder(const SystemParams& p, double tol) : p_(p), tol_(tol), counter_(p), minus_delta_(-p.delta(), 0.0) {}

  RootSet run(const ContourBox& requested) {
    const CountResult top = count_zeros_nudged(p_, requested);
    RootSet out;
    out.box = top.box;
    out.total_count = top.count;
    process(top.box, top.count, 0, out);

    std::sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) {
      if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
      return a.lambda.imag() < b.lambda.imag();
    });
    merge_duplicates(out.roots);
    return out;
  }

 private:
  void process(const ContourBox& cell, int count, int depth, RootSet& out) {
    const bool holds_structural = cell.strictly_contains(minus_delta_);
    const int remaining = count - (holds_structural ? 1 : 0);
    auto emit_structural = [&] {
      if (holds_structural) {
        out.roots.push_back(Root{minus_delta_, std::abs(eval_H(p_, minus_delta_)), 0, true, 1});
      }
    };

    if (remaining <= 0) {
      emit_structural();
      return;
    }
    if (remaining == 1 && polish_in_cell(cell, holds_structural, 1, out)) {
      emit_structural();
      return;
    }
    if (remaining > 1 && std::max(cell.width(), cell.height()) < kClusterSize * (1.0 + std::abs(cell.center()))) {
      if (!polish_in_cell(cell, holds_structural, remaining, out)) {
        out.failures.push_back({cell, remaining, ErrorCode::NewtonDiverged});
      }
      emit_structural();
      return;
    }
    if (depth >= kMaxDepth) {
      out.failures.push_back({cell, remaining,
                              remaining == 1 ? ErrorCode::NewtonDiverged : ErrorCode::MaxDepthExceeded});
      emit_structural();
      return;
    }
    if (!subdivide(cell, count, depth, out)) {
      out.failures.push_back({cell, remaining, ErrorCode::BoundaryZero});
      emit_structural();
    }
  }

  bool subdivide(const ContourBox& cell, int count, int depth, RootSet& out) {
    const bool split_re = cell.width() >= cell.height();
    for (const double frac : kSplitFractions) {
      ContourBox a = cell, b = cell;
      if (split_re) {
        const double cut = cell.re_min + frac * cell.width();
        a.re_max = cut;
        b.re_min = cut;
      } else {
        const double cut = cell.im_min + frac * cell.height();
        a.im_max = cut;
        b.im_min = cut;
      }
      const auto ca = try_count(counter_, a);
      if (!ca) continue;
      const auto cb = try_count(counter_, b);
      if (!cb || *ca + *cb != count) continue;
      if (*ca > 0) process(a, *ca, depth + 1, out);
      if (*cb > 0) process(b, *cb, depth + 1, out);
      return true;
    }
    return false;
  }

  bool polish_in_cell(const ContourBox& cell, bool deflated, int multiplicity, RootSet& out) {
    const double margin = std::max(10.0 * tol_, 1e-9);
    auto accept = [&](const NewtonResult& r) {
      if (!r.converged || !cell.contains(r.lambda, margin)) return false;
      Complex z = r.lambda;
      if (std::abs(z.imag()) < 10.0 * tol_ * (1.0 + std::abs(z))) z.imag(0.0);
      out.roots.push_back(Root{z, std::abs(eval_H(p_, z)), r.iterations, false, multiplicity});
      return true;
    };
    if (accept(newton_polish(p_, cell.center(), tol_, deflated, multiplicity))) return true;
    constexpr int kGrid = 8;
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const Complex start{cell.re_min + (i + 0.5) * cell.width() / kGrid,
                            cell.im_min + (j + 0.5) * cell.height() / kGrid};
        if (accept(newton_polish(p_, start, tol_, deflated, multiplicity))) return true;
      }
    }
    return false;
  }

  void merge_duplicates(std::vector<Root>& roots) const {
    std::vector<Root> merged;
    for (const Root& r : roots) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const Root& m) {
        return !m.structural && !r.structural && std::abs(m.lambda - r.lambda) <= 10.0 * tol_;
      });
      if (it != merged.end()) {
        it->multiplicity += r.multiplicity;
      } else {
        merged.push_back(r);
      }
    }
    roots = std::move(merged);
  }

  const SystemParams& p_;
  double tol_;
  WindingCounter counter_;
  Complex minus_delta_;
};

}  // namespace

double ContourBox::diameter() const noexcept { return std::hypot(width(), height()); }

bool ContourBox::contains(Complex z, double margin) const noexcept {
  return z.real() >= re_min - margin && z.real() <= re_max + margin && z.imag() >= im_min - margin &&
         z.imag() <= im_max + margin;
}

bool ContourBox::strictly_contains(Complex z) const noexcept {
  return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
}

int RootSet::listed_multiplicity() const noexcept {
  int n = 0;
  for (const Root& r : roots) n += r.multiplicity;
  return n;
}

CountResult count_zeros_nudged(const SystemParams& p, const ContourBox& box) {
  if (!(box.re_min < box.re_max) || !(box.im_min < box.im_max)) {
    throw Error(ErrorCode::InvalidArgument, "contour box must have positive width and height");
  }
  const WindingCounter counter(p);
  ContourBox current = box;
  for (int attempt = 0; attempt <= kMaxNudges; ++attempt) {
    try {
      return {counter.count(current), current};
    } catch (const BoundaryHit& hit) {
      current = grow(current, hit.side);
    }
  }
  throw Error(ErrorCode::BoundaryZero, "zero of H on the contour after repeated nudging");
}

int count_zeros(const SystemParams& p, const ContourBox& box) { return count_zeros_nudged(p, box).count; }

NewtonResult newton_polish(const SystemParams& p, Complex start, double tol, bool deflated,
                           int multiplicity) {
  NewtonResult res{start, 0, false};
  Complex z = start;
  Complex best = start;
  double best_residual = std::abs(eval_H(p, start));
  for (int it = 1; it <= kMaxNewtonIters; ++it) {
    const Complex fv = deflated ? eval_deflated(p, z) : eval_H(p, z);
    const Complex fp = deflated ? eval_deflated_prime(p, z) : eval_H_prime(p, z);
    res.iterations = it;
    if (fv == Complex{0.0, 0.0}) {
      res.lambda = z;
      res.converged = true;
      return res;
    }
    if (fp == Complex{0.0, 0.0}) break;
    const Complex step = static_cast<double>(multiplicity) * fv / fp;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    const double r = std::abs(eval_H(p, z));
    if (r <= best_residual) {
      best_residual = r;
      best = z;
    }
    if (std::abs(step) < tol) {
      res.lambda = z;
      res.converged = true;
      return res;
    }
  }
  // Multiple zeros stall at the rounding floor before the step drops below tol.
  res.lambda = best;
  res.converged = best_residual <= residual_scale(best);
  return res;
}

RootSet find_roots(const SystemParams& p, const ContourBox& box, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  return RootFinder(p, tol).run(box);
}

ContourBox spectrum_box(const SystemParams& p, double sigma) {
  const double c = eigenvalue_bound_radius(p.beta(), p.delta());
  const double im_bound =
      std::sqrt(std::abs(p.beta()) * std::exp(sigma * p.tau()) *
                (1.0 + std::exp((sigma - p.delta()) * p.transit_time())));
  const double h = std::max(c + sigma + 1.0, im_bound + 1.0);
  return {-sigma, c + 1.0, -h, h};
}

RootSet spectrum(const SystemParams& p, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  const ContourBox box = spectrum_box(p, sigma);
  if (p.beta() == 0.0) {
    RootSet out;
    out.box = box;
    if (-p.alpha() >= -sigma) {
      out.roots.push_back(Root{Complex{-p.alpha(), 0.0}, 0.0, 0, false, 1});
      out.total_count = 1;
    }
    return out;
  }

  RootSet all = find_roots(p, box);
  RootSet out;
  out.box = all.box;
  out.failures = std::move(all.failures);
  for (const Root& r : all.roots) {
    if (r.structural) continue;
    if (std::abs(eval_G(p, r.lambda)) > 1e-8) {
      out.failures.push_back({ContourBox{r.lambda.real(), r.lambda.real(), r.lambda.imag(), r.lambda.imag()},
                              r.multiplicity, ErrorCode::NewtonDiverged});
      continue;
    }
    out.roots.push_back(r);
  }
  out.total_count = all.total_count;
  for (const Root& r : all.roots) {
    if (r.structural) out.total_count -= r.multiplicity;
  }
  return out;
}

SpectralBound spectral_bound(const SystemParams& p, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  const RootSet s = spectrum(p, sigma);
  if (!s.failures.empty()) {
    throw Error(s.failures.front().reason, "spectral search left unresolved cells");
  }
  if (s.roots.empty()) return {-sigma, true};
  double best = -std::numeric_limits<double>::infinity();
  for (const Root& r : s.roots) best = std::max(best, r.lambda.real());
  return {best, false};
}

}  // namespace ddestab
