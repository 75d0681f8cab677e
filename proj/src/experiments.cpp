#include "sblimp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace sblimp {

namespace {

// Records at or past the transient cut; the whole log when the run died
// before reaching it.
std::pair<std::size_t, std::size_t> analysis_window(const SimLog& log,
                                                    double transient_s) {
  const auto& r = log.records;
  if (r.empty()) return {0, 0};
  std::size_t begin = 0;
  while (begin < r.size() && r[begin].t < transient_s) ++begin;
  if (begin >= r.size()) begin = 0;
  return {begin, r.size()};
}

}  // namespace

Metrics metrics(const SimLog& log, double transient_s) {
  if (log.records.empty()) throw std::invalid_argument("empty log");
  const auto [begin, end] = analysis_window(log, transient_s);
  Metrics m;
  double sum_v = 0.0, sum_a = 0.0, sum_p = 0.0;
  std::size_t saturated = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const SimRecord& rec = log.records[i];
    const double ve = rec.velocity_error.norm();
    const double ae = std::abs(rec.angular_error);
    const double pe = rec.position_error.norm();
    m.max_velocity_error = std::max(m.max_velocity_error, ve);
    m.max_angular_error = std::max(m.max_angular_error, ae);
    m.max_position_error = std::max(m.max_position_error, pe);
    sum_v += ve;
    sum_a += ae;
    sum_p += pe;
    if (rec.command.any_saturated()) ++saturated;
  }
  m.samples = end - begin;
  const double n = static_cast<double>(m.samples);
  m.avg_velocity_error = sum_v / n;
  m.avg_angular_error = sum_a / n;
  m.avg_position_error = sum_p / n;
  m.saturation_fraction = static_cast<double>(saturated) / n;
  return m;
}

std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::stable: return "stable";
    case StabilityClass::saturated_degraded: return "saturated-degraded";
    case StabilityClass::diverged: return "diverged";
  }
  return "unknown";
}

StabilityClass classify_stability(const SimLog& log,
                                  const ClassifyThresholds& th) {
  if (log.records.empty()) throw std::invalid_argument("empty log");
  if (log.diverged) return StabilityClass::diverged;

  const auto [begin, end] = analysis_window(log, th.transient_s);

  // Tracking loss: the final stretch of the run no longer follows the
  // reference at even loss_ratio accuracy.
  const double t_end = log.records[end - 1].t;
  const double t_begin = log.records[begin].t;
  const double window_start =
      t_end - th.final_window_fraction * (t_end - t_begin);
  double err_sum = 0.0, ref_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const SimRecord& rec = log.records[i];
    if (rec.t < window_start) continue;
    err_sum += rec.velocity_error.norm();
    ref_sum += rec.velocity_ref.norm();
    ++count;
  }
  if (count > 0) {
    const double avg_err = err_sum / static_cast<double>(count);
    const double avg_ref = std::max(ref_sum / static_cast<double>(count),
                                    th.reference_speed_floor);
    if (avg_err > th.loss_ratio * avg_ref) return StabilityClass::diverged;
  }

  const Metrics m = metrics(log, th.transient_s);
  if (m.saturation_fraction > th.saturation_fraction_min) {
    double baseline;
    if (th.baseline_error) {
      baseline = *th.baseline_error;
    } else {
      std::vector<double> unsaturated;
      for (std::size_t i = begin; i < end; ++i) {
        const SimRecord& rec = log.records[i];
        if (!rec.command.any_saturated())
          unsaturated.push_back(rec.velocity_error.norm());
      }
      if (unsaturated.empty())
        for (std::size_t i = begin; i < end; ++i)
          unsaturated.push_back(log.records[i].velocity_error.norm());
      const auto mid = unsaturated.begin() +
                       static_cast<std::ptrdiff_t>(unsaturated.size() / 2);
      std::nth_element(unsaturated.begin(), mid, unsaturated.end());
      baseline = *mid;
    }
    if (m.max_velocity_error > th.degraded_error_ratio * baseline)
      return StabilityClass::saturated_degraded;
  }
  return StabilityClass::stable;
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::buoyancy_arm: return "buoyancy_arm";
    case SweepParam::mass: return "mass";
    case SweepParam::speed: return "speed";
  }
  return "unknown";
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  if (!(spec.step > 0.0)) throw std::invalid_argument("step must be > 0");
  if (!(spec.min <= spec.max))
    throw std::invalid_argument("grid min must not exceed max");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double v = spec.min + spec.step * i;
    if (v > spec.max + 0.5 * spec.step) break;
    grid.push_back(std::min(v, spec.max));
  }
  return grid;
}

namespace {

SweepPoint evaluate_point(const SweepSpec& spec, double value) {
  SweepPoint point;
  point.value = value;

  DesignParams params = spec.base;
  double speed = spec.circle_speed;
  switch (spec.param) {
    case SweepParam::buoyancy_arm: params.buoyancy_arm = value; break;
    case SweepParam::mass: params.mass = value; break;
    case SweepParam::speed: speed = value; break;
  }
  try {
    validate(params);
    if (!(speed > 0.0)) throw std::invalid_argument("speed must be > 0");
  } catch (const std::invalid_argument& e) {
    point.valid_config = false;
    point.error = e.what();
    return point;
  }

  SimConfig cfg;
  cfg.dt = spec.dt;
  cfg.duration = spec.duration;
  const Circle circle(spec.circle_radius, speed, {0.0, 0.0});
  const SimLog log = run(params, spec.gains, cfg, circle);
  point.m = metrics(log, spec.transient_s);
  ClassifyThresholds th = spec.thresholds;
  th.transient_s = spec.transient_s;
  point.cls = classify_stability(log, th);
  point.diverged_flag = log.diverged;
  return point;
}

}  // namespace

SweepReport sweep(const SweepSpec& spec) {
  validate(spec.base);
  validate(spec.gains);
  const std::vector<double> grid = sweep_grid(spec);

  SweepReport report;
  report.param = spec.param;
  report.points.resize(grid.size());

  const unsigned workers =
      std::max(1u, std::min<unsigned>(spec.parallelism,
                                      static_cast<unsigned>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      report.points[i] = evaluate_point(spec, grid[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= grid.size()) return;
          report.points[i] = evaluate_point(spec, grid[i]);
        }
      });
    for (auto& th : pool) th.join();
  }

  if (spec.param == SweepParam::speed) {
    bool seen_diverged = false;
    double frontier = 0.0;
    for (const SweepPoint& p : report.points) {
      if (!p.valid_config) continue;
      if (p.cls == StabilityClass::diverged) {
        seen_diverged = true;
        frontier = p.value;
      } else if (seen_diverged) {
        report.anomalies.push_back(
            "non-monotone divergence frontier: " + to_string(p.cls) +
            " at speed " + std::to_string(p.value) + " above diverged speed " +
            std::to_string(frontier));
      }
    }
  }
  return report;
}

LinearFit linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("need at least two matching samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate x range");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::optional<double> saturation_onset(const SweepReport& report) {
  for (const SweepPoint& p : report.points)
    if (p.valid_config && p.m.saturation_fraction > 0.0) return p.value;
  return std::nullopt;
}

std::optional<double> divergence_onset(const SweepReport& report) {
  for (const SweepPoint& p : report.points)
    if (p.valid_config && p.cls == StabilityClass::diverged) return p.value;
  return std::nullopt;
}

namespace {

// Shorter than the reporting sweeps: the post-transient cycle is periodic
// well before 40 s, so onset detection does not need the full 100 s.
bool saturates_at(const DesignParams& params, const ControllerGains& gains,
                  double speed) {
  SimConfig cfg;
  cfg.duration = 40.0;
  const Circle circle(1.0, speed, {0.0, 0.0});
  const SimLog log = run(params, gains, cfg, circle);
  return metrics(log, 10.0).saturation_fraction > 0.0;
}

double onset_for_drag(const DesignParams& base, const ControllerGains& gains,
                      double drag_x, unsigned& evaluations) {
  DesignParams params = base;
  params.drag_x = drag_x;
  double lo = 0.01, hi = 2.0;
  if (saturates_at(params, gains, lo)) return lo;
  ++evaluations;
  if (!saturates_at(params, gains, hi)) return hi;
  ++evaluations;
  while (hi - lo > 0.005) {
    const double mid = 0.5 * (lo + hi);
    ++evaluations;
    if (saturates_at(params, gains, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

CalibrationResult calibrate_drag_for_onset(const DesignParams& base,
                                           const ControllerGains& gains,
                                           double target_onset,
                                           double tolerance) {
  CalibrationResult result;
  double lo = 0.002, hi = 0.08;  // onset decreases as drag grows
  double onset_lo = onset_for_drag(base, gains, lo, result.evaluations);
  double onset_hi = onset_for_drag(base, gains, hi, result.evaluations);
  if (onset_lo < target_onset) {
    result.drag_x = lo;
    result.onset_speed = onset_lo;
    return result;
  }
  if (onset_hi > target_onset) {
    result.drag_x = hi;
    result.onset_speed = onset_hi;
    return result;
  }
  double drag = lo, onset = onset_lo;
  for (int i = 0; i < 24 && std::abs(onset - target_onset) > 0.25 * tolerance;
       ++i) {
    drag = 0.5 * (lo + hi);
    onset = onset_for_drag(base, gains, drag, result.evaluations);
    if (onset > target_onset)
      lo = drag;
    else
      hi = drag;
  }
  result.drag_x = drag;
  result.onset_speed = onset;
  return result;
}

}  // namespace sblimp
