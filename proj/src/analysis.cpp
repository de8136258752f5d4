#include "spinkick/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinkick {

namespace {

constexpr double kSuperdiffusive = -2.0 / 3.0;
constexpr double kDiffusive = -0.5;
constexpr double kBallistic = -1.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double window_mean_running(const ExponentSeries& es, Window window) {
  if (window.begin < 0 || window.end > static_cast<int>(es.running.size()) ||
      window.begin >= window.end)
    throw std::invalid_argument("empty or out-of-range window");
  double sum = 0.0;
  int count = 0;
  for (int i = window.begin; i < window.end; ++i) {
    if (!es.running_valid[i]) continue;
    sum += es.running[i];
    ++count;
  }
  if (count == 0) throw std::invalid_argument("window contains no valid running exponents");
  return sum / count;
}

}  // namespace

ExponentSeries local_exponents(const CorrelationSeries& series, int slope_start_step) {
  const auto& t = series.times;
  const auto& c = series.mean;
  if (t.size() != c.size() || t.size() != series.sem.size())
    throw std::invalid_argument("correlation series arrays have mismatched lengths");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw std::invalid_argument("times must be strictly increasing");
  if (slope_start_step < 1) throw std::invalid_argument("slope_start_step must be >= 1");

  ExponentSeries es;
  es.meta = series.meta;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i] <= 0.0) continue;  // ln t undefined at t = 0
    if (static_cast<int>(i) < slope_start_step) continue;
    es.left_steps.push_back(static_cast<int>(i));
    es.left_times.push_back(t[i]);
    const double dlogt = std::log(t[i + 1]) - std::log(t[i]);
    if (c[i] > 0.0 && c[i + 1] > 0.0) {
      es.local.push_back((std::log(c[i + 1]) - std::log(c[i])) / dlogt);
      const double rel0 = series.sem[i] / c[i];
      const double rel1 = series.sem[i + 1] / c[i + 1];
      es.sigma_local.push_back(std::sqrt(rel0 * rel0 + rel1 * rel1) / dlogt);
      es.valid.push_back(1);
    } else {
      es.local.push_back(kNaN);
      es.sigma_local.push_back(kNaN);
      es.valid.push_back(0);
    }
  }
  return es;
}

ExponentSeries running_average(const ExponentSeries& es) {
  if (es.local.size() != es.valid.size() || es.local.size() != es.sigma_local.size())
    throw std::invalid_argument("local exponents not filled");
  ExponentSeries out = es;
  out.running.assign(es.local.size(), kNaN);
  out.sigma_running.assign(es.local.size(), kNaN);
  out.running_valid.assign(es.local.size(), 0);
  double sum = 0.0;
  double var_sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < es.local.size(); ++i) {
    if (es.valid[i]) {
      sum += es.local[i];
      var_sum += es.sigma_local[i] * es.sigma_local[i];
      ++count;
    }
    if (count > 0) {
      out.running[i] = sum / count;
      out.sigma_running[i] = std::sqrt(var_sum) / count;
      out.running_valid[i] = 1;
    }
  }
  return out;
}

Window trailing_window(int size, double fraction) {
  if (size <= 0) return {0, 0};
  int len = static_cast<int>(std::ceil(size * fraction));
  len = std::clamp(len, 1, size);
  return {size - len, size};
}

std::string transport_label_name(TransportClass::Label label) {
  switch (label) {
    case TransportClass::Label::Ballistic: return "ballistic";
    case TransportClass::Label::Superdiffusive: return "superdiffusive";
    case TransportClass::Label::Diffusive: return "diffusive";
    case TransportClass::Label::Intermediate: return "intermediate";
  }
  return "?";
}

TransportClass classify(const ExponentSeries& es, Window window, double tolerance) {
  const double mean = window_mean_running(es, window);
  const struct {
    double ref;
    TransportClass::Label label;
  } refs[] = {{kBallistic, TransportClass::Label::Ballistic},
              {kSuperdiffusive, TransportClass::Label::Superdiffusive},
              {kDiffusive, TransportClass::Label::Diffusive}};

  TransportClass out;
  out.window_mean = mean;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : refs) {
    const double d = std::abs(mean - r.ref);
    if (d < best) {
      best = d;
      out.nearest_reference = r.ref;
      out.label = r.label;
    }
  }
  out.distance = best;
  if (best > tolerance) out.label = TransportClass::Label::Intermediate;
  return out;
}

std::vector<ResilienceEntry> resilience_rank(const std::vector<ExponentSeries>& runs, Window window) {
  if (runs.empty()) return {};
  for (const auto& run : runs)
    if (run.left_times != runs.front().left_times)
      throw std::invalid_argument("resilience_rank requires matching slope grids");

  std::vector<ResilienceEntry> out;
  out.reserve(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    ResilienceEntry e;
    e.input_index = i;
    e.window_mean = window_mean_running(runs[i], window);
    e.deviation = e.window_mean - kSuperdiffusive;
    out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(), [](const ResilienceEntry& a, const ResilienceEntry& b) {
    return std::abs(a.deviation) < std::abs(b.deviation);
  });
  return out;
}

int breakdown_onset(const ExponentSeries& es, double band) {
  bool entered = false;
  for (std::size_t i = 0; i < es.running.size(); ++i) {
    if (!es.running_valid[i]) continue;
    const bool inside = std::abs(es.running[i] - kSuperdiffusive) <= band;
    if (inside) {
      entered = true;
    } else if (entered) {
      return static_cast<int>(i);
    }
  }
  return entered ? -1 : 0;
}

}  // namespace spinkick
