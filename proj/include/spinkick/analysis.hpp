#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinkick/correlator.hpp"

namespace spinkick {

/// Discrete log-log slopes Y_i of a correlation series, their running
/// averages, and the propagated standard errors. Slopes flagged invalid
/// (non-positive correlation value at either end) stay in the arrays as NaN
/// and are excluded from running averages, never silently dropped.
struct ExponentSeries {
  std::vector<int> left_steps;     // step index of each slope's left point
  std::vector<double> left_times;  // t at the left point (> 0)
  std::vector<double> local;       // Y_i
  std::vector<double> sigma_local;
  std::vector<double> running;  // mean of valid local[0..i]
  std::vector<double> sigma_running;
  std::vector<std::uint8_t> valid;
  std::vector<std::uint8_t> running_valid;
  ExperimentMeta meta;
};

/// Y_i = [ln C_{i+1} - ln C_i] / [ln t_{i+1} - ln t_i] with the standard
/// error propagation sigma_Y = sqrt((s_{i+1}/C_{i+1})^2 + (s_i/C_i)^2) /
/// [ln t_{i+1} - ln t_i]. Slopes start at the first index with t > 0 and
/// step >= slope_start_step (log t is undefined at t = 0; early kicked-chain
/// steps sit outside any power-law regime, so pipelines typically skip them).
ExponentSeries local_exponents(const CorrelationSeries& series, int slope_start_step = 1);

/// Fills running averages: Ybar_i = mean of the valid Y_j with j <= i and
/// sigma_Ybar_i = sqrt(sum sigma_j^2) / count, treating slopes as independent.
ExponentSeries running_average(const ExponentSeries& es);

/// Half-open index range into the slope arrays.
struct Window {
  int begin = 0;
  int end = 0;
};

/// Trailing fraction of a slope grid (the usual read-off window).
Window trailing_window(int size, double fraction = 1.0 / 3.0);

struct TransportClass {
  enum class Label { Ballistic, Superdiffusive, Diffusive, Intermediate };
  Label label = Label::Intermediate;
  double window_mean = 0.0;
  double nearest_reference = 0.0;  // one of -1, -2/3, -1/2
  double distance = 0.0;
};

std::string transport_label_name(TransportClass::Label label);

/// Maps the window-mean running exponent to the nearest of the ballistic
/// (-1), superdiffusive (-2/3) and diffusive (-1/2) references;
/// Intermediate when farther than `tolerance` from all three.
TransportClass classify(const ExponentSeries& es, Window window, double tolerance = 0.07);

struct ResilienceEntry {
  std::size_t input_index = 0;
  double window_mean = 0.0;
  double deviation = 0.0;  // window mean - (-2/3); negative = toward ballistic
};

/// Orders runs by |deviation from -2/3| ascending (ties keep input order).
/// All runs must share the same slope time grid.
std::vector<ResilienceEntry> resilience_rank(const std::vector<ExponentSeries>& runs, Window window);

/// First slope index at which the running exponent leaves the band
/// |Ybar + 2/3| <= band after having entered it; 0 if it never enters,
/// -1 if it never leaves. Used to compare breakdown onsets.
int breakdown_onset(const ExponentSeries& es, double band = 0.05);

}  // namespace spinkick
