#include "spinkick/output.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace spinkick {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: identical bytes on every platform
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_correlations_csv(const std::filesystem::path& path, const CorrelationSeries& series) {
  auto out = open_for_write(path);
  out << "step,time,mean,stderr,realizations\n";
  for (std::size_t i = 0; i < series.mean.size(); ++i) {
    out << i << ',' << format_double(series.times[i]) << ',' << format_double(series.mean[i]) << ','
        << format_double(series.sem[i]) << ',' << series.realizations << '\n';
  }
}

void write_exponents_csv(const std::filesystem::path& path, const ExponentSeries& es) {
  auto out = open_for_write(path);
  out << "step,time,Y,sigma_Y,Ybar,sigma_Ybar,valid\n";
  for (std::size_t i = 0; i < es.local.size(); ++i) {
    out << es.left_steps[i] << ',' << format_double(es.left_times[i]) << ','
        << format_double(es.local[i]) << ',' << format_double(es.sigma_local[i]) << ','
        << format_double(es.running[i]) << ',' << format_double(es.sigma_running[i]) << ','
        << static_cast<int>(es.valid[i]) << '\n';
  }
}

void write_profile_csv(const std::filesystem::path& path, const SpatialProfile& profile) {
  auto out = open_for_write(path);
  out << "step,site,value,stderr\n";
  for (Eigen::Index t = 0; t < profile.values.rows(); ++t)
    for (Eigen::Index q = 0; q < profile.values.cols(); ++q)
      out << t << ',' << q << ',' << format_double(profile.values(t, q)) << ','
          << format_double(profile.sem(t, q)) << '\n';
}

void write_scattering_csv(const std::filesystem::path& path, const ScatteringSeries& series) {
  auto out = open_for_write(path);
  out << "step,time,R,T_same,T_cross,rung\n";
  for (std::size_t i = 0; i < series.reflection.size(); ++i) {
    out << i << ',' << format_double(series.times[i]) << ',' << format_double(series.reflection[i])
        << ',' << format_double(series.trans_same[i]) << ',' << format_double(series.trans_cross[i])
        << ',' << format_double(series.rung_weight[i]) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_for_write(path);
  out << text;
}

}  // namespace spinkick
