#include "safegrid/harness/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace safegrid::harness {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string to_csv(const MetricsLog& log) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const EpisodeRow& r : log.rows) {
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.episode);
    out += ',';
    out += std::to_string(r.env_step);
    out += ',';
    out += format_double(r.episode_return);
    out += ',';
    out += std::to_string(r.length);
    out += ',';
    out += format_double(r.cost);
    out += ',';
    out += r.failed ? '1' : '0';
    out += ',';
    out += r.succeeded ? '1' : '0';
    out += ',';
    out += format_double(r.epsilon);
    out += ',';
    out += format_double(r.lambda);
    out += ',';
    if (r.has_s2c_loss) out += format_double(r.s2c_loss);
    out += '\n';
  }
  return out;
}

void write_csv(const MetricsLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("metrics: cannot write " + path.string());
  out << to_csv(log);
}

}  // namespace safegrid::harness
