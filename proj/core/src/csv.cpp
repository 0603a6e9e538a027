#include "nashadmm/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nashadmm {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<IterationTrace>& trace) {
  out << kTraceCsvHeader << '\n';
  for (const auto& t : trace) {
    out << t.k << ',' << format_real(t.rel_error) << ',' << format_real(t.consensus_residual) << ','
        << format_real(t.dual_sum_norm) << ',' << format_real(t.delta_x_norm) << ',' << format_real(t.delta_z_phi)
        << ',' << format_real(t.rate_product) << '\n';
  }
}

std::string format_trace_csv(const std::vector<IterationTrace>& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

void write_trace_csv_file(const std::string& path, const std::vector<IterationTrace>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_trace_csv(out, trace);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

namespace {

double parse_real(const std::string& field, std::size_t line) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("trace csv line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::vector<IterationTrace> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) throw std::runtime_error("trace csv: unexpected header");
  std::vector<IterationTrace> trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 7) throw std::runtime_error("trace csv line " + std::to_string(lineno) + ": expected 7 fields");
    IterationTrace t;
    const auto* kend = fields[0].data() + fields[0].size();
    if (std::from_chars(fields[0].data(), kend, t.k).ptr != kend) {
      throw std::runtime_error("trace csv line " + std::to_string(lineno) + ": bad iteration index");
    }
    t.rel_error = parse_real(fields[1], lineno);
    t.consensus_residual = parse_real(fields[2], lineno);
    t.dual_sum_norm = parse_real(fields[3], lineno);
    t.delta_x_norm = parse_real(fields[4], lineno);
    t.delta_z_phi = parse_real(fields[5], lineno);
    t.rate_product = parse_real(fields[6], lineno);
    trace.push_back(t);
  }
  return trace;
}

std::vector<IterationTrace> read_trace_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_trace_csv(in);
}

}  // namespace nashadmm
