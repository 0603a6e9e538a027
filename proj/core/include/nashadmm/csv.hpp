#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nashadmm/diagnostics.hpp"

namespace nashadmm {

inline constexpr const char* kTraceCsvHeader =
    "k,rel_error,consensus_residual,dual_sum_norm,delta_x_norm,delta_z_phi,rate_product";

/// Comma-separated rows with 17 significant digits and LF line endings.
void write_trace_csv(std::ostream& out, const std::vector<IterationTrace>& trace);
void write_trace_csv_file(const std::string& path, const std::vector<IterationTrace>& trace);
std::string format_trace_csv(const std::vector<IterationTrace>& trace);

/// Inverse of write_trace_csv. condition_flags are not serialized and read back as 0.
std::vector<IterationTrace> read_trace_csv(std::istream& in);
std::vector<IterationTrace> read_trace_csv_file(const std::string& path);

/// "%.17g", with "nan" / "inf" / "-inf" spelled out.
std::string format_real(double v);

}  // namespace nashadmm
