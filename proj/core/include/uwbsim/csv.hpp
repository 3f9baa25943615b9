#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "uwbsim/harness.hpp"

namespace uwbsim {

inline constexpr const char* kCsvHeader = "label,snr_db,ber,bit_errors,bits_tested,censored";

/// One row per point, rows ordered by label and then SNR; numbers in shortest
/// round-trip form so that equal runs give byte-identical files.
void write_csv(std::ostream& os, std::span<const BerCurve> curves);

/// Throws ArgumentError for an empty curve list and std::runtime_error when
/// the file cannot be written.
void emit_csv(std::span<const BerCurve> curves, const std::filesystem::path& path);

/// Reads back a file written by write_csv(). Only the CSV columns are
/// restored; curves come back in label order.
std::vector<BerCurve> parse_csv(std::istream& is);

}  // namespace uwbsim
