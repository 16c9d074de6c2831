#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <vector>

#include "sharpbounds/core.hpp"

namespace sharpbounds {

/// Cell counts of the 2x2 table of outcome D by exposure E. Both exposure
/// arms must be nonempty for the conditional risks to exist.
struct ContingencyCounts {
  std::uint64_t n_d1_e1 = 0;
  std::uint64_t n_d0_e1 = 0;
  std::uint64_t n_d1_e0 = 0;
  std::uint64_t n_d0_e0 = 0;

  std::uint64_t arm_total(int e) const;
  std::uint64_t total() const;
};

/// One record of a (exposure, outcome) stream. Values are validated to be
/// binary when the stream is consumed.
struct RawRecord {
  long e;
  long d;
};

/// p_e1 = arm-1 total / total, p(D=1|E=e) = cell / arm total.
/// Throws EmptyArm when an exposure arm has no records.
ObservedMargins margins_from_counts(const ContingencyCounts& counts);

/// Counts the stream into a ContingencyCounts and delegates to
/// margins_from_counts. Throws MalformedRow (carrying the 0-based record
/// index) on a non-binary value, EmptyArm on a missing arm.
ObservedMargins margins_from_records(std::span<const RawRecord> records);

/// The counting pass of margins_from_records.
ContingencyCounts count_records(std::span<const RawRecord> records);

/// JSON counts object: {"d1e1": n, "d0e1": n, "d1e0": n, "d0e0": n}.
/// Throws ParseError on malformed JSON, missing keys or negative counts.
ContingencyCounts read_counts_json(std::istream& in);

/// CSV with a header row; required columns `E` and `D` (case-insensitive),
/// values strictly "0"/"1", extra columns ignored. Any unparsable row is a
/// hard error: MalformedRow carries the 1-based file line. Throws ParseError
/// when the header lacks E or D.
std::vector<RawRecord> read_records_csv(std::istream& in);

}  // namespace sharpbounds
