#include "sharpbounds/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>

#include <json.hpp>

namespace sharpbounds {

EmptyArm::EmptyArm(int exposure)
    : Error("exposure arm E=" + std::to_string(exposure) + " has no records"),
      exposure(exposure) {}

std::uint64_t ContingencyCounts::arm_total(int e) const {
  return e == 1 ? n_d1_e1 + n_d0_e1 : n_d1_e0 + n_d0_e0;
}

std::uint64_t ContingencyCounts::total() const {
  return arm_total(0) + arm_total(1);
}

ObservedMargins margins_from_counts(const ContingencyCounts& counts) {
  const std::uint64_t arm1 = counts.arm_total(1);
  const std::uint64_t arm0 = counts.arm_total(0);
  if (arm1 == 0) throw EmptyArm(1);
  if (arm0 == 0) throw EmptyArm(0);
  const auto total = static_cast<double>(arm0 + arm1);
  return ObservedMargins(
      Probability(static_cast<double>(arm1) / total),
      Probability(static_cast<double>(counts.n_d1_e0) / static_cast<double>(arm0)),
      Probability(static_cast<double>(counts.n_d1_e1) / static_cast<double>(arm1)));
}

ContingencyCounts count_records(std::span<const RawRecord> records) {
  ContingencyCounts counts;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& [e, d] = records[i];
    if ((e != 0 && e != 1) || (d != 0 && d != 1)) {
      throw MalformedRow(i, "record " + std::to_string(i) + ": values (E=" +
                                std::to_string(e) + ", D=" + std::to_string(d) +
                                ") are not binary");
    }
    if (e == 1) {
      d == 1 ? ++counts.n_d1_e1 : ++counts.n_d0_e1;
    } else {
      d == 1 ? ++counts.n_d1_e0 : ++counts.n_d0_e0;
    }
  }
  return counts;
}

ObservedMargins margins_from_records(std::span<const RawRecord> records) {
  return margins_from_counts(count_records(records));
}

ContingencyCounts read_counts_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid counts JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("counts JSON must be an object");
  ContingencyCounts counts;
  const std::pair<const char*, std::uint64_t*> keys[] = {
      {"d1e1", &counts.n_d1_e1},
      {"d0e1", &counts.n_d0_e1},
      {"d1e0", &counts.n_d1_e0},
      {"d0e0", &counts.n_d0_e0},
  };
  for (const auto& [key, slot] : keys) {
    if (!j.contains(key)) {
      throw ParseError(std::string("counts JSON missing key '") + key + "'");
    }
    const auto& cell = j.at(key);
    if (!cell.is_number_integer() || cell.get<std::int64_t>() < 0) {
      throw ParseError(std::string("counts JSON key '") + key +
                       "' must be a nonnegative integer");
    }
    *slot = cell.get<std::uint64_t>();
  }
  return counts;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string lower_trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), is_space));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), is_space).base(), s.end());
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::vector<RawRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_csv_line(line);
  std::size_t e_col = header.size(), d_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = lower_trim(header[i]);
    if (name == "e") e_col = i;
    if (name == "d") d_col = i;
  }
  if (e_col == header.size() || d_col == header.size()) {
    throw ParseError("CSV header must contain columns E and D");
  }

  const auto parse_bit = [](const std::string& raw, std::size_t lineno,
                            const char* col) -> long {
    const std::string s = lower_trim(raw);
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw MalformedRow(lineno, "line " + std::to_string(lineno) + ": column " +
                                   col + " has value '" + raw +
                                   "' (expected 0 or 1)");
  };

  std::vector<RawRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // ignore blank lines (trailing newline etc.)
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() <= std::max(e_col, d_col)) {
      throw MalformedRow(lineno, "line " + std::to_string(lineno) +
                                     ": expected at least " +
                                     std::to_string(std::max(e_col, d_col) + 1) +
                                     " fields, got " +
                                     std::to_string(fields.size()));
    }
    records.push_back(RawRecord{parse_bit(fields[e_col], lineno, "E"),
                                parse_bit(fields[d_col], lineno, "D")});
  }
  return records;
}

}  // namespace sharpbounds
