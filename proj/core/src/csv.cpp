#include "flowknn/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace flowknn {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(begin));
      return fields;
    }
    fields.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

double parse_double(std::string_view field, std::size_t line, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw CsvError(line, std::string("unparseable ") + what + " '" + std::string(field) + "'");
  return value;
}

std::uint64_t parse_u64(std::string_view field, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw CsvError(line, std::string("unparseable ") + what + " '" + std::string(field) + "'");
  return value;
}

PacketMeta parse_packet_row(std::string_view line_text, std::size_t line) {
  const auto fields = split_fields(line_text);
  if (fields.size() != 7)
    throw CsvError(line, "expected 7 columns, got " + std::to_string(fields.size()));

  PacketMeta p;
  p.timestamp = parse_double(fields[0], line, "timestamp");
  if (!(std::isfinite(p.timestamp) && p.timestamp >= 0.0))
    throw CsvError(line, "timestamp must be finite and non-negative");
  p.device_id = std::string(fields[1]);
  p.src_ip = std::string(fields[2]);
  p.dst_ip = std::string(fields[3]);
  const auto protocol = protocol_from_string(fields[4]);
  if (!protocol)
    throw CsvError(line, "unknown protocol token '" + std::string(fields[4]) + "'");
  p.protocol = *protocol;
  p.size = parse_u64(fields[5], line, "size");
  const auto direction = direction_from_string(fields[6]);
  if (!direction)
    throw CsvError(line, "unknown direction token '" + std::string(fields[6]) + "'");
  p.direction = *direction;
  return p;
}

// getline that tolerates CRLF input.
bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

IngestResult ingest_packets(std::istream& in, IngestMode mode) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;

  if (read_line(in, line)) {
    line_no = 1;
    if (mode == IngestMode::strict && line != kPacketCsvHeader)
      throw CsvError(1, "bad header, expected '" + std::string(kPacketCsvHeader) + "'");
  }

  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      result.packets.push_back(parse_packet_row(line, line_no));
    } catch (const CsvError& e) {
      if (mode == IngestMode::strict) throw;
      ++result.rows_skipped;
      result.row_errors.push_back(e.what());
    }
  }
  return result;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  bool labeled = !rows.empty() && rows.front().label.has_value();
  for (const FeatureRow& r : rows)
    if (r.label.has_value() != labeled)
      throw std::invalid_argument("feature csv: rows must be uniformly labeled");

  out << kFeatureCsvHeader;
  if (labeled) out << ",label";
  out << '\n';
  for (const FeatureRow& r : rows) {
    const FeatureVector& f = r.features;
    out << r.device_id << ',' << format_double(r.window_start) << ','
        << format_double(f.icmp_pct) << ',' << format_double(f.tcp_pct) << ','
        << format_double(f.udp_pct) << ',' << format_double(f.ip_diversity) << ','
        << f.packet_count << ',' << format_double(f.mean_packet_size);
    if (labeled) out << ',' << *r.label;
    out << '\n';
  }
}

std::string feature_csv_string(std::span<const FeatureRow> rows) {
  std::ostringstream out;
  write_feature_csv(out, rows);
  return out.str();
}

std::vector<FeatureRow> read_feature_csv(std::istream& in) {
  std::vector<FeatureRow> rows;
  std::string line;
  if (!read_line(in, line)) throw CsvError(1, "missing header row");

  bool labeled;
  if (line == kFeatureCsvHeader) {
    labeled = false;
  } else if (line == std::string(kFeatureCsvHeader) + ",label") {
    labeled = true;
  } else {
    throw CsvError(1, "bad header, expected '" + std::string(kFeatureCsvHeader) +
                          "[,label]'");
  }

  const std::size_t expected = labeled ? 9 : 8;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != expected)
      throw CsvError(line_no, "expected " + std::to_string(expected) +
                                  " columns, got " + std::to_string(fields.size()));
    FeatureRow r;
    r.device_id = std::string(fields[0]);
    r.window_start = parse_double(fields[1], line_no, "window_start");
    r.features.icmp_pct = parse_double(fields[2], line_no, "icmp_pct");
    r.features.tcp_pct = parse_double(fields[3], line_no, "tcp_pct");
    r.features.udp_pct = parse_double(fields[4], line_no, "udp_pct");
    r.features.ip_diversity = parse_double(fields[5], line_no, "ip_diversity");
    r.features.packet_count = parse_u64(fields[6], line_no, "packet_count");
    r.features.mean_packet_size = parse_double(fields[7], line_no, "mean_packet_size");
    if (labeled) {
      if (fields[8].empty()) throw CsvError(line_no, "empty label");
      r.label = std::string(fields[8]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace flowknn
