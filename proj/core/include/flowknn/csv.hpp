#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowknn/features.hpp"
#include "flowknn/packet.hpp"

namespace flowknn {

// Parse failure at one CSV row; line numbers are 1-based and include the
// header line.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::string_view kPacketCsvHeader =
    "timestamp,device_id,src_ip,dst_ip,protocol,size,direction";
inline constexpr std::string_view kFeatureCsvHeader =
    "device_id,window_start,icmp_pct,tcp_pct,udp_pct,ip_diversity,"
    "packet_count,mean_packet_size";

// strict aborts on the first malformed row; lenient skips it and counts.
enum class IngestMode { strict, lenient };

struct IngestResult {
  std::vector<PacketMeta> packets;
  std::size_t rows_skipped = 0;
  std::vector<std::string> row_errors;  // one message per skipped row
};

// Reads the packet CSV schema (header row required). In strict mode any
// malformed row, including a bad header, throws CsvError.
IngestResult ingest_packets(std::istream& in, IngestMode mode = IngestMode::lenient);

// One row of the feature CSV schema; label is the optional trailing column.
struct FeatureRow {
  std::string device_id;
  double window_start = 0.0;
  FeatureVector features;
  std::optional<std::string> label;
};

// Rows must be uniformly labeled or uniformly unlabeled; floats are printed
// to 9 significant digits.
void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows);
std::string feature_csv_string(std::span<const FeatureRow> rows);

// Reads the feature CSV schema; the header decides whether the label column
// is present. Always strict.
std::vector<FeatureRow> read_feature_csv(std::istream& in);

// %.9g, the float format used by every CSV surface.
std::string format_double(double value);

}  // namespace flowknn
