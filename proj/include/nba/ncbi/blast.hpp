#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nba {

enum class BlastProgram { blastn, megablast };
enum class BlastStatus { New, Waiting, Ready, Failed };

std::string_view to_string(BlastProgram p);
std::optional<BlastProgram> blast_program_from_string(std::string_view s);
std::string_view to_string(BlastStatus s);

inline constexpr std::size_t kMinBlastQueryLength = 11;

struct BlastJob {
  BlastProgram program = BlastProgram::megablast;
  std::string database;
  std::string sequence;  // uppercase ACGTN
  std::string rid;
  int rtoe_s = 0;  // NCBI's estimate of seconds to completion
  BlastStatus status = BlastStatus::New;
  std::string report;  // set when Ready
  bool report_from_cache = false;
  int polls = 0;
  std::int64_t waited_ms = 0;  // time spent sleeping between polls
};

/// Uppercases and strips whitespace; throws PreconditionError on letters
/// outside ACGTN or a sequence shorter than kMinBlastQueryLength.
std::string normalize_dna(std::string_view seq);

struct PutReceipt {
  std::string rid;
  int rtoe_s = 0;
};
/// Reads RID/RTOE from the QBlastInfo block of a Put response.
/// Throws RidParseError.
PutReceipt parse_put_response(std::string_view body);

/// Status line of a SearchInfo poll. UNKNOWN (expired RID) maps to Failed.
/// Throws ParseError when no status is present.
BlastStatus parse_search_info(std::string_view body);

struct BlastHit {
  std::string chromosome;  // "chr8", empty for non-chromosomal subjects
  std::int64_t start = 0;  // subject coordinates, start <= end
  std::int64_t end = 0;
  std::string organism;  // scientific name
  std::string accession;
  std::string title;
  double bit_score = 0;
};

/// Highest bit-score alignment of a JSON2_S or plain-text report.
/// Throws NoHits for a finished search without alignments and ParseError
/// for anything unreadable, truncated reports included.
BlastHit parse_blast_top_hit(std::string_view report);

/// "chr8:100-200".
std::string render_coordinates(const BlastHit& hit);

}  // namespace nba
