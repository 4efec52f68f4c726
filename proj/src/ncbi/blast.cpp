#include "nba/ncbi/blast.hpp"

#include <regex>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/common/error.hpp"
#include "nba/common/text.hpp"
#include "nba/ncbi/errors.hpp"

namespace nba {

using nlohmann::json;

std::string_view to_string(BlastProgram p) { return p == BlastProgram::blastn ? "blastn" : "megablast"; }

std::optional<BlastProgram> blast_program_from_string(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  if (l == "blastn") return BlastProgram::blastn;
  if (l == "megablast") return BlastProgram::megablast;
  return std::nullopt;
}

std::string_view to_string(BlastStatus s) {
  switch (s) {
    case BlastStatus::New:
      return "New";
    case BlastStatus::Waiting:
      return "Waiting";
    case BlastStatus::Ready:
      return "Ready";
    case BlastStatus::Failed:
      return "Failed";
  }
  return "?";
}

std::string normalize_dna(std::string_view seq) {
  std::string out;
  out.reserve(seq.size());
  for (char c : seq) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u != 'A' && u != 'C' && u != 'G' && u != 'T' && u != 'N')
      throw PreconditionError(std::string("DNA sequence contains '") + c + "'");
    out.push_back(u);
  }
  if (out.size() < kMinBlastQueryLength)
    throw PreconditionError("DNA sequence of length " + std::to_string(out.size()) + " is shorter than " +
                            std::to_string(kMinBlastQueryLength));
  return out;
}

PutReceipt parse_put_response(std::string_view body) {
  const std::string s(body);
  const auto begin = s.find("QBlastInfoBegin");
  const auto end = s.find("QBlastInfoEnd", begin == std::string::npos ? 0 : begin);
  if (begin == std::string::npos || end == std::string::npos)
    throw RidParseError("BLAST Put response has no QBlastInfo block");
  const std::string block = s.substr(begin, end - begin);
  static const std::regex rid_re(R"(RID\s*=\s*([A-Za-z0-9_-]+))");
  static const std::regex rtoe_re(R"(RTOE\s*=\s*([0-9]+))");
  std::smatch m;
  if (!std::regex_search(block, m, rid_re)) throw RidParseError("BLAST Put response carries no RID");
  PutReceipt r{m[1].str(), 0};
  if (std::regex_search(block, m, rtoe_re)) r.rtoe_s = std::stoi(m[1].str());
  return r;
}

BlastStatus parse_search_info(std::string_view body) {
  static const std::regex re(R"(Status=([A-Z]+))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(body.begin(), body.end(), m, re)) throw ParseError("BLAST SearchInfo has no Status line");
  const auto st = m[1].str();
  if (st == "WAITING") return BlastStatus::Waiting;
  if (st == "READY") return BlastStatus::Ready;
  if (st == "FAILED" || st == "UNKNOWN") return BlastStatus::Failed;
  throw ParseError("unrecognised BLAST status " + st);
}

namespace {

std::string chromosome_from_title(const std::string& title) {
  static const std::regex re(R"(chromosome\s+([0-9]{1,2}|X|Y|MT|M)\b)", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(title, m, re)) return {};
  return "chr" + text::to_upper(m[1].str());
}

std::string organism_from_title(const std::string& title) {
  static const std::regex re(R"(\b([A-Z][a-z]+ [a-z]{2,})\b)");
  std::smatch m;
  if (!std::regex_search(title, m, re)) return {};
  return m[1].str();
}

BlastHit parse_json2(std::string_view report) {
  json j;
  try {
    j = json::parse(report);
  } catch (const json::exception& e) {
    throw ParseError(std::string("BLAST JSON report unreadable: ") + e.what());
  }
  try {
    const json& outputs = j.at("BlastOutput2");
    std::vector<const json*> reports;
    if (outputs.is_array())
      for (const auto& o : outputs) reports.push_back(&o);
    else
      reports.push_back(&outputs);
    if (reports.empty()) throw ParseError("BLAST JSON report has no BlastOutput2 entries");

    std::optional<BlastHit> best;
    for (const json* r : reports) {
      const json& search = r->at("report").at("results").at("search");
      if (!search.contains("hits")) continue;
      for (const auto& hit : search.at("hits")) {
        const json& desc = hit.at("description").at(0);
        for (const auto& hsp : hit.at("hsps")) {
          const double bits = hsp.at("bit_score").get<double>();
          if (best && bits <= best->bit_score) continue;
          BlastHit h;
          h.title = desc.value("title", "");
          h.accession = desc.value("accession", "");
          h.organism = desc.value("sciname", "");
          if (h.organism.empty()) h.organism = organism_from_title(h.title);
          h.chromosome = chromosome_from_title(h.title);
          const auto from = hsp.at("hit_from").get<std::int64_t>();
          const auto to = hsp.at("hit_to").get<std::int64_t>();
          h.start = std::min(from, to);
          h.end = std::max(from, to);
          h.bit_score = bits;
          best = std::move(h);
        }
      }
    }
    if (!best) throw NoHits("BLAST search finished without alignments");
    return *best;
  } catch (const json::exception& e) {
    throw ParseError(std::string("BLAST JSON report is missing fields: ") + e.what());
  }
}

BlastHit parse_text(std::string_view report) {
  struct Hsp {
    double bits = 0;
    std::optional<std::int64_t> first, last;
    std::string title;
  };
  std::vector<Hsp> hsps;
  std::string title;
  bool in_title = false;
  static const std::regex score_re(R"(Score\s*=\s*([0-9.]+)\s*bits)");
  static const std::regex sbjct_re(R"(^Sbjct\s+([0-9]+)\s+[A-Za-z\-]+\s+([0-9]+)\s*$)");

  std::istringstream in{std::string(report)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (!line.empty() && line[0] == '>') {
      title = text::trim(line.substr(1));
      in_title = true;
    } else if (in_title && line.rfind("Length=", 0) != 0 && !text::trim(line).empty()) {
      title += " " + text::trim(line);
    } else if (std::regex_search(line, m, score_re)) {
      in_title = false;
      hsps.push_back(Hsp{std::stod(m[1].str()), std::nullopt, std::nullopt, title});
    } else if (std::regex_search(line, m, sbjct_re)) {
      if (hsps.empty()) throw ParseError("BLAST text report has a Sbjct line outside an alignment");
      if (!hsps.back().first) hsps.back().first = std::stoll(m[1].str());
      hsps.back().last = std::stoll(m[2].str());
    }
    if (line.rfind("Length=", 0) == 0) in_title = false;
  }
  if (hsps.empty()) {
    if (report.find("No hits found") != std::string_view::npos) throw NoHits("BLAST search finished without alignments");
    throw ParseError("BLAST text report contains no alignments and no completion marker");
  }
  const Hsp* best = nullptr;
  for (const auto& h : hsps) {
    if (!h.first || !h.last) throw ParseError("BLAST text report is truncated inside an alignment");
    if (!best || h.bits > best->bits) best = &h;
  }
  BlastHit out;
  // Drop the accession in front of the title.
  const auto sp = best->title.find(' ');
  out.accession = best->title.substr(0, sp);
  out.title = sp == std::string::npos ? std::string{} : best->title.substr(sp + 1);
  out.chromosome = chromosome_from_title(out.title);
  out.organism = organism_from_title(out.title);
  out.start = std::min(*best->first, *best->last);
  out.end = std::max(*best->first, *best->last);
  out.bit_score = best->bits;
  return out;
}

}  // namespace

BlastHit parse_blast_top_hit(std::string_view report) {
  const auto t = text::trim(report);
  if (t.empty()) throw ParseError("BLAST report is empty");
  return t.front() == '{' ? parse_json2(t) : parse_text(t);
}

std::string render_coordinates(const BlastHit& hit) {
  return hit.chromosome + ":" + std::to_string(hit.start) + "-" + std::to_string(hit.end);
}

}  // namespace nba
