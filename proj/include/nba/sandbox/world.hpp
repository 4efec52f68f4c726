#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nba/eval/dataset.hpp"

namespace nba::sandbox {

/// A synthetic, NCBI-shaped slice of biology. Every gene, SNP, disease and
/// sequence is invented; the shapes of the records follow the public
/// E-utils and BLAST responses so the real client code can run against it.
struct Gene {
  std::string uid;
  std::string symbol;
  std::string full_name;
  std::vector<std::string> aliases;
  std::vector<std::string> previous;  // retired symbols, still searchable
  std::string chromosome;             // "8", "X", or "X, Y" for pseudoautosomal genes
  std::int64_t start = 0;
  std::int64_t stop = 0;
  std::string ensembl;
  std::string type;  // protein-coding | ncRNA | pseudo
};

struct Snp {
  std::uint64_t id = 0;
  std::string chromosome;
  std::int64_t position = 0;
  std::vector<std::string> genes;  // symbols; empty when intergenic
  bool withdrawn = false;
};

struct OmimEntry {
  std::string uid;
  std::string oid;  // "*123456" gene, "#123456" phenotype, "%123456" unknown basis
  std::string title;
};

struct Disease {
  std::string name;
  std::vector<std::string> genes;     // symbols
  std::vector<std::string> entries;   // omim uids returned by esearch
};

struct Organism {
  std::string sciname;
  std::string common;
  std::uint32_t taxid = 0;
  std::string assembly;  // title suffix
};

struct BlastHit {
  std::string accession;
  std::string title;
  std::string sciname;
  std::uint32_t taxid = 0;
  std::int64_t hit_from = 0;
  std::int64_t hit_to = 0;
  double bit_score = 0;
};

/// Hits for one query, best first.
struct Alignment {
  std::string sequence;
  std::vector<BlastHit> hits;
};

struct World {
  std::uint64_t seed = 0;
  std::vector<Gene> genes;
  std::vector<Snp> snps;
  std::vector<OmimEntry> omim;
  std::vector<Disease> diseases;
  std::vector<Organism> organisms;
  std::vector<Alignment> alignments;
  std::vector<DatasetItem> dataset;

  const Gene* gene_by_uid(const std::string& uid) const;
  const Snp* snp_by_id(std::uint64_t id) const;
  const OmimEntry* omim_by_uid(const std::string& uid) const;
  const Alignment* alignment_for(const std::string& sequence) const;
  /// Genes whose symbol, alias or previous symbol equals `name`
  /// (case-insensitive), official symbol matches first.
  std::vector<const Gene*> search_symbol(const std::string& name) const;
  const Gene* search_ensembl(const std::string& id) const;
  const Disease* search_disease(const std::string& name) const;

  /// species_common_names lookup table (scientific name -> common name).
  std::map<std::string, std::string> common_names() const;
};

inline constexpr std::uint64_t kDefaultWorldSeed = 20240611;

/// Deterministic in `seed`: same seed, same world, same dataset (9 tasks x 50
/// questions, 9 excluded items).
World generate_world(std::uint64_t seed = kDefaultWorldSeed);

}  // namespace nba::sandbox
