#include "nba/sandbox/world.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "nba/common/text.hpp"

namespace nba::sandbox {

namespace {

/// Modulo sampling keeps the stream identical across standard libraries
/// (the <random> distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t below(std::uint64_t n) { return g_() % n; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) { return lo + static_cast<std::int64_t>(below(hi - lo + 1)); }
  bool chance(unsigned percent) { return below(100) < percent; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 g_;
};

const std::string kSymbolLetters = "ABCDEFGHKLMNPRSTVWZ";
const std::vector<std::string> kAdjectives = {"serine-rich",   "zinc-binding",        "leucine-rich", "membrane-associated",
                                              "glycine-rich",  "coiled-coil",         "calcium-dependent",
                                              "nuclear",       "mitochondrial",       "ribosomal",    "proline-rich",
                                              "transmembrane", "cytoskeletal"};
const std::vector<std::string> kNouns = {"transport", "kinase",   "receptor", "channel",   "adaptor",
                                         "repeat",    "scaffold", "helicase", "transferase", "ligase"};
const std::vector<std::string> kKinds = {"protein", "regulator", "factor", "subunit", "family member"};
const std::vector<std::string> kSyllables = {"bra", "ven", "tor", "mal", "kes", "dri",  "lon", "fa", "nor",
                                             "sel", "quin", "ha", "ros", "ti",  "mer",  "gal", "ud", "pe",
                                             "vor", "an",  "lis", "cor", "bel", "dun",  "ska"};
const std::vector<std::string> kDiseaseForms = {"{} syndrome", "{}-{} disease", "{} myopathy", "{} retinal dystrophy",
                                                "{} leukodystrophy", "{} ataxia", "{} cardiomyopathy"};
const std::vector<std::string> kRoman = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"};

std::string chromosome_name(std::uint64_t i) {
  if (i < 22) return std::to_string(i + 1);
  return i == 22 ? "X" : "Y";
}

std::string refseq_accession(const std::string& chr) {
  int n = chr == "X" ? 23 : chr == "Y" ? 24 : std::stoi(chr);
  char buf[24];
  std::snprintf(buf, sizeof buf, "NC_%06d.%d", n, 10 + n % 3);
  return buf;
}

class Builder {
 public:
  explicit Builder(std::uint64_t seed) : rng_(seed) { world_.seed = seed; }

  World build() {
    make_organisms();
    make_genes(900);
    make_snps();
    make_diseases(60);
    make_dataset();
    return std::move(world_);
  }

 private:
  bool claim(const std::string& name) { return names_.insert(text::to_upper(name)).second; }

  std::string fresh_symbol() {
    for (;;) {
      std::string s;
      const auto len = rng_.range(3, 4);
      for (int i = 0; i < len; ++i) s += kSymbolLetters[rng_.below(kSymbolLetters.size())];
      s += std::to_string(rng_.range(1, 19));
      if (claim(s)) return s;
    }
  }

  std::string fresh_alias() {
    for (;;) {
      std::string s;
      if (rng_.chance(30)) {
        s = "C" + chromosome_name(rng_.below(22)) + "orf" + std::to_string(rng_.range(10, 199));
      } else {
        const auto len = rng_.range(2, 3);
        for (int i = 0; i < len; ++i) s += kSymbolLetters[rng_.below(kSymbolLetters.size())];
        s += std::to_string(rng_.range(100, 9999));
      }
      if (claim(s)) return s;
    }
  }

  std::string fresh_ensembl() {
    for (;;) {
      char buf[20];
      std::snprintf(buf, sizeof buf, "ENSG%011llu", static_cast<unsigned long long>(rng_.range(100000, 299999)));
      if (claim(buf)) return buf;
    }
  }

  std::string fresh_sequence(std::int64_t len) {
    static const char kBases[] = "ACGT";
    for (;;) {
      std::string s;
      for (std::int64_t i = 0; i < len; ++i) s += kBases[rng_.below(4)];
      if (claim(s)) return s;
    }
  }

  std::string pick_chromosome() {
    for (;;) {
      const auto i = rng_.below(24);
      if (i == 23 && !rng_.chance(30)) continue;  // Y carries few genes
      return chromosome_name(i);
    }
  }

  void make_organisms() {
    world_.organisms = {
        {"Homo sapiens", "human", 9606, "GRCh38.p14 Primary Assembly"},
        {"Mus musculus", "mouse", 10090, "GRCm39 C57BL/6J"},
        {"Rattus norvegicus", "rat", 10116, "mRatBN7.2"},
        {"Danio rerio", "zebrafish", 7955, "GRCz11 Primary Assembly"},
        {"Gallus gallus", "chicken", 9031, "bGalGal1.mat.broiler.GRCg7b"},
        {"Saccharomyces cerevisiae", "yeast", 4932, "S288C complete sequence"},
        {"Caenorhabditis elegans", "worm", 6239, "Bristol N2"},
        {"Drosophila melanogaster", "fly", 7227, "Release 6 plus ISO1 MT"},
    };
  }

  void make_genes(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      Gene g;
      g.uid = std::to_string(1000 + i * 53 + rng_.below(50));
      g.symbol = fresh_symbol();
      g.full_name = rng_.pick(kAdjectives) + " " + rng_.pick(kNouns) + " " + rng_.pick(kKinds) + " " +
                    std::to_string(rng_.range(1, 30));
      for (auto k = rng_.below(4); k > 0; --k) g.aliases.push_back(fresh_alias());
      if (rng_.chance(12)) g.previous.push_back(fresh_symbol());
      g.chromosome = rng_.chance(1) ? "X, Y" : pick_chromosome();
      g.start = rng_.range(100'000, 150'000'000);
      g.stop = g.start + rng_.range(1'000, 120'000);
      g.ensembl = fresh_ensembl();
      const auto t = rng_.below(100);
      g.type = t < 68 ? "protein-coding" : t < 88 ? "ncRNA" : "pseudo";
      world_.genes.push_back(std::move(g));
    }
  }

  std::uint64_t fresh_rsid() {
    for (;;) {
      const auto id = static_cast<std::uint64_t>(rng_.range(1'000'000, 1'600'000'000));
      if (claim("rs" + std::to_string(id))) return id;
    }
  }

  void make_snps() {
    for (const auto& g : world_.genes) {
      if (g.chromosome.find(',') != std::string::npos || !rng_.chance(20)) continue;
      Snp s;
      s.id = fresh_rsid();
      s.chromosome = g.chromosome;
      s.position = rng_.range(g.start, g.stop);
      s.genes = {g.symbol};
      world_.snps.push_back(std::move(s));
    }
    for (int i = 0; i < 40; ++i) {
      Snp s;
      s.id = fresh_rsid();
      s.chromosome = pick_chromosome();
      s.position = rng_.range(100'000, 200'000'000);
      s.withdrawn = i < 4;
      world_.snps.push_back(std::move(s));
    }
  }

  std::string fresh_mim(char prefix) {
    for (;;) {
      const auto n = std::to_string(rng_.range(100000, 619999));
      if (claim("MIM" + n)) return std::string(1, prefix) + n;
    }
  }

  std::string omim_for_gene(const Gene& g) {
    if (auto it = gene_entry_.find(g.symbol); it != gene_entry_.end()) return it->second;
    OmimEntry e;
    e.oid = fresh_mim(rng_.chance(15) ? '+' : '*');
    e.uid = e.oid.substr(1);
    e.title = text::to_upper(g.full_name) + "; " + g.symbol;
    world_.omim.push_back(e);
    gene_entry_[g.symbol] = e.uid;
    return e.uid;
  }

  std::string disease_word() {
    std::string w;
    const auto parts = rng_.range(2, 3);
    for (int i = 0; i < parts; ++i) w += rng_.pick(kSyllables);
    w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    return w;
  }

  void make_diseases(std::size_t n) {
    std::vector<const Gene*> coding;
    for (const auto& g : world_.genes)
      if (g.type == "protein-coding") coding.push_back(&g);
    while (world_.diseases.size() < n) {
      auto form = rng_.pick(kDiseaseForms);
      std::string name;
      for (std::size_t i = 0; i < form.size(); ++i) {
        if (form.compare(i, 2, "{}") == 0) {
          name += disease_word();
          ++i;
        } else {
          name += form[i];
        }
      }
      if (rng_.chance(30)) name += " type " + std::to_string(rng_.range(1, 9));
      if (!claim(name)) continue;

      Disease d;
      d.name = name;
      OmimEntry pheno;
      pheno.oid = fresh_mim('#');
      pheno.uid = pheno.oid.substr(1);
      std::string abbrev;
      for (const auto& w : text::split_any(name, " -"))
        if (!w.empty() && std::isalpha(static_cast<unsigned char>(w[0]))) abbrev += static_cast<char>(std::toupper(w[0]));
      pheno.title = text::to_upper(name) + "; " + abbrev;
      world_.omim.push_back(pheno);
      d.entries.push_back(pheno.uid);

      for (auto k = rng_.range(1, 5); k > 0;) {
        const Gene* g = rng_.pick(coding);
        if (std::find(d.genes.begin(), d.genes.end(), g->symbol) != d.genes.end()) continue;
        d.genes.push_back(g->symbol);
        d.entries.push_back(omim_for_gene(*g));
        --k;
      }
      if (rng_.chance(25)) {
        // Susceptibility locus with no molecular basis: never a gene answer.
        OmimEntry sus;
        sus.oid = fresh_mim('%');
        sus.uid = sus.oid.substr(1);
        sus.title = text::to_upper(name) + ", SUSCEPTIBILITY TO, " + std::to_string(rng_.range(1, 4)) + "; " + abbrev +
                    std::to_string(rng_.range(1, 4));
        world_.omim.push_back(sus);
        d.entries.push_back(sus.uid);
      }
      world_.diseases.push_back(std::move(d));
    }
  }

  BlastHit hit_on(const Organism& org, std::int64_t len, double score_scale) {
    BlastHit h;
    h.sciname = org.sciname;
    h.taxid = org.taxid;
    if (org.common == "human") {
      const auto chr = pick_chromosome();
      h.accession = refseq_accession(chr);
      h.title = org.sciname + " chromosome " + chr + ", " + org.assembly;
    } else if (org.common == "yeast") {
      h.accession = "NC_0011" + std::to_string(rng_.range(33, 48)) + ".9";
      h.title = org.sciname + " S288C chromosome " + rng_.pick(kRoman) + ", complete sequence";
    } else if (org.common == "fly") {
      static const std::vector<std::string> arms = {"2L", "2R", "3L", "3R", "4", "X"};
      h.accession = "NT_0377" + std::to_string(rng_.range(10, 99)) + ".4";
      h.title = org.sciname + " chromosome " + rng_.pick(arms) + ", " + org.assembly;
    } else {
      h.accession = "NC_0" + std::to_string(rng_.range(51000, 89999)) + ".1";
      h.title = org.sciname + " chromosome " + std::to_string(rng_.range(1, 20)) + ", " + org.assembly;
    }
    const auto start = rng_.range(10'000, 140'000'000);
    const bool minus = rng_.chance(25);
    h.hit_from = minus ? start + len - 1 : start;
    h.hit_to = minus ? start : start + len - 1;
    h.bit_score = static_cast<double>(static_cast<std::int64_t>(len * 18.5 * score_scale)) / 10.0;
    return h;
  }

  Alignment make_alignment(const Organism& org) {
    Alignment a;
    const auto len = rng_.range(40, 120);
    a.sequence = fresh_sequence(len);
    a.hits.push_back(hit_on(org, len, 1.0));
    for (auto k = rng_.range(1, 3); k > 0; --k) {
      const auto& other = rng_.chance(50) ? org : rng_.pick(world_.organisms);
      a.hits.push_back(hit_on(other, rng_.range(20, len - 5), 0.3 + 0.1 * static_cast<double>(k)));
    }
    world_.alignments.push_back(a);
    return a;
  }

  static std::string chr_gold(const std::string& chr) { return "chr" + chr; }

  void add(TaskType task, std::string question, std::vector<std::string> gold, bool excluded = false,
           std::string note = {}) {
    DatasetItem item;
    const auto n = 1 + std::count_if(world_.dataset.begin(), world_.dataset.end(),
                                     [&](const DatasetItem& d) { return d.task == task; });
    char id[64];
    std::snprintf(id, sizeof id, "%s-%02ld", std::string(to_string(task)).c_str(), static_cast<long>(n));
    item.id = id;
    item.task = task;
    item.question = std::move(question);
    item.gold = std::move(gold);
    item.excluded = excluded;
    item.refinement_note = std::move(note);
    world_.dataset.push_back(std::move(item));
  }

  /// Genes not yet used as a question subject, in a seeded order.
  std::vector<const Gene*> unused_genes(bool (*keep)(const Gene&)) {
    std::vector<const Gene*> out;
    for (const auto& g : world_.genes)
      if (!used_.contains(g.symbol) && keep(g)) out.push_back(&g);
    rng_.shuffle(out);
    return out;
  }

  void make_dataset() {
    constexpr std::size_t kPerTask = 50;

    // Nomenclature: alias -> symbol.
    {
      auto genes = unused_genes([](const Gene& g) { return !g.aliases.empty() || !g.previous.empty(); });
      std::size_t refined = 0;
      for (const Gene* g : genes) {
        if (world_.dataset.size() >= kPerTask - 2) break;
        used_.insert(g->symbol);
        if (refined < 4 && !g->previous.empty() && !g->aliases.empty()) {
          ++refined;
          add(TaskType::GeneAlias, "What is the official gene symbol of " + g->aliases.front() + "?",
              {g->previous.front(), g->symbol}, false,
              "gene renamed since the question was written; current symbol " + g->symbol + " accepted alongside " +
                  g->previous.front());
          continue;
        }
        const auto& alias = g->aliases.empty() ? g->previous.front() : rng_.pick(g->aliases);
        add(TaskType::GeneAlias, "What is the official gene symbol of " + alias + "?", {g->symbol});
      }
      for (int i = 0; i < 2; ++i)
        add(TaskType::GeneAlias, "What is the official gene symbol of " + fresh_alias() + "?", {fresh_symbol()}, true,
            "alias withdrawn from NCBI Gene; no record resolves it");
    }

    // Ensembl id -> symbol.
    {
      auto genes = unused_genes([](const Gene&) { return true; });
      for (std::size_t i = 0; i < kPerTask - 3; ++i) {
        used_.insert(genes[i]->symbol);
        add(TaskType::GeneNameConversion, "Convert " + genes[i]->ensembl + " to official gene symbol.",
            {genes[i]->symbol});
      }
      for (int i = 0; i < 3; ++i)
        add(TaskType::GeneNameConversion, "Convert " + fresh_ensembl() + " to official gene symbol.", {fresh_symbol()},
            true, "Ensembl identifier retired; NCBI Gene has no matching record");
    }

    // Gene -> chromosome.
    {
      auto genes = unused_genes([](const Gene& g) { return g.chromosome.find(',') == std::string::npos; });
      for (std::size_t i = 0; i < kPerTask; ++i) {
        used_.insert(genes[i]->symbol);
        add(TaskType::GeneLocation,
            "Which chromosome is " + genes[i]->symbol + " gene located on human genome?",
            {chr_gold(genes[i]->chromosome)});
      }
    }

    // SNP -> chromosome, SNP -> gene.
    {
      std::vector<const Snp*> genic, intergenic, withdrawn;
      for (const auto& s : world_.snps)
        (s.withdrawn ? withdrawn : s.genes.empty() ? intergenic : genic).push_back(&s);
      rng_.shuffle(genic);
      rng_.shuffle(intergenic);
      std::size_t g = 0, ig = 0;
      for (std::size_t i = 0; i < kPerTask - 2; ++i) {
        const Snp* s = i % 3 == 2 && ig < intergenic.size() ? intergenic[ig++] : genic[g++];
        add(TaskType::SnpLocation,
            "Which chromosome does SNP rs" + std::to_string(s->id) + " locate on human genome?",
            {chr_gold(s->chromosome)});
      }
      for (int i = 0; i < 2; ++i)
        add(TaskType::SnpLocation,
            "Which chromosome does SNP rs" + std::to_string(withdrawn[i]->id) + " locate on human genome?",
            {chr_gold(pick_chromosome())}, true, "rsID withdrawn from dbSNP; no location on record");

      for (std::size_t i = 0; i < kPerTask - 2; ++i) {
        const Snp* s = genic[g++];
        add(TaskType::GeneSnpAssociation, "Which gene is SNP rs" + std::to_string(s->id) + " associated with?",
            {s->genes.front()});
      }
      for (int i = 0; i < 2; ++i)
        add(TaskType::GeneSnpAssociation,
            "Which gene is SNP rs" + std::to_string(intergenic[ig++]->id) + " associated with?", {fresh_symbol()},
            true, "intergenic variant; dbSNP lists no gene for it");
    }

    // Disease -> genes.
    for (std::size_t i = 0; i < kPerTask; ++i) {
      const auto& d = world_.diseases[i];
      add(TaskType::GeneDiseaseAssociation, "What are genes related to " + d.name + "?", d.genes);
    }

    // Protein-coding or not.
    {
      auto coding = unused_genes([](const Gene& g) { return g.type == "protein-coding"; });
      auto other = unused_genes([](const Gene& g) { return g.type != "protein-coding"; });
      std::size_t c = 0, o = 0;
      for (std::size_t i = 0; i < kPerTask; ++i) {
        const bool yes = rng_.chance(60);
        const Gene* g = yes ? coding[c++] : other[o++];
        used_.insert(g->symbol);
        add(TaskType::ProteinCodingGenes, "Is " + g->symbol + " a protein-coding gene?", {yes ? "TRUE" : "NA"});
      }
    }

    // Sequence alignment.
    const Organism& human = world_.organisms.front();
    for (std::size_t i = 0; i < kPerTask; ++i) {
      const auto a = make_alignment(human);
      const auto& top = a.hits.front();
      const auto chr = top.title.substr(top.title.find("chromosome ") + 11);
      add(TaskType::AlignHuman, "Align the DNA sequence to the human genome:" + a.sequence,
          {"chr" + chr.substr(0, chr.find(',')) + ":" + std::to_string(std::min(top.hit_from, top.hit_to)) + "-" +
           std::to_string(std::max(top.hit_from, top.hit_to))});
    }
    for (std::size_t i = 0; i < kPerTask; ++i) {
      const auto& org = world_.organisms[i % world_.organisms.size()];
      const auto a = make_alignment(org);
      add(TaskType::AlignSpecies, "Which organism does the DNA sequence come from:" + a.sequence, {org.common});
    }
  }

  Rng rng_;
  World world_;
  std::set<std::string> names_;
  std::set<std::string> used_;
  std::map<std::string, std::string> gene_entry_;
};

}  // namespace

const Gene* World::gene_by_uid(const std::string& uid) const {
  for (const auto& g : genes)
    if (g.uid == uid) return &g;
  return nullptr;
}

const Snp* World::snp_by_id(std::uint64_t id) const {
  for (const auto& s : snps)
    if (s.id == id) return &s;
  return nullptr;
}

const OmimEntry* World::omim_by_uid(const std::string& uid) const {
  for (const auto& e : omim)
    if (e.uid == uid) return &e;
  return nullptr;
}

const Alignment* World::alignment_for(const std::string& sequence) const {
  for (const auto& a : alignments)
    if (a.sequence == sequence) return &a;
  return nullptr;
}

std::vector<const Gene*> World::search_symbol(const std::string& name) const {
  std::vector<const Gene*> exact, other;
  for (const auto& g : genes) {
    if (text::iequals(g.symbol, name)) {
      exact.push_back(&g);
      continue;
    }
    auto named = [&](const std::vector<std::string>& v) {
      return std::any_of(v.begin(), v.end(), [&](const std::string& a) { return text::iequals(a, name); });
    };
    if (named(g.aliases) || named(g.previous)) other.push_back(&g);
  }
  exact.insert(exact.end(), other.begin(), other.end());
  return exact;
}

const Gene* World::search_ensembl(const std::string& id) const {
  for (const auto& g : genes)
    if (text::iequals(g.ensembl, id)) return &g;
  return nullptr;
}

const Disease* World::search_disease(const std::string& name) const {
  for (const auto& d : diseases)
    if (text::iequals(d.name, text::trim(name))) return &d;
  return nullptr;
}

std::map<std::string, std::string> World::common_names() const {
  std::map<std::string, std::string> out;
  for (const auto& o : organisms) out[o.sciname] = o.common;
  return out;
}

World generate_world(std::uint64_t seed) { return Builder(seed).build(); }

}  // namespace nba::sandbox
