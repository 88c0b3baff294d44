// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.
#include <sys/resource.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fred/analysis.hpp"
#include "fred/error.hpp"
#include "fred/metrics.hpp"
#include "fred/ngram_index.hpp"
#include "fred/parallel.hpp"
#include "fred/simfn.hpp"

namespace fs = std::filesystem;
using namespace fred;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double cpu_seconds() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return u.ru_utime.tv_sec + u.ru_stime.tv_sec + (u.ru_utime.tv_usec + u.ru_stime.tv_usec) * 1e-6;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path data(const std::string& name) { return fs::path(FRED_TEST_DATA) / name; }

fs::path scratch_dir() {
  const auto d = fs::temp_directory_path() / ("fred_accept_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
    out.push_back(line.substr(start, tab - start));
  }
  out.push_back(line.substr(start));
  return out;
}

// Zipf-ish word sampler over a synthetic lexicon.
class WordSource {
 public:
  WordSource(std::size_t lexicon, std::uint32_t seed) : rng_(seed) {
    std::vector<double> w(lexicon);
    for (std::size_t i = 0; i < lexicon; ++i) {
      w[i] = 1.0 / std::pow(static_cast<double>(i + 1), 1.05);
      words_.push_back(word(i));
    }
    dist_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
  }
  const std::string& next() { return words_[dist_(rng_)]; }
  std::string sentence(int mean_len) {
    std::uniform_int_distribution<int> len(mean_len / 2, mean_len + mean_len / 2);
    std::string s;
    for (int i = len(rng_); i > 0; --i) {
      if (!s.empty()) s += ' ';
      s += next();
    }
    return s;
  }
  const std::vector<std::string>& words() const { return words_; }

 private:
  static std::string word(std::size_t i) {
    static const char* syl[] = {"ka", "lu", "mi", "to", "ne", "ra", "si", "po", "de", "gu", "an", "ul"};
    std::string w;
    do {
      w += syl[i % 12];
      i /= 12;
    } while (i > 0);
    return w;
  }
  std::mt19937 rng_;
  std::vector<std::string> words_;
  std::discrete_distribution<std::size_t> dist_;
};

// 1
Outcome similarity_oracle() {
  std::ifstream in(data("simfn_golden_200.tsv"));
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0, bad = 0;
  double worst = 0;
  std::map<std::string, std::size_t> per_metric;
  while (std::getline(in, line)) {
    const auto f = split_tabs(line);
    if (f.size() != 5) continue;
    SimilarityFn fn = f[0] == "chrf"     ? SimilarityFn::chrf()
                      : f[0] == "chrf++" ? SimilarityFn::chrfpp()
                                         : SimilarityFn::bleu(TokenizerSpec{*parse_tokenizer_scheme(f[1]), nullptr});
    const double diff = std::abs(similarity(fn, f[2], f[3]) - std::stod(f[4]));
    worst = std::max(worst, diff);
    if (diff > 1e-4) ++bad;
    ++rows;
    ++per_metric[f[0]];
  }
  Outcome o;
  o.pass = bad == 0 && rows == 1000 && per_metric.size() == 3;
  o.detail = std::to_string(rows) + " rows (bleu 13a/char/zh, chrf, chrf++), max |diff| " + fmt("%.2e", worst) +
             ", " + std::to_string(bad) + " over 1e-4";
  return o;
}

// 2
Outcome brute_force_equivalence() {
  std::mt19937 rng(20240601);
  WordSource words(40, 5);
  std::uniform_int_distribution<int> n_train(1, 50), n_test(1, 10), len(2, 14);
  const std::vector<SimilarityFn> fns = {SimilarityFn::bleu(), SimilarityFn::chrf(), SimilarityFn::chrfpp()};
  double worst = 0;
  std::size_t argmax_mismatch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ParallelCorpus c;
    for (int i = n_train(rng); i > 0; --i) c.train.push_back({words.sentence(len(rng)), words.sentence(len(rng))});
    for (int i = n_test(rng); i > 0; --i) c.test.push_back({words.sentence(len(rng)), words.sentence(len(rng))});
    for (const auto& f : fns) {
      const auto fast = retrieval_proxy(c, f);
      const auto slow = retrieval_proxy_naive(c, f, f);
      worst = std::max(worst, std::abs(fast.r_score - slow.r_score));
      for (std::size_t i = 0; i < fast.items.size(); ++i) {
        argmax_mismatch += fast.items[i].argmax_train_index != slow.items[i].argmax_train_index;
      }
      worst = std::max(worst, std::abs(corpus_diversity(c, f) - corpus_diversity_naive(c, f)));
    }
  }
  Outcome o;
  o.pass = worst <= 1e-9 && argmax_mismatch == 0;
  o.detail = "100 corpora x 3 kinds, max |diff| " + fmt("%.2e", worst) + ", argmax mismatches " +
             std::to_string(argmax_mismatch);
  return o;
}

// 3
Outcome index_correctness() {
  std::mt19937 rng(77);
  const auto dir = scratch_dir();
  std::size_t count_bad = 0, invariant_bad = 0, roundtrip_bad = 0, trials = 0;
  std::uniform_int_distribution<int> stream_len(1, 10000), alphabet(2, 12), gram_len(1, 8), docs(1, 20);
  for (int s = 0; s < 40; ++s) {
    const int L = stream_len(rng);
    const auto A = static_cast<std::uint32_t>(alphabet(rng));
    std::uniform_int_distribution<std::uint32_t> tok(0, A - 1);
    std::vector<TokenIds> documents(docs(rng));
    for (int i = 0; i < L; ++i) documents[static_cast<std::size_t>(i) % documents.size()].push_back(tok(rng));
    std::erase_if(documents, [](const TokenIds& d) { return d.empty(); });
    const auto idx = NGramIndex::from_documents(documents, 9);
    const auto t = idx.tokens();
    idx.save(dir / "c3.idx");
    const auto back = NGramIndex::load(dir / "c3.idx");

    auto naive = [&](const std::vector<std::uint32_t>& g) {
      std::uint64_t n = 0;
      for (std::size_t i = 0; i + g.size() <= t.size(); ++i) n += std::equal(g.begin(), g.end(), t.begin() + i);
      return n;
    };
    std::uniform_int_distribution<std::size_t> pos(0, t.size() - 1);
    for (int q = 0; q < 25; ++q, ++trials) {
      std::vector<std::uint32_t> g;
      const int k = gram_len(rng);
      if (q % 2 == 0) {
        for (std::size_t i = pos(rng); i < t.size() && static_cast<int>(g.size()) < k && t[i] != kSeparatorId; ++i) {
          g.push_back(t[i]);
        }
        if (g.empty()) g.push_back(tok(rng));
      } else {
        for (int i = 0; i < k; ++i) g.push_back(tok(rng));
      }
      const auto c = idx.count(g);
      count_bad += c != naive(g);
      roundtrip_bad += back.count(g) != c;
      // prefix monotonicity and the sum rule over one-token extensions
      std::vector<std::uint32_t> prefix(g.begin(), g.end() - 1);
      if (!prefix.empty() && idx.count(prefix) < c) ++invariant_bad;
      std::uint64_t ext_sum = 0;
      auto ext = g;
      ext.push_back(0);
      for (std::uint32_t a = 0; a < A; ++a) {
        ext.back() = a;
        ext_sum += idx.count(ext);
      }
      std::uint64_t dead_ends = 0;  // occurrences followed by a separator or the stream end
      for (std::size_t i = 0; i + g.size() <= t.size(); ++i) {
        if (std::equal(g.begin(), g.end(), t.begin() + i) && (i + g.size() == t.size() || t[i + g.size()] == kSeparatorId)) {
          ++dead_ends;
        }
      }
      invariant_bad += ext_sum + dead_ends != c;
    }
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = trials == 1000 && count_bad == 0 && invariant_bad == 0 && roundtrip_bad == 0;
  o.detail = std::to_string(trials) + " trials over 40 streams (L <= 10000): count mismatches " +
             std::to_string(count_bad) + ", invariant violations " + std::to_string(invariant_bad) +
             ", round-trip mismatches " + std::to_string(roundtrip_bad);
  return o;
}

// 4
Outcome trivial_identities() {
  std::vector<std::string> failed;
  ParallelCorpus one;
  one.train = {{"the cat sat", "le chat"}};
  one.test = one.train;
  for (const auto& f : {SimilarityFn::bleu(), SimilarityFn::chrf(), SimilarityFn::chrfpp()}) {
    if (retrieval_proxy(one, f).r_score != 100.0) failed.push_back(std::string("R(") + to_string(f.kind) + ")");
    if (corpus_diversity(one, f) != 100.0) failed.push_back(std::string("D(") + to_string(f.kind) + ")");
  }
  ParallelCorpus disjoint;
  disjoint.train = {{"s", "aaaa bbbb"}, {"t", "abba"}};
  disjoint.test = {{"u", "xxxx yyyy"}};
  if (corpus_diversity(disjoint, SimilarityFn::chrf()) != 0.0) failed.push_back("D(chrf) disjoint");

  const auto vocab = SubwordVocab::from_pieces({"<unk>", "\xE2\x96\x81w", "\xE2\x96\x81x", "\xE2\x96\x81y"});
  const auto idx = NGramIndex::from_documents({{1, 1, 1, 1, 2}}, vocab.fingerprint());
  if (exposure({"x y x y", "y y y y"}, idx, vocab, 4).e_score != 0.0) failed.push_back("E absent");

  WordSource words(60, 8);
  ParallelCorpus sub;
  for (int i = 0; i < 30; ++i) sub.train.push_back({words.sentence(10) + " id" + std::to_string(i), words.sentence(10)});
  sub.test = {sub.train[4], sub.train[17], sub.train[29]};
  for (const auto& f : {SimilarityFn::bleu(), SimilarityFn::chrf(), SimilarityFn::chrfpp()}) {
    if (retrieval_proxy(sub, f).r_score != 100.0) failed.push_back(std::string("R subset (") + to_string(f.kind) + ")");
  }
  Outcome o;
  o.pass = failed.empty();
  o.detail = failed.empty() ? "R = D = 100 on 1x1 (3 kinds), D(chrf) = 0 disjoint, E = 0 absent, R = 100 test in train"
                            : "failed: ";
  for (const auto& f : failed) o.detail += f + " ";
  return o;
}

// 5
Outcome table_r2_reproduction() {
  const auto m = read_feature_matrix(data("into_high_rows.tsv"));
  struct Reference {
    const char* feature;
    double r2;
    const char* label;
  };
  const std::vector<Reference> expected = {{"r_score", 0.5821, "Strongest"},  {"n_token", 0.3415, "Moderate"},
                                        {"f_score", 0.2248, "Low-Moderate"}, {"d_score", 0.1204, "Low"},
                                        {"e_score", 0.0142, "Negligible"}, {"n_train", 0.0011, "None"}};
  const auto ranked = rank_features(m, {"n_train", "n_token", "f_score", "e_score", "d_score", "r_score"});
  std::map<std::string, RankedFeature> by_name;
  for (const auto& r : ranked) by_name[r.feature] = r;

  bool order_ok = true, values_ok = true, labels_ok = true;
  std::string got;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    order_ok = order_ok && ranked[i].feature == expected[i].feature;
    got += (i ? " > " : "") + ranked[i].feature + " " + fmt("%.4f", ranked[i].r2);
  }
  for (const auto& p : expected) {
    const auto& r = by_name.at(p.feature);
    values_ok = values_ok && std::abs(r.r2 - p.r2) <= 0.05;
    labels_ok = labels_ok && r.label == p.label;
  }
  const bool r_first = ranked.front().feature == "r_score";
  Outcome o;
  o.pass = r_first && order_ok && values_ok && labels_ok;
  o.detail = std::string("R first: ") + (r_first ? "yes" : "no") + "; order: " + (order_ok ? "ok" : "differs") +
             "; R2 within 0.05: " + (values_ok ? "yes" : "no") + "; labels: " + (labels_ok ? "ok" : "differ") +
             " | got " + got;
  return o;
}

// 6
Outcome outlier_flags() {
  const auto m = read_feature_matrix(data("into_high_rows.tsv"));
  const auto band = ReferenceBand::embedded();
  auto row_of = [&](const std::string& id) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (m.pair_ids[r] == id) return OutlierRow{id, *m.column("n_train")[r], m.target[r], m.column("r_score")[r],
                                                 m.column("f_score")[r]};
    }
    return OutlierRow{};
  };
  auto has = [](const OutlierResult& r, OutlierFlag f) {
    return std::find(r.flags.begin(), r.flags.end(), f) != r.flags.end();
  };
  const bool akk = has(flag_outliers(row_of("akk-en"), band), OutlierFlag::HighR);
  const bool tao = has(flag_outliers(row_of("tao-zh"), band), OutlierFlag::HighF);
  const auto mean = flag_outliers({"band-mean", 10000, 10.65, std::nullopt, std::nullopt}, band);
  const bool quiet = !has(mean, OutlierFlag::Over) && !has(mean, OutlierFlag::Under);
  Outcome o;
  o.pass = akk && tao && quiet;
  o.detail = std::string("akk HIGH_R ") + (akk ? "yes" : "no") + ", tao HIGH_F " + (tao ? "yes" : "no") +
             ", 10k band-mean row unflagged " + (quiet ? "yes" : "no");
  return o;
}

// 7
Outcome performance_envelope() {
  const unsigned threads = resolve_threads(0);
  WordSource words(30000, 42);
  ParallelCorpus c;
  c.train.reserve(15000);
  for (int i = 0; i < 15000; ++i) c.train.push_back({words.sentence(25), words.sentence(25)});
  for (int i = 0; i < 1000; ++i) c.test.push_back({words.sentence(25), words.sentence(25)});

  const double cpu0 = cpu_seconds();
  const auto wall0 = std::chrono::steady_clock::now();
  const auto f = SimilarityFn::bleu();
  const double r = retrieval_proxy(c, f, threads).r_score;
  const double d = corpus_diversity(c, f, threads);
  const double dr_cpu = cpu_seconds() - cpu0;
  const double dr_wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  const double budget = 4 * 0.9 * 3600;

  // ~100 MB of text, one document per line
  const auto dir = scratch_dir();
  std::uint64_t bytes = 0;
  {
    std::ofstream out(dir / "pretrain.txt", std::ios::binary);
    while (bytes < 100ull * 1000 * 1000) {
      const auto s = words.sentence(25) + "\n";
      out << s;
      bytes += s.size();
    }
  }
  std::vector<std::string> pieces = {"<unk>"};
  for (const auto& w : words.words()) pieces.push_back("\xE2\x96\x81" + w);
  const auto vocab = SubwordVocab::from_pieces(pieces);
  const auto i0 = std::chrono::steady_clock::now();
  auto idx = NGramIndex::build({dir / "pretrain.txt"}, vocab);
  idx.save(dir / "pretrain.fredidx");
  const double index_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - i0).count();
  const auto tokens = idx.size();
  idx = NGramIndex();
  const auto loaded = NGramIndex::load(dir / "pretrain.fredidx", vocab.fingerprint());

  std::vector<std::string> test;
  for (int i = 0; i < 700; ++i) test.push_back(words.sentence(25));
  const auto e0 = std::chrono::steady_clock::now();
  const auto e = exposure(test, loaded, vocab, 4, threads);
  const double e_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - e0).count();
  fs::remove_all(dir);

  Outcome o;
  o.pass = dr_cpu < budget && index_s < 600 && e_s < 60 && e.n_used >= 15000;
  o.detail = "D+R BLEU 1000x15000: " + fmt("%.1f", dr_cpu) + " CPU-s (" + fmt("%.1f", dr_wall) + " s wall, " +
             std::to_string(threads) + " threads; budget " + fmt("%.0f", budget) + " CPU-s; R " + fmt("%.2f", r) +
             ", D " + fmt("%.2f", d) + "); index " + fmt("%.0f", bytes / 1e6) + " MB / " + std::to_string(tokens) +
             " tokens: " + fmt("%.1f", index_s) + " s (< 600); E over " + std::to_string(e.n_used) +
             " unique 4-grams: " + fmt("%.2f", e_s) + " s (< 60)";
  return o;
}

// 8
Outcome manifest_templates() {
  const fs::path dir = fs::path(FRED_SOURCE_DIR) / "manifests" / "templates";
  std::vector<std::string> missing;
  for (const char* g : {"akk", "egy", "formosan", "americas", "african", "indic"}) {
    const auto text = slurp(dir / (std::string(g) + ".manifest"));
    if (text.find("[entry]") == std::string::npos || text.find("pair_id") == std::string::npos) missing.push_back(g);
  }
  Outcome o;
  o.pass = missing.empty();
  o.detail = missing.empty() ? "templates for akk, egy, formosan, americas, african, indic present; full metric "
                               "reproduction needs the original corpora, vocabulary and pre-training index"
                             : "missing or empty templates:";
  for (const auto& g : missing) o.detail += " " + g;
  return o;
}

}  // namespace

int main() {
  set_warning_sink([](std::string_view) {});
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"similarity oracle equivalence", similarity_oracle},
      {"brute-force equivalence for R and D", brute_force_equivalence},
      {"index correctness", index_correctness},
      {"trivial identities", trivial_identities},
      {"R2 ranking reproduction", table_r2_reproduction},
      {"outlier flags", outlier_flags},
      {"performance envelope", performance_envelope},
      {"manifest templates", manifest_templates},
  };
  const double limits[] = {5, 60, 60, 0, 1, 0, 0, 0};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limits[i] > 0 && secs >= limits[i]) {
      o.pass = false;
      o.detail += " (runtime limit " + fmt("%.0f", limits[i]) + " s exceeded)";
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s  [%s, %.2f s] %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
