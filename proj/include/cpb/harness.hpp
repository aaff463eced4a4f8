#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cpb/gibbs.hpp"

namespace cpb::harness {

enum class LabelMode { Classification, Ranking };

// CSV: one row per example, label first, features after; a leading header
// row (first token non-numeric) is skipped. Classification mode rejects
// labels outside {-1, +1}.
gibbs::LabeledDataset load_dataset(const std::string& path,
                                   LabelMode mode = LabelMode::Classification);
gibbs::LabeledDataset parse_dataset(std::istream& in, LabelMode mode);

// All (pos, neg) pairs of the dataset. When the pair count exceeds `cap`
// (cap > 0), whole observations are subsampled uniformly without
// replacement, shrinking the larger class first, until the product fits.
gibbs::PairSet build_pairs(const gibbs::LabeledDataset& data, long long cap,
                           std::uint64_t seed);

enum class MuMode { Fixed, WeightNorm };

struct SweepConfig {
  std::string train_path;
  std::string test_path;
  std::vector<double> c_grid;
  double delta = 0.01;
  MuMode mu_mode = MuMode::WeightNorm;
  double mu_fixed = 1.0;
  gibbs::TieMode tie_mode = gibbs::TieMode::Half;
  int epochs = 50;
  long long train_pair_cap = 0;  // 0 = unlimited
  long long test_pair_cap = 0;
  std::uint64_t seed = 1;
  std::string output_path;  // optional CSV target
};

struct SweepRecord {
  double c = 0.0;
  double ehat = 0.0;      // train Gibbs AUC error
  double bound_kl = 0.0;  // kl-inverted risk bound
  double bound_pinsker = 0.0;
  double test_err = 0.0;  // deterministic test pairwise error
  int lpos = 0;           // train pair construction
  int lneg = 0;
  double mu = 0.0;
  bool min_bound = false;  // argmin of the bound curve
  bool min_test = false;   // argmin of the test curve
};

std::vector<SweepRecord> run_sweep(const SweepConfig& config);

// Byte-stable serializations (shortest round-trip float format).
void write_sweep_csv(const std::vector<SweepRecord>& records,
                     std::ostream& out);
std::string sweep_records_to_json_lines(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> sweep_records_from_json_lines(const std::string& text);

enum class ValidityMode { Auc, Iid };

// Empirical check of the "with probability 1 - delta" contract: repeated
// draws from a two-Gaussian synthetic distribution, counting how often the
// true risk escapes the inverted bound.
struct ValidityConfig {
  ValidityMode mode = ValidityMode::Auc;
  std::vector<double> mean_pos{1.0};
  std::vector<double> mean_neg{-1.0};
  double sigma = 1.0;
  double class_prior = 0.5;  // P(Y = +1), IID mode
  int l_pos = 20;            // AUC mode
  int l_neg = 20;
  int m = 50;  // IID mode sample size
  int n_draws = 1000;
  double delta = 0.1;
  std::vector<double> direction{1.0};
  double mu = 2.0;
  int ref_per_class = 2000;  // reference sample size per class
  std::uint64_t seed = 1;
};

struct ValidityReport {
  int n_draws = 0;
  int violations = 0;
  double violation_rate = 0.0;
  double delta = 0.0;
  double reference_risk = 0.0;
  int vacuous_draws = 0;
};

ValidityReport run_validity(const ValidityConfig& config);

// Flat key=value config files; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
SweepConfig sweep_config_from_map(
    const std::map<std::string, std::string>& kv);
ValidityConfig validity_config_from_map(
    const std::map<std::string, std::string>& kv);

// Generator of bipartite pair samples: l_pos positives and l_neg negatives
// from two Gaussians, emitted as the row-major pair sample with features
// x_i - x_j and label +1. Matches bipartite_ranking_graph's numbering.
gibbs::SampleGenerator bipartite_pair_generator(int l_pos, int l_neg,
                                                std::vector<double> mean_pos,
                                                std::vector<double> mean_neg,
                                                double sigma);

// IID two-Gaussian classification sample of size m.
gibbs::SampleGenerator iid_class_generator(int m, std::vector<double> mean_pos,
                                           std::vector<double> mean_neg,
                                           double sigma, double class_prior);

}  // namespace cpb::harness
