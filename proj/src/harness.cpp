#include "cpb/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "cpb/bounds.hpp"
#include "cpb/klcore.hpp"

namespace cpb::harness {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
  if (b == e) return false;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

gibbs::LabeledDataset parse_dataset(std::istream& in, LabelMode mode) {
  gibbs::LabeledDataset data;
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() < 2) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": need a label and at least one feature");
    }
    double label;
    if (first_content && !parse_double(fields[0], label)) {
      first_content = false;  // header row
      continue;
    }
    first_content = false;
    if (!parse_double(fields[0], label)) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": bad label '" + fields[0] + "'");
    }
    if (mode == LabelMode::Classification && label != 1.0 && label != -1.0) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": label must be +1 or -1");
    }
    const int d = static_cast<int>(fields.size()) - 1;
    if (data.dim == 0) {
      data.dim = d;
    } else if (data.dim != d) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": expected " + std::to_string(data.dim) +
                               " features, got " + std::to_string(d));
    }
    for (int k = 0; k < d; ++k) {
      double v;
      if (!parse_double(fields[k + 1], v) || !std::isfinite(v)) {
        throw std::runtime_error("dataset line " + std::to_string(line_no) +
                                 ": bad feature '" + fields[k + 1] + "'");
      }
      data.features.push_back(v);
    }
    data.labels.push_back(label);
  }
  if (data.rows() == 0) throw std::runtime_error("dataset is empty");
  return data;
}

gibbs::LabeledDataset load_dataset(const std::string& path, LabelMode mode) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  return parse_dataset(in, mode);
}

gibbs::PairSet build_pairs(const gibbs::LabeledDataset& data, long long cap,
                           std::uint64_t seed) {
  gibbs::PairSet pairs;
  for (int i = 0; i < data.rows(); ++i) {
    (data.labels[i] > 0 ? pairs.pos : pairs.neg).push_back(i);
  }
  if (pairs.pos.empty() || pairs.neg.empty()) {
    throw std::runtime_error("build_pairs: dataset has a single class");
  }
  if (cap > 0 && pairs.pair_count() > cap) {
    if (cap < 1) throw std::invalid_argument("build_pairs: cap must be >= 1");
    std::mt19937_64 rng(seed);
    std::shuffle(pairs.pos.begin(), pairs.pos.end(), rng);
    std::shuffle(pairs.neg.begin(), pairs.neg.end(), rng);
    // Drop whole observations (never individual pairs) so the pair sample
    // keeps its full bipartite structure; shrink the larger class first.
    while (pairs.pair_count() > cap) {
      if (pairs.pos.size() >= pairs.neg.size() && pairs.pos.size() > 1) {
        pairs.pos.pop_back();
      } else if (pairs.neg.size() > 1) {
        pairs.neg.pop_back();
      } else {
        pairs.pos.pop_back();  // cap < 1 is rejected above
      }
    }
    std::sort(pairs.pos.begin(), pairs.pos.end());
    std::sort(pairs.neg.begin(), pairs.neg.end());
  }
  return pairs;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  if (config.c_grid.empty()) throw std::invalid_argument("empty C grid");
  if (!(config.delta > 0.0 && config.delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1]");
  }
  auto train = load_dataset(config.train_path);
  auto test = load_dataset(config.test_path);
  auto train_pairs =
      build_pairs(train, config.train_pair_cap, gibbs::derive_seed(config.seed, 1));
  auto test_pairs =
      build_pairs(test, config.test_pair_cap, gibbs::derive_seed(config.seed, 2));
  const int lpos = static_cast<int>(train_pairs.pos.size());
  const int lneg = static_cast<int>(train_pairs.neg.size());
  const int lmin = std::min(lpos, lneg);

  std::vector<double> grid = config.c_grid;
  std::sort(grid.begin(), grid.end());

  std::vector<SweepRecord> records;
  records.reserve(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double c = grid[gi];
    if (!(c > 0.0)) throw std::invalid_argument("C values must be > 0");
    const double lambda = 1.0 / (c * train.rows());
    auto scorer = gibbs::train_linear(train, lambda, config.epochs,
                                      gibbs::derive_seed(config.seed, 100 + gi));
    double wnorm = 0.0;
    for (double v : scorer.weights) wnorm += v * v;
    wnorm = std::sqrt(wnorm);

    double mu = config.mu_mode == MuMode::Fixed ? config.mu_fixed : wnorm;
    mu = std::max(mu, 1e-8);
    std::vector<double> direction = scorer.weights;
    if (wnorm < 1e-12) {
      direction.assign(train.dim, 0.0);
      direction[0] = 1.0;
    }
    gibbs::GaussianLinearPosterior post(direction, mu);

    SweepRecord rec;
    rec.c = c;
    rec.ehat = gibbs::gibbs_error_auc(post, train, train_pairs);
    auto bound = bounds::auc_linear_bound(lmin, mu, config.delta, rec.ehat);
    rec.bound_kl = bound.risk_bound_kl;
    rec.bound_pinsker = bound.risk_bound_pinsker;
    rec.test_err =
        gibbs::empirical_auc_risk(scorer, test, test_pairs, config.tie_mode);
    rec.lpos = lpos;
    rec.lneg = lneg;
    rec.mu = mu;
    records.push_back(rec);
  }

  auto mark_min = [&](auto key, bool SweepRecord::* flag) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (key(records[i]) < key(records[best])) best = i;
    }
    records[best].*flag = true;
  };
  mark_min([](const SweepRecord& r) { return r.bound_kl; },
           &SweepRecord::min_bound);
  mark_min([](const SweepRecord& r) { return r.test_err; },
           &SweepRecord::min_test);

  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) {
      throw std::runtime_error("cannot write CSV: " + config.output_path);
    }
    write_sweep_csv(records, out);
  }
  return records;
}

void write_sweep_csv(const std::vector<SweepRecord>& records,
                     std::ostream& out) {
  out << "c,ehat,bound_kl,bound_pinsker,test_err,lpos,lneg,mu,min_bound,"
         "min_test\n";
  for (const auto& r : records) {
    out << format_double(r.c) << ',' << format_double(r.ehat) << ','
        << format_double(r.bound_kl) << ',' << format_double(r.bound_pinsker)
        << ',' << format_double(r.test_err) << ',' << r.lpos << ',' << r.lneg
        << ',' << format_double(r.mu) << ',' << (r.min_bound ? 1 : 0) << ','
        << (r.min_test ? 1 : 0) << '\n';
  }
}

std::string sweep_records_to_json_lines(
    const std::vector<SweepRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::json j{{"c", r.c},
                     {"ehat", r.ehat},
                     {"bound_kl", r.bound_kl},
                     {"bound_pinsker", r.bound_pinsker},
                     {"test_err", r.test_err},
                     {"lpos", r.lpos},
                     {"lneg", r.lneg},
                     {"mu", r.mu}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<SweepRecord> sweep_records_from_json_lines(
    const std::string& text) {
  std::vector<SweepRecord> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    SweepRecord r;
    r.c = j.at("c").get<double>();
    r.ehat = j.at("ehat").get<double>();
    r.bound_kl = j.at("bound_kl").get<double>();
    r.bound_pinsker = j.at("bound_pinsker").get<double>();
    r.test_err = j.at("test_err").get<double>();
    r.lpos = j.at("lpos").get<int>();
    r.lneg = j.at("lneg").get<int>();
    r.mu = j.at("mu").get<double>();
    records.push_back(r);
  }
  return records;
}

gibbs::SampleGenerator bipartite_pair_generator(int l_pos, int l_neg,
                                                std::vector<double> mean_pos,
                                                std::vector<double> mean_neg,
                                                double sigma) {
  if (l_pos < 1 || l_neg < 1) throw std::invalid_argument("class counts >= 1");
  if (mean_pos.size() != mean_neg.size() || mean_pos.empty()) {
    throw std::invalid_argument("mean vectors must match and be nonempty");
  }
  const int d = static_cast<int>(mean_pos.size());
  return [=](std::mt19937_64& rng) {
    gibbs::GaussianSampler gauss(rng());
    std::vector<double> pos(static_cast<std::size_t>(l_pos) * d);
    std::vector<double> neg(static_cast<std::size_t>(l_neg) * d);
    for (auto& v : pos) v = sigma * gauss.next();
    for (auto& v : neg) v = sigma * gauss.next();
    for (int i = 0; i < l_pos; ++i) {
      for (int k = 0; k < d; ++k) pos[i * d + k] += mean_pos[k];
    }
    for (int j = 0; j < l_neg; ++j) {
      for (int k = 0; k < d; ++k) neg[j * d + k] += mean_neg[k];
    }
    gibbs::LabeledDataset sample;
    sample.dim = d;
    for (int i = 0; i < l_pos; ++i) {
      for (int j = 0; j < l_neg; ++j) {
        for (int k = 0; k < d; ++k) {
          sample.features.push_back(pos[i * d + k] - neg[j * d + k]);
        }
        sample.labels.push_back(1.0);
      }
    }
    return sample;
  };
}

gibbs::SampleGenerator iid_class_generator(int m, std::vector<double> mean_pos,
                                           std::vector<double> mean_neg,
                                           double sigma, double class_prior) {
  if (m < 1) throw std::invalid_argument("m >= 1");
  if (mean_pos.size() != mean_neg.size() || mean_pos.empty()) {
    throw std::invalid_argument("mean vectors must match and be nonempty");
  }
  const int d = static_cast<int>(mean_pos.size());
  return [=](std::mt19937_64& rng) {
    gibbs::GaussianSampler gauss(rng());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    gibbs::LabeledDataset sample;
    sample.dim = d;
    for (int i = 0; i < m; ++i) {
      const bool positive = unif(rng) < class_prior;
      const auto& mean = positive ? mean_pos : mean_neg;
      for (int k = 0; k < d; ++k) {
        sample.features.push_back(mean[k] + sigma * gauss.next());
      }
      sample.labels.push_back(positive ? 1.0 : -1.0);
    }
    return sample;
  };
}

ValidityReport run_validity(const ValidityConfig& config) {
  if (config.n_draws < 100) {
    throw std::invalid_argument("validity runs need at least 100 draws");
  }
  gibbs::GaussianLinearPosterior post(config.direction, config.mu);
  const double kl_div = post.kl_divergence();

  ValidityReport report;
  report.n_draws = config.n_draws;
  report.delta = config.delta;

  if (config.mode == ValidityMode::Auc) {
    // Reference risk from one large bipartite sample.
    auto ref_gen =
        bipartite_pair_generator(config.ref_per_class, config.ref_per_class,
                                 config.mean_pos, config.mean_neg, config.sigma);
    std::mt19937_64 ref_rng(gibbs::derive_seed(config.seed, 0xEFEF));
    report.reference_risk = gibbs::gibbs_error_binary(post, ref_gen(ref_rng));

    auto draw_gen = bipartite_pair_generator(
        config.l_pos, config.l_neg, config.mean_pos, config.mean_neg,
        config.sigma);
    for (int draw = 0; draw < config.n_draws; ++draw) {
      std::mt19937_64 rng(gibbs::derive_seed(config.seed, 1000 + draw));
      double ehat = gibbs::gibbs_error_binary(post, draw_gen(rng));
      auto bound = bounds::auc_bound(config.l_pos, config.l_neg, kl_div,
                                     config.delta, ehat);
      if (bound.vacuous) {
        ++report.vacuous_draws;  // a bound of 1 can never be violated
        continue;
      }
      if (report.reference_risk > bound.risk_bound_kl) ++report.violations;
    }
  } else {
    auto ref_gen = iid_class_generator(
        config.ref_per_class * 2, config.mean_pos, config.mean_neg,
        config.sigma, config.class_prior);
    std::mt19937_64 ref_rng(gibbs::derive_seed(config.seed, 0xEFEF));
    report.reference_risk = gibbs::gibbs_error_binary(post, ref_gen(ref_rng));

    auto draw_gen =
        iid_class_generator(config.m, config.mean_pos, config.mean_neg,
                            config.sigma, config.class_prior);
    for (int draw = 0; draw < config.n_draws; ++draw) {
      std::mt19937_64 rng(gibbs::derive_seed(config.seed, 1000 + draw));
      double ehat = gibbs::gibbs_error_binary(post, draw_gen(rng));
      auto bound = bounds::iid_bound(config.m, kl_div, config.delta, ehat);
      if (bound.vacuous) {
        ++report.vacuous_draws;
        continue;
      }
      if (report.reference_risk > bound.risk_bound_kl) ++report.violations;
    }
  }
  report.violation_rate =
      static_cast<double>(report.violations) / config.n_draws;
  return report;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      if (!blank) {
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": expected key=value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

namespace {

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    double v;
    if (!parse_double(item, v)) {
      throw std::runtime_error("bad numeric list item: '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::runtime_error("empty numeric list");
  return out;
}

}  // namespace

SweepConfig sweep_config_from_map(
    const std::map<std::string, std::string>& kv) {
  SweepConfig cfg;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto* v = get("train")) cfg.train_path = *v;
  if (auto* v = get("test")) cfg.test_path = *v;
  if (cfg.train_path.empty() || cfg.test_path.empty()) {
    throw std::runtime_error("sweep config needs train= and test= paths");
  }
  if (auto* v = get("c_grid")) {
    cfg.c_grid = parse_double_list(*v);
  } else {
    throw std::runtime_error("sweep config needs c_grid=");
  }
  if (auto* v = get("delta")) cfg.delta = std::stod(*v);
  if (auto* v = get("mu_mode")) {
    if (*v == "fixed") {
      cfg.mu_mode = MuMode::Fixed;
    } else if (*v == "wnorm") {
      cfg.mu_mode = MuMode::WeightNorm;
    } else {
      throw std::runtime_error("mu_mode must be fixed or wnorm");
    }
  }
  if (auto* v = get("mu")) cfg.mu_fixed = std::stod(*v);
  if (auto* v = get("tie_mode")) {
    if (*v == "half") {
      cfg.tie_mode = gibbs::TieMode::Half;
    } else if (*v == "strict") {
      cfg.tie_mode = gibbs::TieMode::Strict;
    } else {
      throw std::runtime_error("tie_mode must be half or strict");
    }
  }
  if (auto* v = get("epochs")) cfg.epochs = std::stoi(*v);
  if (auto* v = get("train_cap")) cfg.train_pair_cap = std::stoll(*v);
  if (auto* v = get("test_cap")) cfg.test_pair_cap = std::stoll(*v);
  if (auto* v = get("seed")) cfg.seed = std::stoull(*v);
  if (auto* v = get("output")) cfg.output_path = *v;
  return cfg;
}

ValidityConfig validity_config_from_map(
    const std::map<std::string, std::string>& kv) {
  ValidityConfig cfg;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto* v = get("mode")) {
    if (*v == "auc") {
      cfg.mode = ValidityMode::Auc;
    } else if (*v == "iid") {
      cfg.mode = ValidityMode::Iid;
    } else {
      throw std::runtime_error("mode must be auc or iid");
    }
  }
  if (auto* v = get("mean_pos")) cfg.mean_pos = parse_double_list(*v);
  if (auto* v = get("mean_neg")) cfg.mean_neg = parse_double_list(*v);
  if (auto* v = get("sigma")) cfg.sigma = std::stod(*v);
  if (auto* v = get("class_prior")) cfg.class_prior = std::stod(*v);
  if (auto* v = get("lpos")) cfg.l_pos = std::stoi(*v);
  if (auto* v = get("lneg")) cfg.l_neg = std::stoi(*v);
  if (auto* v = get("m")) cfg.m = std::stoi(*v);
  if (auto* v = get("draws")) cfg.n_draws = std::stoi(*v);
  if (auto* v = get("delta")) cfg.delta = std::stod(*v);
  if (auto* v = get("direction")) cfg.direction = parse_double_list(*v);
  if (auto* v = get("mu")) cfg.mu = std::stod(*v);
  if (auto* v = get("ref_per_class")) cfg.ref_per_class = std::stoi(*v);
  if (auto* v = get("seed")) cfg.seed = std::stoull(*v);
  return cfg;
}

}  // namespace cpb::harness
