#include "cpb/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpb/bounds.hpp"
#include "cpb/covers.hpp"
#include "cpb/depgraph.hpp"
#include "cpb/gibbs.hpp"
#include "cpb/harness.hpp"
#include "cpb/klcore.hpp"

namespace cpb {

namespace {

using nlohmann::json;

json bound_to_json(const bounds::BoundResult& r) {
  return json{{"empirical_gibbs", r.empirical_gibbs},
              {"kl_budget", r.kl_budget},
              {"risk_bound_kl", r.risk_bound_kl},
              {"risk_bound_pinsker", r.risk_bound_pinsker},
              {"risk_lower", r.risk_lower},
              {"delta", r.delta},
              {"effective_m", r.effective_m},
              {"chi_star", r.chi_star_used.to_string()},
              {"two_sided", r.two_sided},
              {"vacuous", r.vacuous}};
}

void print_bound(const bounds::BoundResult& r, const std::string& name,
                 bool as_json, std::ostream& out) {
  if (as_json) {
    json j = bound_to_json(r);
    j["bound"] = name;
    out << j.dump() << "\n";
    return;
  }
  out << "bound: " << name << "\n";
  out << std::setprecision(12) << std::fixed;
  out << "kl_budget = " << r.kl_budget << "\n";
  out << "risk_bound_kl = " << r.risk_bound_kl << "\n";
  out << "risk_bound_pinsker = " << r.risk_bound_pinsker << "\n";
  if (r.two_sided) out << "risk_lower = " << r.risk_lower << "\n";
  out << "empirical_gibbs = " << r.empirical_gibbs << "\n";
  out << "effective_m = " << r.effective_m << "\n";
  out << "delta = " << r.delta << "\n";
  out << "vacuous = " << (r.vacuous ? "yes" : "no") << "\n";
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);
}

gibbs::TieMode parse_tie_mode(const std::string& s) {
  if (s == "half") return gibbs::TieMode::Half;
  if (s == "strict") return gibbs::TieMode::Strict;
  throw CLI::ValidationError("--tie-mode must be half or strict");
}

std::vector<double> read_weight_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weight file: " + path);
  std::vector<double> w;
  double v;
  while (in >> v) w.push_back(v);
  if (w.empty()) throw std::runtime_error("weight file is empty: " + path);
  return w;
}

struct BoundArgs {
  int m = 0, k = 0, l = 0, lpos = 0, lneg = 0, lmin = 0, a = 0;
  double kl = 0.0, delta = 0.05, ehat = 0.0, mu = 1.0, beta_a = 0.0;
  double loss_range = 1.0, alpha = 1.0, beta = 2.0;
  std::string chi = "1";
  std::vector<double> phi;
  std::vector<double> subgraph_chi;   // per candidate
  std::vector<double> subgraph_ehat;  // per candidate
};

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    // Accept integers and simple decimals.
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    return Rational(std::stoll(digits), den);
  }
  return Rational(std::stoll(s.substr(0, slash)),
                  std::stoll(s.substr(slash + 1)));
}

int cmd_chi(const std::string& path, bool exact_only, bool bounds_only,
            bool as_json, std::ostream& out) {
  auto graph = read_graph_file(path);
  const bool want_exact = !bounds_only;
  const bool want_bounds = !exact_only;

  std::optional<Rational> chi_star;
  if (want_exact &&
      (exact_only || graph.vertex_count() <= 20)) {
    chi_star = fractional_chromatic_exact(graph).chi_star;
  }
  CliqueResult clique = clique_number(graph);
  int greedy = greedy_chromatic_upper(graph);
  int dp1 = graph.max_degree() + 1;

  if (as_json) {
    json j{{"vertices", graph.vertex_count()},
           {"edges", graph.edge_count()},
           {"clique", clique.value},
           {"clique_exact", clique.exact},
           {"greedy_upper", greedy},
           {"delta_plus_one", dp1}};
    if (chi_star) j["chi_star"] = chi_star->to_string();
    out << j.dump() << "\n";
    return 0;
  }
  if (chi_star) out << "chi_star = " << chi_star->to_string() << "\n";
  if (want_bounds) {
    out << "clique = " << clique.value
        << (clique.exact ? "" : " (greedy lower bound)") << "\n";
    out << "greedy_upper = " << greedy << "\n";
    out << "delta_plus_one = " << dp1 << "\n";
  }
  return 0;
}

int cmd_cover(const std::string& family, std::vector<int> params,
              bool validate, const std::string& export_graph, bool as_json,
              std::ostream& out) {
  DependencyGraph graph(1);
  FractionalCover cover;
  if (family == "iid") {
    if (params.size() != 1) throw CLI::ValidationError("cover iid <m>");
    std::tie(graph, cover) = covers::iid_cover(params[0]);
  } else if (family == "auc") {
    if (params.size() != 2) {
      throw CLI::ValidationError("cover auc <lpos> <lneg>");
    }
    covers::BipartiteRankingShape shape(params[0], params[1]);
    graph = covers::bipartite_ranking_graph(shape);
    cover = covers::bipartite_ranking_cover(shape);
  } else if (family == "ustat") {
    if (params.size() != 1) throw CLI::ValidationError("cover ustat <l>");
    graph = covers::ranking_dependency_graph(params[0]);
    cover = covers::ustat_ranking_cover(params[0]);
  } else if (family == "beta-blocks") {
    if (params.size() != 2) {
      throw CLI::ValidationError("cover beta-blocks <m> <a>");
    }
    auto dec = covers::beta_block_decomposition(params[0], params[1]);
    graph = dec.surrogate_graph();
    cover = dec.surrogate_cover();
  } else {
    throw CLI::ValidationError("unknown cover family: " + family);
  }

  if (!export_graph.empty()) {
    std::ofstream gout(export_graph);
    if (!gout) {
      throw std::runtime_error("cannot write graph file: " + export_graph);
    }
    write_graph(graph, gout);
  }

  std::string status = "built";
  if (validate) {
    validate_cover(graph, cover);  // throws on failure
    status = "ok";
  }
  if (as_json) {
    json j{{"family", family},
           {"vertices", graph.vertex_count()},
           {"elements", cover.elements.size()},
           {"omega", cover.omega().to_string()},
           {"validated", validate}};
    out << j.dump() << "\n";
  } else {
    out << status << ", omega = " << cover.omega().to_string() << "\n";
  }
  return 0;
}

int cmd_gibbs(const std::string& dataset_path, const std::string& w_file,
              bool do_train, double train_c, int epochs, std::uint64_t seed,
              double mu, bool mu_norm, bool auc_mode, long long cap,
              const std::string& tie_mode_str, bool as_json,
              std::ostream& out) {
  auto data = harness::load_dataset(dataset_path);
  std::vector<double> w;
  if (do_train) {
    double lambda = 1.0 / (train_c * data.rows());
    w = gibbs::train_linear(data, lambda, epochs, seed).weights;
  } else if (!w_file.empty()) {
    w = read_weight_file(w_file);
  } else {
    throw CLI::ValidationError("gibbs needs --w-file or --train");
  }
  double wnorm = 0.0;
  for (double v : w) wnorm += v * v;
  wnorm = std::sqrt(wnorm);
  double mu_used = mu_norm ? std::max(wnorm, 1e-8) : mu;
  gibbs::GaussianLinearPosterior post(w, mu_used);

  json j{{"mu", mu_used}, {"kl", post.kl_divergence()}};
  if (auc_mode) {
    auto pairs = harness::build_pairs(data, cap, seed);
    double ehat = gibbs::gibbs_error_auc(post, data, pairs);
    double emp = gibbs::empirical_auc_risk(gibbs::LinearScorer{w}, data, pairs,
                                           parse_tie_mode(tie_mode_str));
    j["gibbs_auc_error"] = ehat;
    j["empirical_auc_risk"] = emp;
    j["lpos"] = pairs.pos.size();
    j["lneg"] = pairs.neg.size();
    if (!as_json) {
      out << std::setprecision(9) << "gibbs_auc_error = " << ehat << "\n"
          << "empirical_auc_risk = " << emp << "\n"
          << "lpos = " << pairs.pos.size() << "\n"
          << "lneg = " << pairs.neg.size() << "\n"
          << "mu = " << mu_used << "\n";
      return 0;
    }
  } else {
    double ehat = gibbs::gibbs_error_binary(post, data);
    j["gibbs_error"] = ehat;
    j["bayes_factor_bound"] = bounds::bayes_risk_factor(ehat);
    if (!as_json) {
      out << std::setprecision(9) << "gibbs_error = " << ehat << "\n"
          << "bayes_factor_bound = " << bounds::bayes_risk_factor(ehat)
          << "\n"
          << "mu = " << mu_used << "\n";
      return 0;
    }
  }
  out << j.dump() << "\n";
  return 0;
}

int cmd_moments(int lpos, int lneg, int r, int draws, std::uint64_t seed,
                double mu, double mean_pos, double mean_neg, double sigma,
                bool as_json, std::ostream& out) {
  covers::BipartiteRankingShape shape(lpos, lneg);
  auto graph = covers::bipartite_ranking_graph(shape);
  auto cover = covers::bipartite_ranking_cover(shape);
  gibbs::GaussianLinearPosterior post({1.0}, mu);
  auto gen = harness::bipartite_pair_generator(lpos, lneg, {mean_pos},
                                               {mean_neg}, sigma);
  auto cmp = gibbs::moment_comparison(post, graph, cover, gen, r, draws, seed);
  if (as_json) {
    json j{{"r", r},
           {"draws", draws},
           {"center", cmp.center},
           {"full_moment", cmp.full_moment},
           {"full_se", cmp.full_se},
           {"element_moments", cmp.element_moments},
           {"element_ses", cmp.element_ses}};
    out << j.dump() << "\n";
    return 0;
  }
  out << std::setprecision(9);
  out << "center = " << cmp.center << "\n";
  out << "full_moment = " << cmp.full_moment << " (se " << cmp.full_se
      << ")\n";
  for (std::size_t j = 0; j < cmp.element_moments.size(); ++j) {
    out << "element[" << j << "] = " << cmp.element_moments[j] << " (se "
        << cmp.element_ses[j] << ")\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"chromatic PAC-Bayes bounds for interdependent data"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  // chi
  std::string chi_path;
  bool chi_exact = false, chi_bounds = false;
  auto* chi = app.add_subcommand("chi", "chromatic numbers of a graph file");
  chi->add_option("graph", chi_path, "graph file")->required();
  chi->add_flag("--exact", chi_exact, "exact chi* only");
  chi->add_flag("--bounds", chi_bounds, "clique/greedy/degree bounds only");

  // cover
  std::string cover_family, cover_export;
  std::vector<int> cover_params;
  bool cover_validate = false;
  auto* cover = app.add_subcommand("cover", "canonical covers");
  cover->add_option("family", cover_family, "iid|auc|ustat|beta-blocks")
      ->required();
  cover->add_option("params", cover_params, "family parameters")->required();
  cover->add_flag("--validate", cover_validate, "validate the cover");
  cover->add_option("--export-graph", cover_export, "write the graph file");

  // bound
  auto* bound = app.add_subcommand("bound", "evaluate a bound");
  bound->require_subcommand(1);
  BoundArgs ba;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--kl", ba.kl, "KL(Q||P) in nats");
    sub->add_option("--delta", ba.delta, "confidence parameter");
    sub->add_option("--ehat", ba.ehat, "empirical Gibbs error");
  };
  auto* b_iid = bound->add_subcommand("iid", "IID kl bound");
  b_iid->add_option("--m", ba.m)->required();
  add_common(b_iid);
  auto* b_chrom = bound->add_subcommand("chromatic-ii", "chi*-scaled bound");
  b_chrom->add_option("--m", ba.m)->required();
  b_chrom->add_option("--chi", ba.chi, "chi* (integer, p/q or decimal)")
      ->required();
  add_common(b_chrom);
  auto* b_sub = bound->add_subcommand("subgraph", "min over induced subgraphs");
  b_sub->add_option("--m", ba.m)->required();
  b_sub->add_option("--k", ba.k)->required();
  b_sub->add_option("--chi-s", ba.subgraph_chi, "candidate chi* values")
      ->required();
  b_sub->add_option("--ehat-s", ba.subgraph_ehat, "candidate Gibbs errors")
      ->required();
  add_common(b_sub);
  auto* b_rank = bound->add_subcommand("ranking", "ordered-pair ranking bound");
  b_rank->add_option("--l", ba.l)->required();
  add_common(b_rank);
  auto* b_auc = bound->add_subcommand("auc", "bipartite misranking bound");
  b_auc->add_option("--lpos", ba.lpos)->required();
  b_auc->add_option("--lneg", ba.lneg)->required();
  add_common(b_auc);
  auto* b_auclin =
      bound->add_subcommand("auc-linear", "Gaussian linear AUC bound");
  b_auclin->add_option("--lmin", ba.lmin)->required();
  b_auclin->add_option("--mu", ba.mu)->required();
  add_common(b_auclin);
  auto* b_beta = bound->add_subcommand("beta-mixing", "independent-block bound");
  b_beta->add_option("--m", ba.m)->required();
  b_beta->add_option("--a", ba.a)->required();
  b_beta->add_option("--beta-a", ba.beta_a, "mixing coefficient beta(a)");
  add_common(b_beta);
  auto* b_gen = bound->add_subcommand("gen-chromatic",
                                      "squared-deviation chromatic bound");
  b_gen->add_option("--m", ba.m)->required();
  b_gen->add_option("--chi", ba.chi)->required();
  b_gen->add_option("--loss-range", ba.loss_range);
  add_common(b_gen);
  auto* b_phi = bound->add_subcommand("phi-mixing", "phi-mixing bound");
  b_phi->add_option("--m", ba.m)->required();
  b_phi->add_option("--phi", ba.phi, "phi(k) values");
  b_phi->add_option("--loss-range", ba.loss_range);
  add_common(b_phi);
  auto* b_generic = bound->add_subcommand("generic", "generic budget");
  b_generic->add_option("--alpha", ba.alpha)->required();
  b_generic->add_option("--beta", ba.beta)->required();
  add_common(b_generic);
  auto* b_bayes = bound->add_subcommand("bayes", "Bayes risk factor");
  b_bayes->add_option("--ehat", ba.ehat)->required();

  // gibbs
  std::string g_dataset, g_wfile, g_tie = "half";
  bool g_train = false, g_mu_norm = false, g_auc = false;
  double g_c = 1.0, g_mu = 1.0;
  int g_epochs = 50;
  long long g_cap = 0;
  std::uint64_t g_seed = 1;
  auto* gibbs_cmd =
      app.add_subcommand("gibbs", "Gibbs errors of a dataset");
  gibbs_cmd->add_option("dataset", g_dataset, "CSV dataset")->required();
  gibbs_cmd->add_option("--w-file", g_wfile, "weight vector file");
  gibbs_cmd->add_flag("--train", g_train, "train a linear scorer");
  gibbs_cmd->add_option("--c", g_c, "soft-margin C (lambda = 1/(C m))");
  gibbs_cmd->add_option("--epochs", g_epochs);
  gibbs_cmd->add_option("--seed", g_seed);
  gibbs_cmd->add_option("--mu", g_mu, "posterior scale");
  gibbs_cmd->add_flag("--mu-norm", g_mu_norm, "use |w| as the scale");
  gibbs_cmd->add_flag("--auc", g_auc, "pairwise AUC error instead of binary");
  gibbs_cmd->add_option("--cap", g_cap, "pair budget");
  gibbs_cmd->add_option("--tie-mode", g_tie, "half|strict");

  // sweep
  std::string sweep_config_path, sweep_csv;
  auto* sweep = app.add_subcommand("sweep", "bound vs test error over C");
  sweep->add_option("--config", sweep_config_path)->required();
  sweep->add_option("--csv", sweep_csv, "CSV output path override");

  // validate
  std::string validity_config_path;
  auto* validate = app.add_subcommand("validate", "bound validity experiment");
  validate->add_option("--config", validity_config_path)->required();

  // moments
  int mo_lpos = 6, mo_lneg = 6, mo_r = 2, mo_draws = 10000;
  double mo_mu = 1.0, mo_mpos = 1.0, mo_mneg = -1.0, mo_sigma = 1.0;
  std::uint64_t mo_seed = 1;
  auto* moments =
      app.add_subcommand("moments", "full vs per-element moment comparison");
  moments->add_option("--lpos", mo_lpos);
  moments->add_option("--lneg", mo_lneg);
  moments->add_option("--r", mo_r);
  moments->add_option("--draws", mo_draws);
  moments->add_option("--seed", mo_seed);
  moments->add_option("--mu", mo_mu);
  moments->add_option("--mean-pos", mo_mpos);
  moments->add_option("--mean-neg", mo_mneg);
  moments->add_option("--sigma", mo_sigma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return e.get_exit_code();
  }

  try {
    if (*chi) return cmd_chi(chi_path, chi_exact, chi_bounds, as_json, out);
    if (*cover) {
      return cmd_cover(cover_family, cover_params, cover_validate,
                       cover_export, as_json, out);
    }
    if (*bound) {
      bounds::BoundResult r;
      std::string name;
      if (*b_iid) {
        r = bounds::iid_bound(ba.m, ba.kl, ba.delta, ba.ehat);
        name = "iid";
      } else if (*b_chrom) {
        r = bounds::chromatic_bound_II(ba.m, parse_rational(ba.chi), ba.kl,
                                       ba.delta, ba.ehat);
        name = "chromatic-ii";
      } else if (*b_sub) {
        if (ba.subgraph_chi.size() != ba.subgraph_ehat.size()) {
          throw CLI::ValidationError("--chi-s and --ehat-s lengths differ");
        }
        std::vector<bounds::SubgraphCandidate> cands;
        for (std::size_t i = 0; i < ba.subgraph_chi.size(); ++i) {
          cands.push_back({ba.m - ba.k,
                           parse_rational(std::to_string(ba.subgraph_chi[i])),
                           ba.subgraph_ehat[i]});
        }
        r = bounds::subgraph_bound(cands, ba.m, ba.k, ba.kl, ba.delta);
        name = "subgraph";
      } else if (*b_rank) {
        r = bounds::ranking_bound(ba.l, ba.kl, ba.delta, ba.ehat);
        name = "ranking";
      } else if (*b_auc) {
        r = bounds::auc_bound(ba.lpos, ba.lneg, ba.kl, ba.delta, ba.ehat);
        name = "auc";
      } else if (*b_auclin) {
        r = bounds::auc_linear_bound(ba.lmin, ba.mu, ba.delta, ba.ehat);
        name = "auc-linear";
      } else if (*b_beta) {
        r = bounds::beta_mixing_bound(ba.m, ba.a, ba.beta_a, ba.kl, ba.delta,
                                      ba.ehat);
        name = "beta-mixing";
      } else if (*b_gen) {
        r = bounds::generalized_chromatic_bound(ba.m, parse_rational(ba.chi),
                                                ba.loss_range, ba.kl, ba.delta,
                                                ba.ehat);
        name = "gen-chromatic";
      } else if (*b_phi) {
        r = bounds::phi_mixing_bound(ba.m, ba.loss_range, ba.phi, ba.kl,
                                     ba.delta, ba.ehat);
        name = "phi-mixing";
      } else if (*b_generic) {
        double budget =
            bounds::generic_pacbayes_budget(ba.alpha, ba.beta, ba.kl, ba.delta);
        if (as_json) {
          out << json{{"bound", "generic"}, {"budget", budget}}.dump() << "\n";
        } else {
          out << std::setprecision(9) << std::fixed
              << "budget = " << budget << "\n";
        }
        return 0;
      } else if (*b_bayes) {
        double f = bounds::bayes_risk_factor(ba.ehat);
        if (as_json) {
          out << json{{"bound", "bayes"}, {"bayes_risk", f}}.dump() << "\n";
        } else {
          out << std::setprecision(9) << std::fixed << "bayes_risk = " << f
              << "\n";
        }
        return 0;
      }
      print_bound(r, name, as_json, out);
      return 0;
    }
    if (*gibbs_cmd) {
      return cmd_gibbs(g_dataset, g_wfile, g_train, g_c, g_epochs, g_seed,
                       g_mu, g_mu_norm, g_auc, g_cap, g_tie, as_json, out);
    }
    if (*sweep) {
      auto cfg = harness::sweep_config_from_map(
          harness::parse_config_file(sweep_config_path));
      if (!sweep_csv.empty()) cfg.output_path = sweep_csv;
      auto records = harness::run_sweep(cfg);
      if (as_json) {
        out << harness::sweep_records_to_json_lines(records);
      } else {
        out << "c ehat bound_kl bound_pinsker test_err mu\n";
        out << std::setprecision(6) << std::fixed;
        for (const auto& rec : records) {
          out << rec.c << " " << rec.ehat << " " << rec.bound_kl << " "
              << rec.bound_pinsker << " " << rec.test_err << " " << rec.mu
              << (rec.min_bound ? " [min bound]" : "")
              << (rec.min_test ? " [min test]" : "") << "\n";
        }
      }
      return 0;
    }
    if (*validate) {
      auto cfg = harness::validity_config_from_map(
          harness::parse_config_file(validity_config_path));
      auto report = harness::run_validity(cfg);
      if (as_json) {
        out << json{{"n_draws", report.n_draws},
                    {"violations", report.violations},
                    {"violation_rate", report.violation_rate},
                    {"delta", report.delta},
                    {"reference_risk", report.reference_risk},
                    {"vacuous_draws", report.vacuous_draws}}
                   .dump()
            << "\n";
      } else {
        out << "draws = " << report.n_draws << "\n"
            << "violations = " << report.violations << "\n"
            << "violation_rate = " << report.violation_rate << "\n"
            << "delta = " << report.delta << "\n"
            << "reference_risk = " << report.reference_risk << "\n"
            << "vacuous_draws = " << report.vacuous_draws << "\n";
      }
      return 0;
    }
    if (*moments) {
      return cmd_moments(mo_lpos, mo_lneg, mo_r, mo_draws, mo_seed, mo_mu,
                         mo_mpos, mo_mneg, mo_sigma, as_json, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand selected\n";
  return 1;
}

}  // namespace cpb
