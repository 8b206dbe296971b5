// command-line front end: generators, pipeline, verifiers, benchmarks
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "lowstretch/laplacian.hpp"
#include "lowstretch/lowstretch.hpp"

using namespace lowstretch;

namespace {

int max_threads() {
  if (const char* s = std::getenv("LOWSTRETCH_THREADS")) {
    int t = std::atoi(s);
    if (t > 0) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// "grid:16x16", "path:40", "cycle:256", "er:100,300,8", "geometric:200,0.15"
MultiGraph make_graph(const std::string& spec, unsigned long long seed) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error("generator spec needs kind:args");
  std::string kind = spec.substr(0, colon);
  std::string args = spec.substr(colon + 1);
  std::replace(args.begin(), args.end(), 'x', ',');
  std::vector<double> v;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  Rng rng(seed);
  if (kind == "path" && v.size() == 1) return gen_path((int)v[0]);
  if (kind == "cycle" && v.size() == 1) return gen_cycle((int)v[0]);
  if (kind == "grid" && v.size() == 2) return gen_grid((int)v[0], (int)v[1]);
  if (kind == "er" && v.size() >= 2)
    return gen_er((int)v[0], (int)v[1], v.size() > 2 ? v[2] : 1.0, rng);
  if (kind == "geometric" && v.size() == 2)
    return gen_geometric((int)v[0], v[1], rng);
  throw Error("unknown generator spec: " + spec);
}

MultiGraph load_graph(const std::string& graph_file, const std::string& gen_spec,
                      unsigned long long seed) {
  if (!graph_file.empty() && !gen_spec.empty())
    throw CLI::ValidationError("give either --graph or --gen, not both");
  if (!graph_file.empty()) {
    std::ifstream in(graph_file);
    if (!in) throw Error("cannot open " + graph_file);
    return read_edge_list(in);
  }
  if (!gen_spec.empty()) return make_graph(gen_spec, seed);
  throw CLI::ValidationError("need --graph or --gen");
}

std::string config_header(const std::string& cmd, const std::string& config,
                          unsigned long long seed) {
  std::ostringstream os;
  os << "# lowstretch " << cmd << " " << config << "\n# seed " << seed << "\n";
  return os.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

struct CsvRow {
  std::string graph;
  int n, m;
  double p;
  unsigned long long seed;
  std::string metric;
  double value;
};

void write_csv(std::ostream& out, const std::string& header,
               std::vector<CsvRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
    return std::tie(a.graph, a.n, a.m, a.p, a.seed, a.metric) <
           std::tie(b.graph, b.n, b.m, b.p, b.seed, b.metric);
  });
  out << header;
  out << "graph,n,m,p,seed,metric,value\n";
  out.precision(17);
  for (const CsvRow& r : rows)
    out << r.graph << "," << r.n << "," << r.m << "," << r.p << "," << r.seed
        << "," << r.metric << "," << r.value << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-stretch embeddable Steiner trees"};
  app.require_subcommand(1);

  std::string graph_file, gen_spec, tree_file, out_path, mode = "full";
  std::string method = "two-stage", suite = "stretch-scaling";
  double p = 0.5, k = 4.0, tol = 1e-8;
  unsigned long long seed = 1;
  int trials = 100, seeds = 5;
  bool trace = false;
  app.add_flag("--trace", trace, "progress to stderr");

  auto add_input = [&](CLI::App* c) {
    c->add_option("--graph", graph_file, "edge-list file");
    c->add_option("--gen", gen_spec, "generator spec, e.g. grid:16x16");
    c->add_option("--seed", seed, "random seed");
  };

  auto* cgen = app.add_subcommand("gen", "generate a graph");
  add_input(cgen);
  cgen->add_option("--out", out_path, "output edge list");

  auto* cdec = app.add_subcommand("decompose", "hierarchical decomposition");
  add_input(cdec);
  cdec->add_option("--method", method, "simple | two-stage");
  cdec->add_option("--p", p, "stretch exponent");
  cdec->add_option("--mode", mode, "full | simplified");
  cdec->add_option("--k", k, "simplified sparsification parameter");
  cdec->add_option("--out", out_path, "output decomposition");

  auto* ctree = app.add_subcommand("tree", "full pipeline");
  add_input(ctree);
  ctree->add_option("--p", p, "stretch exponent");
  ctree->add_option("--mode", mode, "full | simplified");
  ctree->add_option("--k", k, "simplified sparsification parameter");
  ctree->add_option("--out", out_path, "output tree");

  auto* cstr = app.add_subcommand("stretch", "stretch report for a tree");
  add_input(cstr);
  cstr->add_option("--tree", tree_file, "tree file")->required();
  cstr->add_option("--p", p, "stretch exponent");
  cstr->add_option("--out", out_path, "output CSV (default stdout)");

  auto* cver = app.add_subcommand("verify", "check tree embeds into graph");
  add_input(cver);
  cver->add_option("--tree", tree_file, "tree file")->required();

  auto* clap = app.add_subcommand("laplacian-check", "operator sandwich check");
  add_input(clap);
  clap->add_option("--tree", tree_file, "tree file")->required();
  clap->add_option("--trials", trials, "random test vectors");
  clap->add_option("--tol", tol, "ratio tolerance");

  auto* cben = app.add_subcommand("bench", "benchmark sweeps, CSV output");
  cben->add_option("--suite", suite, "stretch-scaling | edge-tossing");
  cben->add_option("--seeds", seeds, "seeds per instance");
  cben->add_option("--seed", seed, "base seed");
  cben->add_option("--p", p, "stretch exponent");
  cben->add_option("--out", out_path, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::ostringstream cfg;
    if (!graph_file.empty()) cfg << "--graph " << graph_file << " ";
    if (!gen_spec.empty()) cfg << "--gen " << gen_spec << " ";

    if (cgen->parsed()) {
      MultiGraph g = make_graph(gen_spec, seed);
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) { f = open_out(out_path); os = &f; }
      *os << config_header("gen", cfg.str(), seed);
      write_edge_list(*os, g);
      return 0;
    }

    if (cdec->parsed()) {
      MultiGraph g = load_graph(graph_file, gen_spec, seed);
      cfg << "--method " << method << " --p " << p << " --mode " << mode;
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) { f = open_out(out_path); os = &f; }
      *os << config_header("decompose", cfg.str(), seed);
      if (method == "simple") {
        auto [gn, ratio] = normalize(g);
        DiameterSequence dd = make_diameter_sequence(gn.n, ratio);
        Rng rng(seed);
        BartalDecomposition B = decompose_simple(gn, dd, rng);
        ValidationReport rep = validate_decomposition(gn, B, dd);
        write_decomposition(*os, gn, B);
        if (!rep.ok) { std::cerr << "invalid: " << rep.message << "\n"; return 1; }
      } else if (method == "two-stage") {
        PipelineOptions po; po.p = p; po.simplified = (mode == "simplified"); po.k = k;
        PipelineResult R = full_pipeline(g, seed, po);
        BartalDecomposition B = R.explicit_decomposition();
        write_decomposition(*os, R.normalized, B);
      } else {
        std::cerr << "unknown method: " << method << "\n";
        return 2;
      }
      return 0;
    }

    if (ctree->parsed()) {
      MultiGraph g = load_graph(graph_file, gen_spec, seed);
      cfg << "--p " << p << " --mode " << mode << " --k " << k;
      if (trace) std::cerr << "pipeline on n=" << g.n << " m=" << g.m() << "\n";
      PipelineOptions po; po.p = p; po.simplified = (mode == "simplified"); po.k = k;
      PipelineResult R = full_pipeline(g, seed, po);
      EmbeddingReport emb = verify_embedding(g, R.tree);
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) { f = open_out(out_path); os = &f; }
      *os << config_header("tree", cfg.str(), seed);
      write_tree(*os, R.tree);
      if (!emb.ok) { std::cerr << "embedding check failed: " << emb.message << "\n"; return 1; }
      return 0;
    }

    if (cstr->parsed()) {
      MultiGraph g = load_graph(graph_file, gen_spec, seed);
      std::ifstream tin(tree_file);
      if (!tin) throw Error("cannot open " + tree_file);
      SteinerTree T = read_tree(tin);
      StretchReport rep = tree_stretch(g, T, p);
      cfg << "--tree " << tree_file << " --p " << p;
      std::string name = gen_spec.empty() ? graph_file : gen_spec;
      std::vector<CsvRow> rows{
          {name, g.n, g.m(), p, seed, "mean_stretch", rep.mean_stretch},
          {name, g.n, g.m(), p, seed, "max_stretch", rep.max_stretch},
          {name, g.n, g.m(), p, seed, "mean_lp_stretch", rep.mean_lp},
          {name, g.n, g.m(), p, seed, "max_lp_stretch", rep.max_lp}};
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) { f = open_out(out_path); os = &f; }
      write_csv(*os, config_header("stretch", cfg.str(), seed), rows);
      return 0;
    }

    if (cver->parsed()) {
      MultiGraph g = load_graph(graph_file, gen_spec, seed);
      std::ifstream tin(tree_file);
      if (!tin) throw Error("cannot open " + tree_file);
      SteinerTree T = read_tree(tin);
      EmbeddingReport rep = verify_embedding(g, T);
      std::cout << config_header("verify", cfg.str() + "--tree " + tree_file, seed)
                << "ok " << (rep.ok ? 1 : 0) << "\n"
                << "max_congestion " << rep.max_congestion << "\n"
                << "max_dilation " << rep.max_dilation << "\n";
      if (!rep.ok) { std::cerr << rep.message << "\n"; return 1; }
      return 0;
    }

    if (clap->parsed()) {
      MultiGraph g = load_graph(graph_file, gen_spec, seed);
      std::ifstream tin(tree_file);
      if (!tin) throw Error("cannot open " + tree_file);
      SteinerTree T = read_tree(tin);
      OperatorCheckReport rep = laplacian_sandwich_check(g, T, trials, tol, seed);
      std::cout << config_header("laplacian-check",
                                 cfg.str() + "--tree " + tree_file, seed)
                << "ratio_min " << rep.min_ratio << "\nratio_max " << rep.max_ratio
                << "\npass " << (rep.pass ? 1 : 0) << "\n";
      return rep.pass ? 0 : 1;
    }

    if (cben->parsed()) {
      cfg << "--suite " << suite << " --seeds " << seeds << " --p " << p;
      struct Job { std::string spec; unsigned long long s; double kk; };
      std::vector<Job> jobs;
      if (suite == "stretch-scaling") {
        for (int side : {16, 32, 64})
          for (int i = 0; i < seeds; ++i)
            jobs.push_back({"grid:" + std::to_string(side) + "x" +
                            std::to_string(side), seed + i, 0.0});
      } else if (suite == "edge-tossing") {
        for (double kk : {4.0, 16.0, 64.0})
          for (int i = 0; i < seeds; ++i)
            jobs.push_back({"grid:32x32", seed + i, kk});
      } else {
        std::cerr << "unknown suite: " << suite << "\n";
        return 2;
      }
      std::vector<std::vector<CsvRow>> per_job(jobs.size());
      std::atomic<size_t> next{0};
      auto worker = [&]() {
        for (size_t j; (j = next.fetch_add(1)) < jobs.size();) {
          const Job& jb = jobs[j];
          MultiGraph g = make_graph(jb.spec, jb.s);
          PipelineOptions po; po.p = p;
          if (jb.kk > 0) { po.simplified = true; po.k = jb.kk; }
          PipelineResult R = full_pipeline(g, jb.s, po);
          std::string name = jb.spec + (jb.kk > 0 ? "/k" + std::to_string((int)jb.kk) : "");
          StretchReport rep = tree_stretch(g, R.tree, p);
          per_job[j].push_back({name, g.n, g.m(), p, jb.s, "mean_lp_stretch", rep.mean_lp});
          per_job[j].push_back({name, g.n, g.m(), p, jb.s, "mean_stretch", rep.mean_stretch});
          if (jb.kk > 0)
            per_job[j].push_back({name, g.n, g.m(), p, jb.s, "tossed_fraction",
                                  R.impl.ignored_count() / (double)g.m()});
          if (trace) std::cerr << "done " << name << " seed " << jb.s << "\n";
        }
      };
      int nt = std::min<int>(max_threads(), (int)jobs.size());
      std::vector<std::thread> pool;
      for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      std::vector<CsvRow> rows;
      for (auto& v : per_job) rows.insert(rows.end(), v.begin(), v.end());
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) { f = open_out(out_path); os = &f; }
      write_csv(*os, config_header("bench", cfg.str(), seed), rows);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
