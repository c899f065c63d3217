#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "spheresne/affinity.hpp"
#include "spheresne/errors.hpp"
#include "spheresne/eval.hpp"
#include "spheresne/io.hpp"
#include "spheresne/optimizer.hpp"
#include "spheresne/rng.hpp"
#include "spheresne/simgen.hpp"
#include "spheresne/svg.hpp"
#include "spheresne/tsne.hpp"
#include "spheresne/vmf.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace spheresne;

constexpr const char* kVersion = "0.1.0";

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SPHERE_SNE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

void write_manifest(const std::string& output_path, const std::string& command,
                    const json& config, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double duration_ms) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["config"] = config;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  m["duration_ms"] = duration_ms;
  std::ofstream out(output_path + ".manifest.json");
  if (!out) throw io_error("cannot write manifest: " + output_path + ".manifest.json");
  out << m.dump(2) << "\n";
}

std::string join_args(int argc, char** argv) {
  std::ostringstream ss;
  for (int i = 0; i < argc; ++i) ss << (i ? " " : "") << argv[i];
  return ss.str();
}

void check_unit_rows_or_report(const Eigen::MatrixXd& m, const char* what) {
  std::vector<int> bad;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m.row(i).norm() - 1.0) > 1e-6) bad.push_back(static_cast<int>(i));
  }
  if (!bad.empty()) {
    std::ostringstream ss;
    ss << what << ": rows not unit norm:";
    for (size_t i = 0; i < bad.size() && i < 20; ++i) ss << ' ' << bad[i];
    if (bad.size() > 20) ss << " ... (" << bad.size() << " total)";
    throw validation_error(ss.str());
  }
}

json eval_report_json(const eval::EvalReport& report) {
  json r;
  r["accuracy"] = report.accuracy;
  r["mean_entropy"] = report.mean_entropy;
  json entropies = json::array();
  for (double h : report.per_cluster_entropy) {
    if (std::isnan(h)) {
      entropies.push_back(nullptr);
    } else {
      entropies.push_back(h);
    }
  }
  r["per_cluster_entropy"] = entropies;
  json confusion = json::array();
  for (Eigen::Index i = 0; i < report.confusion.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < report.confusion.cols(); ++j) {
      row.push_back(report.confusion(i, j));
    }
    confusion.push_back(row);
  }
  r["confusion"] = confusion;
  r["empty_clusters"] = report.empty_clusters;
  json images = json::array();
  for (Eigen::Index i = 0; i < report.center_images.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < report.center_images.cols(); ++j) {
      row.push_back(report.center_images(i, j));
    }
    images.push_back(row);
  }
  r["center_images"] = images;
  return r;
}

struct BenchCell {
  int clusters;
  double gen_kappa;
  std::string method;
  std::vector<double> accuracy;
  std::vector<double> mean_entropy;
  std::vector<double> initial_kl;
  std::vector<double> final_kl;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

int run_cli(int argc, char** argv) {
  CLI::App app{"sphere_sne: spherical stochastic neighbor embedding pipeline"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a simulated spherical dataset");
  simgen::SimSpec spec;
  spec.seed = default_seed();
  std::string gen_out;
  gen->add_option("--dim", spec.d, "ambient dimension")->check(CLI::Range(2, 100000));
  gen->add_option("--clusters", spec.k, "cluster count")->check(CLI::PositiveNumber);
  gen->add_option("--n", spec.n_total, "total points")->check(CLI::PositiveNumber);
  gen->add_option("--kappa", spec.gen_kappa, "sampling concentration")
      ->check(CLI::PositiveNumber);
  gen->add_option("--min-separation", spec.min_separation,
                  "max allowed pairwise center dot product");
  gen->add_option("--seed", spec.seed, "rng seed");
  gen->add_option("-o,--output", gen_out, "output dataset CSV")->required();

  // ---- embed ----
  auto* embed = app.add_subcommand("embed", "embed a dataset with vMF-SNE or t-SNE");
  std::string embed_in, embed_out, method = "vmf";
  optimizer::VmfSneConfig vcfg;
  vcfg.seed = default_seed();
  tsne::TsneConfig tcfg;
  int embed_dim = -1;
  double eta = -1.0;
  int iterations = -1;
  embed->add_option("-i,--input", embed_in, "dataset CSV")->required();
  embed->add_option("-o,--output", embed_out, "embedding CSV")->required();
  embed->add_option("--method", method, "vmf | tsne")
      ->check(CLI::IsMember({"vmf", "tsne"}));
  embed->add_option("--perplexity", vcfg.perplexity, "target perplexity");
  embed->add_option("--embed-kappa", vcfg.embed_kappa,
                    "embedding-space concentration (vmf)");
  embed->add_option("--dim", embed_dim, "embedding dimension");
  embed->add_option("--iterations", iterations, "iteration count");
  embed->add_option("--eta", eta, "learning rate");
  embed->add_option("--seed", vcfg.seed, "rng seed");

  // ---- eval ----
  auto* ev = app.add_subcommand("eval", "entropy/accuracy report for an embedding");
  std::string eval_embedding, eval_data, eval_out;
  ev->add_option("--embedding", eval_embedding, "embedding CSV")->required();
  ev->add_option("--data", eval_data, "dataset CSV with labels")->required();
  ev->add_option("-o,--output", eval_out, "report JSON")->required();

  // ---- plot ----
  auto* plot = app.add_subcommand("plot", "static SVG scatter of an embedding");
  std::string plot_embedding, plot_data, plot_out;
  plot->add_option("--embedding", plot_embedding, "embedding CSV")->required();
  plot->add_option("--data", plot_data, "dataset CSV with labels")->required();
  plot->add_option("-o,--output", plot_out, "output SVG")->required();

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "entropy/accuracy grid over kappa x method x clusters");
  std::vector<double> bench_kappas = {10, 20, 30, 40};
  std::vector<int> bench_clusters = {4, 16};
  std::vector<std::string> bench_methods = {"tsne", "vmf"};
  int bench_repeats = 1, bench_n = 800, bench_d = 50, bench_iters = 1000;
  double bench_perplexity = 40.0, bench_embed_kappa = 2.0;
  std::uint64_t bench_seed = default_seed();
  std::string bench_out;
  bench->add_option("--kappas", bench_kappas, "sampling kappa grid");
  bench->add_option("--clusters", bench_clusters, "cluster-count grid");
  bench->add_option("--methods", bench_methods, "methods to run")
      ->check(CLI::IsMember({"vmf", "tsne"}));
  bench->add_option("--repeats", bench_repeats, "seeds per cell")
      ->check(CLI::PositiveNumber);
  bench->add_option("--n", bench_n, "points per dataset");
  bench->add_option("--dim", bench_d, "ambient dimension");
  bench->add_option("--iterations", bench_iters, "embedding iterations");
  bench->add_option("--perplexity", bench_perplexity, "target perplexity");
  bench->add_option("--embed-kappa", bench_embed_kappa, "vmf embedding kappa");
  bench->add_option("--seed", bench_seed, "master seed");
  bench->add_option("-o,--output", bench_out, "output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // flag validation failures map to the validation exit code
  }
  const std::string command = join_args(argc, argv);
  Stopwatch watch;

  if (*gen) {
    const auto ds = simgen::generate_dataset(spec);
    io::write_points(gen_out, ds.points, &ds.labels);
    json cfg{{"dim", spec.d},
             {"clusters", spec.k},
             {"n", spec.n_total},
             {"kappa", spec.gen_kappa},
             {"min_separation", spec.min_separation},
             {"seed", spec.seed}};
    write_manifest(gen_out, command, cfg, {}, {gen_out}, watch.elapsed_ms());
    return 0;
  }

  if (*embed) {
    const auto table = io::read_points(embed_in);
    const std::string loss_path = embed_out + ".loss.csv";
    json cfg;
    if (method == "vmf") {
      check_unit_rows_or_report(table.values, "embed --method vmf");
      if (embed_dim > 0) vcfg.target_dim = embed_dim;
      if (iterations >= 0) vcfg.iterations = iterations;
      if (eta > 0) vcfg.learning_rate = eta;
      const auto run = optimizer::run(table.values, vcfg);
      io::write_points(embed_out, run.Y);
      io::write_loss_trace(loss_path, run.loss_trace);
      cfg = {{"method", "vmf"},
             {"dim", vcfg.target_dim},
             {"perplexity", vcfg.perplexity},
             {"embed_kappa", vcfg.embed_kappa},
             {"iterations", vcfg.iterations},
             {"eta", vcfg.learning_rate},
             {"seed", vcfg.seed}};
    } else {
      tcfg.perplexity = vcfg.perplexity;
      tcfg.seed = vcfg.seed;
      if (embed_dim > 0) tcfg.target_dim = embed_dim;
      if (iterations >= 0) tcfg.iterations = iterations;
      if (eta > 0) tcfg.learning_rate = eta;
      const auto run = tsne::tsne_run(table.values, tcfg);
      io::write_points(embed_out, run.Y);
      io::write_loss_trace(loss_path, run.loss_trace);
      cfg = {{"method", "tsne"},
             {"dim", tcfg.target_dim},
             {"perplexity", tcfg.perplexity},
             {"iterations", tcfg.iterations},
             {"eta", tcfg.learning_rate},
             {"seed", tcfg.seed}};
    }
    write_manifest(embed_out, command, cfg, {embed_in}, {embed_out, loss_path},
                   watch.elapsed_ms());
    return 0;
  }

  if (*ev || *plot) {
    const std::string emb_path = *ev ? eval_embedding : plot_embedding;
    const std::string data_path = *ev ? eval_data : plot_data;
    const auto emb = io::read_points(emb_path);
    const auto data = io::read_points(data_path);
    if (emb.values.rows() != data.values.rows()) {
      throw validation_error("embedding and dataset row counts differ");
    }
    if (!data.labels) {
      throw validation_error("dataset file has no label column: " + data_path);
    }
    if (*plot) {
      const std::string svg_text = svg::scatter(emb.values, *data.labels);
      std::ofstream out(plot_out);
      if (!out) throw io_error("cannot open for writing: " + plot_out);
      out << svg_text;
      write_manifest(plot_out, command, json::object(), {emb_path, data_path},
                     {plot_out}, watch.elapsed_ms());
      return 0;
    }
    int k = 0;
    for (int label : *data.labels) k = std::max(k, label + 1);
    bool spherical = true;
    for (Eigen::Index i = 0; i < emb.values.rows(); ++i) {
      if (std::abs(emb.values.row(i).norm() - 1.0) > 1e-6) spherical = false;
    }
    const auto report = eval::evaluate(emb.values, *data.labels, k, spherical);
    json r = eval_report_json(report);
    r["spherical"] = spherical;
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["inputs"] = {emb_path, data_path};
    m["duration_ms"] = watch.elapsed_ms();
    r["manifest"] = m;
    std::ofstream out(eval_out);
    if (!out) throw io_error("cannot open for writing: " + eval_out);
    out << r.dump(2) << "\n";
    return 0;
  }

  if (*bench) {
    std::vector<BenchCell> cells;
    std::uint64_t cell_index = 0;
    for (int clusters : bench_clusters) {
      for (double gen_kappa : bench_kappas) {
        for (const std::string& m : bench_methods) {
          BenchCell cell{clusters, gen_kappa, m, {}, {}, {}, {}};
          for (int rep = 0; rep < bench_repeats; ++rep) {
            const std::uint64_t cell_seed = splitmix64(
                bench_seed ^ splitmix64(static_cast<std::uint64_t>(RngStream::kBenchCellBase) +
                                        cell_index * 131 + rep));
            simgen::SimSpec s;
            s.d = bench_d;
            s.k = clusters;
            s.n_total = bench_n;
            s.gen_kappa = gen_kappa;
            s.seed = cell_seed;
            const auto ds = simgen::generate_dataset(s);
            if (m == "vmf") {
              optimizer::VmfSneConfig c;
              c.perplexity = bench_perplexity;
              c.embed_kappa = bench_embed_kappa;
              c.iterations = bench_iters;
              c.seed = cell_seed;
              const auto run = optimizer::run(ds.points, c);
              const auto report = eval::evaluate(run.Y, ds.labels, clusters, true);
              cell.accuracy.push_back(report.accuracy);
              cell.mean_entropy.push_back(report.mean_entropy);
              cell.initial_kl.push_back(run.loss_trace.front());
              cell.final_kl.push_back(run.loss_trace.back());
            } else {
              tsne::TsneConfig c;
              c.perplexity = bench_perplexity;
              c.iterations = bench_iters;
              c.seed = cell_seed;
              const auto run = tsne::tsne_run(ds.points, c);
              const auto report = eval::evaluate(run.Y, ds.labels, clusters, false);
              cell.accuracy.push_back(report.accuracy);
              cell.mean_entropy.push_back(report.mean_entropy);
              cell.initial_kl.push_back(run.loss_trace.front());
              cell.final_kl.push_back(run.loss_trace.back());
            }
          }
          cells.push_back(std::move(cell));
          ++cell_index;
        }
      }
    }

    json rows = json::array();
    std::cout << std::left << std::setw(10) << "clusters" << std::setw(8)
              << "kappa" << std::setw(8) << "method" << std::setw(12)
              << "entropy" << std::setw(12) << "accuracy" << "\n";
    for (const auto& cell : cells) {
      json row{{"clusters", cell.clusters},
               {"gen_kappa", cell.gen_kappa},
               {"method", cell.method},
               {"mean_entropy", mean_of(cell.mean_entropy)},
               {"mean_accuracy", mean_of(cell.accuracy)},
               {"accuracy", cell.accuracy},
               {"entropy", cell.mean_entropy},
               {"initial_kl", cell.initial_kl},
               {"final_kl", cell.final_kl}};
      rows.push_back(row);
      std::ostringstream e, a;
      e << std::fixed << std::setprecision(4) << mean_of(cell.mean_entropy);
      a << std::fixed << std::setprecision(2) << 100.0 * mean_of(cell.accuracy) << '%';
      std::cout << std::left << std::setw(10) << cell.clusters << std::setw(8)
                << cell.gen_kappa << std::setw(8) << cell.method << std::setw(12)
                << e.str() << std::setw(12) << a.str() << "\n";
    }
    json doc;
    doc["rows"] = rows;
    json cfg{{"kappas", bench_kappas},    {"clusters", bench_clusters},
             {"methods", bench_methods},  {"repeats", bench_repeats},
             {"n", bench_n},              {"dim", bench_d},
             {"iterations", bench_iters}, {"perplexity", bench_perplexity},
             {"embed_kappa", bench_embed_kappa}, {"seed", bench_seed}};
    doc["config"] = cfg;
    std::ofstream out(bench_out);
    if (!out) throw io_error("cannot open for writing: " + bench_out);
    out << doc.dump(2) << "\n";
    write_manifest(bench_out, command, cfg, {}, {bench_out}, watch.elapsed_ms());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
