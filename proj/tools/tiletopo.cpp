#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tiletopo/config.hpp"
#include "tiletopo/criteria.hpp"
#include "tiletopo/io.hpp"
#include "tiletopo/parallel.hpp"
#include "tiletopo/prism.hpp"
#include "tiletopo/tile.hpp"
#include "tiletopo/verify.hpp"

namespace fs = std::filesystem;
using namespace tiletopo;

namespace {

constexpr int kUsage = 2;
constexpr int kFailed = 1;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out;
  std::string format;
  std::string input;
  std::vector<std::string> params;
};

// Writes to <out>/<name> when an output directory is set, otherwise stdout.
class Sink {
 public:
  Sink(const Options& opt, const std::string& name, bool binary = false) {
    if (opt.out.empty()) return;
    fs::create_directories(opt.out);
    path_ = (fs::path(opt.out) / name).string();
    file_.open(path_, binary ? std::ios::binary | std::ios::out : std::ios::out);
    if (!file_) throw ResourceError("cannot open " + path_ + " for writing");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void done() {
    if (file_.is_open()) {
      file_.close();
      std::cerr << "wrote " << path_ << '\n';
    }
  }

 private:
  std::string path_;
  std::ofstream file_;
};

RunConfig load(const Options& opt) {
  RunConfig cfg;
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in) throw ConfigError(0, "cannot read config file " + opt.config);
    try {
      cfg = parse_config(in);
    } catch (const ConfigError& e) {
      throw ConfigError(0, opt.config + ": " + e.what());
    }
  }
  for (const auto& p : opt.params) apply_override(cfg, p);
  if (opt.seed) cfg.seed = *opt.seed;
  if (cfg.p.empty()) throw ConfigError(0, "no pair given: use --config or --param pair.p=...");
  return cfg;
}

std::string format_or(const Options& opt, const char* fallback) { return opt.format.empty() ? fallback : opt.format; }

int run_approximate(const Options& opt) {
  const RunConfig cfg = load(opt);
  const auto pair = cfg.pair();
  const auto cloud = approximate(pair, cfg.level, cfg.budget);
  const std::string fmt = format_or(opt, "csv");
  if (fmt == "csv") {
    Sink sink(opt, "cloud.csv");
    write_cloud_csv(sink.stream(), cloud.points, pair.dimension(), cloud.level, cfg.echo());
    sink.done();
  } else if (fmt == "pgm") {
    Sink sink(opt, "cloud.pgm", true);
    write_pgm(sink.stream(), cloud.points, cfg.raster, cfg.raster, cfg.echo());
    sink.done();
  } else {
    throw UnsupportedConfigurationError("approximate writes csv or pgm, not " + fmt);
  }
  return 0;
}

int run_classify(const Options& opt) {
  const RunConfig cfg = load(opt);
  const auto verdict = classify(cfg.pair());
  std::cout << verdict.line() << '\n';
  if (verdict.flagged) std::cout << "# flagged: criterion within the float equality band\n";
  for (const auto& line : cfg.echo()) std::cout << "# " << line << '\n';
  return 0;
}

std::vector<Vec> volume_image(const IterationMap& map, const Prism& prism, std::size_t grid, std::size_t layers) {
  const std::size_t h = prism.dimension() - 1;
  std::vector<Vec> out;
  std::vector<std::size_t> idx(h, 0);
  for (std::size_t t = 0; t < layers; ++t) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<double> w(h);
      for (std::size_t j = 0; j < h; ++j) w[j] = static_cast<double>(idx[j]) / (grid - 1) - 0.5;
      out.push_back(map.evaluate(prism.point(Vec(w), static_cast<double>(t) / (layers - 1))));
      std::size_t j = 0;
      while (j < h && ++idx[j] == grid) idx[j++] = 0;
      if (j == h) break;
    }
  }
  return out;
}

int run_iterate(const Options& opt) {
  const RunConfig cfg = load(opt);
  const auto pair = cfg.pair();
  const auto prism = root_prism(pair);
  const auto profile = cfg.profile(pair);
  if (cfg.depth < 0) throw InvalidParameterError("run.depth must be >= 0");
  if (cfg.grid < 2 || cfg.layers_grid < 2) throw InvalidParameterError("run.grid and run.layers_grid must be >= 2");
  const auto full = compose_h(prism, pair, profile, cfg.depth);
  const std::string fmt = format_or(opt, "obj");
  if (fmt != "obj" && fmt != "csv" && fmt != "pgm") throw UnsupportedConfigurationError("unknown format " + fmt);
  const int first = opt.out.empty() ? cfg.depth : 0;
  for (int k = first; k <= cfg.depth; ++k) {
    const auto map = full.truncated(k);
    auto echo = cfg.echo();
    echo.push_back("depth=" + std::to_string(k));
    const std::string stem = "depth" + std::to_string(k);
    if (fmt == "obj") {
      Sink sink(opt, stem + ".obj");
      write_obj(sink.stream(), prism_mesh(prism, map, cfg.resolution), echo);
      sink.done();
    } else if (fmt == "csv") {
      Sink sink(opt, stem + ".csv");
      write_cloud_csv(sink.stream(), volume_image(map, prism, cfg.grid, cfg.layers_grid), pair.dimension(), k, echo);
      sink.done();
    } else {
      Sink sink(opt, stem + ".pgm", true);
      write_pgm(sink.stream(), volume_image(map, prism, cfg.grid, cfg.layers_grid), cfg.raster, cfg.raster, echo);
      sink.done();
    }
  }
  return 0;
}

int run_verify(const Options& opt) {
  const RunConfig cfg = load(opt);
  const auto pair = cfg.pair();
  const auto prism = root_prism(pair);
  const auto profile = cfg.profile(pair);
  std::vector<VerificationReport> reports;
  for (const auto& check : cfg.checks) {
    if (check == "injectivity") {
      InjectivityOptions o;
      o.pairs = cfg.pairs;
      o.delta = cfg.delta;
      o.seed = cfg.seed;
      reports.push_back(check_injectivity(compose_h(prism, pair, profile, cfg.depth), prism, o));
    } else if (check == "height") {
      HeightOptions o;
      o.samples = cfg.height_samples;
      o.stabilization_limit = cfg.stabilization_limit;
      o.seed = cfg.seed;
      reports.push_back(check_height_properties(compose_h(prism, pair, profile, cfg.height_depth), prism, o));
    } else if (check == "convergence") {
      ConvergenceOptions o;
      o.horizontal_samples = cfg.grid;
      o.vertical_samples = cfg.layers_grid;
      o.tolerance = cfg.tolerance;
      auto r = check_convergence(pair, prism, profile, cfg.depth, cfg.level, o);
      r.seed = cfg.seed;
      reports.push_back(std::move(r));
    }
  }
  bool ok = true;
  for (const auto& line : cfg.echo()) std::cout << "# config " << line << '\n';
  for (const auto& r : reports) {
    std::cout << r.text();
    ok = ok && r.passed;
  }
  if (!opt.out.empty()) {
    Sink sink(opt, "verify.kv");
    for (const auto& line : cfg.echo()) sink.stream() << "config." << line << '\n';
    for (const auto& r : reports) sink.stream() << r.key_values();
    sink.done();
  }
  std::cout << "verify " << (ok ? "passed" : "failed") << '\n';
  return ok ? 0 : kFailed;
}

int run_export(const Options& opt) {
  if (opt.input.empty()) throw ConfigError(0, "export needs --input PATH");
  std::ifstream in(opt.input);
  if (!in) throw ConfigError(0, "cannot read " + opt.input);
  CloudFile cloud;
  try {
    cloud = read_cloud_csv(in);
  } catch (const ConfigError& e) {
    throw ConfigError(0, opt.input + ": " + e.what());
  }
  const std::string fmt = format_or(opt, "csv");
  const std::string stem = fs::path(opt.input).stem().string();
  auto echo = cloud.comments;
  echo.push_back("source=" + fs::path(opt.input).filename().string());
  if (fmt == "csv") {
    Sink sink(opt, stem + ".csv");
    write_cloud_csv(sink.stream(), cloud.points, cloud.dimension, cloud.level, cloud.comments);
    sink.done();
  } else if (fmt == "pgm") {
    std::size_t raster = 512;
    for (const auto& p : opt.params) {
      if (p.rfind("run.raster=", 0) == 0) raster = std::stoul(p.substr(11));
    }
    Sink sink(opt, stem + ".pgm", true);
    write_pgm(sink.stream(), cloud.points, raster, raster, echo);
    sink.done();
  } else if (fmt == "obj") {
    if (cloud.dimension > 3) throw UnsupportedConfigurationError("OBJ export needs d <= 3");
    Mesh mesh;
    for (const auto& p : cloud.points) {
      std::vector<double> v(p.begin(), p.end());
      v.resize(3, 0.0);
      mesh.vertices.emplace_back(std::move(v));
    }
    Sink sink(opt, stem + ".obj");
    write_obj(sink.stream(), mesh, echo);
    sink.done();
  } else {
    throw UnsupportedConfigurationError("unknown format " + fmt);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-affine tiles: digit clouds, topology criteria and the prism-to-tile iteration"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config, "Run configuration file");
  app.add_option("--seed", opt.seed, "Random seed (overrides run.seed)");
  app.add_option("--threads", opt.threads, "Worker threads, 0 = all cores");
  app.add_option("--out", opt.out, "Output directory (default: stdout)");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "obj", "pgm"}));
  app.add_option("--param", opt.params, "Override section.key=value (repeatable)");
  app.add_option("--input", opt.input, "Input CSV cloud for export");

  int status = 0;
  auto bind = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    app.add_subcommand(name, help)->callback([&, fn] { status = fn(opt); });
  };
  bind("approximate", "Level-n digit cloud", run_approximate);
  bind("classify", "Topology verdict from the closed-form criterion", run_classify);
  bind("iterate", "Prism images under h_0..h_depth", run_iterate);
  bind("verify", "Injectivity, height and convergence checks", run_verify);
  bind("export", "Convert a CSV cloud to csv, pgm or obj", run_export);

  app.parse_complete_callback([&] { set_thread_count(opt.threads); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return status;
}
