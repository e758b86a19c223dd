// Command-line front end: zero enumeration, critical parameters, expansion
// certificates, density metrics, the brute-force oracle, and SVG figures.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <isingzero/critical_params.hpp>
#include <isingzero/semigroup.hpp>
#include <isingzero/svg.hpp>
#include <isingzero/tree_partition.hpp>
#include <isingzero/version.hpp>
#include <isingzero/zero_atlas.hpp>

using namespace isingzero;

namespace {

std::string cache_dir_from_env() {
  const char *v = std::getenv("ISINGZERO_CACHE_DIR");
  return v ? std::string(v) : std::string();
}

Rational parse_b(const std::string &text) {
  if (text.find('.') != std::string::npos)
    throw CLI::ValidationError(
        "--b", "decimal input rejected; give an exact rational like 2 or 5/2");
  return parse_rational(text);
}

// symbolic arc endpoint: "lambda0", "lambda1", "lambda2", optionally with a
// "+x"/"-x" radian offset, or a plain numeric angle
double parse_angle(const std::string &spec, int d, const Rational &b) {
  auto base_of = [&](const std::string &name) -> double {
    R128 br = to_real<R128>(b);
    if (name == "lambda0") return to_double(lambda0<R128>(d, br));
    if (name == "lambda1") return to_double(lambda1<R128>(d, br));
    if (name == "lambda2") return lambda2(d, b.convert_to<double>()).theta;
    throw std::invalid_argument("invalid-parameter: unknown angle '" + name +
                                "'");
  };
  size_t pos = spec.find_first_of("+-", 1);
  std::string head = spec.substr(0, pos);
  double offset = pos == std::string::npos ? 0.0 : std::stod(spec.substr(pos));
  if (head == "lambda0" || head == "lambda1" || head == "lambda2")
    return base_of(head) + offset;
  return std::stod(spec); // numeric radians
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string header_line(const std::string &config, int bits) {
  return std::string("isingzero ") + version() + " config=" +
         config_hash(config) + " precision=" + std::to_string(bits);
}

void write_text(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string emit_records(const ZeroSet &set, const std::string &format,
                         const std::string &header) {
  std::ostringstream out;
  if (format == "jsonl") {
    nlohmann::json meta = {{"meta",
                            {{"d", set.d},
                             {"b", rational_text(set.b)},
                             {"class", tree_class_name(set.tree_class)},
                             {"depth", set.max_depth},
                             {"precision_bits", set.precision_bits},
                             {"header", header}}}};
    out << meta.dump() << "\n";
    for (const auto &rec : set.records)
      out << record_to_json(rec, set.d, set.b).dump() << "\n";
  } else if (format == "csv") {
    out << "# " << header << "\n";
    out << "lambda_re,lambda_im,class,depth,residual,on_circle,multiplicity\n";
    for (const auto &rec : set.records) {
      out << fmt17(rec.lambda.re) << "," << fmt17(rec.lambda.im) << ","
          << tree_class_name(rec.tree_class) << "," << rec.depth << ","
          << fmt17(rec.residual) << "," << (rec.on_circle ? "true" : "false")
          << "," << rec.multiplicity << "\n";
    }
  } else {
    throw std::invalid_argument("invalid-parameter: format must be jsonl|csv");
  }
  return out.str();
}

std::string poly_text(const Poly<Rational> &p) {
  std::ostringstream out;
  bool first = true;
  for (long long i = p.degree(); i >= 0; --i) {
    Rational c = p.coeff((size_t)i);
    if (c == 0) continue;
    if (!first) out << (c > 0 ? " + " : " - ");
    else if (c < 0) out << "-";
    Rational a = c < 0 ? Rational(-c) : c;
    bool unit = (a == 1) && i != 0;
    if (!unit) out << a.str();
    if (i > 0) {
      if (!unit) out << "*";
      out << "lambda";
      if (i > 1) out << "^" << i;
    }
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

// per-depth Cayley zero set from the single word d^n (polynomial route, so
// multiplicities sum to the vertex count)
ZeroSet single_word_set(int d, const Rational &b, int depth, int bits,
                        const std::string &cache_dir) {
  // deep words need more root-finder precision: their coefficients are huge
  // and the zeros cluster, so low-order bits displace roots near the origin
  static const int schedule[] = {128, 128, 128, 128, 128, 192, 192,
                                 256, 256, 384, 512, 640};
  if (depth < (int)(sizeof schedule / sizeof *schedule))
    bits = std::max(bits, schedule[depth]);
  else
    bits = std::max(bits, 640);
  std::string path;
  if (!cache_dir.empty()) {
    std::filesystem::create_directories(cache_dir);
    std::string bs = b.str();
    for (auto &ch : bs)
      if (ch == '/') ch = '_';
    path = cache_dir + "/figure_d" + std::to_string(d) + "_b" + bs +
           "_depth" + std::to_string(depth) + "_bits" + std::to_string(bits) +
           ".jsonl";
    if (auto cached = load_zero_set(path)) return *cached;
  }
  ZeroSet set;
  set.d = d;
  set.b = b;
  set.tree_class = TreeClass::cayley;
  set.max_depth = depth;
  set.precision_bits = bits;
  EnumerateOptions opts;
  opts.precision_bits = bits;
  opts.poly_vertex_budget = 1LL << 40; // always the polynomial route
  PartitionCache cache;
  detail::append_word_zeros(set, std::vector<int>(depth, d), cache, opts);
  std::sort(set.records.begin(), set.records.end(), record_order);
  if (!path.empty()) save_zero_set(set, path);
  return set;
}

} // namespace

int run(int argc, char **argv) {
  CLI::App app{"zeros of the anti-ferromagnetic Ising partition function on "
               "trees via circle dynamics"};
  app.require_subcommand(1);
  app.fallthrough(); // global options may follow the subcommand name

  int d = 2;
  std::string b_text = "2";
  int bits = 128;
  std::string out_path = "-";
  app.add_option("--d", d, "down-degree (>= 2)")->capture_default_str();
  app.add_option("--b", b_text, "edge weight as exact rational text")
      ->capture_default_str();
  app.add_option("--precision", bits, "working precision in bits")
      ->capture_default_str();
  app.add_option("--out", out_path, "output path ('-' = stdout)")
      ->capture_default_str();

  auto *zeros = app.add_subcommand("zeros", "enumerate partition zeros");
  std::string cls = "cayley", format = "jsonl";
  int depth = 3;
  bool circle_only = false;
  zeros->add_option("--class", cls, "cayley | spherical");
  zeros->add_option("--depth", depth, "maximum word length");
  zeros->add_option("--format", format, "jsonl | csv");
  zeros->add_flag("--circle-only", circle_only, "sweep route only");

  auto *params = app.add_subcommand("params", "distinguished circle parameters");

  auto *certify = app.add_subcommand("certify", "expansion certificate");
  std::string lambda_spec = "lambda0+0.005";
  double kappa = 3.0;
  int max_N = 40, grid = 200;
  certify->add_option("--lambda", lambda_spec, "angle (symbolic or radians)");
  certify->add_option("--kappa", kappa, "expansion factor (> 1)");
  certify->add_option("--max-N", max_N, "word-length bound");
  certify->add_option("--grid", grid, "grid resolution");

  auto *density = app.add_subcommand("density", "coverage and gap on an arc");
  std::string arc_start = "lambda0", arc_end = "lambda1";
  double eps = 2e-3;
  int depth_from = 7, depth_to = 11;
  density->add_option("--class", cls, "cayley | spherical");
  density->add_option("--arc-start", arc_start, "arc start angle");
  density->add_option("--arc-end", arc_end, "arc end angle");
  density->add_option("--eps", eps, "chordal coverage radius");
  density->add_option("--depth-from", depth_from, "first depth");
  density->add_option("--depth-to", depth_to, "last depth");

  auto *oracle = app.add_subcommand("oracle", "brute-force partition oracle");
  std::string tree_path;
  oracle->add_option("--tree", tree_path, "tree file (count, then edges)")
      ->required();

  auto *figure = app.add_subcommand("figure", "SVG reproduction of the zero scatter");
  figure->add_option("--depth", depth, "maximum depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Rational b = parse_b(b_text);
  if (!(b > 0) || b == 1)
    throw std::invalid_argument("invalid-parameter: b must be > 0 and != 1");
  std::string cache_dir = cache_dir_from_env();
  std::ostringstream cfg;
  cfg << "v=" << version() << " d=" << d << " b=" << rational_text(b)
      << " bits=" << bits;

  if (*zeros) {
    cfg << " cmd=zeros class=" << cls << " depth=" << depth
        << " format=" << format << " circle_only=" << circle_only;
    TreeClass tc = cls == "cayley" ? TreeClass::cayley
                 : cls == "spherical"
                     ? TreeClass::spherical
                     : throw std::invalid_argument(
                           "invalid-parameter: class must be cayley|spherical");
    EnumerateOptions opts;
    opts.precision_bits = bits;
    opts.circle_only = circle_only;
    opts.cache_dir = cache_dir;
    ZeroSet set = enumerate_zero_set_cached(d, b, depth, tc, opts);
    write_text(out_path, emit_records(set, format, header_line(cfg.str(), bits)));
    return 0;
  }
  if (*params) {
    cfg << " cmd=params";
    CriticalSet cs = critical_set(d, b);
    std::ostringstream out;
    out << "# " << header_line(cfg.str(), bits) << "\n";
    out << "threshold " << rational_text(cs.threshold) << "\n";
    out << "regime " << cs.regime_name << "\n";
    if (std::string(cs.regime_name) == "sub-threshold") {
      out << "lambda0_angle " << fmt17(cs.lambda0_angle) << "\n";
      out << "lambda1_angle " << fmt17(cs.lambda1_angle) << "\n";
      out << "lambda2_angle " << fmt17(cs.lambda2_angle) << "\n";
    }
    write_text(out_path, out.str());
    return 0;
  }
  if (*certify) {
    double angle = parse_angle(lambda_spec, d, b);
    cfg << " cmd=certify lambda=" << fmt17(angle) << " kappa=" << kappa
        << " max_N=" << max_N << " grid=" << grid;
    Model<double> m{d, b.convert_to<double>(), unit_cx(angle)};
    auto cert = expansion_certificate(m, kappa, max_N, grid);
    nlohmann::json j = cert.to_json();
    j["header"] = header_line(cfg.str(), bits);
    write_text(out_path, j.dump(2) + "\n");
    return 0;
  }
  if (*density) {
    double a0 = parse_angle(arc_start, d, b), a1 = parse_angle(arc_end, d, b);
    cfg << " cmd=density class=" << cls << " arc=" << fmt17(a0) << ":"
        << fmt17(a1) << " eps=" << eps << " depths=" << depth_from << ".."
        << depth_to;
    TreeClass tc = cls == "cayley" ? TreeClass::cayley : TreeClass::spherical;
    CircleArc arc{UnitAngle(a0), UnitAngle(a1)};
    std::ostringstream out;
    out << "# " << header_line(cfg.str(), bits) << "\n";
    out << "depth,coverage,gap\n";
    for (int n = depth_from; n <= depth_to; ++n) {
      EnumerateOptions opts;
      opts.precision_bits = bits;
      opts.circle_only = true;
      // pad the sweep so zeros just outside the arc still count as near
      opts.sweep_theta_lo = a0 - 0.02;
      opts.sweep_theta_hi = a1 + 0.02;
      opts.cache_dir = cache_dir;
      ZeroSet set = enumerate_zero_set_cached(d, b, n, tc, opts);
      auto [cov, gap] = coverage_and_gap(set, arc, eps);
      out << n << "," << fmt17(cov) << "," << fmt17(gap) << "\n";
    }
    write_text(out_path, out.str());
    return 0;
  }
  if (*oracle) {
    cfg << " cmd=oracle tree=" << tree_path;
    std::ifstream in(tree_path);
    if (!in) throw std::runtime_error("cannot read " + tree_path);
    GeneralTree tree = GeneralTree::parse(in);
    Poly<Rational> brute = brute_force_partition_symbolic(tree, b);
    std::ostringstream out;
    out << "# " << header_line(cfg.str(), bits) << "\n";
    out << poly_text(brute) << "\n";
    // spherically symmetric? read per-depth child counts from the root
    std::vector<std::vector<int>> adj(tree.n);
    for (auto [u, v] : tree.edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    std::vector<int> depth_of(tree.n, -1), order;
    depth_of[tree.root] = 0;
    order.push_back(tree.root);
    std::vector<int> word_top_down;
    bool spherical = true;
    for (size_t i = 0; i < order.size(); ++i) {
      int v = order[i];
      int children = 0;
      for (int w : adj[v])
        if (depth_of[w] < 0) {
          depth_of[w] = depth_of[v] + 1;
          order.push_back(w);
          ++children;
        }
      if ((int)word_top_down.size() <= depth_of[v]) {
        word_top_down.push_back(children);
      } else if (word_top_down[depth_of[v]] != children) {
        spherical = false;
      }
    }
    while (!word_top_down.empty() && word_top_down.back() == 0)
      word_top_down.pop_back();
    if (spherical) {
      std::vector<int> degrees(word_top_down.rbegin(), word_top_down.rend());
      int dmax = 2;
      for (int k : degrees) dmax = std::max(dmax, k);
      Poly<Rational> rec = partition_polynomial(TreeSpec{degrees, dmax}, b);
      out << (rec == brute ? "MATCH recursion" : "MISMATCH recursion") << "\n";
    } else {
      out << "not spherically symmetric\n";
    }
    write_text(out_path, out.str());
    return 0;
  }
  if (*figure) {
    cfg << " cmd=figure depth=" << depth;
    std::string stem = (out_path.empty() || out_path == "-")
                           ? std::string("figure")
                           : out_path;
    CriticalSet cs = critical_set(d, b);
    std::vector<double> red = {cs.lambda0_angle, cs.lambda1_angle};
    std::string header = header_line(cfg.str(), bits);
    // left panel: one polynomial zero set per Cayley depth
    std::vector<ZeroSet> cayley_sets;
    for (int n = 0; n <= depth; ++n)
      cayley_sets.push_back(single_word_set(d, b, n, bits, cache_dir));
    write_text(stem + "_cayley.svg",
               render_figure(cayley_sets, red, header + " cayley"));
    // right panel: all spherically symmetric words (sweep route past the
    // polynomial budget, so deep words contribute their circle zeros)
    EnumerateOptions opts;
    opts.precision_bits = std::max(bits, 192);
    // keep polynomial solves in the regime the root finder certifies at this
    // precision; larger words contribute their circle zeros via the sweep
    opts.poly_vertex_budget = 255;
    opts.total_vertex_budget = 1LL << 40;
    opts.cache_dir = cache_dir;
    ZeroSet sph = enumerate_zero_set_cached(d, b, depth, TreeClass::spherical,
                                            opts);
    write_text(stem + "_spherical.svg",
               render_figure({sph}, red, header + " spherical"));
    return 0;
  }
  return 2;
}

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
