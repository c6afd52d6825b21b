#include "qgeo/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgeo/bodies.hpp"
#include "qgeo/certify.hpp"
#include "qgeo/crofton.hpp"
#include "qgeo/ellipsoid.hpp"
#include "qgeo/report.hpp"

namespace qgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInf;
  std::size_t used = 0;
  double p;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse --p value \"" + text + "\"");
  }
  if (used != text.size()) throw std::invalid_argument("cannot parse --p value \"" + text + "\"");
  if (!(p >= 0.0)) throw std::invalid_argument("--p must be >= 0 or inf");
  return p;
}

Json p_to_json(double p) {
  if (std::isinf(p)) return Json("inf");
  return Json(p);
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("QGEO_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

std::string iso8601_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double binomial_count(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

struct Options {
  std::vector<std::string> inputs;
  std::string cover_path;
  std::string theorem;
  std::string dist = "gaussian";
  std::string p_text = "1";
  std::string method = "auto";
  std::string format = "json";
  std::string out_path;
  std::vector<double> radii;
  int dim = 0;
  int j = 0;
  int threads = 0;
  int dmax = 50;
  int bound_trials = 64;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool no_timestamp = false;
  bool no_normalize = false;
  bool vitale = false;
  double tol = 1e-9;
  double margin = 0.5;
  double extra_p = 0.0;
  bool extra_p_set = false;
};

void emit_report(const Options& opt, Json& report) {
  std::string text = opt.format == "csv" ? to_csv(report) : dump_json(report);
  if (opt.out_path.empty())
    std::cout << text;
  else
    write_text_file(opt.out_path, text);
}

Json config_base(const Options& opt, double p) {
  Json c;
  if (!opt.inputs.empty()) c["input"] = opt.inputs;
  c["p"] = p_to_json(p);
  c["tol"] = opt.tol;
  c["threads"] = resolve_threads(opt.threads);
  c["format"] = opt.format;
  return c;
}

Json estimate_json(const QEstimate& e) { return qestimate_to_json(e); }

void require_samples_seed(const Options& opt, const char* what) {
  if (opt.samples <= 0)
    throw std::invalid_argument(std::string(what) + " needs --samples > 0");
  if (!opt.seed_set) throw std::invalid_argument(std::string(what) + " needs --seed");
}

// ---- compute-q ----------------------------------------------------------

int cmd_compute_q(const Options& opt, Json& report) {
  if (opt.inputs.empty()) throw std::invalid_argument("compute-q needs --input");
  double p = parse_p(opt.p_text);
  std::vector<DiscreteSurface> tuple;
  for (const auto& path : opt.inputs) tuple.push_back(load_surface(path));

  bool diagonal = tuple.size() == 1;
  int j = diagonal ? (opt.j > 0 ? opt.j : 1) : static_cast<int>(tuple.size());
  if (!diagonal && opt.j > 0 && opt.j != j)
    throw std::invalid_argument("--j conflicts with the number of --input surfaces");
  int d = tuple[0].dim;
  if (j < 1 || j > d) throw std::invalid_argument("need 1 <= j <= dim");
  const DiscreteSurface& s0 = tuple[0];

  double tuple_count = 1.0;
  if (diagonal)
    tuple_count = std::pow(static_cast<double>(s0.size()), j);
  else
    for (const auto& s : tuple) tuple_count *= s.size();

  std::string method = opt.method;
  if (method == "auto") {
    if (diagonal && p == 2.0)
      method = "spectral";
    else if (diagonal && p == 1.0 && tuple_count > static_cast<double>(kDefaultTupleCap) &&
             binomial_count(s0.size(), j) <= static_cast<double>(kDefaultSubsetCap))
      method = "subsets";
    else if (diagonal && std::isinf(p) &&
             binomial_count(s0.size(), j) <= static_cast<double>(kDefaultSubsetCap))
      method = "subsets";
    else if (tuple_count <= static_cast<double>(kDefaultTupleCap))
      method = "exact";
    else
      method = "mc";
  }

  QEstimate est;
  if (method == "spectral") {
    if (!diagonal || p != 2.0)
      throw std::invalid_argument("spectral method needs a single surface and p=2");
    est = q2_spectral(s0, j);
  } else if (method == "subsets") {
    if (!diagonal || (p != 1.0 && !std::isinf(p)))
      throw std::invalid_argument("subset method needs a single surface and p in {1, inf}");
    est = std::isinf(p) ? qsup_diagonal_subsets(s0, j) : q1_diagonal_subsets(s0, j);
  } else if (method == "exact") {
    est = diagonal ? q_exact_diagonal(s0, j, p) : q_exact(tuple, p);
  } else if (method == "mc") {
    require_samples_seed(opt, "method mc");
    if (!(p > 0.0) || std::isinf(p))
      throw std::invalid_argument("mc needs finite p > 0; use an exact method instead");
    std::vector<AtomSampler> samplers;
    if (diagonal)
      samplers.assign(static_cast<std::size_t>(j), sampler_from_surface(s0));
    else
      for (const auto& s : tuple) samplers.push_back(sampler_from_surface(s));
    est = q_mc(samplers, p, opt.samples, opt.seed, resolve_threads(opt.threads));
  } else {
    throw std::invalid_argument("unknown method \"" + method + "\"");
  }

  Json config = config_base(opt, p);
  config["j"] = j;
  config["method"] = opt.method;
  config["method_resolved"] = method;
  if (opt.samples > 0) config["samples"] = opt.samples;
  if (opt.seed_set) config["seed"] = opt.seed;
  report["config"] = std::move(config);
  Json result;
  result["dim"] = d;
  result["j"] = j;
  result["p"] = p_to_json(p);
  result["q"] = estimate_json(est);
  report["result"] = std::move(result);
  return 0;
}

// ---- profile ------------------------------------------------------------

int cmd_profile(const Options& opt, Json& report) {
  if (opt.inputs.size() != 1) throw std::invalid_argument("profile needs exactly one --input");
  double p = parse_p(opt.p_text);
  DiscreteSurface s = load_surface(opt.inputs[0]);
  QProfile prof = q_profile(s, p);

  report["config"] = config_base(opt, p);
  Json result;
  result["dim"] = prof.dim;
  result["p"] = p_to_json(p);
  result["q"] = prof.q;
  if (!prof.a.empty())
    result["a"] = prof.a;
  else
    result["a"] = nullptr;
  if (!prof.b_proxy.empty())
    result["b_proxy"] = prof.b_proxy;
  else
    result["b_proxy"] = nullptr;
  result["method"] = prof.method;
  report["result"] = std::move(result);
  return 0;
}

// ---- certify --------------------------------------------------------------

int cmd_certify(const Options& opt, Json& report) {
  if (opt.theorem.empty()) throw std::invalid_argument("certify needs --theorem");
  if (opt.inputs.empty()) throw std::invalid_argument("certify needs --input");
  double p = parse_p(opt.p_text);

  Json config = config_base(opt, p);
  config["theorem"] = opt.theorem;
  if (!opt.cover_path.empty()) config["cover"] = opt.cover_path;
  if (opt.j > 0) config["j"] = opt.j;

  std::vector<CertificateReport> certs;
  Json extra;

  if (opt.theorem == "finner") {
    std::vector<DiscreteSurface> tuple;
    for (const auto& path : opt.inputs) tuple.push_back(load_surface(path));
    if (tuple.size() == 1 && opt.j > 1)
      tuple.assign(static_cast<std::size_t>(opt.j), tuple[0]);
    int j = static_cast<int>(tuple.size());
    UniformCover cover;
    if (!opt.cover_path.empty())
      cover = load_cover(opt.cover_path);
    else
      cover = j >= 2 ? leave_one_out_cover(j) : singleton_cover(1);
    certs.push_back(certify_finner(tuple, cover, p, opt.tol));
  } else {
    if (opt.inputs.size() != 1)
      throw std::invalid_argument("--theorem " + opt.theorem + " needs exactly one --input");
    DiscreteSurface s = load_surface(opt.inputs[0]);
    if (opt.theorem == "sphere-ratio") {
      certs = certify_sphere_ratio(s, p, opt.tol);
    } else if (opt.theorem == "diagonal-monotone") {
      certs = certify_diagonal_monotone(s, p, opt.tol);
    } else if (opt.theorem == "isoperimetric") {
      certs.push_back(certify_isoperimetric(s, opt.tol));
    } else if (opt.theorem == "log-concavity") {
      LogConcavityReport rep = certify_log_concavity(s, p, opt.tol);
      certs = rep.steps;
      certs.insert(certs.end(), rep.chain.begin(), rep.chain.end());
      Json prof;
      prof["q"] = rep.profile.q;
      prof["a"] = rep.profile.a;
      extra["profile"] = std::move(prof);
      extra["truncated_at"] = rep.truncated_at;
    } else {
      throw std::invalid_argument("unknown theorem \"" + opt.theorem + "\"");
    }
  }

  bool all_pass = true;
  Json arr = Json::array();
  for (const auto& c : certs) {
    all_pass = all_pass && c.pass;
    arr.push_back(certificate_to_json(c));
  }
  report["config"] = std::move(config);
  Json result;
  result["certificates"] = std::move(arr);
  for (auto it = extra.begin(); it != extra.end(); ++it) result[it.key()] = it.value();
  result["all_pass"] = all_pass;
  report["result"] = std::move(result);
  return all_pass ? 0 : 1;
}

// ---- sphere-constants -----------------------------------------------------

int cmd_sphere_constants(const Options& opt, Json& report) {
  if (opt.dim < 1) throw std::invalid_argument("sphere-constants needs --dim >= 1");
  SphereConstants table = sphere_constants(opt.dim);

  Json config = config_base(opt, parse_p(opt.p_text));
  config["dim"] = opt.dim;
  if (opt.extra_p_set) config["extra_p"] = p_to_json(opt.extra_p);
  report["config"] = std::move(config);

  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json e;
    e["j"] = r.j;
    e["p"] = p_to_json(r.p);
    e["value"] = r.value;
    rows.push_back(std::move(e));
  }
  if (opt.extra_p_set) {
    double p = opt.extra_p;
    for (int j = 1; j <= opt.dim; ++j) {
      QEstimate est;
      if (p == 1.0 || p == 2.0 || std::isinf(p)) {
        est.value = sphere_reference(opt.dim, j, p);
      } else {
        require_samples_seed(opt, "general p");
        est = sphere_reference_estimate(opt.dim, j, p, opt.samples, opt.seed,
                                        resolve_threads(opt.threads));
      }
      Json e;
      e["j"] = j;
      e["p"] = p_to_json(p);
      e["value"] = est.value;
      if (est.method == "mc") e["ci"] = est.ci_halfwidth;
      rows.push_back(std::move(e));
    }
  }
  Json result;
  result["dim"] = opt.dim;
  result["omega"] = table.omega;
  result["rows"] = std::move(rows);
  report["result"] = std::move(result);
  return 0;
}

// ---- visibility -------------------------------------------------------------

int cmd_visibility(const Options& opt, Json& report) {
  if (opt.inputs.size() != 1) throw std::invalid_argument("visibility needs exactly one --input");
  double p = parse_p(opt.p_text);
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("visibility needs finite p >= 1");
  require_samples_seed(opt, "visibility");
  DiscreteSurface s = load_surface(opt.inputs[0]);
  int threads = resolve_threads(opt.threads);
  VisibilityResult vr = visibility(s, p, opt.samples, opt.seed, threads);

  Json config = config_base(opt, p);
  config["samples"] = opt.samples;
  config["seed"] = opt.seed;
  config["bound_trials"] = opt.bound_trials;
  report["config"] = std::move(config);

  Json result;
  result["dim"] = s.dim;
  result["p"] = p_to_json(p);
  result["volume"] = vr.volume;
  result["volume_ci"] = vr.volume_ci;
  result["vis"] = vr.vis;
  result["vis_ci"] = vr.vis_ci;
  result["approximate"] = vr.approximate;
  result["samples"] = vr.samples;
  result["seed"] = vr.seed;
  Json john;
  Vec semi_axes = vr.john.semiaxes();
  Json semi = Json::array();
  for (int i = 0; i < semi_axes.size(); ++i) semi.push_back(semi_axes(i));
  john["semiaxes"] = std::move(semi);
  john["volume"] = vr.john.volume();
  john["mvee_iterations"] = vr.mvee_iterations;
  result["john"] = std::move(john);
  if (p == 1.0 && vr.santalo_product > 0.0) {
    Json st;
    st["product"] = vr.santalo_product;
    st["lower"] = vr.santalo_lower;
    st["upper"] = vr.santalo_upper;
    st["in_range"] = vr.santalo_product >= vr.santalo_lower * (1.0 - 1e-9) &&
                     vr.santalo_product <= vr.santalo_upper * (1.0 + 1e-9);
    result["santalo"] = std::move(st);
  }
  if (p == 1.0) {
    VisibilityBounds vb = visibility_bounds(s, {}, opt.bound_trials, opt.seed ^ 0x5eedb0b5ULL);
    Json bounds;
    Json jf;
    jf["label"] = vb.john.label;
    jf["value"] = vb.john.value;
    bounds["john_frame"] = std::move(jf);
    Json rf;
    rf["label"] = vb.random_best.label;
    rf["value"] = vb.random_best.value;
    bounds["random_best"] = std::move(rf);
    Json splits = Json::array();
    for (const auto& fb : vb.plane_splits) {
      Json e;
      e["label"] = fb.label;
      e["value"] = fb.value;
      splits.push_back(std::move(e));
    }
    bounds["plane_splits"] = std::move(splits);
    bounds["random_trials"] = vb.random_trials;
    result["bounds"] = std::move(bounds);
  }
  report["result"] = std::move(result);
  return 0;
}

// ---- crofton ---------------------------------------------------------------

int cmd_crofton(const Options& opt, Json& report) {
  std::vector<AnalyticSurface> shapes;
  if (!opt.radii.empty()) {
    if (!opt.inputs.empty())
      throw std::invalid_argument("give either --radii or --input, not both");
    if (opt.radii.size() == 2) {
      for (double r : opt.radii) shapes.push_back(make_circle(r));
    } else if (opt.radii.size() == 3) {
      for (double r : opt.radii) shapes.push_back(make_sphere(r));
    } else {
      throw std::invalid_argument("--radii takes 2 (circles) or 3 (spheres) values");
    }
    for (double r : opt.radii)
      if (!(r > 0.0)) throw std::invalid_argument("radii must be positive");
  } else if (opt.inputs.size() == 1) {
    shapes = load_shapes(opt.inputs[0]);
  } else {
    throw std::invalid_argument("crofton needs --radii or one --input shapes file");
  }
  require_samples_seed(opt, "crofton");
  CroftonResult res = crofton_check(shapes, opt.samples, opt.seed, resolve_threads(opt.threads),
                                    opt.margin, opt.tol);

  Json config = config_base(opt, 1.0);
  if (!opt.radii.empty()) config["radii"] = opt.radii;
  config["samples"] = opt.samples;
  config["seed"] = opt.seed;
  config["margin"] = opt.margin;
  report["config"] = std::move(config);

  Json result;
  result["dim"] = res.dim;
  result["shapes"] = shapes_to_json(shapes);
  result["lhs"] = res.lhs;
  result["rhs"] = res.rhs;
  result["rhs_ci"] = res.rhs_ci;
  result["rhs_ball"] = res.rhs_ball;
  result["rhs_ball_ci"] = res.rhs_ball_ci;
  result["pass"] = res.pass;
  result["forms_agree"] = res.forms_agree;
  result["tangency_events"] = res.tangency_events;
  result["boundary_violations"] = res.boundary_violations;
  result["box_volume"] = res.box_volume;
  report["result"] = std::move(result);
  return res.pass && res.forms_agree && res.boundary_violations == 0 ? 0 : 1;
}

// ---- randvol ----------------------------------------------------------------

int cmd_randvol(const Options& opt, Json& report) {
  if (opt.vitale) {
    std::vector<VitaleRow> rows = vitale_table(opt.dmax);
    Json config = config_base(opt, 1.0);
    config["vitale"] = true;
    config["dmax"] = opt.dmax;
    report["config"] = std::move(config);
    bool all_pass = true;
    Json arr = Json::array();
    for (const auto& r : rows) {
      all_pass = all_pass && r.pass;
      Json e;
      e["d"] = r.d;
      e["lhs"] = r.lhs;
      e["rhs"] = r.rhs;
      e["pass"] = r.pass;
      e["gap_half"] = r.gap_half;
      e["gap_full"] = r.gap_full;
      arr.push_back(std::move(e));
    }
    Json result;
    result["rows"] = std::move(arr);
    result["all_pass"] = all_pass;
    report["result"] = std::move(result);
    return all_pass ? 0 : 1;
  }

  if (opt.dim < 1) throw std::invalid_argument("randvol needs --dim >= 1");
  double p = parse_p(opt.p_text);
  int j = opt.j > 0 ? opt.j : opt.dim;
  require_samples_seed(opt, "randvol");
  Distribution dist;
  if (opt.dist == "uniform-sphere")
    dist = Distribution::uniform_sphere;
  else if (opt.dist == "uniform-ball")
    dist = Distribution::uniform_ball;
  else if (opt.dist == "gaussian")
    dist = Distribution::gaussian;
  else if (opt.dist == "exp-product")
    dist = Distribution::exponential_product;
  else
    throw std::invalid_argument("unknown distribution \"" + opt.dist + "\"");

  RandvolResult res = randvol_expectation(dist, opt.dim, j, p, !opt.no_normalize, opt.samples,
                                          opt.seed, resolve_threads(opt.threads));

  Json config = config_base(opt, p);
  config["dist"] = opt.dist;
  config["dim"] = opt.dim;
  config["j"] = j;
  config["normalize"] = !opt.no_normalize;
  config["samples"] = opt.samples;
  config["seed"] = opt.seed;
  report["config"] = std::move(config);

  Json result;
  result["dist"] = opt.dist;
  result["dim"] = opt.dim;
  result["j"] = j;
  result["p"] = p_to_json(p);
  result["normalized"] = res.normalized;
  result["scale"] = res.scale;
  Json exp_j;
  exp_j["value"] = res.expectation.value;
  exp_j["ci"] = res.expectation.ci_halfwidth;
  exp_j["samples"] = res.expectation.samples;
  result["expectation"] = std::move(exp_j);
  result["sphere_value"] = res.sphere_value;
  result["sphere_ci"] = res.sphere_ci;
  if (res.corollary)
    result["corollary"] = certificate_to_json(*res.corollary);
  else
    result["corollary"] = nullptr;
  report["result"] = std::move(result);
  return res.corollary && !res.corollary->pass ? 1 : 0;
}

}  // namespace

int run_main(int argc, const char* const* argv) {
  CLI::App app{"integral-geometric functionals of discrete hypersurfaces"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", opt.out_path, "write the report to this path");
    sub->add_flag("--no-timestamp", opt.no_timestamp, "omit the timestamp field");
    sub->add_option("--threads", opt.threads, "worker cap (QGEO_THREADS as fallback)");
    sub->add_option("--tol", opt.tol, "relative tolerance for exact comparisons");
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--samples", opt.samples, "Monte Carlo sample count");
    sub->add_option("--seed", opt.seed, "Monte Carlo seed");
  };

  CLI::App* c_q = app.add_subcommand("compute-q", "Q_j^p of one surface or a tuple");
  c_q->add_option("--input", opt.inputs, "surface JSON (repeat for a tuple)");
  c_q->add_option("--j", opt.j, "tuple length for a single surface");
  c_q->add_option("--p", opt.p_text, "exponent p in [0, inf]");
  c_q->add_option("--method", opt.method, "computation route")
      ->check(CLI::IsMember({"auto", "exact", "spectral", "subsets", "mc"}));
  add_sampling(c_q);
  add_common(c_q);

  CLI::App* c_prof = app.add_subcommand("profile", "Q_j, a_j, b_j for j = 1..d");
  c_prof->add_option("--input", opt.inputs, "surface JSON");
  c_prof->add_option("--p", opt.p_text, "exponent p");
  add_common(c_prof);

  CLI::App* c_cert = app.add_subcommand("certify", "inequality certificates");
  c_cert->add_option("--theorem", opt.theorem,
                     "finner | sphere-ratio | log-concavity | diagonal-monotone | isoperimetric");
  c_cert->add_option("--input", opt.inputs, "surface JSON (repeat for a tuple)");
  c_cert->add_option("--cover", opt.cover_path, "cover JSON (default: leave-one-out)");
  c_cert->add_option("--j", opt.j, "replicate a single surface into a j-tuple");
  c_cert->add_option("--p", opt.p_text, "exponent p");
  add_common(c_cert);

  CLI::App* c_sph = app.add_subcommand("sphere-constants", "closed-form Q_j^p(S^{d-1}) table");
  c_sph->add_option("--dim", opt.dim, "ambient dimension");
  auto* extra_p = c_sph->add_option("--p", opt.p_text, "extra exponent row (mc if not closed form)");
  add_sampling(c_sph);
  add_common(c_sph);

  CLI::App* c_vis = app.add_subcommand("visibility", "vis(K^p) with John ellipsoid diagnostics");
  c_vis->add_option("--input", opt.inputs, "surface JSON");
  c_vis->add_option("--p", opt.p_text, "exponent p >= 1");
  c_vis->add_option("--bound-trials", opt.bound_trials, "random frames for bound diagnostics");
  add_sampling(c_vis);
  add_common(c_vis);

  CLI::App* c_cro = app.add_subcommand("crofton", "translative intersection formula check");
  c_cro->add_option("--radii", opt.radii, "2 circle radii or 3 sphere radii");
  c_cro->add_option("--input", opt.inputs, "shapes JSON");
  c_cro->add_option("--margin", opt.margin, "extra slack on the shift boxes");
  add_sampling(c_cro);
  add_common(c_cro);

  CLI::App* c_rv = app.add_subcommand("randvol", "random parallelotope volume expectations");
  c_rv->add_option("--dist", opt.dist, "uniform-sphere | uniform-ball | gaussian | exp-product");
  c_rv->add_option("--dim", opt.dim, "ambient dimension");
  c_rv->add_option("--j", opt.j, "number of random vectors (default d)");
  c_rv->add_option("--p", opt.p_text, "exponent p > 0, finite");
  c_rv->add_flag("--no-normalize", opt.no_normalize, "skip the E|xi|^p = 1 rescale");
  c_rv->add_flag("--vitale", opt.vitale, "emit the d <= dmax limit table instead");
  c_rv->add_option("--dmax", opt.dmax, "largest dimension for --vitale");
  add_sampling(c_rv);
  add_common(c_rv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (CLI::App* sub : {c_q, c_sph, c_vis, c_cro, c_rv})
    if (sub->count("--seed") > 0) opt.seed_set = true;
  opt.extra_p_set = extra_p->count() > 0;
  if (opt.extra_p_set) {
    try {
      opt.extra_p = parse_p(opt.p_text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  if (!(opt.tol > 0.0)) {
    std::cerr << "error: --tol must be positive\n";
    return 2;
  }

  Json report;
  CLI::App* chosen = app.get_subcommands().front();
  report["command"] = chosen->get_name();
  if (!opt.no_timestamp) report["timestamp"] = iso8601_now();

  try {
    int rc;
    if (chosen == c_q)
      rc = cmd_compute_q(opt, report);
    else if (chosen == c_prof)
      rc = cmd_profile(opt, report);
    else if (chosen == c_cert)
      rc = cmd_certify(opt, report);
    else if (chosen == c_sph)
      rc = cmd_sphere_constants(opt, report);
    else if (chosen == c_vis)
      rc = cmd_visibility(opt, report);
    else if (chosen == c_cro)
      rc = cmd_crofton(opt, report);
    else
      rc = cmd_randvol(opt, report);
    emit_report(opt, report);
    return rc;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what()
              << " (rerun with --method mc and --samples/--seed)\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_main(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("qgeo");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return run_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace qgeo
