// polyberg: evaluate reproducing kernels and related quantities, and run the
// verification suites. Exit codes: 0 success / all checks pass, 1 a
// verification check failed, 2 usage or parse error, 3 domain error (a point
// too close to or outside the boundary).
#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyberg/verify.hpp"

using namespace polyberg;
using geometry::CPoint;
using geometry::Domain;
using nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_cplx(cplx v) {
  if (v.imag() == 0.0) return fmt_double(v.real());
  std::string out = fmt_double(v.real());
  out += (v.imag() < 0 ? "-" : "+");
  out += fmt_double(std::abs(v.imag()));
  out += "i";
  return out;
}

double parse_real_strict(const std::string& t) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (...) {
    throw std::invalid_argument("bad number: '" + t + "'");
  }
  if (pos != t.size()) throw std::invalid_argument("bad number: '" + t + "'");
  return v;
}

// `a+bi` with the imaginary unit as a suffix; `i`, `-i`, `2i`, `1-0.5i`,
// plain reals, and exponent forms like `1e-3+2e+1i` are all accepted.
cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  const bool has_i = s.back() == 'i' || s.back() == 'I';
  if (!has_i) return cplx(parse_real_strict(s), 0.0);
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto imag_value = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real_strict(t);
  };
  if (split == std::string::npos) return cplx(0.0, imag_value(body));
  return cplx(parse_real_strict(body.substr(0, split)), imag_value(body.substr(split)));
}

std::vector<cplx> parse_point_coords(const std::string& s) {
  std::vector<cplx> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_complex(s.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

CPoint make_point(std::vector<cplx> coords, Domain dom, int n, const char* what) {
  if (static_cast<int>(coords.size()) != n)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) +
                                " components, got " + std::to_string(coords.size()));
  return dom == Domain::ball ? CPoint::ball(std::move(coords)) : CPoint::siegel(std::move(coords));
}

// Points file: JSON array of points, each point an array of [re, im] pairs.
std::vector<std::vector<cplx>> load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open points file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("points file " + path + ": " + e.what());
  }
  if (!j.is_array()) throw std::invalid_argument("points file must hold a JSON array of points");
  std::vector<std::vector<cplx>> out;
  for (const auto& pj : j) {
    if (!pj.is_array() || pj.empty())
      throw std::invalid_argument("each point must be a non-empty array of [re, im] pairs");
    std::vector<cplx> coords;
    for (const auto& cj : pj) {
      if (!cj.is_array() || cj.size() != 2 || !cj[0].is_number() || !cj[1].is_number())
        throw std::invalid_argument("each component must be a [re, im] pair of numbers");
      coords.emplace_back(cj[0].get<double>(), cj[1].get<double>());
    }
    out.push_back(std::move(coords));
  }
  return out;
}

ordered_json point_json(const CPoint& p) {
  ordered_json out = ordered_json::array();
  for (int i = 0; i < p.dim(); ++i) out.push_back({p[i].real(), p[i].imag()});
  return out;
}

std::uint64_t parse_seed_text(const std::string& text, const char* what) {
  if (text.empty()) throw std::invalid_argument(std::string(what) + ": empty seed");
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end != text.c_str() + text.size())
    throw std::invalid_argument(std::string(what) + ": bad seed '" + text + "'");
  return v;
}

struct Options {
  int n = 1;
  int m = 1;
  double alpha = 0.0;
  double beta = 0.0;
  double t = 0.0;
  std::string z, w, xi, eta;
  std::string domain = "ball";
  long long samples = 200000;
  std::string seed_text;
  long long chunk = 65536;
  std::string format;
  std::string points_file;
  double tol_scale = 1.0;
};

std::uint64_t resolve_seed(const Options& opt) {
  if (!opt.seed_text.empty()) return parse_seed_text(opt.seed_text, "--seed");
  if (const char* env = std::getenv("POLYBERG_SEED")) return parse_seed_text(env, "POLYBERG_SEED");
  return 1;
}

int resolve_threads() {
  const char* env = std::getenv("POLYBERG_THREADS");
  if (!env) return 1;
  const std::string text(env);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (errno != 0 || end != text.c_str() + text.size() || v < 1)
    throw std::invalid_argument("POLYBERG_THREADS: bad value '" + text + "'");
  return static_cast<int>(v);
}

SpaceParams space_params(const Options& opt) {
  if (!(opt.alpha > -1.0)) throw std::invalid_argument("--alpha must be > -1");
  return SpaceParams(opt.n, opt.m, opt.alpha);
}

// One evaluation row: the inputs that produced a value plus the value itself,
// kept as (label, complex) pairs so every format renders the same content.
struct EvalRow {
  std::vector<std::pair<std::string, ordered_json>> inputs;
  cplx value;
};

void emit_eval(const std::string& kind, const ordered_json& header,
               const std::vector<EvalRow>& rows, const std::string& format) {
  if (format == "json") {
    ordered_json out;
    out["kind"] = kind;
    for (const auto& [k, v] : header.items()) out[k] = v;
    out["results"] = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json rj;
      for (const auto& [k, v] : row.inputs) rj[k] = v;
      rj["value"] = {row.value.real(), row.value.imag()};
      out["results"].push_back(std::move(rj));
    }
    std::cout << out.dump() << "\n";
  } else if (format == "csv") {
    std::cout << "index,value_re,value_im\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      std::cout << i << "," << fmt_double(rows[i].value.real()) << ","
                << fmt_double(rows[i].value.imag()) << "\n";
  } else {
    for (const auto& row : rows) std::cout << fmt_cplx(row.value) << "\n";
  }
}

void emit_report(const verify::VerifyReport& rep, const std::string& format) {
  if (format == "json") {
    std::cout << rep.to_json() << "\n";
  } else if (format == "csv") {
    std::cout << "id,residual,tol,sigma,pass\n";
    for (const auto& c : rep.checks) {
      std::cout << c.id << "," << fmt_double(c.residual) << "," << fmt_double(c.tol) << ","
                << (c.sigma ? fmt_double(*c.sigma) : "") << "," << (c.pass ? "1" : "0") << "\n";
    }
  } else {
    for (const auto& c : rep.checks) {
      std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.id << " residual=" << fmt_double(c.residual)
                << " tol=" << fmt_double(c.tol);
      if (c.sigma) std::cout << " sigma=" << fmt_double(*c.sigma);
      std::cout << "\n";
    }
    std::cout << (rep.pass ? "PASS" : "FAIL") << " " << rep.suite << "\n";
  }
}

void rescale_tolerances(verify::VerifyReport& rep, double scale) {
  rep.pass = true;
  for (auto& c : rep.checks) {
    c.tol *= scale;
    c.pass = std::isfinite(c.residual) && c.residual <= c.tol;
    rep.pass = rep.pass && c.pass;
  }
}

// Point pairs for the two-argument evaluators: either one inline pair or a
// points file with an even number of points, consumed consecutively.
std::vector<std::pair<CPoint, CPoint>> gather_pairs(const Options& opt, Domain dom,
                                                    const std::string& a_text,
                                                    const std::string& b_text, const char* a_name,
                                                    const char* b_name) {
  std::vector<std::pair<CPoint, CPoint>> pairs;
  if (!opt.points_file.empty()) {
    if (!a_text.empty() || !b_text.empty())
      throw std::invalid_argument("give either inline points or --points-file, not both");
    auto pts = load_points(opt.points_file);
    if (pts.size() < 2 || pts.size() % 2 != 0)
      throw std::invalid_argument("points file must hold an even number of points (pairs)");
    for (std::size_t i = 0; i < pts.size(); i += 2)
      pairs.emplace_back(make_point(std::move(pts[i]), dom, opt.n, "points file"),
                         make_point(std::move(pts[i + 1]), dom, opt.n, "points file"));
  } else {
    if (a_text.empty() || b_text.empty())
      throw std::invalid_argument(std::string("need both ") + a_name + " and " + b_name +
                                  " (or --points-file)");
    pairs.emplace_back(make_point(parse_point_coords(a_text), dom, opt.n, a_name),
                       make_point(parse_point_coords(b_text), dom, opt.n, b_name));
  }
  return pairs;
}

std::vector<CPoint> gather_single(const Options& opt, Domain dom, const std::string& a_text,
                                  const char* a_name) {
  std::vector<CPoint> points;
  if (!opt.points_file.empty()) {
    if (!a_text.empty())
      throw std::invalid_argument("give either inline points or --points-file, not both");
    for (auto& coords : load_points(opt.points_file))
      points.push_back(make_point(std::move(coords), dom, opt.n, "points file"));
    if (points.empty()) throw std::invalid_argument("points file holds no points");
  } else {
    if (a_text.empty())
      throw std::invalid_argument(std::string("need ") + a_name + " (or --points-file)");
    points.push_back(make_point(parse_point_coords(a_text), dom, opt.n, a_name));
  }
  return points;
}

int run_eval(const std::string& kind, const Options& opt) {
  const std::string format = opt.format.empty() ? "plain" : opt.format;

  if (kind == "jacobi" || kind == "rpoly") {
    if (!(opt.alpha > -1.0) || !(opt.beta > -1.0))
      throw std::invalid_argument("--alpha and --beta must be > -1");
    double value = 0.0;
    ordered_json header;
    header["m"] = opt.m;
    header["alpha"] = opt.alpha;
    header["beta"] = opt.beta;
    header["t"] = opt.t;
    if (kind == "jacobi") {
      value = special_fn::jacobi_eval(special_fn::JacobiParams(opt.alpha, opt.beta, opt.m), opt.t);
    } else {
      value = special_fn::r_poly(special_fn::RPolyParams(opt.m, opt.alpha, opt.beta))(opt.t);
    }
    emit_eval(kind, header, {EvalRow{{}, cplx(value, 0.0)}}, format);
    return 0;
  }

  ordered_json header;
  header["n"] = opt.n;
  header["m"] = opt.m;
  header["alpha"] = opt.alpha;

  if (kind == "kernel-ball" || kind == "kernel-siegel") {
    const Domain dom = (kind == "kernel-ball") ? Domain::ball : Domain::siegel;
    const SpaceParams params = space_params(opt);
    const kernels::KernelSpec spec(params, dom);
    const auto pairs = (dom == Domain::ball)
                           ? gather_pairs(opt, dom, opt.z, opt.w, "--z", "--w")
                           : gather_pairs(opt, dom, opt.xi, opt.eta, "--xi", "--eta");
    std::vector<EvalRow> rows;
    for (const auto& [p, q] : pairs) {
      const cplx v = (dom == Domain::ball) ? kernels::kernel_ball(spec, p, q)
                                           : kernels::kernel_siegel(spec, p, q);
      rows.push_back(EvalRow{{{dom == Domain::ball ? "z" : "xi", point_json(p)},
                              {dom == Domain::ball ? "w" : "eta", point_json(q)}},
                             v});
    }
    emit_eval(kind, header, rows, format);
    return 0;
  }

  if (kind == "distance") {
    const Domain dom = (opt.domain == "ball") ? Domain::ball : Domain::siegel;
    ordered_json dheader;
    dheader["n"] = opt.n;
    dheader["domain"] = opt.domain;
    const auto pairs = (dom == Domain::ball)
                           ? gather_pairs(opt, dom, opt.z, opt.w, "--z", "--w")
                           : gather_pairs(opt, dom, opt.xi, opt.eta, "--xi", "--eta");
    std::vector<EvalRow> rows;
    for (const auto& [p, q] : pairs) {
      const double v =
          (dom == Domain::ball) ? geometry::rho_ball(p, q) : geometry::rho_siegel(p, q);
      rows.push_back(EvalRow{{{dom == Domain::ball ? "z" : "xi", point_json(p)},
                              {dom == Domain::ball ? "w" : "eta", point_json(q)}},
                             cplx(v, 0.0)});
    }
    emit_eval(kind, dheader, rows, format);
    return 0;
  }

  if (kind == "berezin") {
    // Berezin transform of the built-in rank-one-difference witness
    // S = <.,z_1> z_1 - <.,conj(z_1)> conj(z_1): identically zero on the
    // diagonal even though S itself is not zero (its pairing against z_1 is
    // 1/(n+alpha+1)^2). Needs m >= 2 so conj(z_1) lies in the space.
    if (opt.m < 2) throw std::invalid_argument("berezin witness needs --m >= 2");
    const SpaceParams params = space_params(opt);
    const kernels::KernelSpec spec(params, Domain::ball);
    const auto e1 = multipoly::MultiIndex::unit(opt.n, 0);
    const auto zero = multipoly::MultiIndex::zeros(opt.n);
    const multipoly::MixedPoly z1 = multipoly::MixedPoly::monomial(e1, zero, 1.0);
    const multipoly::MixedPoly z1bar = multipoly::MixedPoly::monomial(zero, e1, 1.0);
    kernels::FiniteRankOp op;
    op.terms.push_back({1.0, z1, z1});
    op.terms.push_back({-1.0, z1bar, z1bar});
    const double pairing =
        std::norm(multipoly::inner_product(z1, z1, params));  // <S z_1, z_1> = ||z_1||^4
    header["witness_pairing"] = pairing;
    std::vector<EvalRow> rows;
    for (const auto& p : gather_single(opt, Domain::ball, opt.z, "--z"))
      rows.push_back(EvalRow{{{"z", point_json(p)}}, kernels::berezin_finite_rank(op, spec, p)});
    emit_eval(kind, header, rows, format);
    return 0;
  }

  throw std::invalid_argument("unknown eval kind: " + kind);
}

int run_verify(const std::string& suite, const Options& opt) {
  const std::string format = opt.format.empty() ? "json" : opt.format;
  if (opt.samples < 1 || opt.chunk < 1) throw std::invalid_argument("--samples and --chunk must be >= 1");
  if (!(opt.tol_scale > 0.0)) throw std::invalid_argument("--tol-scale must be positive");
  const SpaceParams params = space_params(opt);
  verify::MCConfig cfg;
  cfg.samples = opt.samples;
  cfg.seed = resolve_seed(opt);
  cfg.chunk = opt.chunk;
  cfg.threads = resolve_threads();

  verify::VerifyReport rep;
  if (suite == "mvp") {
    rep = verify::suite_mvp(params, 100, cfg.seed);
  } else if (suite == "rk") {
    std::vector<CPoint> centers;
    if (!opt.points_file.empty()) {
      for (auto& coords : load_points(opt.points_file))
        centers.push_back(make_point(std::move(coords), Domain::ball, opt.n, "points file"));
      if (centers.empty()) throw std::invalid_argument("points file holds no centers");
    } else {
      centers = verify::default_centers(params, cfg.seed);
    }
    rep = verify::suite_reproducing(params, centers, cfg);
  } else if (suite == "identities") {
    rep = verify::suite_identities(params, cfg);
  } else if (suite == "unitary") {
    rep = verify::suite_unitary(params, cfg);
  } else if (suite == "berezin") {
    rep = verify::suite_berezin(params, cfg.seed);
  } else if (suite == "all") {
    rep = verify::verify_all(params, cfg);
  } else {
    throw std::invalid_argument("unknown verify suite: " + suite);
  }

  if (opt.tol_scale != 1.0) rescale_tolerances(rep, opt.tol_scale);
  emit_report(rep, format);
  return rep.pass ? 0 : 1;
}

void add_space_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--n", opt.n, "complex dimension")->check(CLI::Range(1, 16));
  cmd->add_option("--m", opt.m, "polyanalyticity order")->check(CLI::Range(1, 30));
  cmd->add_option("--alpha", opt.alpha, "radial weight exponent (> -1)");
}

void add_format_flag(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "plain"}));
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::string action;

  CLI::App app{"polyanalytic Bergman spaces: kernels, transforms, verification"};
  app.require_subcommand(1);

  CLI::App* eval = app.add_subcommand("eval", "evaluate one quantity at given inputs");
  eval->require_subcommand(1);
  CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->require_subcommand(1);

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  const std::string& act) {
    CLI::App* cmd = parent->add_subcommand(name, help);
    cmd->callback([&action, act] { action = act; });
    add_format_flag(cmd, opt);
    return cmd;
  };

  {
    CLI::App* c = leaf(eval, "jacobi", "Jacobi polynomial P_m^(alpha,beta) at t", "eval/jacobi");
    c->add_option("--m", opt.m, "degree")->check(CLI::Range(0, 30));
    c->add_option("--alpha", opt.alpha, "first exponent (> -1)");
    c->add_option("--beta", opt.beta, "second exponent (> -1)");
    c->add_option("--t", opt.t, "evaluation point")->required();
  }
  {
    CLI::App* c = leaf(eval, "rpoly", "interval reproducing polynomial R_m at t", "eval/rpoly");
    c->add_option("--m", opt.m, "degree")->check(CLI::Range(0, 30));
    c->add_option("--alpha", opt.alpha, "weight exponent (> -1)");
    c->add_option("--beta", opt.beta, "weight exponent (> -1)");
    c->add_option("--t", opt.t, "evaluation point")->required();
  }
  {
    CLI::App* c = leaf(eval, "kernel-ball", "reproducing kernel K_z(w) on the ball",
                       "eval/kernel-ball");
    add_space_flags(c, opt);
    c->add_option("--z", opt.z, "center, comma-separated complex components");
    c->add_option("--w", opt.w, "evaluation point");
    c->add_option("--points-file", opt.points_file, "JSON point pairs");
  }
  {
    CLI::App* c = leaf(eval, "kernel-siegel", "reproducing kernel K_xi(eta) on the half-space",
                       "eval/kernel-siegel");
    add_space_flags(c, opt);
    c->add_option("--xi", opt.xi, "center, comma-separated complex components");
    c->add_option("--eta", opt.eta, "evaluation point");
    c->add_option("--points-file", opt.points_file, "JSON point pairs");
  }
  {
    CLI::App* c = leaf(eval, "distance", "pseudohyperbolic distance", "eval/distance");
    c->add_option("--n", opt.n, "complex dimension")->check(CLI::Range(1, 16));
    c->add_option("--domain", opt.domain, "ball or siegel")
        ->check(CLI::IsMember({"ball", "siegel"}));
    c->add_option("--z", opt.z, "first ball point");
    c->add_option("--w", opt.w, "second ball point");
    c->add_option("--xi", opt.xi, "first half-space point");
    c->add_option("--eta", opt.eta, "second half-space point");
    c->add_option("--points-file", opt.points_file, "JSON point pairs");
  }
  {
    CLI::App* c = leaf(eval, "berezin", "Berezin transform of the built-in witness operator",
                       "eval/berezin");
    add_space_flags(c, opt);
    c->add_option("--z", opt.z, "evaluation point");
    c->add_option("--points-file", opt.points_file, "JSON points");
  }

  for (const char* suite : {"mvp", "rk", "identities", "unitary", "berezin", "all"}) {
    CLI::App* c = leaf(verify_cmd, suite, std::string("suite ") + suite, std::string("verify/") + suite);
    add_space_flags(c, opt);
    c->add_option("--samples", opt.samples, "Monte Carlo samples");
    c->add_option("--seed", opt.seed_text, "RNG seed (default: POLYBERG_SEED or 1)");
    c->add_option("--chunk", opt.chunk, "Monte Carlo chunk size");
    c->add_option("--tol-scale", opt.tol_scale, "multiply every check tolerance");
    if (std::string(suite) == "rk")
      c->add_option("--points-file", opt.points_file, "JSON centers for the reproducing checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto slash = action.find('/');
    const std::string group = action.substr(0, slash);
    const std::string kind = action.substr(slash + 1);
    return group == "eval" ? run_eval(kind, opt) : run_verify(kind, opt);
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
