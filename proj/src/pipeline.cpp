#include "goldman/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "goldman/foliation.hpp"

namespace goldman {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string() + " (run the previous stage first)");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

void write_json(const fs::path& p, const json& doc) { write_file(p, doc.dump(2) + "\n"); }

// Representation document with 17-digit generator entries followed by the
// extra keys of `meta`.
std::string representation_document(const Representation& rep, const json& meta) {
  std::string out = "{\n  \"genus\": " + std::to_string(rep.genus()) + ",\n  \"generators\": [\n";
  const auto gens = rep.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& g = gens[i];
    out += "    [[" + g17(g.linear(0, 0)) + ", " + g17(g.linear(0, 1)) + ", " + g17(g.linear(1, 0)) +
           ", " + g17(g.linear(1, 1)) + "], [" + g17(g.translation(0)) + ", " +
           g17(g.translation(1)) + "]]";
    out += i + 1 < gens.size() ? ",\n" : "\n";
  }
  out += "  ]";
  for (auto it = meta.begin(); it != meta.end(); ++it) {
    std::string value = it.value().dump(2);
    // indent nested lines by one level
    for (std::size_t k = value.find('\n'); k != std::string::npos; k = value.find('\n', k + 1)) {
      value.insert(k + 1, "  ");
    }
    out += ",\n  " + json(it.key()).dump() + ": " + value;
  }
  out += "\n}\n";
  return out;
}

json vec_json(const Vec3d& v) { return json::array({v(0), v(1), v(2)}); }

json config_json(const RunConfig& cfg) { return json(cfg.echo()); }

struct Context {
  RunConfig cfg;
  fs::path out;
  std::ostream& log;
  std::optional<Representation> fuchsian;
  std::optional<Representation> rep;
  std::optional<JordanCurve> curve;

  const Representation& need_fuchsian() {
    if (!fuchsian) fuchsian = read_representation_file((out / "fuchsian.json").string());
    return *fuchsian;
  }
  const Representation& need_rep() {
    if (!rep) rep = read_representation_file((out / "representation.json").string());
    return *rep;
  }
  const JordanCurve& need_curve() {
    if (!curve) {
      std::ifstream in(out / "curve.csv", std::ios::binary);
      if (!in) throw std::runtime_error("cannot read " + (out / "curve.csv").string() +
                                        " (run the curve stage first)");
      curve = read_curve_csv(in);
    }
    return *curve;
  }
  std::vector<std::string> echo_with_hash(const Representation& r) const {
    auto lines = cfg.echo();
    lines.push_back("representation_hash = " + hash_hex(r.content_hash()));
    return lines;
  }
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

int stage_gen(Context& ctx) {
  Timer t;
  ctx.fuchsian = Representation::fuchsian(ctx.cfg.genus);
  const auto& rep = *ctx.fuchsian;
  json traces = json::array();
  for (const auto& a : rep.linear_parts()) traces.push_back(a.trace());
  json meta;
  meta["config"] = config_json(ctx.cfg);
  meta["representation_hash"] = hash_hex(rep.content_hash());
  meta["relation_residual"] = rep.relation_residual();
  meta["traces"] = traces;
  write_file(ctx.out / "fuchsian.json", representation_document(rep, meta));
  ctx.log << "gen: relation residual " << rep.relation_residual() << " (" << t.seconds() << " s)\n";
  return kExitOk;
}

int stage_deform(Context& ctx) {
  Timer t;
  const auto d = deform_representation(ctx.need_fuchsian(), ctx.cfg);
  ctx.rep = d.rep;
  json meta;
  meta["config"] = config_json(ctx.cfg);
  meta["representation_hash"] = hash_hex(d.rep.content_hash());
  meta["mode"] = to_string(ctx.cfg.mode);
  meta["null_space_dimension"] = d.null_space_dimension;
  meta["pure_dimension"] = d.pure_dimension;
  meta["twist_generator"] = ctx.cfg.twist_generator;
  meta["twist"] = d.twist;
  meta["relation_residual"] = d.rep.relation_residual();
  meta["purity"] = {{"verdict", to_string(d.purity.verdict)},
                    {"fixed_point", {d.purity.fixed_point(0), d.purity.fixed_point(1)}},
                    {"relative_residual", d.purity.residual}};
  write_file(ctx.out / "representation.json", representation_document(d.rep, meta));
  ctx.log << "deform: mode " << to_string(ctx.cfg.mode) << ", null space " << d.null_space_dimension
          << ", purity " << to_string(d.purity.verdict) << ", relation residual "
          << d.rep.relation_residual() << " (" << t.seconds() << " s)\n";
  return kExitOk;
}

int stage_certify(Context& ctx) {
  Timer t;
  const auto& rep = ctx.need_rep();
  const auto hr = check_hyperbolic(rep, ctx.cfg.max_len, {ctx.cfg.threads, ctx.cfg.spectral_gate});
  const double relation = rep.relation_residual();
  const bool relation_ok = relation < 1e-8;
  const bool passed = relation_ok && hr.hyperbolic();

  json violations = json::array();
  for (const auto& v : hr.violations) {
    violations.push_back({{"word", v.word.str()}, {"lambda1", v.lambda1}, {"lambda2", v.lambda2}});
  }
  json doc;
  doc["config"] = config_json(ctx.cfg);
  doc["representation_hash"] = hash_hex(rep.content_hash());
  doc["max_len"] = hr.max_len;
  doc["elements_checked"] = hr.elements_checked;
  doc["violation_count"] = hr.violation_count;
  doc["violations"] = violations;
  doc["skipped"] = hr.skipped;
  doc["relation_residual"] = relation;
  doc["stable_norm_lower_bound"] = hr.stable_norm_lower_bound;
  doc["stable_norm_witness"] = hr.stable_norm_witness.str();
  doc["stable_norm_criterion_violated"] = hr.stable_norm_criterion_violated();
  doc["passed"] = passed;
  write_json(ctx.out / "hyperbolicity.json", doc);

  ctx.log << "certify: " << hr.elements_checked << " elements up to length " << hr.max_len << ", "
          << hr.violation_count << " violations, stable norm bound " << hr.stable_norm_lower_bound
          << " (" << t.seconds() << " s)\n";
  if (hr.stable_norm_criterion_violated()) {
    ctx.log << "certify: stable norm criterion violated by " << hr.stable_norm_witness.str() << "\n";
  }
  for (const auto& v : hr.violations) {
    ctx.log << "certify: violation " << v.word.str() << " lambda1 " << v.lambda1 << " lambda2 "
            << v.lambda2 << "\n";
  }
  if (!relation_ok) ctx.log << "certify: surface relation fails, residual " << relation << "\n";
  ctx.log << "certify: " << (passed ? "PASS" : "FAIL") << "\n";
  return passed ? kExitOk : kExitCertificate;
}

int stage_curve(Context& ctx) {
  Timer t;
  const auto& rep = ctx.need_rep();
  ctx.curve = sample_curve(rep, ctx.cfg.max_len, {ctx.cfg.threads, ctx.cfg.dedup_tol});
  const auto& curve = *ctx.curve;
  const double t_sweep = t.seconds();

  const auto comments = ctx.echo_with_hash(rep);
  {
    std::ofstream out(ctx.out / "curve.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write curve.csv");
    write_curve_csv(out, curve, comments);
  }

  json doc;
  doc["config"] = config_json(ctx.cfg);
  doc["representation_hash"] = hash_hex(rep.content_hash());
  doc["max_len"] = curve.max_len();
  doc["samples"] = curve.size();
  doc["max_theta_gap"] = curve.max_theta_gap();
  doc["max_abs_delta"] = curve.max_abs_delta();

  const auto eq = equivariance_check(curve, rep, ctx.cfg.equivariance_pairs, ctx.cfg.seed);
  doc["equivariance"] = {{"matched_pairs", eq.matched_pairs},
                         {"matched_residual", eq.matched_residual},
                         {"fresh_pairs", eq.fresh_pairs},
                         {"fresh_residual", eq.fresh_residual},
                         {"interpolated_pairs", eq.interpolated_pairs},
                         {"interpolated_residual", eq.interpolated_residual}};
  try {
    const auto reg = regularity_probe(curve);
    json slopes = json::array();
    for (const auto& s : reg.slopes) {
      slopes.push_back({{"depth", s.depth},
                        {"samples", s.samples},
                        {"max_slope", s.max_slope},
                        {"max_gap", s.max_gap}});
    }
    json boxes = json::array();
    for (const auto& [scale, count] : reg.box_counts) boxes.push_back({scale, count});
    doc["regularity"] = {{"box_dimension", reg.box_dim},
                         {"fit_residual", reg.fit_residual},
                         {"box_counts", boxes},
                         {"slopes", slopes}};
  } catch (const CurveError& e) {
    doc["regularity"] = {{"error", e.what()}};
  }
  write_json(ctx.out / "curve_report.json", doc);

  ctx.log << "curve: " << curve.size() << " samples at depth " << curve.max_len() << ", max gap "
          << curve.max_theta_gap() << ", max |delta| " << curve.max_abs_delta()
          << ", equivariance " << eq.matched_residual << " / " << eq.interpolated_residual << " ("
          << t_sweep << " s sweep, " << t.seconds() << " s total)\n";
  return kExitOk;
}

int stage_render(Context& ctx) {
  Timer t;
  const auto& rep = ctx.need_rep();
  const auto& curve = ctx.need_curve();
  SvgOptions opts;
  opts.chart = ctx.cfg.chart;
  opts.window = ctx.cfg.zoom;
  opts.title = std::string("invariant curve, ") + to_string(ctx.cfg.mode) + " cocycle, depth " +
               std::to_string(curve.max_len());
  opts.comments = ctx.echo_with_hash(rep);
  std::ostringstream svg;
  render_svg(svg, curve, opts);
  write_file(ctx.out / "curve.svg", svg.str());
  ctx.log << "render: " << to_string(ctx.cfg.chart) << " chart, " << svg.str().size() << " bytes ("
          << t.seconds() << " s)\n";
  return kExitOk;
}

json flag_record_json(const FlagRecord& r) {
  const auto slope = r.flag.slope();
  return {{"index", r.index},
          {"x", vec_json(r.flag.x.coords())},
          {"d", vec_json(r.flag.d.coeffs())},
          {"d_slope", {slope(0), slope(1)}},
          {"theta", r.flag.theta()},
          {"height", r.flag.height()},
          {"status", to_string(r.ends.status)},
          {"alpha", vec_json(r.ends.alpha.coords())},
          {"beta", vec_json(r.ends.beta.coords())},
          {"alpha_theta", r.ends.alpha_theta},
          {"beta_theta", r.ends.beta_theta},
          {"crossings", r.ends.crossings},
          {"robust_crossings", r.ends.robust_crossings},
          {"min_arc_height", r.ends.min_arc_height}};
}

int stage_foliate(Context& ctx) {
  Timer t;
  const auto& rep = ctx.need_rep();
  const auto& curve = ctx.need_curve();
  ClassifyOptions opts;
  opts.n_samples = ctx.cfg.flags;
  opts.seed = ctx.cfg.seed;
  opts.threads = ctx.cfg.threads;
  opts.endpoint.dead_zone = ctx.cfg.dead_zone;
  const auto report = classify_flags(rep, curve, opts);

  json doc;
  doc["config"] = config_json(ctx.cfg);
  doc["representation_hash"] = hash_hex(rep.content_hash());
  doc["curve_depth"] = curve.max_len();
  doc["curve_samples"] = curve.size();
  doc["parameters"] = {{"flags", opts.n_samples},
                       {"seed", opts.seed},
                       {"dead_zone", opts.endpoint.dead_zone},
                       {"cells", opts.endpoint.cells},
                       {"fallback_word", opts.fallback_word.str()}};
  doc["refused"] = report.refused;
  if (report.refused) {
    doc["diagnosis"] = report.diagnosis;
    write_json(ctx.out / "foliation.json", doc);
    ctx.log << "foliate: refused: " << report.diagnosis << " (" << t.seconds() << " s)\n";
    return kExitOk;
  }
  doc["sampled"] = report.sampled;
  doc["distinct"] = report.distinct;
  doc["equal"] = report.equal;
  doc["skipped"] = report.skipped;
  doc["fraction_distinct"] = report.fraction_distinct;
  doc["witness_distinct"] = report.witness_distinct ? flag_record_json(*report.witness_distinct) : json();
  doc["witness_equal"] = report.witness_equal ? flag_record_json(*report.witness_equal) : json();
  doc["constructed_witness"] =
      report.constructed_witness ? flag_record_json(*report.constructed_witness) : json();
  doc["witness_from_fallback"] = report.witness_from_fallback;

  const auto inv = invariant_line(rep, opts.fallback_word, &curve);
  doc["invariant_line"] = {{"word", opts.fallback_word.str()},
                           {"line", vec_json(inv.line.coeffs())},
                           {"attracting", vec_json(inv.attracting.coords())},
                           {"repelling", vec_json(inv.repelling.coords())},
                           {"meets_complement", inv.meets_complement},
                           {"max_height", inv.max_height}};

  const FlagRecord* probe_flag = report.witness_distinct     ? &*report.witness_distinct
                                 : report.constructed_witness ? &*report.constructed_witness
                                                              : nullptr;
  if (probe_flag) {
    const int depth = std::min(ctx.cfg.max_len, 8);
    const auto rows = orbit_accumulation_probe(rep, curve, probe_flag->flag, depth, 64, ctx.cfg.seed);
    json table = json::array();
    for (const auto& r : rows) {
      table.push_back({{"length", r.length},
                       {"samples", r.samples},
                       {"min_distance", r.min_distance},
                       {"median_distance", r.median_distance}});
    }
    doc["orbit_probe"] = {{"flag_index", probe_flag->index}, {"rows", table}};
  }
  write_json(ctx.out / "foliation.json", doc);
  ctx.log << "foliate: " << report.distinct << " distinct, " << report.equal << " equal, "
          << report.skipped << " skipped of " << report.sampled;
  if (report.witness_distinct) ctx.log << ", witness flag " << report.witness_distinct->index;
  ctx.log << " (" << t.seconds() << " s)\n";
  return kExitOk;
}

}  // namespace

const char* to_string(Stage s) {
  switch (s) {
    case Stage::Gen: return "gen";
    case Stage::Deform: return "deform";
    case Stage::Certify: return "certify";
    case Stage::Curve: return "curve";
    case Stage::Render: return "render";
    case Stage::Foliate: return "foliate";
    case Stage::All: return "all";
  }
  return "?";
}

Stage stage_from_string(const std::string& s) {
  for (Stage st : {Stage::Gen, Stage::Deform, Stage::Certify, Stage::Curve, Stage::Render,
                   Stage::Foliate, Stage::All}) {
    if (s == to_string(st)) return st;
  }
  throw ConfigError("unknown stage '" + s + "'");
}

double boundary_twist(const Representation& rep, int index) {
  const Mat2d a = rep.generators()[index].linear;
  const double det = a.determinant();
  if (!(det > 0)) throw DeformationError("boundary twist needs a positive determinant");
  const Mat2d unimodular = a / std::sqrt(det);
  const double r = unimodular.eigenvalues().cwiseAbs().maxCoeff();
  // L_u = s must equal half of t = 2 log r
  return std::log(r) - 0.5 * std::log(det);
}

DeformedRepresentation deform_representation(const Representation& fuchsian, const RunConfig& cfg) {
  cfg.validate();
  double s = 0;
  if (cfg.twist == "boundary") {
    s = boundary_twist(fuchsian, cfg.twist_generator);
  } else {
    s = std::stod(cfg.twist);
  }
  const std::vector<Row2d> zeros(fuchsian.generators().size(), Row2d::Zero());
  Representation linear = fuchsian.with_cocycle(zeros);
  if (s != 0) linear = linear.with_determinant_twist(cfg.twist_generator, s);
  const auto parts = linear.linear_parts();

  DeformedRepresentation out{linear, 0, 0, s, {}};
  const Eigen::MatrixXd basis = null_space(relation_matrix(parts));
  out.null_space_dimension = static_cast<int>(basis.cols());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(coboundary_matrix(parts));
  qr.setThreshold(1e-9);
  out.pure_dimension = out.null_space_dimension - static_cast<int>(qr.rank());

  switch (cfg.mode) {
    case CocycleMode::Zero:
      break;
    case CocycleMode::Coboundary: {
      const Row2d p(cfg.coboundary_x, cfg.coboundary_y);
      const auto t = coboundary(parts, p);
      out.rep = linear.with_cocycle(t);
      break;
    }
    case CocycleMode::Solved: {
      const auto sol = solve_cocycle(linear, cfg.seed, cfg.amplitude);
      out.rep = linear.with_cocycle(sol.t);
      break;
    }
    case CocycleMode::File: {
      const auto t = read_cocycle_file(cfg.cocycle_file, fuchsian.genus());
      out.rep = linear.with_cocycle(t);
      break;
    }
  }
  out.purity = is_pure(out.rep, {cfg.not_pure_below, cfg.pure_above});
  return out;
}

Representation representation_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw RepresentationError(std::string("representation JSON: ") + e.what());
  }
  try {
    const int genus = doc.at("genus").get<int>();
    const auto& gens = doc.at("generators");
    std::vector<AffDualMapd> maps;
    for (const auto& g : gens) {
      const auto& lin = g.at(0);
      const auto& tr = g.at(1);
      if (lin.size() != 4 || tr.size() != 2) {
        throw RepresentationError("generator needs 4 linear and 2 translation entries");
      }
      AffDualMapd m;
      m.linear << lin[0].get<double>(), lin[1].get<double>(), lin[2].get<double>(), lin[3].get<double>();
      m.translation << tr[0].get<double>(), tr[1].get<double>();
      maps.push_back(m);
    }
    return Representation(genus, std::move(maps));
  } catch (const json::exception& e) {
    throw RepresentationError(std::string("representation JSON: ") + e.what());
  }
}

Representation read_representation_file(const std::string& path) {
  return representation_from_json(read_file(path));
}

std::vector<Row2d> read_cocycle_file(const std::string& path, int genus) {
  json doc;
  try {
    doc = json::parse(read_file(path));
    std::vector<Row2d> rows;
    for (const auto& r : doc.at("translations")) rows.emplace_back(r.at(0).get<double>(), r.at(1).get<double>());
    if (static_cast<int>(rows.size()) != 2 * genus) {
      throw DeformationError("cocycle file needs " + std::to_string(2 * genus) + " translations");
    }
    return rows;
  } catch (const json::exception& e) {
    throw DeformationError(std::string("cocycle file: ") + e.what());
  }
}

int run_stage(Stage stage, const RunConfig& cfg, std::ostream& log) {
  Context ctx{cfg, fs::path(cfg.out), log, {}, {}, {}};
  try {
    cfg.validate();
    fs::create_directories(ctx.out);
    switch (stage) {
      case Stage::Gen: return stage_gen(ctx);
      case Stage::Deform: return stage_deform(ctx);
      case Stage::Certify: return stage_certify(ctx);
      case Stage::Curve: return stage_curve(ctx);
      case Stage::Render: return stage_render(ctx);
      case Stage::Foliate: return stage_foliate(ctx);
      case Stage::All: {
        stage_gen(ctx);
        stage_deform(ctx);
        if (const int rc = stage_certify(ctx); rc != kExitOk) return rc;
        stage_curve(ctx);
        stage_render(ctx);
        return stage_foliate(ctx);
      }
    }
  } catch (const std::exception& e) {
    log << "error in stage " << to_string(stage) << ": " << e.what() << "\n";
    try {
      fs::create_directories(ctx.out);
      json err = {{"stage", to_string(stage)}, {"error", e.what()}, {"config", config_json(cfg)}};
      write_json(ctx.out / "error.json", err);
    } catch (const std::exception&) {
    }
  }
  return kExitError;
}

}  // namespace goldman
