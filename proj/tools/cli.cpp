#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gensc/asymptotics.hpp"
#include "gensc/errors.hpp"
#include "gensc/io.hpp"
#include "gensc/oodmetrics.hpp"
#include "gensc/scores.hpp"
#include "gensc/selection.hpp"
#include "gensc/synthetic.hpp"

namespace gensc::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr std::array<double, 3> kAurcAlphas = {0.1, 0.5, 1.0};

std::string alpha_key(double alpha) {
  std::ostringstream s;
  s << "aurc_" << std::fixed << std::setprecision(1) << alpha;
  return s.str();
}

ScoreId require_score(const std::string& name) {
  const auto id = parse_score_id(name);
  if (!id) throw Error(ErrorCode::kInvalidArgument, "unknown score '" + name + "'");
  return *id;
}

io::SplitSelection require_splits(const std::string& text) {
  const auto s = io::parse_split_selection(text);
  if (!s) throw Error(ErrorCode::kInvalidArgument, "--splits must be in|in+cov|in+label|all, got '" + text + "'");
  return *s;
}

// Options shared by the commands that score a manifest.
struct ScoringFlags {
  std::string manifest;
  std::string score;
  std::string splits = "all";
  std::size_t k = 2;
  std::size_t vim_dim = 0;
  std::uint64_t seed = 0;
  std::string sirc_secondary = "energy";

  void attach(CLI::App* cmd, bool with_score = true, bool with_splits = true) {
    cmd->add_option("--manifest", manifest, "Dataset manifest (JSON)")->required();
    if (with_score) cmd->add_option("--score", score, "Score function")->required();
    if (with_splits) cmd->add_option("--splits", splits, "in|in+cov|in+label|all");
    cmd->add_option("--k", k, "KNN neighbour rank");
    cmd->add_option("--vim-dim", vim_dim, "ViM principal dimension (0 = automatic)");
    cmd->add_option("--seed", seed, "Seed for the calibration draw");
    cmd->add_option("--sirc-secondary", sirc_secondary, "Secondary score gated by SIRC");
  }

  scores::ContextOptions context_options() const {
    return {k, vim_dim, seed, require_score(sirc_secondary)};
  }
};

struct Loaded {
  io::Dataset data;
  ScoreId id;
  scores::ScoreContext ctx;
  ScoreVector scores;
};

Loaded load_and_score(const ScoringFlags& f, io::SplitSelection selection) {
  Loaded l{io::load_dataset(io::load_manifest(f.manifest), selection), require_score(f.score), {}, {}};
  const ClassifierHead* head = l.data.head ? &*l.data.head : nullptr;
  l.ctx = scores::prepare_context(l.data.set, head, l.id, f.context_options());
  l.scores = scores::score_set(l.data.set, l.id, l.ctx);
  return l;
}

std::string curve_csv(const RCCurve& curve) {
  std::string out = "coverage,risk\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out += io::format_double(curve.coverages[i]) + "," + io::format_double(curve.risks[i]) + "\n";
  return out;
}

ordered_json aurc_summary(const RCCurve& curve) {
  ordered_json j;
  for (double alpha : kAurcAlphas) {
    try {
      j[alpha_key(alpha)] = selection::aurc_alpha(curve, alpha);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyPrefix) throw;
      j[alpha_key(alpha)] = nullptr;
    }
  }
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

fs::path json_sibling(const fs::path& csv_path) {
  fs::path p = csv_path;
  if (p.extension() == ".csv") return p.replace_extension(".json");
  p += ".json";
  return p;
}

// --- score ---------------------------------------------------------------

int cmd_score(const ScoringFlags& f, const std::string& out_path) {
  const auto l = load_and_score(f, require_splits(f.splits));
  std::string csv = "index,split,shift_tag,score\n";
  for (std::size_t i = 0; i < l.scores.values.size(); ++i) {
    csv += std::to_string(i) + "," + l.data.split_of_row[i] + "," + std::string(to_string(l.data.set.tags[i])) +
           "," + io::format_double(l.scores.values[i]) + "\n";
  }
  io::write_file_atomic(out_path, csv);
  return kExitOk;
}

// --- rc ------------------------------------------------------------------

int cmd_rc(const ScoringFlags& f, const std::string& out_path) {
  const auto selection = require_splits(f.splits);
  const auto l = load_and_score(f, selection);
  const auto loss = selection::losses(l.data.set);
  const auto curve = selection::rc_curve(l.scores.values, loss);
  io::write_file_atomic(out_path, curve_csv(curve));

  ordered_json j;
  j["score"] = std::string(to_string(l.id));
  j["splits"] = std::string(io::to_string(selection));
  j["n"] = l.data.set.rows();
  j["error_rate"] = loss.error_rate();
  j.update(aurc_summary(curve));
  io::write_file_atomic(json_sibling(out_path), dump(j));
  return kExitOk;
}

// --- calibrate -----------------------------------------------------------

SelectionTarget parse_target(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::kInvalidArgument, "--target must be coverage:<w> or risk:<l>");
  const std::string kind = text.substr(0, colon);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "--target value is not a number: " + text);
  }
  if (kind == "coverage") return CoverageAtLeast{value};
  if (kind == "risk") return RiskAtMost{value};
  throw Error(ErrorCode::kInvalidArgument, "--target kind must be coverage or risk");
}

int cmd_calibrate(const ScoringFlags& f, const std::string& target_text, std::ostream& out) {
  const auto target = parse_target(target_text);
  const auto selection = require_splits(f.splits);
  const auto l = load_and_score(f, selection);
  const auto loss = selection::losses(l.data.set);
  const auto cal = draw_calibration(l.data.set, f.seed);

  std::vector<double> cal_scores;
  LossVector cal_loss;
  for (auto i : cal.indices) {
    cal_scores.push_back(l.scores.values[i]);
    cal_loss.values.push_back(loss.values[i]);
  }
  const auto report = selection::calibrate_threshold(cal_scores, cal_loss, target);
  const auto deployed = selection::coverage_risk(l.scores.values, loss, report.gamma);

  ordered_json j;
  j["score"] = std::string(to_string(l.id));
  j["target"] = report.target;
  j["gamma"] = report.gamma;
  j["achieved_coverage"] = report.achieved_coverage;
  j["achieved_risk"] = report.achieved_risk;
  j["calibration"] = {{"size", cal.indices.size()}, {"seed", cal.seed}};
  j["deployment"] = {{"splits", std::string(io::to_string(selection))},
                     {"n", l.data.set.rows()},
                     {"coverage", deployed.coverage},
                     {"risk", deployed.risk}};
  out << dump(j);
  return kExitOk;
}

// --- ood-metrics ---------------------------------------------------------

int cmd_ood(const ScoringFlags& f, const std::string& out_dir, std::ostream& out) {
  const auto l = load_and_score(f, io::SplitSelection::kAll);
  const auto report = ood::ood_vs_sc_report(l.data.set, l.scores);

  ordered_json j;
  j["score"] = std::string(to_string(l.id));
  j["n_ind"] = l.data.set.count(ShiftTag::kInD);
  j["n_shift_cov"] = l.data.set.count(ShiftTag::kShiftCov);
  j["n_shift_label"] = l.data.set.count(ShiftTag::kShiftLabel);
  j["auroc"] = report.auroc;
  j["aupr"] = report.aupr;
  j["fpr_at_95tpr"] = report.fpr_at_95;
  j["auroc_correct_vs_error"] = report.auroc_correct_vs_error;
  j["aurc"] = report.aurc;
  j["rc_monotone"] = report.rc_monotone;
  out << dump(j);

  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    io::write_file_atomic(dir / "summary.json", dump(j));
    io::write_file_atomic(dir / "rc.csv", curve_csv(report.curve));
    const auto& h = report.histogram;
    const std::size_t bins = h.correct_ind.size();
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    std::string csv = "bin_lo,bin_hi,correct_ind,wrong_ind,shift_label\n";
    for (std::size_t b = 0; b < bins; ++b) {
      csv += io::format_double(h.lo + width * static_cast<double>(b)) + "," +
             io::format_double(b + 1 == bins ? h.hi : h.lo + width * static_cast<double>(b + 1)) + "," +
             std::to_string(h.correct_ind[b]) + "," + std::to_string(h.wrong_ind[b]) + "," +
             std::to_string(h.shift_label[b]) + "\n";
    }
    io::write_file_atomic(dir / "histogram.csv", csv);
  }
  return kExitOk;
}

// --- synth ---------------------------------------------------------------

constexpr std::size_t kRadiusBins = 20;

int cmd_synth(int case_id, std::size_t per_class, std::uint64_t seed, double coverage, const std::string& out_dir) {
  const auto spec = synthetic::MixtureSpec::standard();
  const auto pc = synthetic::PerturbationCase::from_id(case_id);
  const auto result = synthetic::run_case(spec, pc, per_class, seed, coverage);
  const auto classifier = synthetic::LinearClassifier2D::from_mixture(spec);
  const fs::path dir(out_dir);

  // A manifest-backed copy of the sample so the other commands can consume it.
  io::write_matrix(dir / "logits.bin", result.set.logits, io::MatrixFormat::kBin);
  Matrix labels(static_cast<Eigen::Index>(result.set.rows()), 1);
  for (std::size_t i = 0; i < result.set.rows(); ++i) labels(static_cast<Eigen::Index>(i), 0) = result.set.labels[i];
  io::write_matrix(dir / "labels.csv", labels, io::MatrixFormat::kCsv, {"label"});
  io::write_matrix(dir / "features.csv", result.data.points, io::MatrixFormat::kCsv, {"x1", "x2"});
  io::write_matrix(dir / "weight_norms.csv", classifier.head().weight_norms, io::MatrixFormat::kCsv, {"norm"});
  io::Manifest m;
  m.num_classes = classifier.classes();
  m.feature_dim = 2;
  m.splits.push_back({pc.id == 1 ? "ind" : "shift_cov", result.set.tags.front(),
                      {"logits.bin", io::MatrixFormat::kBin},
                      io::FileRef{"labels.csv", io::MatrixFormat::kCsv},
                      io::FileRef{"features.csv", io::MatrixFormat::kCsv}});
  m.weight_norms = io::FileRef{"weight_norms.csv", io::MatrixFormat::kCsv};
  io::write_file_atomic(dir / "manifest.json", io::manifest_to_json(m));

  const auto loss = selection::losses(result.set);
  std::string samples = "x1,x2,label,prediction,loss,radius\n";
  for (std::size_t i = 0; i < result.data.size(); ++i) {
    const auto p = result.data.point(i);
    samples += io::format_double(p[0]) + "," + io::format_double(p[1]) + "," + std::to_string(result.data.labels[i]) +
               "," + std::to_string(scores::argmax(result.set.logit_row(i))) + "," +
               std::to_string(loss.values[i]) + "," +
               io::format_double(synthetic::robustness_radius(classifier, p)) + "\n";
  }
  io::write_file_atomic(dir / "samples.csv", samples);

  ordered_json summary;
  summary["case"] = pc.id;
  summary["half_width"] = pc.half_width;
  summary["per_class"] = per_class;
  summary["seed"] = seed;
  summary["coverage"] = coverage;
  summary["error_rate"] = loss.error_rate();
  double max_radius = 0.0;
  for (const auto& s : result.selected)
    for (double r : s.radii) max_radius = std::max(max_radius, r);
  const double width = max_radius > 0.0 ? max_radius / kRadiusBins : 1.0;
  std::string hist = "series,bin_lo,bin_hi,count\n";
  for (std::size_t c = 0; c < result.curves.size(); ++c) {
    const auto& curve = result.curves[c];
    const auto& sel = result.selected[c];
    io::write_file_atomic(dir / ("rc_" + curve.series + ".csv"), curve_csv(curve.curve));
    ordered_json entry = aurc_summary(curve.curve);
    entry["min_selected_radius"] = sel.min_radius;
    summary["series"][curve.series] = entry;
    std::vector<std::size_t> counts(kRadiusBins, 0);
    for (double r : sel.radii) counts[std::min(kRadiusBins - 1, static_cast<std::size_t>(r / width))]++;
    for (std::size_t b = 0; b < kRadiusBins; ++b) {
      hist += curve.series + "," + io::format_double(width * static_cast<double>(b)) + "," +
              io::format_double(width * static_cast<double>(b + 1)) + "," + std::to_string(counts[b]) + "\n";
    }
  }
  io::write_file_atomic(dir / "radius_hist.csv", hist);
  io::write_file_atomic(dir / "summary.json", dump(summary));
  return kExitOk;
}

// --- scaled-rc -----------------------------------------------------------

int cmd_scaled_rc(std::size_t per_class, std::uint64_t seed, const std::vector<double>& lambdas,
                  const std::string& out_dir) {
  const std::array<ScoreId, 4> ids = {ScoreId::kSrMax, ScoreId::kSrDoctor, ScoreId::kSrEnt, ScoreId::kConfMargin};
  const auto curves =
      synthetic::scaled_rc_experiment(synthetic::MixtureSpec::standard(), per_class, seed, lambdas, ids);
  const fs::path dir(out_dir);
  ordered_json summary = ordered_json::array();
  for (const auto& c : curves) {
    const std::string tag = c.lambda ? c.series + "_lambda" + io::format_double(*c.lambda) : c.series;
    io::write_file_atomic(dir / ("rc_" + tag + ".csv"), curve_csv(c.curve));
    ordered_json entry{{"series", c.series}};
    entry["lambda"] = c.lambda ? ordered_json(*c.lambda) : ordered_json(nullptr);
    entry["aurc"] = c.aurc;
    summary.push_back(entry);
  }
  io::write_file_atomic(dir / "summary.json", dump(summary));
  return kExitOk;
}

// --- lemma ---------------------------------------------------------------

int cmd_lemma(std::uint64_t seed, const std::vector<double>& lambdas, const std::string& source, std::size_t rows,
              std::size_t classes, double min_gap, const std::string& out_path) {
  Matrix logits;
  if (source == "random") {
    logits = asymptotics::sample_separated_rows(rows, classes, min_gap, seed);
  } else if (source == "mixture") {
    const auto spec = synthetic::MixtureSpec::standard();
    const auto data = synthetic::sample_mixture_per_class(spec, rows, seed);
    logits = synthetic::logits_2d(synthetic::LinearClassifier2D::from_mixture(spec), data.points);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--source must be random or mixture");
  }
  const auto report = asymptotics::convergence_sweep(logits, lambdas);
  std::string csv = "score,lambda,max_ratio_err,kendall_tau,skipped_rows\n";
  for (const auto& e : report.entries) {
    csv += std::string(to_string(e.score)) + "," + io::format_double(e.lambda) + "," +
           io::format_double(e.max_ratio_err) + "," + (e.kendall_tau ? io::format_double(*e.kendall_tau) : "nan") +
           "," + std::to_string(e.skipped_rows) + "\n";
  }
  io::write_file_atomic(out_path, csv);
  return kExitOk;
}

// --- heatmap -------------------------------------------------------------

synthetic::GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorCode::kInvalidArgument, "--grid must be lo,hi,n");
  try {
    synthetic::GridSpec g{std::stod(parts[0]), std::stod(parts[1]), static_cast<std::size_t>(std::stoul(parts[2]))};
    if (!(g.hi > g.lo) || g.n < 2) throw std::invalid_argument("range");
    return g;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "--grid must be lo,hi,n with lo < hi and n >= 2");
  }
}

int cmd_heatmap(const std::string& score, const std::string& grid_text, const std::string& out_path) {
  const auto grid = parse_grid(grid_text);
  const auto spec = synthetic::MixtureSpec::standard();
  const Matrix values = score == "s_post"
                            ? synthetic::posterior_grid(spec, grid)
                            : synthetic::score_grid(synthetic::LinearClassifier2D::from_mixture(spec),
                                                    require_score(score), grid);
  std::string csv = "x1,x2,value\n";
  for (std::size_t r = 0; r < grid.n; ++r) {
    for (std::size_t c = 0; c < grid.n; ++c) {
      csv += io::format_double(grid.coordinate(c)) + "," + io::format_double(grid.coordinate(r)) + "," +
             io::format_double(values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) + "\n";
    }
  }
  io::write_file_atomic(out_path, csv);
  return kExitOk;
}

// --- sweep-knn -----------------------------------------------------------

int cmd_sweep_knn(const ScoringFlags& f, const std::vector<std::size_t>& ks, const std::string& out_path) {
  const auto selection = require_splits(f.splits);
  const auto data = io::load_dataset(io::load_manifest(f.manifest), selection);
  const auto loss = selection::losses(data.set);
  const ClassifierHead* head = data.head ? &*data.head : nullptr;
  std::string csv = "k";
  for (double alpha : kAurcAlphas) csv += "," + alpha_key(alpha);
  csv += "\n";
  for (auto k : ks) {
    auto opts = f.context_options();
    opts.knn_k = k;
    const auto ctx = scores::prepare_context(data.set, head, ScoreId::kKnn, opts);
    const auto s = scores::score_set(data.set, ScoreId::kKnn, ctx);
    const auto curve = selection::rc_curve(s.values, loss);
    csv += std::to_string(k);
    const auto summary = aurc_summary(curve);
    for (double alpha : kAurcAlphas) {
      const auto& v = summary[alpha_key(alpha)];
      csv += "," + (v.is_null() ? std::string("nan") : io::format_double(v.get<double>()));
    }
    csv += "\n";
  }
  io::write_file_atomic(out_path, csv);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confidence scoring and risk-coverage evaluation for selective classification", "gensc"};
  app.require_subcommand(1);

  ScoringFlags score_flags;
  std::string score_out;
  auto* score_cmd = app.add_subcommand("score", "Write one confidence score per sample");
  score_flags.attach(score_cmd);
  score_cmd->add_option("--out", score_out, "Output CSV")->required();

  ScoringFlags rc_flags;
  std::string rc_out;
  auto* rc_cmd = app.add_subcommand("rc", "Risk-coverage curve and AURC summary");
  rc_flags.attach(rc_cmd);
  rc_cmd->add_option("--out", rc_out, "Output CSV (JSON summary written alongside)")->required();

  ScoringFlags cal_flags;
  std::string target;
  auto* cal_cmd = app.add_subcommand("calibrate", "Pick a threshold on a calibration draw");
  cal_flags.attach(cal_cmd);
  cal_cmd->add_option("--target", target, "coverage:<w> or risk:<l>")->required();

  ScoringFlags ood_flags;
  std::string ood_out;
  auto* ood_cmd = app.add_subcommand("ood-metrics", "OOD detection metrics next to the RC view");
  ood_flags.attach(ood_cmd, true, false);
  ood_cmd->add_option("--out", ood_out, "Directory for CSV blocks and the JSON summary");

  int synth_case = 1;
  std::size_t synth_n = synthetic::kDefaultPerClass;
  std::uint64_t synth_seed = 0;
  double synth_coverage = 0.8;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Four-class Gaussian mixture experiment");
  synth_cmd->add_option("--case", synth_case, "Perturbation case 1|2|3")->check(CLI::Range(1, 3));
  synth_cmd->add_option("--n", synth_n, "Samples per class")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth_seed, "Random seed");
  synth_cmd->add_option("--coverage", synth_coverage, "Coverage for the robustness-radius histograms");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  std::size_t scaled_n = synthetic::kDefaultPerClass;
  std::uint64_t scaled_seed = 0;
  std::vector<double> scaled_lambdas = {0.1, 1.0, 2.0, 4.0};
  std::string scaled_out;
  auto* scaled_cmd = app.add_subcommand("scaled-rc", "RC curves of softmax scores on scaled logits");
  scaled_cmd->add_option("--n", scaled_n, "Samples per class")->check(CLI::PositiveNumber);
  scaled_cmd->add_option("--seed", scaled_seed, "Random seed");
  scaled_cmd->add_option("--lambdas", scaled_lambdas, "Comma-separated scale factors")->delimiter(',');
  scaled_cmd->add_option("--out", scaled_out, "Output directory")->required();

  std::uint64_t lemma_seed = 0;
  std::vector<double> lemma_lambdas;
  std::string lemma_source = "random";
  std::size_t lemma_rows = 50;
  std::size_t lemma_classes = 10;
  double lemma_gap = 0.1;
  std::string lemma_out;
  auto* lemma_cmd = app.add_subcommand("lemma", "Large-scale convergence of the softmax scores");
  lemma_cmd->add_option("--seed", lemma_seed, "Random seed");
  lemma_cmd->add_option("--lambdas", lemma_lambdas, "Comma-separated scale factors")->required()->delimiter(',');
  lemma_cmd->add_option("--source", lemma_source, "random | mixture");
  lemma_cmd->add_option("--rows", lemma_rows, "Rows (random) or samples per class (mixture)");
  lemma_cmd->add_option("--classes", lemma_classes, "Classes per random row");
  lemma_cmd->add_option("--min-gap", lemma_gap, "Minimum adjacent logit gap of random rows");
  lemma_cmd->add_option("--out", lemma_out, "Output CSV")->required();

  std::string heat_score;
  std::string heat_grid = "-2,2,201";
  std::string heat_out;
  auto* heat_cmd = app.add_subcommand("heatmap", "Score values on a regular 2D grid");
  heat_cmd->add_option("--score", heat_score, "Logit score or s_post")->required();
  heat_cmd->add_option("--grid", heat_grid, "lo,hi,n");
  heat_cmd->add_option("--out", heat_out, "Output CSV")->required();

  ScoringFlags knn_flags;
  std::vector<std::size_t> knn_ks;
  std::string knn_out;
  auto* knn_cmd = app.add_subcommand("sweep-knn", "AURC of the KNN score across k");
  knn_flags.attach(knn_cmd, false);
  knn_cmd->add_option("--k-list,--ks", knn_ks, "Comma-separated k values")->delimiter(',');
  knn_cmd->add_option("--out", knn_out, "Output CSV")->required();

  // `--k LIST` on sweep-knn is accepted as an alias of --k-list.
  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!args.empty() && args.front() == "sweep-knn") {
    for (auto& a : argv_rev)
      if (a == "--k") a = "--k-list";
  }

  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score_cmd) return cmd_score(score_flags, score_out);
    if (*rc_cmd) return cmd_rc(rc_flags, rc_out);
    if (*cal_cmd) return cmd_calibrate(cal_flags, target, out);
    if (*ood_cmd) return cmd_ood(ood_flags, ood_out, out);
    if (*synth_cmd) return cmd_synth(synth_case, synth_n, synth_seed, synth_coverage, synth_out);
    if (*scaled_cmd) return cmd_scaled_rc(scaled_n, scaled_seed, scaled_lambdas, scaled_out);
    if (*lemma_cmd) {
      return cmd_lemma(lemma_seed, lemma_lambdas, lemma_source, lemma_rows, lemma_classes, lemma_gap, lemma_out);
    }
    if (*heat_cmd) return cmd_heatmap(heat_score, heat_grid, heat_out);
    if (*knn_cmd) {
      if (knn_ks.empty()) knn_ks = {1, 2, 5, 10, 20};
      return cmd_sweep_knn(knn_flags, knn_ks, knn_out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace gensc::cli
