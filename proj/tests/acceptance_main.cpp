// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gensc/asymptotics.hpp"
#include "gensc/errors.hpp"
#include "gensc/io.hpp"
#include "gensc/oodmetrics.hpp"
#include "gensc/rng.hpp"
#include "gensc/scores.hpp"
#include "gensc/selection.hpp"
#include "gensc/synthetic.hpp"
#include "json.hpp"

using namespace gensc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) { return io::format_double(v); }

// Random evaluation set with optional features and label-shifted rows.
EvalSet random_set(Rng& rng, std::size_t n, std::size_t k, std::size_t d, double shift_fraction) {
  EvalSet s;
  s.logits.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  if (d > 0) s.features = Matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const double scale = 0.5 + 3.0 * rng.uniform01();
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < s.logits.cols(); ++j) s.logits(r, j) = scale * rng.normal();
    if (d > 0)
      for (Eigen::Index j = 0; j < s.features->cols(); ++j) (*s.features)(r, j) = rng.normal();
    if (rng.uniform01() < shift_fraction) {
      s.labels.push_back(kShiftedLabel);
      s.tags.push_back(ShiftTag::kShiftLabel);
    } else {
      const auto z = s.logit_row(i);
      int y = static_cast<int>(scores::argmax(z));
      if (rng.uniform01() < 0.35) y = static_cast<int>(rng.uniform_index(k));
      s.labels.push_back(y);
      s.tags.push_back(rng.uniform01() < 0.2 ? ShiftTag::kShiftCov : ShiftTag::kInD);
    }
  }
  return s;
}

// 1. Margin scores keep their ordering and RC curve under any positive scaling.
Outcome scale_invariance() {
  const auto t0 = Clock::now();
  const std::vector<double> lambdas = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  Rng rng(101);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.uniform_index(100);
    const std::size_t k = 2 + rng.uniform_index(19);
    const auto base = random_set(rng, n, k, 0, 0.1);
    ClassifierHead head;
    head.weight_norms = Vector(static_cast<Eigen::Index>(k));
    for (Eigen::Index j = 0; j < head.weight_norms.size(); ++j) head.weight_norms[j] = 0.2 + 2.0 * rng.uniform01();
    scores::ScoreContext ctx;
    ctx.head = &head;
    const auto loss = selection::losses(base);
    for (auto id : {ScoreId::kConfMargin, ScoreId::kGeoMargin}) {
      const auto ref = scores::score_set(base, id, ctx).values;
      const auto ref_order = selection::descending_order(ref);
      const auto ref_curve = selection::rc_curve(ref, loss);
      for (double lambda : lambdas) {
        EvalSet scaled = base;
        scaled.logits *= lambda;
        const auto s = scores::score_set(scaled, id, ctx).values;
        const auto curve = selection::rc_curve(s, loss);
        if (selection::descending_order(s) != ref_order || curve.risks != ref_curve.risks ||
            curve.coverages != ref_curve.coverages)
          ++mismatches;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0,
          "1000 sets x 7 scales x {conf_margin, geo_margin}: " + std::to_string(mismatches) + " mismatches, " +
              fmt(std::round(secs * 100) / 100) + " s (limit 10 s)"};
}

double sup_gap(const RCCurve& a, const RCCurve& b) {
  double g = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) g = std::max(g, std::abs(a.risks[k] - b.risks[k]));
  return g;
}

// Regression fixtures for criterion 2, measured on seed 0 with 500 samples per
// class when the suite was first run.
constexpr double kFixtureGapSmallVsLarge = 0.012875536480686695;
constexpr double kFixtureGapSmallVsMargin = 0.014009339559706471;
constexpr double kFixtureGapLargeVsMargin = 0.003611971104231164;

// 2. SR_max curves depend on the logit scale and approach the margin curve.
Outcome scale_sensitivity() {
  const std::vector<double> lambdas = {0.1, 4.0};
  const std::vector<ScoreId> ids = {ScoreId::kSrMax, ScoreId::kConfMargin};
  const auto curves = synthetic::scaled_rc_experiment(synthetic::MixtureSpec::standard(), 500, 0, lambdas, ids);
  // Layout: lambda-major, then score, then the posterior reference.
  const auto& sr_small = curves[0].curve;
  const auto& margin = curves[1].curve;
  const auto& sr_large = curves[2].curve;
  const double g_sl = sup_gap(sr_small, sr_large);
  const double g_sm = sup_gap(sr_small, margin);
  const double g_lm = sup_gap(sr_large, margin);
  const bool frozen = std::abs(g_sl - kFixtureGapSmallVsLarge) < 1e-12 &&
                      std::abs(g_sm - kFixtureGapSmallVsMargin) < 1e-12 &&
                      std::abs(g_lm - kFixtureGapLargeVsMargin) < 1e-12;
  return {g_sl > 0.0 && g_lm < g_sm && frozen,
          "sup|SR(0.1)-SR(4)| = " + fmt(g_sl) + ", sup|SR(0.1)-margin| = " + fmt(g_sm) +
              ", sup|SR(4)-margin| = " + fmt(g_lm) + (frozen ? ", fixtures match" : ", FIXTURE MISMATCH")};
}

// 3. Large-scale convergence of the softmax scores onto the margin order.
Outcome lemma_convergence() {
  const auto t0 = Clock::now();
  const auto rows = asymptotics::sample_separated_rows(50, 10, 0.1, 2024);
  bool ok = true;
  std::ostringstream detail;
  const std::vector<double> grid = {100.0};
  for (const auto& e : asymptotics::convergence_sweep(rows, grid).entries) {
    ok = ok && e.kendall_tau && *e.kendall_tau == 1.0;
    detail << "tau(" << to_string(e.score) << ", 100) = " << (e.kendall_tau ? fmt(*e.kendall_tau) : "n/a") << "; ";
  }
  for (auto id : kSoftmaxScores) {
    const double start = asymptotics::convergence_lambda(id, rows);
    double worst = 0.0;
    for (double factor : {1.0, 1.5, 4.0}) {
      const std::vector<double> at = {start * factor};
      worst = std::max(worst, asymptotics::convergence_sweep(rows, at, std::vector<ScoreId>{id}).entries[0].max_ratio_err);
    }
    ok = ok && worst < asymptotics::kRatioTolerance;
    detail << to_string(id) << " max err " << fmt(worst) << " from lambda " << fmt(start) << "; ";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 5.0;
  detail << fmt(std::round(secs * 100) / 100) << " s (limit 5 s)";
  return {ok, detail.str()};
}

// 4. RC machinery against the threshold-sweep oracle and the loss oracle.
Outcome rc_machinery() {
  const auto t0 = Clock::now();
  Rng rng(404);
  std::size_t curve_mismatch = 0;
  std::size_t oracle_violations = 0;
  std::size_t full_coverage_mismatch = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 2 + rng.uniform_index(9);
    EvalSet set;
    do {
      const std::size_t n = 7 * k + rng.uniform_index(200 - 7 * k + 1);
      set = random_set(rng, n, k, 4, 0.15);
    } while (set.count(ShiftTag::kInD) < kCalibrationPerClass * k);
    ClassifierHead head;
    head.weight_norms = Vector::Constant(static_cast<Eigen::Index>(k), 1.0);
    for (Eigen::Index j = 0; j < head.weight_norms.size(); ++j) head.weight_norms[j] += rng.uniform01();
    const auto loss = selection::losses(set);

    std::vector<double> oracle;
    for (auto l : loss.values) oracle.push_back(1.0 - l);
    const double oracle_aurc = selection::aurc(selection::rc_curve(oracle, loss));

    scores::ContextOptions opts;
    opts.seed = static_cast<std::uint64_t>(t);
    for (auto id : kAllScores) {
      // Coarsen every other instance so tie handling is exercised.
      auto s = scores::score_set(set, id, scores::prepare_context(set, &head, id, opts)).values;
      if (t % 2) {
        for (double& v : s) v = std::round(v * 4.0) / 4.0;
      }
      const auto fast = selection::rc_curve(s, loss);
      const auto slow = selection::rc_curve_bruteforce(s, loss);
      if (fast.risks != slow.risks || fast.coverages != slow.coverages || fast.order != slow.order) ++curve_mismatch;
      if (fast.risks.back() != loss.error_rate()) ++full_coverage_mismatch;
      if (oracle_aurc > selection::aurc(fast)) ++oracle_violations;
    }
  }
  const double secs = seconds_since(t0);
  return {curve_mismatch == 0 && oracle_violations == 0 && full_coverage_mismatch == 0 && secs < 30.0,
          "500 instances x 10 scores: " + std::to_string(curve_mismatch) + " curve mismatches, " +
              std::to_string(oracle_violations) + " oracle-AURC violations, " +
              std::to_string(full_coverage_mismatch) + " full-coverage mismatches, " +
              fmt(std::round(secs * 100) / 100) + " s (limit 30 s)"};
}

// 5. Case 1: geo-margin beats SR_max at low coverage and keeps only robust samples.
Outcome case1_reproduction() {
  const auto t0 = Clock::now();
  const auto spec = synthetic::MixtureSpec::standard();
  const auto pc = synthetic::PerturbationCase::from_id(1);
  const auto find = [](const auto& items, const std::string& series) {
    for (const auto& it : items)
      if (it.series == series) return &it;
    throw Error(ErrorCode::kInvalidArgument, "missing series " + series);
  };
  double geo_sum = 0.0;
  double sr_sum = 0.0;
  int aurc_holds = 0;
  int radius_holds = 0;
  int both_hold = 0;
  bool pinned_ok = false;
  std::string pinned;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = synthetic::run_case(spec, pc, synthetic::kDefaultPerClass, seed, 0.8);
    const double geo = selection::aurc_alpha(find(r.curves, "geo_margin")->curve, 0.5);
    const double sr = selection::aurc_alpha(find(r.curves, "sr_max")->curve, 0.5);
    const double geo_r = find(r.selected, "geo_margin")->min_radius;
    const double sr_r = find(r.selected, "sr_max")->min_radius;
    geo_sum += geo;
    sr_sum += sr;
    const bool a = geo <= sr;
    const bool b = geo_r > sr_r;
    aurc_holds += a;
    radius_holds += b;
    both_hold += a && b;
    if (seed == 0) {
      pinned_ok = a && b;
      pinned = "seed 0: AURC-0.5 geo " + fmt(geo) + " vs sr_max " + fmt(sr) + ", min radius geo " + fmt(geo_r) +
               " vs sr_max " + fmt(sr_r);
    }
  }
  const double secs = seconds_since(t0);
  return {pinned_ok && both_hold >= 95 && secs < 60.0,
          pinned + "; seeds 0-99: AURC holds " + std::to_string(aurc_holds) + ", radius holds " +
              std::to_string(radius_holds) + ", both " + std::to_string(both_hold) + " (need >= 95), mean AURC-0.5 geo " +
              fmt(geo_sum / 100) + " vs sr_max " + fmt(sr_sum / 100) + ", " +
              fmt(std::round(secs * 100) / 100) + " s (limit 60 s)"};
}

// Error rate of the argmax rule under half-width-2 perturbations, from an
// independent 10^6-sample Monte-Carlo run.
constexpr double kCase3MonteCarloError = 0.542373;
constexpr double kCase1MonteCarloError = 0.066714;

// 6. Case 3 perturbations push the full-coverage risk far above Case 1.
Outcome case3_degradation() {
  const auto spec = synthetic::MixtureSpec::standard();
  const std::size_t per_class = synthetic::kDefaultPerClass;
  const double n = 4.0 * static_cast<double>(per_class);
  const auto full_risk = [&](int id) {
    const auto r = synthetic::run_case(spec, synthetic::PerturbationCase::from_id(id), per_class, 0);
    return r.curves.front().curve.risks.back();
  };
  const double risk1 = full_risk(1);
  const double risk3 = full_risk(3);
  const double p = kCase3MonteCarloError;
  const double threshold = p - 4.0 * std::sqrt(p * (1.0 - p) / n);
  const double case1_ceiling =
      kCase1MonteCarloError + 4.0 * std::sqrt(kCase1MonteCarloError * (1.0 - kCase1MonteCarloError) / n);
  return {risk3 >= threshold && risk1 <= case1_ceiling,
          "full-coverage risk case 3 = " + fmt(risk3) + " (threshold " + fmt(threshold) + " from MC " + fmt(p) +
              "), case 1 = " + fmt(risk1) + " (ceiling " + fmt(case1_ceiling) + ")"};
}

// 7. Higher AUROC does not imply a better RC curve.
Outcome auroc_vs_rc() {
  // 10 correct InD rows, 5 misclassified InD rows, 5 label-shifted rows. All
  // rows predict class 0.
  EvalSet set;
  set.logits = Matrix::Zero(20, 3);
  set.logits.col(0).setOnes();
  enum Group { kCorrect, kWrong, kShifted };
  std::vector<Group> group;
  for (int i = 0; i < 20; ++i) {
    const Group g = i < 10 ? kCorrect : (i < 15 ? kWrong : kShifted);
    group.push_back(g);
    set.labels.push_back(g == kCorrect ? 0 : (g == kWrong ? 1 : kShiftedLabel));
    set.tags.push_back(g == kShifted ? ShiftTag::kShiftLabel : ShiftTag::kInD);
  }
  // Band offsets place each group in its own score band; within a band rows
  // are spread slightly so no ties occur.
  const auto make = [&](std::map<Group, double> band) {
    ScoreVector v{{}, ScoreId::kEnergy};
    for (int i = 0; i < 20; ++i) v.values.push_back(band[group[static_cast<std::size_t>(i)]] - 0.01 * i);
    return v;
  };
  // s1 puts the misclassified InD rows on top, then correct, then shifted.
  const auto s1 = make({{kWrong, 3.0}, {kCorrect, 2.0}, {kShifted, 1.0}});
  // s2 puts correct rows on top, then shifted, then misclassified InD.
  const auto s2 = make({{kCorrect, 3.0}, {kShifted, 2.0}, {kWrong, 1.0}});
  const auto r1 = ood::ood_vs_sc_report(set, s1);
  const auto r2 = ood::ood_vs_sc_report(set, s2);

  // Pairwise oracle for s2: the 10 correct rows beat all 5 shifted rows, the 5
  // misclassified InD rows lose to all of them.
  const double s2_oracle = (10.0 * 5.0) / (15.0 * 5.0);
  const bool ok = r1.auroc > r2.auroc && !r1.rc_monotone && r2.rc_monotone && r1.auroc == 1.0 &&
                  std::abs(r2.auroc - s2_oracle) < 1e-15 && r2.aurc < r1.aurc;
  return {ok, "score A: AUROC " + fmt(r1.auroc) + ", AURC " + fmt(r1.aurc) +
                  (r1.rc_monotone ? ", monotone RC" : ", non-monotone RC") + "; score B: AUROC " + fmt(r2.auroc) +
                  ", AURC " + fmt(r2.aurc) + (r2.rc_monotone ? ", monotone RC" : ", non-monotone RC")};
}

// 8. Large-vocabulary logits load through the manifest. Published benchmark
// AURC values need pretrained-model logits and are documentation only.
Outcome large_k_manifest(const fs::path& work) {
  const fs::path dir = work / "large_k";
  fs::create_directories(dir);
  const std::size_t k = 1000;
  const std::size_t n = 5 * k + 200;
  Rng rng(8);
  Matrix logits(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  Matrix labels(static_cast<Eigen::Index>(n), 1);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    for (Eigen::Index j = 0; j < logits.cols(); ++j) logits(i, j) = static_cast<float>(rng.normal());
    labels(i, 0) = static_cast<double>(rng.uniform_index(k));
  }
  io::write_matrix(dir / "logits.bin", logits, io::MatrixFormat::kBin);
  io::write_matrix(dir / "labels.csv", labels, io::MatrixFormat::kCsv, {"label"});
  io::Manifest m;
  m.num_classes = k;
  m.splits.push_back({"val", ShiftTag::kInD, {"logits.bin", io::MatrixFormat::kBin},
                      io::FileRef{"labels.csv", io::MatrixFormat::kCsv}, std::nullopt});
  io::write_file_atomic(dir / "manifest.json", io::manifest_to_json(m));

  const auto data = io::load_dataset(io::load_manifest(dir / "manifest.json"), io::SplitSelection::kAll);
  const auto loss = selection::losses(data.set);
  const auto ctx = scores::prepare_context(data.set, nullptr, ScoreId::kKnn, {});
  const auto curve = selection::rc_curve(scores::score_set(data.set, ScoreId::kKnn, ctx).values, loss);
  const bool ok = data.set.num_classes() == k && data.set.rows() == n && curve.size() == n;
  return {ok, "K = 1000 manifest loaded and scored (" + std::to_string(n) +
                  " rows); published benchmark AURC tables are not reproducible without pretrained-model logits "
                  "and are not asserted"};
}

int run_shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// 9. Every CLI command is byte-reproducible.
Outcome cli_determinism(const fs::path& work) {
  const auto t0 = Clock::now();
  const std::string cli = GENSC_CLI_PATH;
  const fs::path inputs = work / "cli_inputs";
  fs::create_directories(inputs / "case1");
  fs::create_directories(inputs / "case3");
  if (run_shell(quote(cli) + " synth --case 1 --n 100 --seed 1 --out " + quote(inputs / "case1") + " >/dev/null") ||
      run_shell(quote(cli) + " synth --case 3 --n 25 --seed 2 --out " + quote(inputs / "case3") + " >/dev/null"))
    return {false, "could not create CLI inputs"};

  // Mixed manifest: InD from case 1, the case-3 points as a covariate-shift
  // split and again as a label-shift split.
  nlohmann::json mixed = nlohmann::json::parse(io::read_file(inputs / "case1" / "manifest.json"));
  for (auto& s : mixed["splits"]) {
    for (const char* key : {"logits", "labels", "features"}) s[key]["path"] = "case1/" + s[key]["path"].get<std::string>();
  }
  mixed["head"]["weight_norms"]["path"] = "case1/weight_norms.csv";
  mixed["splits"].push_back({{"name", "cov"},
                             {"shift_tag", "ShiftCov"},
                             {"logits", {{"path", "case3/logits.bin"}, {"format", "bin"}}},
                             {"labels", {{"path", "case3/labels.csv"}, {"format", "csv"}}},
                             {"features", {{"path", "case3/features.csv"}, {"format", "csv"}}}});
  mixed["splits"].push_back({{"name", "label"},
                             {"shift_tag", "ShiftLabel"},
                             {"logits", {{"path", "case3/logits.bin"}, {"format", "bin"}}},
                             {"features", {{"path", "case3/features.csv"}, {"format", "csv"}}}});
  const fs::path manifest = inputs / "mixed.json";
  io::write_file_atomic(manifest, mixed.dump(2));
  const std::string m = quote(manifest);

  std::vector<std::pair<std::string, std::string>> matrix;  // name, args with {OUT} placeholder
  for (int c = 1; c <= 3; ++c)
    matrix.push_back({"synth" + std::to_string(c), "synth --case " + std::to_string(c) + " --n 80 --seed 5 --out {OUT}"});
  for (auto id : kAllScores) {
    const std::string s(to_string(id));
    matrix.push_back({"score_" + s, "score --manifest " + m + " --score " + s + " --seed 3 --out {OUT}/s.csv"});
  }
  for (const char* splits : {"in", "in+cov", "in+label", "all"})
    matrix.push_back({std::string("rc_") + splits,
                      "rc --manifest " + m + " --score sirc --splits " + splits + " --out {OUT}/rc.csv"});
  matrix.push_back({"calibrate_cov", "calibrate --manifest " + m + " --score knn --target coverage:0.7 --seed 4"});
  matrix.push_back({"calibrate_risk", "calibrate --manifest " + m + " --score geo_margin --target risk:0.1 --seed 4"});
  matrix.push_back({"ood", "ood-metrics --manifest " + m + " --score vim --out {OUT}"});
  matrix.push_back({"lemma_random", "lemma --seed 6 --lambdas 0.5,2,10,100 --out {OUT}/l.csv"});
  matrix.push_back({"lemma_mixture", "lemma --seed 6 --source mixture --rows 50 --lambdas 1,8 --out {OUT}/l.csv"});
  matrix.push_back({"heatmap_margin", "heatmap --score conf_margin --grid -2,2,41 --out {OUT}/h.csv"});
  matrix.push_back({"heatmap_post", "heatmap --score s_post --grid -2,2,41 --out {OUT}/h.csv"});
  matrix.push_back({"sweep_knn", "sweep-knn --manifest " + m + " --k 1,2,5 --seed 2 --out {OUT}/k.csv"});
  matrix.push_back({"scaled_rc", "scaled-rc --n 100 --seed 7 --lambdas 0.1,4 --out {OUT}"});

  std::size_t failures = 0;
  std::size_t files = 0;
  std::string first_failure;
  for (const auto& [name, args] : matrix) {
    std::vector<fs::path> outs;
    for (const char* run : {"a", "b"}) {
      const fs::path out = work / "cli_runs" / run / name;
      fs::create_directories(out);
      std::string cmd = args;
      for (auto at = cmd.find("{OUT}"); at != std::string::npos; at = cmd.find("{OUT}"))
        cmd.replace(at, 5, out.string());
      if (run_shell(quote(cli) + " " + cmd + " > " + quote(out / "stdout.txt")) != 0) {
        ++failures;
        if (first_failure.empty()) first_failure = name + " exited nonzero";
      }
      outs.push_back(out);
    }
    for (const auto& entry : fs::recursive_directory_iterator(outs[0])) {
      if (!entry.is_regular_file()) continue;
      const auto other = outs[1] / fs::relative(entry.path(), outs[0]);
      ++files;
      if (!fs::exists(other) || io::read_file(entry.path()) != io::read_file(other)) {
        ++failures;
        if (first_failure.empty()) first_failure = name + ": " + entry.path().filename().string() + " differs";
      }
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 120.0,
          std::to_string(matrix.size()) + " commands, " + std::to_string(files) + " output files compared, " +
              std::to_string(failures) + " differences" + (first_failure.empty() ? "" : " (" + first_failure + ")") +
              ", " + fmt(std::round(secs * 100) / 100) + " s (limit 120 s)"};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "gensc_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"scale invariance of margin scores", scale_invariance},
      {"scale sensitivity of softmax scores", scale_sensitivity},
      {"large-scale convergence onto the margin order", lemma_convergence},
      {"RC curve correctness", rc_machinery},
      {"synthetic case 1 reproduction", case1_reproduction},
      {"case 3 degradation", case3_degradation},
      {"AUROC vs RC crossover", auroc_vs_rc},
      {"large-K manifest (benchmark tables documentation only)", [&] { return large_k_manifest(work); }},
      {"CLI determinism", [&] { return cli_determinism(work); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  fs::remove_all(work);
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
