// wl1: weighted l1 recovery experiments from the command line.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wl1/errors.hpp"
#include "wl1/experiments.hpp"
#include "wl1/theory.hpp"
#include "wl1/video.hpp"

namespace {

enum Exit { kOk = 0, kBadInput = 1, kContract = 2, kRunFailed = 3 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out;
  std::string config;
  bool dump_spec = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--trials", c.trials, "trials per measurement level");
  app->add_option("--out", c.out, "output CSV (default stdout)");
  app->add_option("--config", c.config, "JSON or key = value spec file")->check(CLI::ExistingFile);
  app->add_flag("--dump-spec", c.dump_spec, "print the resolved spec as JSON and exit");
}

wl1::ExperimentSpec resolve(const std::string& id, const Common& c) {
  wl1::ExperimentSpec spec = wl1::ExperimentSpec::defaults(id);
  if (!c.config.empty()) spec = wl1::load_spec_file(c.config, spec);
  spec.id = id;
  if (c.seed) spec.seed = *c.seed;
  if (c.trials) spec.trials = *c.trials;
  if (!c.out.empty()) spec.output = c.out;
  return spec;
}

void emit(const wl1::ExperimentSpec& spec, const wl1::CsvTable& table) {
  if (spec.output.empty()) {
    table.write(std::cout);
  } else {
    table.save();
    std::cerr << "wrote " << spec.output << "\n";
  }
}

int report_sweep(const wl1::ExperimentSpec& spec, const wl1::SweepResult& r) {
  emit(spec, wl1::sweep_table(spec, r));
  std::cerr << r.nonconverged << " of " << r.solves << " solves did not converge\n";
  if (!r.ok) {
    std::cerr << "error: non-convergence above 1%\n";
    return kRunFailed;
  }
  return kOk;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size()) throw wl1::InputError("bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

int theory_constants(const std::string& weights, const std::string& rhos, const std::string& alphas, double a) {
  wl1::theory::TheoryParams p;
  p.a = a;
  p.weights = parse_list(weights);
  p.rhos = parse_list(rhos);
  p.alphas = parse_list(alphas);
  p.validate();
  const double k = wl1::theory::k_n(p);
  const double g = wl1::theory::gamma_constant(p);
  const auto best = wl1::theory::optimize_weights(p.rhos, p.alphas);
  nlohmann::json j{{"k", k},
                   {"gamma", g},
                   {"delta_k", wl1::theory::delta_threshold(k, a)},
                   {"delta_gamma", wl1::theory::delta_threshold(g, a)},
                   {"optimal_weights", best.weights},
                   {"optimal_k", best.kn}};
  std::cout << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted l1 sparse recovery with multiple support estimates"};
  app.require_subcommand(1);
  Common common;

  auto* theory = app.add_subcommand("theory", "recovery-threshold sweeps (fig1a, fig1b) or constants for given parameters");
  std::string theory_variant = "fig1a", tw, tr, ta;
  double ta_a = 3.0;
  theory->add_option("--variant", theory_variant)->check(CLI::IsMember({"fig1a", "fig1b"}));
  auto* w_opt = theory->add_option("--weights", tw, "comma-separated weights; prints constants instead of a sweep");
  theory->add_option("--rhos", tr)->needs(w_opt);
  theory->add_option("--alphas", ta)->needs(w_opt);
  theory->add_option("--a", ta_a, "oversampling factor");
  add_common(theory, common);

  auto* synth = app.add_subcommand("synth", "two support estimates vs one (fig2a, fig2b)");
  std::string synth_variant = "fig2a";
  bool full = false;
  synth->add_option("--variant", synth_variant)->check(CLI::IsMember({"fig2a", "fig2b"}));
  synth->add_flag("--full", full, "500 trials");
  add_common(synth, common);

  auto* prior = app.add_subcommand("prior", "non-uniform weights from a signal prior (power, tree)");
  std::string prior_variant = "power";
  prior->add_option("--variant", prior_variant)->check(CLI::IsMember({"power", "tree"}));
  add_common(prior, common);

  auto* video = app.add_subcommand("video", "block DCT video recovery, per-frame PSNR");
  std::optional<std::string> vformat, vinput;
  std::optional<std::size_t> vframes, vm;
  std::vector<std::string> vmethods;
  video->add_option("--format", vformat)->check(CLI::IsMember({"synthetic", "yuv", "pgm"}));
  video->add_option("--input", vinput, "YUV file or PGM directory");
  video->add_option("--frames", vframes);
  video->add_option("--m", vm, "measurements per block");
  video->add_option("--methods", vmethods, "l1 single adaptive oracle")->delimiter(',');
  add_common(video, common);

  auto* tiny = app.add_subcommand("tiny-theorem", "error bound vs exhaustive RIP on tiny instances");
  std::optional<std::size_t> instances;
  tiny->add_option("--instances", instances);
  add_common(tiny, common);

  CLI11_PARSE(app, argc, argv);

  auto dump = [](const wl1::ExperimentSpec& spec) {
    std::cout << wl1::to_json(spec) << "\n";
    return kOk;
  };

  try {
    if (theory->parsed()) {
      if (!tw.empty()) return theory_constants(tw, tr, ta, ta_a);
      auto spec = resolve(theory_variant, common);
      if (common.dump_spec) return dump(spec);
      emit(spec, wl1::run_fig1(spec));
      return kOk;
    }
    if (synth->parsed()) {
      auto spec = resolve(synth_variant, common);
      if (full && !common.trials) spec.trials = 500;
      if (common.dump_spec) return dump(spec);
      return report_sweep(spec, wl1::run_synth(spec));
    }
    if (prior->parsed()) {
      auto spec = resolve(prior_variant, common);
      if (common.dump_spec) return dump(spec);
      return report_sweep(spec, wl1::run_prior(spec));
    }
    if (video->parsed()) {
      auto spec = resolve("video", common);
      if (vformat) spec.video.format = *vformat;
      if (vinput) spec.video.input = *vinput;
      if (vframes) spec.video.frames = *vframes;
      if (vm) spec.video.m = *vm;
      if (!vmethods.empty()) spec.video.methods = vmethods;
      if (common.dump_spec) return dump(spec);
      const auto r = wl1::run_video(spec);
      emit(spec, wl1::video_table(spec, r));
      for (std::size_t k = 0; k < r.methods.size(); ++k) {
        std::cerr << r.methods[k] << ": " << r.nonconverged[k] << " of " << r.solves_per_method
                  << " block solves hit the iteration cap\n";
      }
      return kOk;
    }
    if (tiny->parsed()) {
      auto spec = resolve("tiny-theorem", common);
      if (instances) spec.instances = *instances;
      if (common.dump_spec) return dump(spec);
      auto table = wl1::tiny_theorem_table(spec);
      const auto r = wl1::run_tiny_theorem(spec, &table);
      emit(spec, table);
      std::cerr << r.qualifying << " qualifying, " << r.excluded << " excluded, " << r.violations
                << " violations, " << r.nonconverged << " not converged\n";
      if (!r.conclusive()) {
        std::cerr << "inconclusive: no instance satisfies the RIP condition\n";
        return kRunFailed;
      }
      return r.violations == 0 ? kOk : kRunFailed;
    }
  } catch (const wl1::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kContract;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailed;
  }
  return kOk;
}
