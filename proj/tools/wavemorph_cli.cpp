#include "wavemorph/classifier.hpp"
#include "wavemorph/config.hpp"
#include "wavemorph/dataset.hpp"
#include "wavemorph/errors.hpp"
#include "wavemorph/features.hpp"
#include "wavemorph/filters.hpp"
#include "wavemorph/hash.hpp"
#include "wavemorph/image_io.hpp"
#include "wavemorph/metrics.hpp"
#include "wavemorph/pipeline.hpp"
#include "wavemorph/selection.hpp"
#include "wavemorph/stack_io.hpp"
#include "wavemorph/synthetic.hpp"
#include "wavemorph/text.hpp"
#include "wavemorph/wavelet.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <set>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wavemorph;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Config file plus per-flag overrides; flags are applied last.
class ConfigFlags {
public:
  void attach(CLI::App* cmd) {
    cmd->add_option("--config", path_, "Key-value config file");
    add(cmd, "--wavelet", "wavelet", "Mother wavelet: haar, db2, db4");
    add(cmd, "--resize", "resize", "Square size for dataset images, 0 keeps native size");
    add(cmd, "--entropy-levels", "entropy_levels", "Quantization levels for entropy");
    add(cmd, "--dist-bins", "dist_bins", "Histogram bins for entropy distributions");
    add(cmd, "--kl-epsilon", "kl_epsilon", "Smoothing added to every histogram bin");
    add(cmd, "--seed", "seed", "Seed for split assignment and synthetic data");
    add(cmd, "--workers", "workers", "Worker threads, 0 uses the OpenMP default");
  }

  RunConfig resolve() const {
    RunConfig cfg = path_.empty() ? RunConfig{} : load_config(path_);
    std::map<std::string, std::string> overrides;
    for (const auto& [key, opt] : options_)
      if (opt->count() > 0) overrides[key] = values_.at(key);
    apply_key_values(cfg, overrides);
    cfg.validate();
    return cfg;
  }

  const std::string& path() const noexcept { return path_; }

private:
  void add(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
    options_.emplace_back(key, cmd->add_option(flag, values_[key], help));
  }

  std::string path_;
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

class RunLog {
public:
  RunLog(std::string command, const RunConfig& cfg, const std::string& config_path) {
    doc_["command"] = std::move(command);
    doc_["version"] = kVersion;
    doc_["started_utc"] = utc_now();
    doc_["config"] = {{"wavelet", cfg.wavelet},       {"resize", cfg.resize},
                      {"entropy_levels", cfg.entropy_levels}, {"dist_bins", cfg.dist_bins},
                      {"kl_epsilon", cfg.kl_epsilon}, {"seed", cfg.seed},
                      {"workers", cfg.workers}};
    doc_["inputs"] = json::array();
    doc_["outputs"] = json::array();
    if (!config_path.empty()) input_file(config_path);
  }

  void input_file(const fs::path& path) {
    doc_["inputs"].push_back({{"path", path.string()}, {"fnv1a64", hex64(fnv1a64(read_file_bytes(path)))}});
  }

  void input_dataset(const DatasetManifest& manifest) {
    doc_["inputs"].push_back({{"path", manifest.root.string()},
                              {"dataset", manifest.dataset_id},
                              {"images", manifest.entries.size()},
                              {"manifest_fnv1a64", manifest_hash(manifest)}});
  }

  void output(const fs::path& path) { doc_["outputs"].push_back(path.string()); }
  void set(const std::string& key, json value) { doc_["summary"][key] = std::move(value); }

  void write(const fs::path& path) {
    doc_["finished_utc"] = utc_now();
    write_text_file(path, doc_.dump(2) + "\n");
  }

private:
  json doc_;
};

void echo_config(const RunConfig& cfg) {
  std::istringstream lines(config_text(cfg));
  for (std::string line; std::getline(lines, line);) std::cout << "config: " << line << '\n';
}

fs::path run_log_path(const std::string& explicit_path, const fs::path& fallback) {
  return explicit_path.empty() ? fallback : fs::path(explicit_path);
}

std::vector<DatasetManifest> scan_roots(const std::vector<std::string>& roots, const RunConfig& cfg) {
  std::vector<DatasetManifest> out;
  std::set<std::string> ids;
  for (const auto& root : roots) {
    if (!fs::is_directory(root)) throw InputError("dataset root '" + root + "' is not a directory");
    out.push_back(scan_dataset(root, cfg.seed));
    if (!ids.insert(out.back().dataset_id).second)
      throw InputError("dataset id '" + out.back().dataset_id + "' appears twice; rename one of the roots");
  }
  return out;
}

DatasetManifest split_only(DatasetManifest manifest, Split split) {
  std::erase_if(manifest.entries, [split](const ManifestEntry& e) { return e.split != split; });
  for (ClassLabel label : {ClassLabel::bonafide, ClassLabel::morphed})
    if (manifest.count(label) == 0)
      throw InputError("dataset '" + manifest.dataset_id + "' has no " + std::string(to_string(label)) +
                       " images in the " + std::string(to_string(split)) + " split");
  return manifest;
}

// Entropies for the given split of every dataset.
std::vector<DatasetEntropies> split_entropies(const std::vector<DatasetManifest>& manifests, Split split,
                                              const RunConfig& cfg) {
  const FilterPair filters = wavelet_by_name(cfg.wavelet);
  std::vector<DatasetEntropies> out;
  for (const auto& m : manifests) {
    const auto loaded = load_dataset(split_only(m, split), cfg.resize, cfg.workers);
    out.push_back({m.dataset_id, compute_entropies(loaded, filters, cfg.entropy_levels, cfg.workers)});
  }
  return out;
}

std::vector<int> parse_k_list(const std::string& text) {
  std::vector<int> ks;
  for (const auto& part : split(text, ',')) {
    const int k = parse_int(trim(part), "k");
    if (k < 1 || k > kNumSubbands) throw InputError("k must be in [1, 48], got " + std::to_string(k));
    ks.push_back(k);
  }
  if (ks.empty()) throw InputError("empty k list");
  return ks;
}

std::vector<ImageEntropies> pooled(const std::vector<DatasetEntropies>& sets) {
  std::vector<ImageEntropies> out;
  for (const auto& s : sets)
    for (auto img : s.images) {
      img.image_id = s.dataset_id + ":" + img.image_id;
      out.push_back(std::move(img));
    }
  return out;
}

int run_decompose(const RunConfig& cfg, const std::string& config_path, const std::string& image,
                  const std::string& output, const std::string& log_path) {
  const Image img = read_image(image);
  const SubBandStack stack = decompose_48(img, wavelet_by_name(cfg.wavelet));
  write_wst(output, stack);
  RunLog log("decompose", cfg, config_path);
  log.input_file(image);
  log.output(output);
  log.set("bands", stack.band_count());
  log.write(run_log_path(log_path, output + ".run.json"));
  std::cout << "bands: " << stack.band_count() << '\n'
            << "size: " << stack.width() << "x" << stack.height() << '\n';
  return 0;
}

int run_rank(const RunConfig& cfg, const std::string& config_path, const std::vector<std::string>& roots,
             const std::string& output, const std::string& entropies_out, const std::string& log_path) {
  const auto manifests = scan_roots(roots, cfg);
  const auto sets = split_entropies(manifests, Split::train, cfg);
  const auto table = rank_datasets(sets, cfg.dist_bins, cfg.kl_epsilon);
  write_ranking_csv(output, table);
  RunLog log("rank", cfg, config_path);
  for (const auto& m : manifests) log.input_dataset(m);
  log.output(output);
  if (!entropies_out.empty()) {
    std::vector<EntropySample> samples;
    for (const auto& s : sets) {
      auto part = to_samples(s.dataset_id, s.images);
      samples.insert(samples.end(), part.begin(), part.end());
    }
    write_entropy_csv(entropies_out, samples);
    log.output(entropies_out);
  }
  log.set("order", table.order);
  log.write(run_log_path(log_path, output + ".run.json"));
  std::cout << "datasets: " << sets.size() << '\n' << "order:";
  for (int i : table.order) std::cout << ' ' << i;
  std::cout << '\n';
  return 0;
}

int run_select(const RunConfig& cfg, const std::string& config_path, const std::string& ranking,
               std::optional<int> top_k, std::optional<double> threshold, const std::string& output,
               const std::string& log_path) {
  if (top_k.has_value() == threshold.has_value())
    throw InputError("select needs exactly one of --top-k or --threshold");
  const auto table = read_ranking_csv(ranking);
  Selection sel{TopK{}, {}};
  if (top_k)
    sel.policy = TopK{*top_k};
  else
    sel.policy = Threshold{*threshold};
  sel.indices = wavemorph::select(table, sel.policy);
  write_selection_json(output, sel);
  RunLog log("select", cfg, config_path);
  log.input_file(ranking);
  log.output(output);
  log.set("selected", sel.indices.size());
  log.write(run_log_path(log_path, output + ".run.json"));
  std::cout << "selected: " << sel.indices.size() << '\n';
  return 0;
}

int run_export(const RunConfig& cfg, const std::string& config_path, const std::string& root,
               const std::string& selection, const std::string& out_dir, const std::string& log_path) {
  const Selection sel = read_selection_json(selection);
  const auto manifests = scan_roots({root}, cfg);
  const auto loaded = load_dataset(manifests.front(), cfg.resize, cfg.workers);
  const auto paths = export_selected(loaded, sel.indices, wavelet_by_name(cfg.wavelet), out_dir, cfg.workers);
  RunLog log("export", cfg, config_path);
  log.input_dataset(manifests.front());
  log.input_file(selection);
  log.output(out_dir);
  log.set("tensors", paths.size());
  log.set("channels", sel.indices.size());
  log.write(run_log_path(log_path, fs::path(out_dir) / "run.json"));
  std::cout << "tensors: " << paths.size() << '\n' << "channels: " << sel.indices.size() << '\n';
  return 0;
}

struct SweepArgs {
  std::vector<std::string> roots;
  std::string ranking;
  std::string k_list = "1,2,5,10,15,20,22,25,30,40,48";
  double lambda = 1e-3;
  int max_iters = 5000;
  std::string output;
  int score_k = 22;
  std::string scores_out;
  std::string model_out;
  std::string log_path;
};

int run_sweep(const RunConfig& cfg, const std::string& config_path, const SweepArgs& a) {
  const auto ks = parse_k_list(a.k_list);
  if (a.score_k < 1 || a.score_k > kNumSubbands) throw InputError("--score-k must be in [1, 48]");
  const auto manifests = scan_roots(a.roots, cfg);
  const auto train_sets = split_entropies(manifests, Split::train, cfg);
  const auto val_sets = split_entropies(manifests, Split::validation, cfg);
  const auto table = a.ranking.empty() ? rank_datasets(train_sets, cfg.dist_bins, cfg.kl_epsilon)
                                       : read_ranking_csv(a.ranking);
  const auto train_set = pooled(train_sets);
  const auto val_set = pooled(val_sets);
  const TrainOptions opts{a.lambda, a.max_iters, TrainOptions{}.tol};
  const auto points = sweep_k(table, train_set, val_set, ks, opts, cfg.workers);
  write_text_file(a.output, sweep_csv(points));

  RunLog log("sweep", cfg, config_path);
  for (const auto& m : manifests) log.input_dataset(m);
  if (!a.ranking.empty()) log.input_file(a.ranking);
  log.output(a.output);
  if (!a.scores_out.empty() || !a.model_out.empty()) {
    const auto indices = wavemorph::select(table, TopK{a.score_k});
    const auto model = train(select_features(train_set, indices), opts);
    if (!a.model_out.empty()) {
      write_text_file(a.model_out, model_json(model));
      log.output(a.model_out);
    }
    if (!a.scores_out.empty()) {
      const auto features = select_features(val_set, indices);
      const auto scores = predict_batch(model, features);
      ScoreSet set;
      for (std::size_t i = 0; i < features.size(); ++i)
        set.entries.push_back({features[i].image_id, features[i].label, scores[i]});
      write_text_file(a.scores_out, scores_csv(set));
      log.output(a.scores_out);
    }
  }
  json curve = json::array();
  for (const auto& p : points) curve.push_back({{"k", p.k}, {"auc_validation", p.auc_validation}});
  log.set("curve", curve);
  log.write(run_log_path(a.log_path, a.output + ".run.json"));
  std::cout << "train: " << train_set.size() << '\n' << "validation: " << val_set.size() << '\n';
  for (const auto& p : points) std::cout << "k=" << p.k << " auc=" << format_double(p.auc_validation) << '\n';
  return 0;
}

int run_evaluate(const RunConfig& cfg, const std::string& config_path, const std::string& scores,
                 const std::string& output, const std::string& det, const std::string& log_path) {
  const ScoreSet set = read_scores_csv(scores);
  const MetricsReport report = evaluate(set);
  write_text_file(output, metrics_json(report));
  RunLog log("evaluate", cfg, config_path);
  log.input_file(scores);
  log.output(output);
  if (!det.empty()) {
    write_text_file(det, det_csv(det_curve(set)));
    log.output(det);
  }
  log.write(run_log_path(log_path, output + ".run.json"));
  std::cout << "deer: " << format_double(report.deer.rate) << '\n'
            << "bpcer_at_5: " << format_double(report.bpcer_at_5) << '\n'
            << "bpcer_at_10: " << format_double(report.bpcer_at_10) << '\n'
            << "auc: " << format_double(report.auc) << '\n';
  return 0;
}

void write_image(const fs::path& path, const Image& img) {
  const auto ext = path.extension().string();
  if (ext == ".pgm")
    write_pgm(path, img);
  else if (ext == ".png")
    write_png(path, img);
  else
    throw InputError("output '" + path.string() + "' must end in .pgm or .png");
}

int run_synth_morph(const RunConfig& cfg, const std::string& config_path, const std::string& a,
                    const std::string& b, double alpha, const std::string& output, const std::string& log_path) {
  const Image morph = synth_morph(read_image(a), read_image(b), alpha);
  write_image(output, morph);
  RunLog log("synth-morph", cfg, config_path);
  log.input_file(a);
  log.input_file(b);
  log.output(output);
  log.set("alpha", alpha);
  log.write(run_log_path(log_path, output + ".run.json"));
  std::cout << "size: " << morph.width() << "x" << morph.height() << '\n';
  return 0;
}

int run_gen_synthetic(const RunConfig& cfg, const std::string& config_path, SyntheticOptions opts,
                      const std::string& out_dir, const std::string& log_path) {
  opts.seed = cfg.seed;
  const auto images = generate_synthetic(opts);
  write_synthetic(out_dir, images);
  RunLog log("gen-synthetic-dataset", cfg, config_path);
  log.output(out_dir);
  log.set("n_bonafide", opts.n_bonafide);
  log.set("n_morphed", opts.n_morphed);
  log.set("size", opts.size);
  log.set("alpha", opts.alpha);
  log.write(run_log_path(log_path, fs::path(out_dir) / "run.json"));
  std::cout << "images: " << images.size() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet sub-band analysis for morphing-attack detection"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ConfigFlags flags;
  std::string log_path;
  std::function<int(const RunConfig&)> action;
  auto command = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    flags.attach(cmd);
    cmd->add_option("--run-log", log_path, "Run log path (default next to the primary output)");
    return cmd;
  };

  std::string image, output;
  auto* decompose = command("decompose", "Write the 48 sub-bands of one image to a .wst file");
  decompose->add_option("image", image, "Input PGM or PNG")->required();
  decompose->add_option("-o,--output", output, "Output .wst path")->required();
  decompose->callback([&] {
    action = [&](const RunConfig& c) { return run_decompose(c, flags.path(), image, output, log_path); };
  });

  std::vector<std::string> roots;
  std::string entropies_out;
  auto* rank = command("rank", "Rank sub-bands by averaged zero-meaned KL divergence");
  rank->add_option("roots", roots, "Dataset roots")->required();
  rank->add_option("-o,--output", output, "Ranking CSV path")->required();
  rank->add_option("--entropies", entropies_out, "Also write train-split entropies CSV");
  rank->callback([&] {
    action = [&](const RunConfig& c) { return run_rank(c, flags.path(), roots, output, entropies_out, log_path); };
  });

  std::string ranking;
  std::optional<int> top_k;
  std::optional<double> threshold;
  int top_k_value = 0;
  std::string threshold_text;
  auto* sel = command("select", "Select sub-bands from a ranking");
  sel->add_option("--ranking", ranking, "Ranking CSV")->required();
  auto* k_opt = sel->add_option("--top-k", top_k_value, "Keep the k best sub-bands");
  auto* t_opt = sel->add_option("--threshold", threshold_text, "Keep sub-bands with averaged KL >= value");
  k_opt->excludes(t_opt);
  sel->add_option("-o,--output", output, "Selection JSON path")->required();
  sel->callback([&] {
    if (k_opt->count()) top_k = top_k_value;
    if (t_opt->count()) threshold = parse_double(threshold_text, "threshold");
    action = [&](const RunConfig& c) { return run_select(c, flags.path(), ranking, top_k, threshold, output, log_path); };
  });

  std::string root, selection;
  auto* exp = command("export", "Write selected sub-bands of every image as WSB1 tensors");
  exp->add_option("root", root, "Dataset root")->required();
  exp->add_option("--selection", selection, "Selection JSON")->required();
  exp->add_option("-o,--output", output, "Output directory")->required();
  exp->callback([&] {
    action = [&](const RunConfig& c) { return run_export(c, flags.path(), root, selection, output, log_path); };
  });

  SweepArgs sweep_args;
  auto* sweep = command("sweep", "Validation AUC of the logistic baseline versus sub-band count");
  sweep->add_option("roots", sweep_args.roots, "Dataset roots")->required();
  sweep->add_option("--ranking", sweep_args.ranking, "Ranking CSV (default: rank the train split)");
  sweep->add_option("--k", sweep_args.k_list, "Comma-separated sub-band counts")->capture_default_str();
  sweep->add_option("--lambda", sweep_args.lambda, "L2 penalty")->capture_default_str();
  sweep->add_option("--max-iters", sweep_args.max_iters, "Gradient descent iteration cap")->capture_default_str();
  sweep->add_option("-o,--output", sweep_args.output, "Sweep CSV path")->required();
  sweep->add_option("--score-k", sweep_args.score_k, "Sub-band count for --scores/--model")->capture_default_str();
  sweep->add_option("--scores", sweep_args.scores_out, "Write validation scores CSV");
  sweep->add_option("--model", sweep_args.model_out, "Write model JSON");
  sweep->callback([&] {
    sweep_args.log_path = log_path;
    action = [&](const RunConfig& c) { return run_sweep(c, flags.path(), sweep_args); };
  });

  std::string scores, det;
  auto* ev = command("evaluate", "D-EER, BPCER at fixed APCER and AUC from a scores CSV");
  ev->add_option("--scores", scores, "Scores CSV: image_id,label,score")->required();
  ev->add_option("-o,--output", output, "Metrics JSON path")->required();
  ev->add_option("--det", det, "Also write the DET curve CSV");
  ev->callback([&] {
    action = [&](const RunConfig& c) { return run_evaluate(c, flags.path(), scores, output, det, log_path); };
  });

  std::string image_b;
  double alpha = 0.5;
  auto* morph = command("synth-morph", "Alpha-blend two images: alpha*a + (1-alpha)*b");
  morph->add_option("a", image, "First image")->required();
  morph->add_option("b", image_b, "Second image")->required();
  morph->add_option("--alpha", alpha, "Blend weight of the first image")->capture_default_str();
  morph->add_option("-o,--output", output, "Output .pgm or .png")->required();
  morph->callback([&] {
    action = [&](const RunConfig& c) { return run_synth_morph(c, flags.path(), image, image_b, alpha, output, log_path); };
  });

  SyntheticOptions synth;
  auto* gen = command("gen-synthetic-dataset", "Write a seeded synthetic bona fide / morph dataset");
  gen->add_option("-o,--output", output, "Dataset directory")->required();
  gen->add_option("--n-bonafide", synth.n_bonafide, "Bona fide images")->capture_default_str();
  gen->add_option("--n-morphed", synth.n_morphed, "Morphs, each from a fresh pair of sources")->capture_default_str();
  gen->add_option("--size", synth.size, "Image side length")->capture_default_str();
  gen->add_option("--alpha", synth.alpha, "Blend weight")->capture_default_str();
  gen->callback([&] {
    action = [&](const RunConfig& c) { return run_gen_synthetic(c, flags.path(), synth, output, log_path); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = flags.resolve();
    echo_config(cfg);
    return action(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}
