// Command-line front end: extract | train | classify | evaluate.
//
// Every failure maps to a fixed exit code so scripts can react to the cause:
//   2 usage, 3 dataset, 4 manifest, 5 bad input file, 6 model file,
//   7 bad argument value, 10 anything else.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glyph/classifier.hpp"
#include "glyph/dataset.hpp"
#include "glyph/errors.hpp"
#include "glyph/eval.hpp"
#include "glyph/feature_oracle.hpp"
#include "glyph/model_io.hpp"
#include "glyph/pipeline.hpp"

namespace {

glyph::ThresholdMode parse_threshold(const std::string& spec) {
  if (spec == "otsu") return glyph::ThresholdMode::otsu();
  try {
    std::size_t used = 0;
    const int t = std::stoi(spec, &used);
    if (used != spec.size() || t < 0 || t > 255) throw std::invalid_argument("");
    return glyph::ThresholdMode::fixed(t);
  } catch (const std::exception&) {
    throw glyph::InvalidArgumentError(
        "--threshold expects 'otsu' or an integer in [0,255], got '" + spec +
        "'");
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_text_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw glyph::Error("cannot open output file: " + out_path);
  out << text;
  if (!out) throw glyph::Error("write failed: " + out_path);
}

struct PreprocessFlags {
  std::string threshold = "otsu";
  bool invert = false;

  glyph::PreprocessOptions resolve() const {
    return {parse_threshold(threshold), invert};
  }
};

void add_preprocess_flags(CLI::App* cmd, PreprocessFlags& flags) {
  cmd->add_option("--threshold", flags.threshold,
                  "Binarization threshold: 'otsu' or a fixed intensity 0-255")
      ->capture_default_str();
  cmd->add_flag("--invert", flags.invert,
                "Invert intensities first (for white-on-black sources)");
}

// Scan + split + feature extraction for the side of the split a command
// needs. Keeps only labels of the manifest's category (off-category
// directories in a mixed tree are skipped with a warning).
std::vector<glyph::FeatureSample> load_split_features(
    const std::string& dataset_root, const glyph::SplitManifest& manifest,
    bool want_train, const glyph::PreprocessOptions& pre, int jobs) {
  glyph::ScanResult scan = glyph::scan_dataset(dataset_root);
  print_warnings(scan.warnings);

  const auto alphabet = glyph::category_alphabet(manifest.category);
  if (!alphabet.empty()) {
    std::size_t dropped = 0;
    std::erase_if(scan.samples, [&](const glyph::LabeledSample& s) {
      const bool keep = std::find(alphabet.begin(), alphabet.end(), s.label) !=
                        alphabet.end();
      if (!keep) ++dropped;
      return !keep;
    });
    if (dropped > 0)
      std::cerr << "warning: ignored " << dropped << " samples outside the '"
                << manifest.category << "' alphabet\n";
  }

  glyph::Split split = glyph::apply_split(scan.samples, manifest);
  const auto& side = want_train ? split.train : split.test;
  if (side.empty())
    throw glyph::DatasetError(std::string("manifest '") + manifest.name +
                              "' selected no " +
                              (want_train ? "training" : "test") + " samples");

  glyph::ExtractionResult extracted = glyph::extract_features(side, pre, jobs);
  print_warnings(extracted.warnings);
  if (extracted.samples.empty())
    throw glyph::DatasetError("every selected sample failed preprocessing");
  return extracted.samples;
}

int run_extract(const std::string& image, const std::string& format,
                const std::string& out_path, const PreprocessFlags& pre) {
  const glyph::CharMatrix mat =
      glyph::load_matrix_from_file(image, pre.resolve());
  const glyph::FeatureVector fv = glyph::extract(mat);
  if (format == "csv")
    write_text_output(glyph::to_csv(fv), out_path);
  else if (format == "annotated")
    write_text_output(glyph::to_annotated_text(fv), out_path);
  else
    throw glyph::InvalidArgumentError("--format expects csv or annotated, got '" +
                                      format + "'");
  return 0;
}

int run_train(const std::string& dataset_root, const std::string& manifest_name,
              const std::string& out_path, int k, std::uint64_t seed,
              int max_iter, double tol, int jobs, const PreprocessFlags& pre) {
  const glyph::SplitManifest manifest = glyph::resolve_manifest(manifest_name);
  const auto samples = load_split_features(dataset_root, manifest,
                                           /*want_train=*/true, pre.resolve(),
                                           jobs);

  glyph::TrainOptions opts;
  opts.k = k;
  opts.seed = seed;
  opts.max_iter = max_iter;
  opts.tol = tol;
  opts.jobs = jobs;
  opts.category = manifest.category;
  opts.required_labels = glyph::category_alphabet(manifest.category);

  const glyph::Model model = glyph::train(samples, opts);
  glyph::save_model(model, out_path);

  std::cout << "trained " << model.codebooks.size() << " codebooks on "
            << samples.size() << " samples -> " << out_path << "\n";
  for (const auto& cb : model.codebooks)
    std::cout << "  class " << cb.label << ": " << cb.training_count
              << " samples, " << cb.centroid_count << " centroids"
              << (cb.reduced ? " (fewer distinct samples than k)" : "") << "\n";
  return 0;
}

int run_classify(const std::string& model_path, const std::string& image,
                 int top, const PreprocessFlags& pre) {
  const glyph::Model model = glyph::load_model(model_path);
  const glyph::CharMatrix mat =
      glyph::load_matrix_from_file(image, pre.resolve());
  const glyph::RankedChoices choices =
      glyph::classify(model, glyph::extract(mat), top);
  for (const auto& c : choices) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %.6f", c.distance);
    std::cout << c.label << buf << "\n";
  }
  return 0;
}

int run_evaluate(const std::string& model_path, const std::string& dataset_root,
                 const std::string& manifest_name, const std::string& split,
                 int top, const std::string& format, const std::string& out_path,
                 int jobs, const PreprocessFlags& pre) {
  if (split != "train" && split != "test")
    throw glyph::InvalidArgumentError("--split expects train or test, got '" +
                                      split + "'");
  const glyph::ReportFormat fmt = glyph::parse_report_format(format);
  const glyph::Model model = glyph::load_model(model_path);
  const glyph::SplitManifest manifest = glyph::resolve_manifest(manifest_name);
  const auto samples = load_split_features(dataset_root, manifest,
                                           split == "train", pre.resolve(),
                                           jobs);

  std::vector<int> depths(static_cast<std::size_t>(top));
  std::iota(depths.begin(), depths.end(), 1);
  const glyph::AccuracyReport report =
      glyph::evaluate(model, samples, depths, jobs);

  if (out_path.empty()) {
    std::cout << glyph::format_report(report, fmt);
  } else {
    glyph::emit_report(report, fmt, out_path);
    std::cout << glyph::format_report_text(report);
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Handwritten character recognition from structural features"};
  app.require_subcommand(1);

  // extract
  auto* extract_cmd =
      app.add_subcommand("extract", "Feature vector of one character image");
  std::string ex_image, ex_format = "csv", ex_out;
  PreprocessFlags ex_pre;
  extract_cmd->add_option("--image", ex_image, "Character image (PNG/BMP/TXT)")
      ->required();
  extract_cmd->add_option("--format", ex_format, "csv or annotated")
      ->capture_default_str();
  extract_cmd->add_option("--out", ex_out, "Output file (default: stdout)");
  add_preprocess_flags(extract_cmd, ex_pre);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train per-class codebooks");
  std::string tr_dataset, tr_manifest, tr_out;
  int tr_k = 64, tr_max_iter = 300, tr_jobs = 1;
  std::uint64_t tr_seed = 1;
  double tr_tol = 1e-6;
  PreprocessFlags tr_pre;
  train_cmd->add_option("--dataset", tr_dataset, "Dataset root directory")
      ->required();
  train_cmd
      ->add_option("--manifest", tr_manifest,
                   "Built-in manifest name or manifest file path")
      ->required();
  train_cmd->add_option("--out", tr_out, "Model file to write")->required();
  train_cmd->add_option("--k", tr_k, "Clusters per class")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", tr_seed, "PRNG seed")->capture_default_str();
  train_cmd->add_option("--max-iter", tr_max_iter, "Iteration cap per class")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--tol", tr_tol, "Convergence tolerance (centroid shift)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--jobs", tr_jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();
  add_preprocess_flags(train_cmd, tr_pre);

  // classify
  auto* classify_cmd =
      app.add_subcommand("classify", "Rank classes for one character image");
  std::string cl_model, cl_image;
  int cl_top = 3;
  PreprocessFlags cl_pre;
  classify_cmd->add_option("--model", cl_model, "Model file")->required();
  classify_cmd->add_option("--image", cl_image, "Character image (PNG/BMP/TXT)")
      ->required();
  classify_cmd->add_option("--top", cl_top, "Number of ranked choices")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_preprocess_flags(classify_cmd, cl_pre);

  // evaluate
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Accuracy of a model on a dataset split");
  std::string ev_model, ev_dataset, ev_manifest, ev_split = "test",
              ev_format = "text", ev_out;
  int ev_top = 3, ev_jobs = 1;
  PreprocessFlags ev_pre;
  eval_cmd->add_option("--model", ev_model, "Model file")->required();
  eval_cmd->add_option("--dataset", ev_dataset, "Dataset root directory")
      ->required();
  eval_cmd
      ->add_option("--manifest", ev_manifest,
                   "Built-in manifest name or manifest file path")
      ->required();
  eval_cmd->add_option("--split", ev_split, "Evaluate the train or test side")
      ->capture_default_str();
  eval_cmd->add_option("--top", ev_top, "Deepest choice depth to report")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--format", ev_format, "text, csv or json")
      ->capture_default_str();
  eval_cmd->add_option("--out", ev_out, "Report file (default: stdout)");
  eval_cmd->add_option("--jobs", ev_jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();
  add_preprocess_flags(eval_cmd, ev_pre);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (extract_cmd->parsed())
      return run_extract(ex_image, ex_format, ex_out, ex_pre);
    if (train_cmd->parsed())
      return run_train(tr_dataset, tr_manifest, tr_out, tr_k, tr_seed,
                       tr_max_iter, tr_tol, tr_jobs, tr_pre);
    if (classify_cmd->parsed())
      return run_classify(cl_model, cl_image, cl_top, cl_pre);
    if (eval_cmd->parsed())
      return run_evaluate(ev_model, ev_dataset, ev_manifest, ev_split, ev_top,
                          ev_format, ev_out, ev_jobs, ev_pre);
  } catch (const glyph::DatasetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const glyph::ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const glyph::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const glyph::ModelIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  } catch (const glyph::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 7;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 10;
  }
  return 2;  // no subcommand parsed; require_subcommand should prevent this
}
