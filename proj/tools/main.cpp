// sasfocus command line: dataset synthesis, corruption, classical and
// learned autofocus, training, evaluation, and run-time benchmarking.

#include "sasfocus/drc.hpp"
#include "sasfocus/gd.hpp"
#include "sasfocus/iqa.hpp"
#include "sasfocus/metrics.hpp"
#include "sasfocus/pipeline.hpp"
#include "sasfocus/scene.hpp"
#include "sasfocus/slc_io.hpp"
#include "sasfocus/threading.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace sasfocus;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_coeffs(const PhasePolynomial& p) {
  std::cout << "c2,c3,c4,c5,c6,c7,c8,c9,c10\n";
  for (int d = 2; d <= 10; ++d)
    std::cout << fmt(p.coeff(d)) << (d < 10 ? "," : "\n");
}

void print_trace(const std::vector<double>& trace) {
  std::cout << "iteration,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    std::cout << i << ',' << fmt(trace[i]) << '\n';
}

void write_outputs(const SlcImage& g_hat, const std::string& out_slc,
                   const std::string& out_png) {
  if (!out_slc.empty()) write_slc(g_hat, out_slc);
  if (!out_png.empty()) write_pgm(drc(g_hat), out_png);
}

struct MethodOptions {
  std::string model_path;
  double lr = 0.0;  // 0 = cross-validate
  std::size_t iterations = 10;
};

std::vector<EvalMethod> build_methods(const std::vector<std::string>& names,
                                      const DatasetManifest& manifest,
                                      const MethodOptions& opt) {
  std::vector<SlcImage> crossval_images;
  auto lr_for = [&](const MetricKind& metric) {
    if (opt.lr > 0.0) return opt.lr;
    if (crossval_images.empty())
      for (const auto* rec : manifest.split("test"))
        crossval_images.push_back(read_slc(manifest.root / rec->corrupt_path));
    const double lr = crossval_lr(crossval_images, metric, default_lr_grid(), opt.iterations);
    std::cerr << "cross-validated lr for " << metric_name(metric) << ": " << lr << "\n";
    return lr;
  };

  std::vector<EvalMethod> methods;
  for (const auto& name : names) {
    if (name == "identity") {
      methods.push_back(method_identity());
    } else if (name == "oracle") {
      methods.push_back(method_oracle());
    } else if (name.rfind("gd-", 0) == 0) {
      const MetricKind metric = parse_metric(name.substr(3));
      methods.push_back(method_gd(metric, lr_for(metric), opt.iterations));
    } else if (name == "deep") {
      if (opt.model_path.empty())
        throw std::runtime_error("method 'deep' requires --model");
      methods.push_back(method_deep(load_checkpoint(opt.model_path)));
    } else {
      throw std::runtime_error("unknown method: " + name);
    }
  }
  return methods;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic aperture sonar autofocus toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t size = 256;
  std::string out_dir = "dataset";
  std::size_t threads = 0;
  app.add_option("--seed", seed, "base RNG seed");
  app.add_option("--size", size, "image size M (power of two)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  std::size_t n_train = 120, n_val = 120, n_test = 264;
  synth->add_option("--train", n_train, "training images");
  synth->add_option("--val", n_val, "validation images");
  synth->add_option("--test", n_test, "test images");

  // focus-gd
  auto* fgd = app.add_subcommand("focus-gd", "iterative sharpness-metric autofocus");
  std::string input_path, output_path, pgm_path;
  std::string metric_str = "mns", weight_str = "identity";
  double lr = 1e-3;
  std::size_t iters = 10, weight_window = 9;
  double weight_quantile = 0.25;
  fgd->add_option("input", input_path, "defocused SLC1 file")->required();
  fgd->add_option("--metric", metric_str, "mns|me|osf|ssi");
  fgd->add_option("--lr", lr, "gradient descent learning rate");
  fgd->add_option("--iters", iters, "gradient descent iterations");
  fgd->add_option("--weight", weight_str, "identity|lowcontrast");
  fgd->add_option("--weight-window", weight_window, "lowcontrast window (odd)");
  fgd->add_option("--weight-quantile", weight_quantile, "lowcontrast quantile");
  fgd->add_option("--output", output_path, "corrected SLC1 path");
  fgd->add_option("--pgm", pgm_path, "DRC image export path (binary PGM)");

  // focus-deep
  auto* fdeep = app.add_subcommand("focus-deep", "single-pass learned autofocus");
  std::string model_path;
  fdeep->add_option("input", input_path, "defocused SLC1 file")->required();
  fdeep->add_option("--model", model_path, "DAF1 checkpoint")->required();
  fdeep->add_option("--output", output_path, "corrected SLC1 path");
  fdeep->add_option("--pgm", pgm_path, "DRC image export path (binary PGM)");

  // train
  auto* tr = app.add_subcommand("train", "train the learned corrector");
  std::string manifest_path, model_out = "model.daf1", history_out;
  std::size_t epochs = 50, batch = 32;
  double train_lr = 1e-2;
  bool fixed_corruption = false;
  tr->add_option("--manifest", manifest_path, "dataset manifest CSV")->required();
  tr->add_option("--epochs", epochs, "training epochs");
  tr->add_option("--batch", batch, "mini-batch size");
  tr->add_option("--lr", train_lr, "SGD learning rate");
  tr->add_flag("--fixed-corruption", fixed_corruption,
               "reuse the manifest's corrupted files instead of fresh draws per epoch");
  tr->add_option("--model-out", model_out, "checkpoint output path");
  tr->add_option("--history-out", history_out, "per-epoch loss CSV path");

  // eval
  auto* ev = app.add_subcommand("eval", "image-quality evaluation over the test split");
  std::string methods_str = "identity,oracle", eval_csv = "eval.csv";
  double eval_lr = 0.0;
  ev->add_option("--manifest", manifest_path, "dataset manifest CSV")->required();
  ev->add_option("--methods", methods_str,
                 "comma list: identity,oracle,gd-mns,gd-me,gd-osf,gd-ssi,deep");
  ev->add_option("--model", model_path, "DAF1 checkpoint for 'deep'");
  ev->add_option("--lr", eval_lr, "GD learning rate (0 = cross-validate per metric)");
  ev->add_option("--iters", iters, "GD iterations");
  ev->add_option("--csv", eval_csv, "per-image result CSV path");

  // bench
  auto* bn = app.add_subcommand("bench", "per-method mean runtime over the test split");
  bn->add_option("--manifest", manifest_path, "dataset manifest CSV")->required();
  bn->add_option("--methods", methods_str, "comma list of methods");
  bn->add_option("--model", model_path, "DAF1 checkpoint for 'deep'");
  bn->add_option("--lr", eval_lr, "GD learning rate (0 = cross-validate per metric)");
  bn->add_option("--iters", iters, "GD iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  set_thread_count(threads);

  try {
    if (synth->parsed()) {
      const DatasetManifest manifest =
          build_dataset(n_train, n_val, n_test, seed, out_dir, size);
      std::cout << "wrote " << manifest.records.size() << " records to "
                << (manifest.root / "manifest.csv").string() << "\n";
    } else if (fgd->parsed()) {
      GdConfig cfg;
      cfg.metric = parse_metric(metric_str);
      cfg.learning_rate = lr;
      cfg.iterations = iters;
      if (weight_str == "lowcontrast")
        cfg.weight = weight_lowcontrast(weight_window, weight_quantile);
      else if (weight_str != "identity")
        throw std::runtime_error("unknown weight: " + weight_str);
      const FocusResult r = focus_gd(read_slc(input_path), cfg);
      print_coeffs(r.phi_hat);
      print_trace(r.trace);
      write_outputs(r.g_hat, output_path, pgm_path);
    } else if (fdeep->parsed()) {
      const FocusResult r = infer(read_slc(input_path), load_checkpoint(model_path));
      print_coeffs(r.phi_hat);
      print_trace(r.trace);
      write_outputs(r.g_hat, output_path, pgm_path);
    } else if (tr->parsed()) {
      TrainConfig cfg;
      cfg.batch_size = batch;
      cfg.learning_rate = train_lr;
      cfg.epochs = epochs;
      cfg.seed = seed;
      cfg.fresh_corruption_per_epoch = !fixed_corruption;
      auto [params, history] = train(read_manifest(manifest_path), cfg);
      save_checkpoint(params, model_out);
      std::ostream* hist = &std::cout;
      std::ofstream hist_file;
      if (!history_out.empty()) {
        hist_file.open(history_out, std::ios::binary);
        hist = &hist_file;
      }
      *hist << "epoch,train_loss,val_loss\n";
      for (std::size_t e = 0; e < history.train_loss.size(); ++e)
        *hist << e << ',' << fmt(history.train_loss[e]) << ','
              << fmt(history.val_loss[e]) << '\n';
      std::cout << "best epoch: " << history.best_epoch
                << " (val loss " << fmt(history.val_loss[history.best_epoch]) << ")\n";
    } else if (ev->parsed()) {
      const DatasetManifest manifest = read_manifest(manifest_path);
      std::vector<std::string> names;
      std::stringstream ss(methods_str);
      for (std::string tok; std::getline(ss, tok, ',');) names.push_back(tok);
      const auto methods =
          build_methods(names, manifest, {model_path, eval_lr, iters});
      const EvalSummary summary = evaluate(manifest, methods, {eval_csv});
      std::cout << "method,psnr_mean,psnr_min,psnr_max,msssim_mean,msssim_min,msssim_max\n";
      for (const auto& m : summary.methods)
        std::cout << m.method << ',' << fmt(m.psnr_mean) << ',' << fmt(m.psnr_min) << ','
                  << fmt(m.psnr_max) << ',' << fmt(m.msssim_mean) << ','
                  << fmt(m.msssim_min) << ',' << fmt(m.msssim_max) << '\n';
    } else if (bn->parsed()) {
      const DatasetManifest manifest = read_manifest(manifest_path);
      std::vector<std::string> names;
      std::stringstream ss(methods_str);
      for (std::string tok; std::getline(ss, tok, ',');) names.push_back(tok);
      const auto methods =
          build_methods(names, manifest, {model_path, eval_lr, iters});

      std::vector<SlcImage> images;
      std::vector<const ManifestRecord*> records = manifest.split("test");
      for (const auto* rec : records)
        images.push_back(read_slc(manifest.root / rec->corrupt_path));

      std::cout << "method,iterations,mean_runtime_s\n";
      for (const auto& method : methods) {
        // warm-up pass on the first image is excluded from the timing
        method.correct(images.front(), *records.front());
        double total = 0.0;
        std::size_t counted = 0;
        for (std::size_t i = 1; i < images.size(); ++i) {
          const auto t0 = std::chrono::steady_clock::now();
          method.correct(images[i], *records[i]);
          const auto t1 = std::chrono::steady_clock::now();
          total += std::chrono::duration<double>(t1 - t0).count();
          ++counted;
        }
        std::size_t method_iters = 0;
        if (method.name.rfind("gd-", 0) == 0) method_iters = iters;
        if (method.name == "deep") method_iters = 1;
        std::cout << method.name << ',' << method_iters << ','
                  << fmt(counted ? total / static_cast<double>(counted) : 0.0) << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
