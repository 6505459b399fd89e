#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gkdcv/classify.hpp"
#include "gkdcv/config.hpp"
#include "gkdcv/dataset.hpp"
#include "gkdcv/error.hpp"
#include "gkdcv/evaluate.hpp"
#include "gkdcv/featio.hpp"
#include "gkdcv/kdcv.hpp"
#include "gkdcv/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gkdcv;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string measure_override;
};

PipelineConfig effective_config(const CommonOpts& opts) {
    PipelineConfig cfg = opts.config_path.empty() ? PipelineConfig{} : load_config(opts.config_path);
    if (!opts.measure_override.empty()) cfg.measure = parse_measure(opts.measure_override);
    cfg.validate();
    return cfg;
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string full_precision(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("io", dir + ": cannot create directory (" + ec.message() + ")");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("io", path + ": cannot open for writing");
    return out;
}

// ---------------------------------------------------------------------------

int cmd_gabor_dump(const std::string& image_path, const CommonOpts& opts, const std::string& format,
                   const std::string& out_dir) {
    const PipelineConfig cfg = effective_config(opts);
    ensure_dir(out_dir);

    const GrayImage img = resize(load_image(image_path), cfg.image_height, cfg.image_width);
    const ResponseStack stack = respond(img, cfg.gabor, cfg.support);

    int written = 0;
    for (int nu = 0; nu < stack.num_scales; ++nu) {
        for (int mu = 0; mu < stack.num_orientations; ++mu) {
            const auto& plane = stack.plane(mu, nu);
            const std::string stem =
                (fs::path(out_dir) / ("plane_v" + std::to_string(nu) + "_u" + std::to_string(mu)))
                    .string();
            if (format == "pgm" || format == "both") {
                write_plane_pgm(plane, stack.height, stack.width, stem + ".pgm");
                ++written;
            }
            if (format == "bin" || format == "both") {
                write_plane(plane, stack.height, stack.width, stem + ".bin");
                ++written;
            }
        }
    }
    std::cout << "wrote " << written << " plane files to " << out_dir << "\n";
    return 0;
}

int cmd_extract(const std::string& manifest_path, const CommonOpts& opts,
                const std::string& out_dir) {
    const PipelineConfig cfg = effective_config(opts);
    const DatasetManifest manifest = load_manifest(manifest_path);
    if (manifest.entries.empty()) throw Error("format", manifest_path + ": manifest is empty");
    ensure_dir(out_dir);

    const Eigen::MatrixXd features = features_for_entries(manifest, manifest.entries, cfg);

    std::vector<FeatureRowInfo> sidecar;
    sidecar.reserve(manifest.entries.size());
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        sidecar.push_back({static_cast<int>(i), manifest.entries[i].path,
                           manifest.entries[i].class_id});
    }
    write_feature_matrix(features.transpose(), (fs::path(out_dir) / "features.bin").string());
    write_feature_sidecar(sidecar, (fs::path(out_dir) / "features.csv").string());
    std::cout << "extracted " << features.cols() << " feature vectors of length " << features.rows()
              << "\n";
    return 0;
}

Eigen::MatrixXd cached_or_computed_features(const DatasetManifest& manifest,
                                            const std::vector<ManifestEntry>& wanted,
                                            const PipelineConfig& cfg,
                                            const std::string& cache_path) {
    if (cache_path.empty()) return features_for_entries(manifest, wanted, cfg);

    // Cache rows follow the manifest's entry order (the `extract` layout).
    const Eigen::MatrixXd all = read_feature_matrix(cache_path);
    if (all.rows() != static_cast<Eigen::Index>(manifest.entries.size())) {
        throw Error("dimension", cache_path + ": feature cache has " + std::to_string(all.rows()) +
                                     " rows but the manifest lists " +
                                     std::to_string(manifest.entries.size()) + " entries");
    }
    Eigen::MatrixXd out(all.cols(), static_cast<Eigen::Index>(wanted.size()));
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& entry = manifest.entries[i];
        if (std::find_if(wanted.begin(), wanted.end(), [&](const ManifestEntry& e) {
                return e == entry;
            }) != wanted.end()) {
            out.col(col++) = all.row(static_cast<Eigen::Index>(i)).transpose();
        }
    }
    if (col != out.cols()) throw Error("dimension", cache_path + ": cache/manifest entry mismatch");
    return out;
}

int cmd_train(const std::string& manifest_path, const CommonOpts& opts,
              const std::string& model_path, const std::string& cache_path) {
    const PipelineConfig cfg = effective_config(opts);
    const DatasetManifest manifest = load_manifest(manifest_path);
    const std::vector<ManifestEntry> train_entries = manifest.with_role(Role::Train);
    if (train_entries.empty()) throw Error("format", manifest_path + ": no training entries");

    const Eigen::MatrixXd features =
        cached_or_computed_features(manifest, train_entries, cfg, cache_path);
    std::vector<int> labels;
    labels.reserve(train_entries.size());
    for (const auto& e : train_entries) labels.push_back(e.class_id);

    const KdcvModel model = KdcvModel::fit(features, labels, cfg.kernel, cfg.rank_tol);
    model.save(model_path);
    std::cout << "trained: M=" << model.num_train() << " d=" << model.feature_dim()
              << " C=" << model.num_classes() << " r=" << model.rank()
              << " p=" << model.discriminant_dim() << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::vector<std::string>& inputs,
                const CommonOpts& opts, int ranking_depth, const std::string& out_path) {
    const PipelineConfig cfg = effective_config(opts);
    const KdcvModel model = KdcvModel::load(model_path);
    if (ranking_depth < 1) throw Error("usage", "--ranking must be at least 1");
    const int depth = std::min(ranking_depth, model.num_classes());

    struct Target {
        std::string display;
        std::string file;
    };
    std::vector<Target> targets;
    if (inputs.size() == 1 && fs::path(inputs[0]).extension() == ".csv") {
        const DatasetManifest manifest = load_manifest(inputs[0]);
        for (const auto& e : manifest.entries) targets.push_back({e.path, manifest.resolve_path(e)});
    } else {
        for (const auto& p : inputs) targets.push_back({p, p});
    }
    if (targets.empty()) throw Error("usage", "no images to predict");

    std::ostringstream csv;
    for (const auto& target : targets) {
        const FeatureVector feat = image_to_feature(load_image(target.file), cfg);
        const Eigen::VectorXd x =
            Eigen::Map<const Eigen::VectorXd>(feat.values.data(),
                                              static_cast<Eigen::Index>(feat.values.size()));
        const Ranking ranking = classify(model, model.project(x), cfg.measure);
        for (int k = 0; k < depth; ++k) {
            csv << target.display << "," << ranking[k].class_id << ","
                << full_precision(ranking[k].score) << "\n";
        }
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        open_out(out_path) << csv.str();
    }
    return 0;
}

void write_metrics_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "tp," << report.counts.tp << "\n";
    out << "fp," << report.counts.fp << "\n";
    out << "tn," << report.counts.tn << "\n";
    out << "fn," << report.counts.fn << "\n";
    out << "sensitivity," << percent(report.sensitivity) << "\n";
    out << "specificity," << percent(report.specificity) << "\n";
    out << "accuracy," << percent(report.accuracy) << "\n";
    out << "fpr," << percent(report.fpr) << "\n";
    out << "fnr," << percent(report.fnr) << "\n";
    if (!std::isnan(report.threshold)) out << "threshold," << full_precision(report.threshold) << "\n";
}

void write_report_txt(const EvalReport& report, const std::string& mode, Measure measure,
                      std::size_t probes, const std::string& path, std::ostream& echo) {
    std::ofstream out = open_out(path);
    std::ostringstream text;
    text << "mode: " << mode << "\n";
    text << "measure: " << measure_name(measure) << "\n";
    text << "probes: " << probes << "\n";
    text << "tp/fp/tn/fn: " << report.counts.tp << "/" << report.counts.fp << "/"
         << report.counts.tn << "/" << report.counts.fn << "\n";
    text << "sensitivity: " << percent(report.sensitivity) << "%\n";
    text << "specificity: " << percent(report.specificity) << "%\n";
    text << "accuracy: " << percent(report.accuracy) << "%\n";
    text << "false positive rate: " << percent(report.fpr) << "%\n";
    text << "false negative rate: " << percent(report.fnr) << "%\n";
    if (!std::isnan(report.threshold)) text << "threshold: " << full_precision(report.threshold) << "\n";
    if (!report.cmc.empty()) {
        text << "cmc:";
        for (double rate : report.cmc) text << " " << percent(rate);
        text << "\n";
    }
    out << text.str();
    echo << text.str();
}

int cmd_eval(const std::string& model_path, const std::string& manifest_path,
             const CommonOpts& opts, const std::string& mode, std::optional<double> tau,
             const std::string& sweep_spec, const std::string& out_dir,
             const std::string& cache_path) {
    const PipelineConfig cfg = effective_config(opts);
    const KdcvModel model = KdcvModel::load(model_path);
    const DatasetManifest manifest = load_manifest(manifest_path);
    ensure_dir(out_dir);

    auto project_entries = [&](const std::vector<ManifestEntry>& entries) {
        const Eigen::MatrixXd features =
            cached_or_computed_features(manifest, entries, cfg, cache_path);
        std::vector<LabeledVector> out(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            out[i].y = model.project(features.col(static_cast<Eigen::Index>(i)));
            out[i].label = entries[i].class_id;
        }
        return out;
    };

    const std::vector<ManifestEntry> genuine_entries = manifest.with_role(Role::ProbeGenuine);
    if (genuine_entries.empty()) throw Error("format", manifest_path + ": no probe-genuine entries");
    const std::vector<LabeledVector> genuine = project_entries(genuine_entries);

    if (mode == "closed") {
        const EvalReport report = closed_set_eval(model.common_vectors(), genuine, cfg.measure);
        write_metrics_csv(report, (fs::path(out_dir) / "metrics.csv").string());
        {
            std::ofstream cmc = open_out((fs::path(out_dir) / "cmc.csv").string());
            for (std::size_t k = 0; k < report.cmc.size(); ++k) {
                cmc << (k + 1) << "," << percent(report.cmc[k]) << "\n";
            }
        }
        write_report_txt(report, "closed", cfg.measure, genuine.size(),
                         (fs::path(out_dir) / "report.txt").string(), std::cout);
        return 0;
    }

    // verification
    const std::vector<ManifestEntry> impostor_entries = manifest.with_role(Role::ProbeImpostor);
    if (impostor_entries.empty()) {
        throw Error("format", manifest_path + ": verify mode requires probe-impostor entries");
    }
    const std::vector<LabeledVector> impostor = project_entries(impostor_entries);

    if (tau.has_value()) {
        const EvalReport report =
            verification_eval(model.common_vectors(), genuine, impostor, cfg.measure, *tau);
        write_metrics_csv(report, (fs::path(out_dir) / "metrics.csv").string());
        write_report_txt(report, "verify", cfg.measure, genuine.size() + impostor.size(),
                         (fs::path(out_dir) / "report.txt").string(), std::cout);
        return 0;
    }

    // tau sweep lo:hi:steps
    double lo = 0.0, hi = 0.0;
    int steps = 0;
    {
        char extra = 0;
        if (std::sscanf(sweep_spec.c_str(), "%lf:%lf:%d%c", &lo, &hi, &steps, &extra) != 3 ||
            steps < 1 || hi < lo) {
            throw Error("usage", "--tau-sweep expects lo:hi:steps with hi >= lo and steps >= 1");
        }
    }

    std::ofstream sweep = open_out((fs::path(out_dir) / "sweep.csv").string());
    sweep << "tau,sensitivity,specificity\n";
    for (int i = 0; i < steps; ++i) {
        const double t = steps == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(steps - 1);
        const EvalReport r =
            verification_eval(model.common_vectors(), genuine, impostor, cfg.measure, t);
        sweep << full_precision(t) << "," << percent(r.sensitivity) << ","
              << percent(r.specificity) << "\n";
    }

    std::vector<double> genuine_scores, impostor_scores;
    for (const auto& probe : genuine) {
        genuine_scores.push_back(
            score(cfg.measure, probe.y, model.common_vectors().row(probe.label).transpose()));
    }
    for (const auto& probe : impostor) {
        impostor_scores.push_back(
            score(cfg.measure, probe.y, model.common_vectors().row(probe.label).transpose()));
    }
    double eer_tau = 0.0;
    const double eer = equal_error_rate(genuine_scores, impostor_scores, &eer_tau);

    const EvalReport at_eer =
        verification_eval(model.common_vectors(), genuine, impostor, cfg.measure, eer_tau);
    write_metrics_csv(at_eer, (fs::path(out_dir) / "metrics.csv").string());
    {
        std::ofstream report = open_out((fs::path(out_dir) / "report.txt").string());
        std::ostringstream text;
        text << "mode: verify (tau sweep " << sweep_spec << ")\n";
        text << "measure: " << measure_name(cfg.measure) << "\n";
        text << "equal error rate: " << percent(eer) << "% at tau " << full_precision(eer_tau)
             << "\n";
        text << "metrics.csv holds the operating point at the EER threshold\n";
        report << text.str();
        std::cout << text.str();
    }
    return 0;
}

int cmd_split(const std::string& root_dir, int k, const std::string& out_path) {
    const DatasetManifest manifest = first_k_split(root_dir, k);
    save_manifest(manifest, out_path);
    std::cout << "split " << manifest.num_classes() << " classes, "
              << manifest.with_role(Role::Train).size() << " train / "
              << manifest.with_role(Role::ProbeGenuine).size() << " probe entries -> " << out_path
              << "\n";
    return 0;
}

std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gabor low-energized block features with kernel discriminative common vectors"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* dump = app.add_subcommand("gabor-dump", "write the magnitude response planes of an image");
    std::string dump_image, dump_format = "both", dump_out;
    dump->add_option("image", dump_image, "input image")->required();
    dump->add_option("--config", common.config_path, "pipeline config file");
    dump->add_option("--format", dump_format, "pgm, bin or both")
        ->check(CLI::IsMember({"pgm", "bin", "both"}));
    dump->add_option("--out", dump_out, "output directory")->required();

    auto* extract_cmd = app.add_subcommand("extract", "extract feature vectors for a manifest");
    std::string extract_manifest, extract_out;
    extract_cmd->add_option("manifest", extract_manifest, "dataset manifest")->required();
    extract_cmd->add_option("--config", common.config_path, "pipeline config file");
    extract_cmd->add_option("--out", extract_out, "output directory")->required();

    auto* train = app.add_subcommand("train", "fit a model on the manifest's training entries");
    std::string train_manifest, train_model, train_cache;
    train->add_option("manifest", train_manifest, "dataset manifest")->required();
    train->add_option("--config", common.config_path, "pipeline config file");
    train->add_option("--model", train_model, "output model path")->required();
    train->add_option("--features", train_cache, "feature cache (features.bin from `extract`)");

    auto* predict = app.add_subcommand("predict", "classify images against a model");
    std::string predict_model, predict_out;
    std::vector<std::string> predict_inputs;
    int predict_ranking = 1;
    predict->add_option("model", predict_model, "model file")->required();
    predict->add_option("inputs", predict_inputs, "image paths or one manifest (.csv)")->required();
    predict->add_option("--config", common.config_path, "pipeline config file");
    predict->add_option("--measure", common.measure_override, "l1, l2 or cos")
        ->check(CLI::IsMember({"l1", "l2", "cos"}));
    predict->add_option("--ranking", predict_ranking, "emit the top N classes per image");
    predict->add_option("--out", predict_out, "write CSV here instead of stdout");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a manifest's probes");
    std::string eval_model, eval_manifest, eval_mode = "closed", eval_sweep, eval_out, eval_cache;
    double eval_tau = 0.0;
    bool eval_tau_set = false;
    eval_cmd->add_option("model", eval_model, "model file")->required();
    eval_cmd->add_option("manifest", eval_manifest, "dataset manifest")->required();
    eval_cmd->add_option("--config", common.config_path, "pipeline config file");
    eval_cmd->add_option("--measure", common.measure_override, "l1, l2 or cos")
        ->check(CLI::IsMember({"l1", "l2", "cos"}));
    eval_cmd->add_option("--mode", eval_mode, "closed or verify")
        ->check(CLI::IsMember({"closed", "verify"}));
    eval_cmd->add_option_function<double>(
        "--tau", [&](double v) { eval_tau = v; eval_tau_set = true; },
        "verification acceptance threshold");
    eval_cmd->add_option("--tau-sweep", eval_sweep, "lo:hi:steps threshold sweep");
    eval_cmd->add_option("--out", eval_out, "output directory")->required();
    eval_cmd->add_option("--features", eval_cache, "feature cache (features.bin from `extract`)");

    auto* split = app.add_subcommand("split", "build a first-k manifest from class directories");
    std::string split_root, split_out;
    int split_k = 0;
    split->add_option("root", split_root, "directory with one subdirectory per class")->required();
    split->add_option("--k", split_k, "training images per class")->required();
    split->add_option("--out", split_out, "output manifest path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump->parsed()) return cmd_gabor_dump(dump_image, common, dump_format, dump_out);
        if (extract_cmd->parsed()) return cmd_extract(extract_manifest, common, extract_out);
        if (train->parsed()) return cmd_train(train_manifest, common, train_model, train_cache);
        if (predict->parsed()) {
            return cmd_predict(predict_model, predict_inputs, common, predict_ranking, predict_out);
        }
        if (eval_cmd->parsed()) {
            if (eval_mode == "verify" && !eval_tau_set && eval_sweep.empty()) {
                throw Error("usage", "verify mode requires --tau or --tau-sweep");
            }
            return cmd_eval(eval_model, eval_manifest, common, eval_mode,
                            eval_tau_set ? std::optional<double>(eval_tau) : std::nullopt,
                            eval_sweep, eval_out, eval_cache);
        }
        if (split->parsed()) return cmd_split(split_root, split_k, split_out);
    } catch (const Error& e) {
        std::cerr << "error:" << e.category() << ": " << one_line(e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error:internal: " << one_line(e.what()) << "\n";
        return 1;
    }
    return 0;
}
