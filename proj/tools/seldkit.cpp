// seldkit command line: synth | augment | augment-corpus | extract | infer |
// eval | init-weights. Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "seldkit/augment.hpp"
#include "seldkit/eval.hpp"
#include "seldkit/features.hpp"
#include "seldkit/label_io.hpp"
#include "seldkit/model.hpp"
#include "seldkit/scene.hpp"
#include "seldkit/tensor_file.hpp"
#include "seldkit/wav_io.hpp"

namespace fs = std::filesystem;
using namespace seldkit;

namespace {

FeatureTensor truncate_to_label_multiple(FeatureTensor f) {
    f.frames -= f.frames % kFramesPerLabel;
    f.data.resize(f.frames * kNumMels * kNumFeatureMaps);
    return f;
}

int cmd_synth(const std::string& spec_path, const std::string& out_wav,
              const std::string& out_labels, std::uint64_t seed, bool seed_set) {
    SceneSpec spec = parse_scene_spec(spec_path);
    if (seed_set) spec.seed = seed;
    auto [clip, labels] = synth_scene(spec);
    write_wav(out_wav, clip);
    write_labels(out_labels, labels);
    std::printf("synth: %zu samples, %zu label rows\n", clip.num_samples(), labels.size());
    return 0;
}

int cmd_augment(const std::string& in_wav, const std::string& in_labels, int pattern_id,
                std::uint64_t seed, bool pattern_set, const std::string& out_dir) {
    if (!pattern_set) {
        PatternRng rng(seed);
        pattern_id = rng.sample_pattern().id;
    }
    const SpatialPattern p{pattern_id};
    const AmbisonicClip clip = read_wav(in_wav);
    const EventList labels = read_labels(in_labels);

    fs::create_directories(out_dir);
    const std::string stem = fs::path(in_wav).stem().string();
    const std::string suffix = "_p" + std::to_string(p.id);
    const fs::path wav_out = fs::path(out_dir) / (stem + suffix + ".wav");
    const fs::path csv_out = fs::path(out_dir) / (stem + suffix + ".csv");
    write_wav(wav_out.string(), transform_channels(clip, p));
    write_labels(csv_out.string(), transform_event_list(labels, p));
    std::printf("pattern=%d azimuth_op=%s flip=%s\n", p.id, pattern_azimuth_op_name(p).c_str(),
                p.elevation_flip() ? "true" : "false");
    return 0;
}

int cmd_augment_corpus(const std::string& in_dir, const std::string& out_dir, int per_file,
                       std::uint64_t seed) {
    std::vector<fs::path> wavs;
    for (const auto& entry : fs::directory_iterator(in_dir))
        if (entry.path().extension() == ".wav") wavs.push_back(entry.path());
    std::sort(wavs.begin(), wavs.end());
    for (const auto& wav : wavs) {
        fs::path csv = wav;
        csv.replace_extension(".csv");
        if (!fs::exists(csv))
            throw std::runtime_error("missing label partner for '" + wav.string() + "'");
    }

    fs::create_directories(out_dir);
    PatternRng rng(seed);
    std::ofstream manifest(fs::path(out_dir) / "manifest.txt", std::ios::binary);
    for (const auto& wav : wavs) {
        fs::path csv = wav;
        csv.replace_extension(".csv");
        const AmbisonicClip clip = read_wav(wav.string());
        const EventList labels = read_labels(csv.string());
        std::set<int> used;
        for (int k = 0; k < per_file; ++k) {
            SpatialPattern p = rng.sample_pattern();
            while (used.count(p.id)) p = rng.sample_pattern();
            used.insert(p.id);
            const std::string stem = wav.stem().string() + "_aug" + std::to_string(k) + "_p" +
                                     std::to_string(p.id);
            const fs::path wav_out = fs::path(out_dir) / (stem + ".wav");
            const fs::path csv_out = fs::path(out_dir) / (stem + ".csv");
            write_wav(wav_out.string(), transform_channels(clip, p));
            write_labels(csv_out.string(), transform_event_list(labels, p));
            manifest << wav_out.filename().string() << ' ' << wav.filename().string() << ' '
                     << p.id << '\n';
        }
    }
    std::printf("augment-corpus: %zu inputs x %d -> %zu outputs\n", wavs.size(), per_file,
                wavs.size() * static_cast<std::size_t>(per_file));
    return 0;
}

int cmd_extract(const std::string& in_wav, const std::string& out_stf) {
    const FeatureTensor f = extract_features(read_wav(in_wav));
    write_feature_file(out_stf, f);
    std::printf("extract: %zu frames x %zu bands x %zu maps\n", f.frames, kNumMels,
                kNumFeatureMaps);
    return 0;
}

int cmd_infer(const std::string& in_wav, const std::string& in_features,
              const std::string& weights_path, const std::string& out_csv, double threshold,
              int filter_freq) {
    FeatureTensor f;
    if (!in_features.empty())
        f = read_feature_file(in_features);
    else
        f = extract_features(read_wav(in_wav));
    f = truncate_to_label_multiple(f);

    const WeightSet w = read_weight_file(weights_path);
    ModelConfig cfg;
    cfg.filter_freq = filter_freq;
    // Trust the weight file's kernel width if it disagrees with the flag default.
    auto it = w.find("conv1.kernel");
    if (it != w.end() && it->second.dims.size() == 4)
        cfg.filter_freq = static_cast<int>(it->second.dims[3]);

    const Prediction pred = forward(f, w, cfg);
    write_labels(out_csv, decode(pred, threshold));
    std::printf("infer: %zu label frames\n", pred.label_frames);
    return 0;
}

int cmd_eval(const std::string& ref_path, const std::string& pred_path,
             const std::string& report_path) {
    const MetricsReport r = segment_metrics(read_labels(ref_path), read_labels(pred_path));
    std::printf("ER20   %.2f%s\n", r.er20, r.no_reference ? "  (no reference events)" : "");
    std::printf("F20    %.1f%%\n", 100.0 * r.f20);
    std::printf("LE_CD  %.1f deg\n", r.le_cd);
    std::printf("LR_CD  %.1f%%\n", 100.0 * r.lr_cd);
    std::printf("SELD   %.3f\n", r.seld);
    if (!report_path.empty()) {
        std::ofstream os(report_path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open '" + report_path + "' for writing");
        os << "er20 " << r.er20 << "\n"
           << "f20 " << r.f20 << "\n"
           << "le_cd " << r.le_cd << "\n"
           << "lr_cd " << r.lr_cd << "\n"
           << "seld " << r.seld << "\n"
           << "tp " << r.tp << "\n"
           << "fp " << r.fp << "\n"
           << "fn " << r.fn << "\n"
           << "substitutions " << r.substitutions << "\n"
           << "deletions " << r.deletions << "\n"
           << "insertions " << r.insertions << "\n"
           << "n_ref " << r.n_ref << "\n"
           << "matched_pairs " << r.matched_pairs << "\n"
           << "matched_error_sum " << r.matched_error_sum << "\n";
    }
    return 0;
}

int cmd_init_weights(const std::string& out_path, std::uint64_t seed, int filter_freq) {
    ModelConfig cfg;
    cfg.filter_freq = filter_freq;
    write_weight_file(out_path, random_weights(cfg, seed));
    std::printf("init-weights: M=%d seed=%" PRIu64 "\n", filter_freq, seed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SELD toolkit: FOA augmentation, features, CRNN inference, metrics"};
    app.require_subcommand(1);

    std::string spec_path, out_wav, out_labels;
    std::uint64_t seed = 0;
    auto* synth = app.add_subcommand("synth", "synthesize a scene from a spec file");
    synth->add_option("--spec", spec_path)->required();
    synth->add_option("--out-wav", out_wav)->required();
    synth->add_option("--out-labels", out_labels)->required();
    auto* synth_seed = synth->add_option("--seed", seed);

    std::string in_wav, in_labels, out_dir;
    int pattern_id = 0;
    auto* augment = app.add_subcommand("augment", "apply a spatial pattern to a WAV/CSV pair");
    augment->add_option("--in", in_wav)->required();
    augment->add_option("--labels", in_labels)->required();
    auto* pattern_opt = augment->add_option("--pattern", pattern_id)->check(CLI::Range(0, 15));
    augment->add_option("--seed", seed);
    augment->add_option("--out-dir", out_dir)->required();

    std::string corpus_in, corpus_out;
    int per_file = 3;
    auto* corpus = app.add_subcommand("augment-corpus", "augment a directory of WAV/CSV pairs");
    corpus->add_option("--in-dir", corpus_in)->required();
    corpus->add_option("--out-dir", corpus_out)->required();
    corpus->add_option("--per-file", per_file)->check(CLI::NonNegativeNumber);
    corpus->add_option("--seed", seed);

    std::string extract_in, extract_out;
    auto* extract = app.add_subcommand("extract", "extract features from a WAV file");
    extract->add_option("--in", extract_in)->required();
    extract->add_option("--out", extract_out)->required();

    std::string infer_wav, infer_features, weights_path, pred_out;
    double threshold = 0.5;
    int filter_freq = 48;
    auto* infer = app.add_subcommand("infer", "run the CRNN forward pass");
    auto* infer_in = infer->add_option("--in", infer_wav);
    auto* infer_feat = infer->add_option("--features", infer_features);
    infer_in->excludes(infer_feat);
    infer->add_option("--weights", weights_path)->required();
    infer->add_option("--out", pred_out)->required();
    infer->add_option("--threshold", threshold);
    infer->add_option("--filter-freq", filter_freq)->check(CLI::PositiveNumber);

    std::string ref_path, pred_path, report_path;
    auto* eval = app.add_subcommand("eval", "score predictions against references");
    eval->add_option("--ref", ref_path)->required();
    eval->add_option("--pred", pred_path)->required();
    eval->add_option("--report", report_path);

    std::string weights_out;
    auto* init = app.add_subcommand("init-weights", "write a random weight file");
    init->add_option("--out", weights_out)->required();
    init->add_option("--seed", seed);
    init->add_option("--filter-freq", filter_freq)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed())
            return cmd_synth(spec_path, out_wav, out_labels, seed, synth_seed->count() > 0);
        if (augment->parsed())
            return cmd_augment(in_wav, in_labels, pattern_id, seed, pattern_opt->count() > 0,
                               out_dir);
        if (corpus->parsed()) return cmd_augment_corpus(corpus_in, corpus_out, per_file, seed);
        if (extract->parsed()) return cmd_extract(extract_in, extract_out);
        if (infer->parsed()) {
            if (infer_wav.empty() && infer_features.empty()) {
                std::fprintf(stderr, "infer: one of --in or --features is required\n");
                return 1;
            }
            return cmd_infer(infer_wav, infer_features, weights_path, pred_out, threshold,
                             filter_freq);
        }
        if (eval->parsed()) return cmd_eval(ref_path, pred_path, report_path);
        if (init->parsed()) return cmd_init_weights(weights_out, seed, filter_freq);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
