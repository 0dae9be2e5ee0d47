// scn - transform-ensemble (self-committee) image restoration toolkit.
//
// Subcommands cover the full desk-scale experiment loop: synthesize a
// texture corpus, degrade it, train the tiny denoiser, run committee
// restoration and evaluate PSNR/IPSNR tables. Every command writes a
// key=value manifest next to its outputs; `scn rerun <manifest>` repeats the
// command and verifies that every output hashes identically.
//
// Exit codes: 0 success, 2 usage, 3 I/O or format error, 4 validation
// error, 5 unexpected failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scn/committee.hpp"
#include "scn/degrade.hpp"
#include "scn/image_io.hpp"
#include "scn/manifest.hpp"
#include "scn/metrics.hpp"
#include "scn/synthetic.hpp"
#include "scn/tinynet.hpp"
#include "scn/trainer.hpp"
#include "scn/transforms.hpp"

namespace fs = std::filesystem;
using namespace scn;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;
constexpr int kExitInternal = 5;

std::string canonical_committee(const std::string& name) {
    static const std::map<std::string, std::string> shorthand = {
        {"none", "none"}, {"f", "scn-f"},       {"r", "scn-r"}, {"fr", "scn-fr"},
        {"i", "scn-i"},   {"full", "scn-full"}, {"l", "scn-l"}};
    const auto it = shorthand.find(name);
    if (it != shorthand.end()) return it->second;
    const auto& names = committee_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) return name;
    throw ValidationError("unknown committee name: " + name);
}

std::unique_ptr<Restorer> builtin_filter(const std::string& name) {
    if (name == "identity") return std::make_unique<IdentityRestorer>();
    if (name == "gauss3")
        return std::make_unique<ConvFilterRestorer>(
            3, 3,
            std::vector<double>{1 / 16.0, 2 / 16.0, 1 / 16.0, 2 / 16.0, 4 / 16.0, 2 / 16.0,
                                1 / 16.0, 2 / 16.0, 1 / 16.0},
            "gauss3");
    if (name == "box3")
        return std::make_unique<ConvFilterRestorer>(3, 3, std::vector<double>(9, 1.0 / 9.0),
                                                    "box3");
    if (name == "shift")
        return std::make_unique<ConvFilterRestorer>(
            3, 3, std::vector<double>{0, 0, 0, 1, 0, 0, 0, 0, 0}, "shift");
    throw ValidationError("unknown filter '" + name +
                          "' (available: identity, gauss3, box3, shift)");
}

std::unique_ptr<Restorer> make_restorer(const std::string& model_path,
                                        const std::string& filter_name) {
    if (!model_path.empty() && !filter_name.empty())
        throw ValidationError("--model and --filter are mutually exclusive");
    if (!model_path.empty())
        return std::make_unique<TinyCnnRestorer>(load_weights(model_path),
                                                 fs::path(model_path).stem().string());
    if (!filter_name.empty()) return builtin_filter(filter_name);
    throw ValidationError("one of --model or --filter is required");
}

std::string preview_path(const std::string& output) {
    fs::path p(output);
    if (p.extension() == ".pgm") return output;  // caller avoids the clash
    p.replace_extension(".pgm");
    return p.string();
}

void record_input(Manifest& m, const std::string& label, const std::string& path) {
    m.set("input." + label, path);
    m.set("input." + label + ".fnv64", hex64(fnv1a64_file(path)));
}

void record_output(Manifest& m, const std::string& label, const std::string& path) {
    m.set("output." + label, path);
    m.set("output." + label + ".fnv64", hex64(fnv1a64_file(path)));
}

std::string format_db(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string> sorted_image_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext == ".pgm" || ext == ".f32") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

// ---------------------------------------------------------------- synth ---

struct SynthOptions {
    std::string outdir;
    int count = 8;
    int height = 96;
    int width = 96;
    std::uint64_t seed = 1;
};

int run_synth(const SynthOptions& opt, const std::vector<std::string>& argv) {
    fs::create_directories(opt.outdir);
    Manifest m;
    m.set("tool", "scn");
    m.set("command", "synth");
    m.set_argv(argv);
    m.set_u64("seed", opt.seed);
    for (int i = 0; i < opt.count; ++i) {
        const Image tex = make_texture(opt.seed + static_cast<std::uint64_t>(i), opt.height,
                                       opt.width);
        char name[32];
        std::snprintf(name, sizeof(name), "tex%03d.pgm", i);
        const std::string path = (fs::path(opt.outdir) / name).string();
        save_pgm(tex, path);
        record_output(m, name, path);
    }
    m.save((fs::path(opt.outdir) / "synth.manifest").string());
    return 0;
}

// -------------------------------------------------------------- degrade ---

struct DegradeOptions {
    std::string input;
    std::string output;
    std::optional<double> sigma;
    std::optional<int> scale;
    std::uint64_t seed = 0;
};

int run_degrade(const DegradeOptions& opt, const std::vector<std::string>& argv) {
    if (opt.sigma.has_value() == opt.scale.has_value())
        throw ValidationError("exactly one of --sigma or --scale is required");

    const Image input = load_image_any(opt.input);
    const Image degraded = opt.sigma ? add_awgn(input, NoiseSpec{*opt.sigma, opt.seed})
                                     : make_sisr_input(input, ScaleSpec{*opt.scale});

    save_raw_f32(degraded, opt.output);
    const std::string preview = preview_path(opt.output);
    save_pgm(degraded, preview);

    Manifest m;
    m.set("tool", "scn");
    m.set("command", "degrade");
    m.set_argv(argv);
    record_input(m, "image", opt.input);
    if (opt.sigma) {
        m.set("setting", "sigma=" + std::to_string(*opt.sigma));
        m.set_u64("seed", opt.seed);
    } else {
        m.set("setting", "scale=" + std::to_string(*opt.scale));
    }
    record_output(m, "raw", opt.output);
    record_output(m, "preview", preview);
    m.save(opt.output + ".manifest");
    return 0;
}

// ---------------------------------------------------------------- train ---

struct TrainOptions {
    std::string data_dir;
    std::string out_model;
    TrainConfig config;
};

int run_train(const TrainOptions& opt, const std::vector<std::string>& argv) {
    const auto files = sorted_image_files(opt.data_dir);
    if (files.empty()) throw ValidationError("no .pgm/.f32 images in data dir: " + opt.data_dir);
    std::vector<Image> images;
    images.reserve(files.size());
    for (const auto& f : files) images.push_back(load_image_any(f));

    const TrainReport report = train(opt.config, images);
    save_weights(report.weights, opt.out_model);

    Manifest m;
    m.set("tool", "scn");
    m.set("command", "train");
    m.set_argv(argv);
    m.set_u64("seed", opt.config.seed);
    m.set("sigma", std::to_string(opt.config.sigma));
    m.set("epochs", std::to_string(opt.config.epochs));
    m.set("augment_fr", opt.config.augment_fr ? "1" : "0");
    for (std::size_t i = 0; i < files.size(); ++i)
        record_input(m, "image." + std::to_string(i), files[i]);
    if (!report.epoch_mse.empty()) {
        m.set("mse.first_epoch", std::to_string(report.epoch_mse.front()));
        m.set("mse.last_epoch", std::to_string(report.epoch_mse.back()));
    }
    record_output(m, "model", opt.out_model);
    m.save(opt.out_model + ".manifest");
    return 0;
}

// -------------------------------------------------------------- restore ---

struct RestoreOptions {
    std::string input;
    std::string output;
    std::string model;
    std::string filter;
    std::string committee = "none";
    bool dump_members = false;
};

int run_restore(const RestoreOptions& opt, const std::vector<std::string>& argv) {
    const Image input = load_image_any(opt.input);
    const auto restorer = make_restorer(opt.model, opt.filter);

    const std::string preset = canonical_committee(opt.committee);
    std::optional<InputStats> stats;
    if (preset == "scn-l") stats = compute_stats(input);
    const CommitteeSpec spec = build_preset(preset, stats);
    if (spec.scn_l_fallback)
        std::cerr << "warning: scn-l on a (near-)constant input; "
                     "falling back to the single identity member\n";

    const CommitteeResult result = run_committee(spec, *restorer, input);

    save_raw_f32(result.output, opt.output);
    const std::string preview = preview_path(opt.output);
    save_pgm(result.output, preview);

    Manifest m;
    m.set("tool", "scn");
    m.set("command", "restore");
    m.set_argv(argv);
    record_input(m, "image", opt.input);
    if (!opt.model.empty()) record_input(m, "model", opt.model);
    if (!opt.filter.empty()) m.set("filter", opt.filter);
    m.set("committee", spec.name);
    m.set("members", std::to_string(spec.members.size()));
    if (spec.scn_l_fallback) m.set("scn_l_fallback", "1");
    record_output(m, "raw", opt.output);
    record_output(m, "preview", preview);

    if (opt.dump_members) {
        fs::path base(opt.output);
        const std::string stem = (base.parent_path() / base.stem()).string();
        for (std::size_t i = 0; i < result.members.size(); ++i) {
            char suffix[32];
            std::snprintf(suffix, sizeof(suffix), ".member%02zu.f32", i);
            const std::string member_path = stem + suffix;
            save_raw_f32(result.members[i], member_path);
            record_output(m, "member." + std::to_string(i), member_path);
        }
    }
    m.save(opt.output + ".manifest");
    return 0;
}

// ------------------------------------------------------------- evaluate ---

struct EvaluateOptions {
    std::string clean_dir;
    std::string degraded_dir;
    std::string model;
    std::string filter;
    std::vector<std::string> committees;
    std::string setting = "-";
    std::string out;  // empty = stdout
};

int run_evaluate(const EvaluateOptions& opt, const std::vector<std::string>& argv) {
    const auto restorer = make_restorer(opt.model, opt.filter);

    std::vector<std::string> committees;
    for (const auto& c : opt.committees) {
        const std::string canon = canonical_committee(c);
        if (std::find(committees.begin(), committees.end(), canon) == committees.end())
            committees.push_back(canon);
    }
    if (committees.empty()) throw ValidationError("at least one committee is required");
    std::sort(committees.begin(), committees.end());

    const auto clean_files = sorted_image_files(opt.clean_dir);
    if (clean_files.empty()) throw ValidationError("no images in clean dir: " + opt.clean_dir);

    // Pair clean and degraded files by stem.
    std::vector<std::pair<std::string, std::string>> pairs;  // (clean, degraded)
    for (const auto& clean_path : clean_files) {
        const std::string stem = fs::path(clean_path).stem().string();
        std::string match;
        for (const char* ext : {".f32", ".pgm"}) {
            const fs::path candidate = fs::path(opt.degraded_dir) / (stem + ext);
            if (fs::exists(candidate)) {
                match = candidate.string();
                break;
            }
        }
        if (match.empty())
            throw ValidationError("no degraded counterpart for '" + stem + "' in " +
                                  opt.degraded_dir);
        pairs.emplace_back(clean_path, match);
    }

    std::string csv = "image,setting,committee,psnr_f32,psnr_u8,ipsnr_u8\n";
    struct Accum {
        double psnr_f32 = 0.0;
        double psnr_u8 = 0.0;
        double ipsnr_u8 = 0.0;
    };
    std::map<std::string, Accum> totals;

    for (const auto& [clean_path, degraded_path] : pairs) {
        const std::string stem = fs::path(clean_path).stem().string();
        const Image clean = load_image_any(clean_path);
        const Image degraded = load_image_any(degraded_path);
        if (clean.height != degraded.height || clean.width != degraded.width)
            throw ValidationError("dimension mismatch between clean and degraded '" + stem + "'");

        const Image base = restorer->restore(degraded);
        const double base_u8 = psnr_u8(base, clean);

        for (const auto& name : committees) {
            std::optional<InputStats> stats;
            if (name == "scn-l") stats = compute_stats(degraded);
            const CommitteeSpec spec = build_preset(name, stats);
            if (spec.scn_l_fallback)
                std::cerr << "warning: scn-l fell back to the identity member on '" << stem
                          << "'\n";
            const CommitteeResult result = run_committee(spec, *restorer, degraded);
            const double p_f32 = psnr(result.output, clean);
            const double p_u8 = psnr_u8(result.output, clean);
            const double delta = ipsnr(p_u8, base_u8);
            csv += stem + "," + opt.setting + "," + name + "," + format_db(p_f32) + "," +
                   format_db(p_u8) + "," + format_db(delta) + "\n";
            Accum& acc = totals[name];
            acc.psnr_f32 += p_f32;
            acc.psnr_u8 += p_u8;
            acc.ipsnr_u8 += delta;
        }
    }

    const double n = static_cast<double>(pairs.size());
    for (const auto& name : committees) {
        const Accum& acc = totals[name];
        csv += "average," + opt.setting + "," + name + "," + format_db(acc.psnr_f32 / n) + "," +
               format_db(acc.psnr_u8 / n) + "," + format_db(acc.ipsnr_u8 / n) + "\n";
    }

    if (opt.out.empty()) {
        std::cout << csv;
        return 0;
    }
    {
        std::ofstream out(opt.out, std::ios::trunc);
        if (!out) throw IoError("cannot open file for writing: " + opt.out);
        out << csv;
    }

    Manifest m;
    m.set("tool", "scn");
    m.set("command", "evaluate");
    m.set_argv(argv);
    if (!opt.model.empty()) record_input(m, "model", opt.model);
    if (!opt.filter.empty()) m.set("filter", opt.filter);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        record_input(m, "clean." + std::to_string(i), pairs[i].first);
        record_input(m, "degraded." + std::to_string(i), pairs[i].second);
    }
    record_output(m, "csv", opt.out);
    m.save(opt.out + ".manifest");
    return 0;
}

// ------------------------------------------------------------- features ---

struct FeaturesOptions {
    std::string input;
    std::string model;
    std::string outdir;
    int layer = 1;
    bool invert = false;
};

int run_features(const FeaturesOptions& opt, const std::vector<std::string>& argv) {
    Image img = load_image_any(opt.input);
    if (opt.invert) img = apply_affine(AffineParams(-1.0, 1.0), img);
    const NetworkWeights w = load_weights(opt.model);
    const auto maps = dump_features(w, img, opt.layer);

    fs::create_directories(opt.outdir);
    Manifest m;
    m.set("tool", "scn");
    m.set("command", "features");
    m.set_argv(argv);
    record_input(m, "image", opt.input);
    record_input(m, "model", opt.model);
    m.set("layer", std::to_string(opt.layer));
    m.set("inverted", opt.invert ? "1" : "0");

    std::string ranges;
    for (std::size_t ch = 0; ch < maps.size(); ++ch) {
        char name[48];
        std::snprintf(name, sizeof(name), "feat_layer%d_ch%02zu.pgm", opt.layer, ch);
        const std::string path = (fs::path(opt.outdir) / name).string();
        save_pgm(maps[ch].map, path);
        record_output(m, std::string("map.") + std::to_string(ch), path);
        char line[128];
        std::snprintf(line, sizeof(line), "ch %02zu raw_min %.9g raw_max %.9g\n", ch,
                      maps[ch].raw_min, maps[ch].raw_max);
        ranges += line;
    }
    char ranges_name[48];
    std::snprintf(ranges_name, sizeof(ranges_name), "feat_layer%d_ranges.txt", opt.layer);
    const std::string ranges_path = (fs::path(opt.outdir) / ranges_name).string();
    {
        std::ofstream out(ranges_path, std::ios::trunc);
        if (!out) throw IoError("cannot open file for writing: " + ranges_path);
        out << ranges;
    }
    record_output(m, "ranges", ranges_path);
    m.save((fs::path(opt.outdir) / "features.manifest").string());
    return 0;
}

// ---------------------------------------------------------------- rerun ---

int dispatch(const std::vector<std::string>& args);

int run_rerun(const std::string& manifest_path) {
    const Manifest m = Manifest::load(manifest_path);
    const std::vector<std::string> args = m.argv();
    if (args.empty()) throw ValidationError("manifest has no argv entries: " + manifest_path);

    const int rc = dispatch(args);
    if (rc != 0) return rc;

    bool all_match = true;
    for (const auto& [key, recorded_path] : m.with_prefix("output.")) {
        if (key.size() >= 6 && key.compare(key.size() - 6, 6, ".fnv64") == 0) continue;
        const std::string hash_key = key + ".fnv64";
        if (!m.has(hash_key)) continue;
        const std::string expected = m.get(hash_key);
        const std::string actual = hex64(fnv1a64_file(recorded_path));
        const bool match = expected == actual;
        all_match = all_match && match;
        std::cout << (match ? "ok        " : "MISMATCH  ") << recorded_path << "\n";
    }
    if (!all_match) {
        std::cerr << "rerun produced different output hashes\n";
        return kExitValidation;
    }
    return 0;
}

// ------------------------------------------------------------- dispatch ---

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"transform-ensemble image restoration toolkit"};
    app.require_subcommand(1);

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic texture corpus");
    synth_cmd->add_option("--outdir", synth.outdir, "output directory")->required();
    synth_cmd->add_option("--count", synth.count, "number of textures")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--height", synth.height)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--width", synth.width)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed, "base texture seed");

    DegradeOptions degrade;
    double sigma_value = 0.0;
    int scale_value = 0;
    auto* degrade_cmd = app.add_subcommand("degrade", "apply noise or a downscale/upscale cycle");
    degrade_cmd->add_option("--input", degrade.input, "clean image (.pgm or .f32)")->required();
    degrade_cmd->add_option("--output", degrade.output, "output raw image (.f32)")->required();
    auto* sigma_opt = degrade_cmd->add_option("--sigma", sigma_value, "AWGN std on the 0-255 scale");
    auto* scale_opt = degrade_cmd->add_option("--scale", scale_value, "SISR factor (2, 3 or 4)");
    sigma_opt->excludes(scale_opt);
    scale_opt->excludes(sigma_opt);
    degrade_cmd->add_option("--seed", degrade.seed, "noise seed");

    TrainOptions train_opt;
    auto* train_cmd = app.add_subcommand("train", "train the tiny residual denoiser");
    train_cmd->add_option("--data-dir", train_opt.data_dir, "directory of clean images")
        ->required();
    train_cmd->add_option("--out-model", train_opt.out_model, "output weight file (.scnw)")
        ->required();
    train_cmd->add_option("--sigma", train_opt.config.sigma, "training noise std (0-255 scale)");
    train_cmd->add_option("--seed", train_opt.config.seed, "training seed");
    train_cmd->add_option("--epochs", train_opt.config.epochs)->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--patches", train_opt.config.patches_per_epoch)
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--patch-size", train_opt.config.patch_size)
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--lr", train_opt.config.learning_rate);
    train_cmd->add_flag("--augment-fr", train_opt.config.augment_fr,
                        "random flip/rotation on training patches");

    RestoreOptions restore;
    auto* restore_cmd = app.add_subcommand("restore", "run committee restoration");
    restore_cmd->add_option("--input", restore.input, "degraded image (.pgm or .f32)")
        ->required();
    restore_cmd->add_option("--output", restore.output, "output raw image (.f32)")->required();
    restore_cmd->add_option("--model", restore.model, "weight file (.scnw)");
    restore_cmd->add_option("--filter", restore.filter,
                            "built-in filter: identity, gauss3, box3, shift");
    restore_cmd->add_option("--committee", restore.committee,
                            "none, f, r, fr, i, full or l (scn-* also accepted)");
    restore_cmd->add_flag("--dump-members", restore.dump_members,
                          "write every member estimate next to the output");

    EvaluateOptions evaluate;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "emit a PSNR/IPSNR CSV table");
    evaluate_cmd->add_option("--clean-dir", evaluate.clean_dir)->required();
    evaluate_cmd->add_option("--degraded-dir", evaluate.degraded_dir)->required();
    evaluate_cmd->add_option("--model", evaluate.model);
    evaluate_cmd->add_option("--filter", evaluate.filter);
    evaluate_cmd
        ->add_option("--committees", evaluate.committees,
                     "comma-separated committee names")
        ->required()
        ->delimiter(',');
    evaluate_cmd->add_option("--setting", evaluate.setting, "label for the CSV setting column");
    evaluate_cmd->add_option("--out", evaluate.out, "CSV path (default: stdout)");

    FeaturesOptions features;
    auto* features_cmd =
        app.add_subcommand("features", "dump per-channel feature maps of a layer");
    features_cmd->add_option("--input", features.input)->required();
    features_cmd->add_option("--model", features.model)->required();
    features_cmd->add_option("--layer", features.layer, "1-based layer index")->required();
    features_cmd->add_flag("--invert", features.invert, "invert intensities before the net");
    features_cmd->add_option("--outdir", features.outdir)->required();

    std::string rerun_manifest;
    auto* rerun_cmd =
        app.add_subcommand("rerun", "re-execute a manifest and verify output hashes");
    rerun_cmd->add_option("manifest", rerun_manifest, "manifest file")->required();

    try {
        // CLI11 consumes the vector back to front.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (synth_cmd->parsed()) return run_synth(synth, args);
        if (degrade_cmd->parsed()) {
            if (sigma_opt->count() == 0 && scale_opt->count() == 0) {
                std::cerr << "error: one of --sigma or --scale is required\n";
                return kExitUsage;
            }
            if (sigma_opt->count() > 0) degrade.sigma = sigma_value;
            if (scale_opt->count() > 0) degrade.scale = scale_value;
            return run_degrade(degrade, args);
        }
        if (train_cmd->parsed()) return run_train(train_opt, args);
        if (restore_cmd->parsed()) return run_restore(restore, args);
        if (evaluate_cmd->parsed()) return run_evaluate(evaluate, args);
        if (features_cmd->parsed()) return run_features(features, args);
        if (rerun_cmd->parsed()) return run_rerun(rerun_manifest);
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}
