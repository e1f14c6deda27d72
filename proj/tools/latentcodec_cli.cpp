// latentcodec: fit, compress, decompress and benchmark the latent codec from the shell.

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "latentcodec/image_io.hpp"
#include "latentcodec/latentcodec.hpp"

namespace fs = std::filesystem;
using namespace latentcodec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw CodecError(Errc::io_error, "not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && image_io::is_image_path(e.path())) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw CodecError(Errc::io_error, "no .png or .ppm images in " + dir.string());
    return out;
}

std::vector<ImageBuffer> load_images(const fs::path& dir) {
    std::vector<ImageBuffer> images;
    for (const auto& p : list_images(dir)) images.push_back(image_io::read_image(p));
    return images;
}

/// Expands shell-style patterns that reach us unexpanded; literal paths pass through.
std::vector<fs::path> expand_patterns(const std::vector<std::string>& patterns) {
    std::vector<fs::path> out;
    for (const auto& pat : patterns) {
        if (pat.find_first_of("*?[") == std::string::npos) {
            out.emplace_back(pat);
            continue;
        }
        glob_t g{};
        if (::glob(pat.c_str(), 0, nullptr, &g) == 0)
            for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
        globfree(&g);
    }
    return out;
}

LinearCodecModel load_model(const fs::path& p) { return pca::read(read_file(p)); }

std::string default_model_id(std::uint32_t f, std::uint32_t c) {
    for (const auto& preset : {presets::sd15_like(), presets::sd3_like(), presets::dcae_like()})
        if (preset.factor == f && preset.channels == c) return preset.model_id;
    return "pca-f" + std::to_string(f) + "c" + std::to_string(c);
}

/// Latents for dictionary fitting, from LIF files or images run through a model.
std::vector<LatentTensor> gather_latents(const std::vector<std::string>& lif_patterns, const std::string& images_dir, const std::string& model_path) {
    std::vector<LatentTensor> latents;
    for (const auto& p : expand_patterns(lif_patterns)) latents.push_back(lif::read(read_file(p)));
    if (!images_dir.empty()) {
        if (model_path.empty()) throw UsageError("--images requires --model");
        const auto model = load_model(model_path);
        for (const auto& img : load_images(images_dir)) latents.push_back(encode(model, img));
    }
    if (latents.empty()) throw UsageError("no latent sources: give --latents or --images with --model");
    return latents;
}

Dictionary load_dictionary(QuantMode mode, const std::string& dict_path) {
    if (mode == QuantMode::raw_f32) {
        if (!dict_path.empty()) throw CodecError(Errc::mode_mismatch, "raw mode takes no --dict");
        return {};
    }
    if (dict_path.empty()) throw UsageError(std::string(to_string(mode)) + " mode needs --dict");
    const Bytes data = read_file(dict_path);
    if (mode == QuantMode::kmeans_8bit) {
        if (!ByteReader(data).has_magic(kcb::kMagic)) throw CodecError(Errc::mode_mismatch, "kmeans mode needs a KCB1 codebook");
        return kcb::read(data);
    }
    if (!ByteReader(data).has_magic(int8_range_file::kMagic)) throw CodecError(Errc::mode_mismatch, "int8 mode needs an I8R1 range file");
    return int8_range_file::read(data);
}

QuantMode parse_mode(const std::string& s) {
    if (auto m = parse_quant_mode(s)) return *m;
    throw UsageError("unknown mode '" + s + "' (raw|int8|kmeans)");
}

std::string fmt_double(double v, int precision = 6) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

// ---- fit-pca -------------------------------------------------------------

struct FitPcaArgs {
    std::string images, out, model_id;
    std::uint32_t factor = 8, channels = 4;
    std::uint64_t seed = 0;
    std::size_t max_patches = 65536;
};

int run_fit_pca(const FitPcaArgs& a) {
    if (a.factor < 1 || a.factor > LatentLayout::kMaxFactor) throw UsageError("--factor must be in 1..256");
    if (a.channels < 1 || a.channels > 3 * a.factor * a.factor)
        throw UsageError("--channels must be in 1.." + std::to_string(3 * a.factor * a.factor) + " for factor " + std::to_string(a.factor));
    LatentLayout layout{a.factor, a.channels, a.model_id.empty() ? default_model_id(a.factor, a.channels) : a.model_id};
    layout.validate();
    const auto images = load_images(a.images);
    const auto model = fit_linear_codec(images, layout, a.seed, a.max_patches);
    write_file(a.out, pca::write(model));
    std::cout << "model " << layout.model_id << " f=" << a.factor << " c=" << a.channels << " patches=" << model.train_stats.sample_count
              << "\nretained variance: " << fmt_double(model.train_stats.retained_variance_fraction) << "\n";
    return kExitOk;
}

// ---- fit-codebook / calibrate-int8 ---------------------------------------

struct SourceArgs {
    std::vector<std::string> latents;
    std::string images, model;
};

struct FitCodebookArgs {
    SourceArgs src;
    std::string out, scope = "global";
    std::uint32_t k = 256, max_iters = 100;
    std::uint64_t seed = 0;
    std::size_t max_samples = std::size_t{1} << 20;
    double rel_tol = 1e-6;
};

int run_fit_codebook(const FitCodebookArgs& a) {
    CodebookFitOptions opt;
    if (a.scope == "global") opt.scope = CodebookScope::global;
    else if (a.scope == "per-channel") opt.scope = CodebookScope::per_channel;
    else throw UsageError("--scope must be global or per-channel");
    if (a.k < 1 || a.k > 256) throw UsageError("--k must be in 1..256");
    opt.k = a.k;
    opt.seed = a.seed;
    opt.max_samples = a.max_samples;
    opt.max_iters = a.max_iters;
    opt.rel_tol = a.rel_tol;

    const auto latents = gather_latents(a.src.latents, a.src.images, a.src.model);
    const auto fit = fit_codebook(latents, opt);
    write_file(a.out, kcb::write(fit.codebook));

    std::cout << "codebook k=" << a.k << " scope=" << a.scope << " units=" << fit.codebook.units() << " samples=" << fit.codebook.source_count << "\n";
    for (std::size_t u = 0; u < fit.sse_history.size(); ++u) {
        const auto& h = fit.sse_history[u];
        std::cout << "unit " << u << ": iterations=" << h.size() - 1 << " sse " << fmt_double(h.front(), 9) << " -> " << fmt_double(h.back(), 9) << "\n";
    }
    if (a.k <= 16) {
        std::cout << "centroids:";
        for (float c : fit.codebook.block(0)) std::cout << " " << c;
        std::cout << "\n";
    }
    if (fit.codebook.degenerate) std::cerr << "warning: fewer distinct values than clusters; codebook tail repeats its max value\n";
    return kExitOk;
}

struct CalibrateArgs {
    SourceArgs src;
    std::string out;
};

int run_calibrate(const CalibrateArgs& a) {
    const auto latents = gather_latents(a.src.latents, a.src.images, a.src.model);
    const auto range = calibrate_int8_range(latents);
    write_file(a.out, int8_range_file::write(range));
    std::cout << "int8 range [" << range.min << ", " << range.max << "] bin width " << range.bin_width() << "\n";
    return kExitOk;
}

// ---- encode / requantize -------------------------------------------------

int run_encode(const std::string& input, const std::string& model_path, const std::string& out) {
    const auto model = load_model(model_path);
    const auto latent = encode(model, image_io::read_image(input));
    write_file(out, lif::write(latent));
    std::cout << "latent " << latent.channels() << "x" << latent.height << "x" << latent.width << "\n";
    return kExitOk;
}

int run_requantize(const std::string& input, const std::string& mode_s, const std::string& dict_path, const std::string& out) {
    const QuantMode mode = parse_mode(mode_s);
    const auto latent = lif::read(read_file(input));
    const Dictionary dict = load_dictionary(mode, dict_path);
    LatentTensor result = latent;
    if (mode == QuantMode::kmeans_8bit) {
        const auto& cb = std::get<Codebook>(dict);
        result = dequantize(quantize_kmeans(latent, cb), cb);
    } else if (mode == QuantMode::static_int8) {
        const auto& range = std::get<Int8Range>(dict);
        result = dequantize(quantize_int8(latent, range), range);
    }
    write_file(out, lif::write(result));
    return kExitOk;
}

// ---- compress / decompress -----------------------------------------------

struct CompressArgs {
    std::string input, model, mode = "kmeans", dict, out;
    std::uint32_t tile_size = 256;
};

int run_compress(const CompressArgs& a) {
    const QuantMode mode = parse_mode(a.mode);
    const auto model = load_model(a.model);
    const Dictionary dict = load_dictionary(mode, a.dict);
    const auto image = image_io::read_image(a.input);
    const auto container = compress_image(image, model, mode, dict, a.tile_size);
    const Bytes bytes = plc::write(container);
    write_file(a.out, bytes);
    const auto recon = decompress_image(container, model);
    std::cout << "tiles " << container.rows << "x" << container.cols << "\npayload_bytes " << container.payload_bytes() << "\ntotal_bytes "
              << bytes.size() << "\npsnr_db " << fmt_double(psnr(image, recon), 4) << "\n";
    return kExitOk;
}

int run_decompress(const std::string& input, const std::string& model_path, const std::string& out, const std::string& reference,
                   const std::string& report_path) {
    const auto container = plc::read(read_file(input));
    const auto model = load_model(model_path);
    const auto image = decompress_image(container, model);
    image_io::write_image(out, image);
    std::cout << "decoded " << image.height << "x" << image.width << "\n";
    if (!reference.empty()) {
        const auto ref = image_io::read_image(reference);
        const auto rep = build_report(ref, container, image);
        std::cout << "psnr_db " << fmt_double(rep.psnr_db, 4) << "\nssim " << fmt_double(rep.ssim) << "\n";
        if (!report_path.empty()) {
            const std::string text = to_json(rep).dump(2) + "\n";
            write_file(report_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
        }
    }
    return kExitOk;
}

// ---- benchmark -----------------------------------------------------------

struct LayoutSpec {
    std::string name;
    fs::path model, codebook, int8_range;
};

struct EntrySpec {
    fs::path image;
    std::optional<fs::path> reference;
    std::string reference_label = "external";
    std::optional<std::uint64_t> reference_bytes;
    std::map<std::string, fs::path> embeddings;
};

struct Manifest {
    std::vector<LayoutSpec> layouts;
    std::vector<QuantMode> modes;
    std::vector<EntrySpec> entries;
    std::uint64_t seed = 0;
    std::uint32_t tile_size = 256;
    std::string output;
};

Manifest load_manifest(const fs::path& path) {
    const Bytes raw = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(raw.begin(), raw.end());
    } catch (const nlohmann::json::exception& e) {
        throw CodecError(Errc::corrupt_payload, "manifest " + path.string() + ": " + e.what());
    }
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

    Manifest m;
    try {
        m.seed = j.value("seed", std::uint64_t{0});
        m.tile_size = j.value("tile_size", 256u);
        m.output = j.value("output", std::string{});
        for (const auto& l : j.at("layouts")) {
            LayoutSpec spec;
            spec.name = l.at("name").get<std::string>();
            spec.model = resolve(l.at("model").get<std::string>());
            if (l.contains("codebook")) spec.codebook = resolve(l["codebook"].get<std::string>());
            if (l.contains("int8_range")) spec.int8_range = resolve(l["int8_range"].get<std::string>());
            m.layouts.push_back(spec);
        }
        for (const auto& s : j.at("modes")) m.modes.push_back(parse_mode(s.get<std::string>()));
        for (const auto& e : j.at("entries")) {
            EntrySpec spec;
            spec.image = resolve(e.at("image").get<std::string>());
            if (spec.image.empty()) throw UsageError("manifest entry with empty image path");
            if (e.contains("reference")) spec.reference = resolve(e["reference"].get<std::string>());
            spec.reference_label = e.value("reference_label", spec.reference_label);
            if (e.contains("reference_bytes")) spec.reference_bytes = e["reference_bytes"].get<std::uint64_t>();
            if (e.contains("embeddings"))
                for (const auto& [key, value] : e["embeddings"].items()) spec.embeddings[key] = resolve(value.get<std::string>());
            m.entries.push_back(spec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("manifest " + path.string() + ": " + e.what());
    }
    if (m.layouts.empty() || m.modes.empty()) throw UsageError("manifest mode matrix is empty (need layouts and modes)");
    if (m.entries.empty()) throw UsageError("manifest has no entries");
    return m;
}

struct PreparedLayout {
    std::optional<LinearCodecModel> model;
    std::map<QuantMode, Dictionary> dictionaries;
    std::map<QuantMode, std::string> errors;
};

PreparedLayout prepare_layout(const LayoutSpec& spec, const Manifest& m) {
    PreparedLayout out;
    try {
        out.model = load_model(spec.model);
    } catch (const std::exception& e) {
        for (auto mode : m.modes) out.errors[mode] = e.what();
        return out;
    }
    // Dictionaries not given in the manifest are fitted on the manifest's own readable images.
    std::vector<LatentTensor> calibration;
    auto calibration_set = [&]() -> const std::vector<LatentTensor>& {
        if (calibration.empty())
            for (const auto& e : m.entries) {
                try {
                    calibration.push_back(encode(*out.model, image_io::read_image(e.image)));
                } catch (const CodecError&) {
                }
            }
        return calibration;
    };
    for (auto mode : m.modes) {
        try {
            if (mode == QuantMode::raw_f32) {
                out.dictionaries[mode] = std::monostate{};
            } else if (mode == QuantMode::kmeans_8bit) {
                out.dictionaries[mode] = spec.codebook.empty()
                                             ? Dictionary(fit_codebook(calibration_set(), CodebookFitOptions{.seed = m.seed}).codebook)
                                             : Dictionary(kcb::read(read_file(spec.codebook)));
            } else {
                out.dictionaries[mode] = spec.int8_range.empty() ? Dictionary(calibrate_int8_range(calibration_set()))
                                                                 : Dictionary(int8_range_file::read(read_file(spec.int8_range)));
            }
        } catch (const std::exception& e) {
            out.errors[mode] = e.what();
        }
    }
    return out;
}

struct Row {
    std::size_t entry = 0;
    std::string image, layout, mode;
    std::optional<std::uint64_t> payload_bytes, total_bytes;
    std::optional<double> psnr_db, ssim, embed_cosine, embed_l1;
    std::string error;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

std::string csv_line(const Row& r) {
    auto num = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string{}; };
    auto cnt = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string{}; };
    std::ostringstream os;
    os << r.entry << ',' << csv_field(r.image) << ',' << csv_field(r.layout) << ',' << csv_field(r.mode) << ',' << cnt(r.payload_bytes) << ','
       << cnt(r.total_bytes) << ',' << num(r.psnr_db) << ',' << num(r.ssim) << ',' << num(r.embed_cosine) << ',' << num(r.embed_l1) << ','
       << csv_field(r.error);
    return os.str();
}

std::optional<EmbeddingPair> load_pair(const EntrySpec& e, const std::string& key) {
    const auto orig = e.embeddings.find("original");
    const auto other = e.embeddings.find(key);
    if (orig == e.embeddings.end() || other == e.embeddings.end()) return std::nullopt;
    return EmbeddingPair{eef::read(read_file(orig->second)), eef::read(read_file(other->second))};
}

void fill_metrics(Row& row, const ImageBuffer& original, const ImageBuffer& recon, const std::optional<EmbeddingPair>& emb) {
    row.psnr_db = psnr(original, recon);
    row.ssim = ssim(original, recon);
    if (emb) {
        row.embed_cosine = embed_cosine(emb->first, emb->second);
        row.embed_l1 = embed_l1(emb->first, emb->second);
    }
}

unsigned worker_count(unsigned requested) {
    if (const char* env = std::getenv("LATENT_CODEC_THREADS"); env && *env) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring LATENT_CODEC_THREADS='" << env << "'\n";
    }
    if (requested >= 1) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_benchmark(const std::string& manifest_path, std::string out_path, unsigned threads) {
    const Manifest m = load_manifest(manifest_path);
    if (out_path.empty()) out_path = m.output;
    if (out_path.empty()) throw UsageError("benchmark needs --out or a manifest \"output\"");

    std::vector<PreparedLayout> prepared;
    for (const auto& l : m.layouts) prepared.push_back(prepare_layout(l, m));

    // One job per (entry, layout, mode) cell plus one per external reference, in output order.
    struct Job {
        std::size_t entry, layout, mode;
        bool reference;
    };
    std::vector<Job> jobs;
    for (std::size_t e = 0; e < m.entries.size(); ++e) {
        for (std::size_t l = 0; l < m.layouts.size(); ++l)
            for (std::size_t k = 0; k < m.modes.size(); ++k) jobs.push_back({e, l, k, false});
        if (m.entries[e].reference) jobs.push_back({e, 0, 0, true});
    }

    std::vector<Row> rows(jobs.size());
    auto run_job = [&](std::size_t index) {
        const Job& job = jobs[index];
        const EntrySpec& entry = m.entries[job.entry];
        Row& row = rows[index];
        row.entry = job.entry;
        row.image = entry.image.string();
        try {
            if (job.reference) {
                row.layout = "external";
                row.mode = entry.reference_label;
                const auto original = image_io::read_image(entry.image);
                const auto recon = image_io::read_image(*entry.reference);
                row.payload_bytes = row.total_bytes = entry.reference_bytes ? *entry.reference_bytes : fs::file_size(*entry.reference);
                fill_metrics(row, original, recon, load_pair(entry, "reference"));
                return;
            }
            const auto& spec = m.layouts[job.layout];
            const auto& prep = prepared[job.layout];
            const QuantMode mode = m.modes[job.mode];
            row.layout = spec.name;
            row.mode = to_string(mode);
            if (auto it = prep.errors.find(mode); it != prep.errors.end()) throw std::runtime_error(it->second);
            const auto original = image_io::read_image(entry.image);
            const auto container = compress_image(original, *prep.model, mode, prep.dictionaries.at(mode), m.tile_size);
            const auto recon = decompress_image(container, *prep.model);
            row.payload_bytes = container.payload_bytes();
            row.total_bytes = plc::total_bytes(container);
            fill_metrics(row, original, recon, load_pair(entry, spec.name + "/" + row.mode));
        } catch (const std::exception& e) {
            row.error = e.what();
            row.payload_bytes.reset();
            row.total_bytes.reset();
            row.psnr_db.reset();
            row.ssim.reset();
            row.embed_cosine.reset();
            row.embed_l1.reset();
        }
    };

    const unsigned workers = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(jobs.size(), 1));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) run_job(i);
        });
    for (auto& t : pool) t.join();

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw CodecError(Errc::io_error, "cannot create " + out_path);
    out << "entry,image,layout,mode,payload_bytes,total_bytes,psnr_db,ssim,embed_cosine,embed_l1,error\n";
    std::size_t failed = 0;
    for (const auto& r : rows) {
        out << csv_line(r) << '\n';
        failed += !r.error.empty();
    }
    if (!out) throw CodecError(Errc::io_error, "write failed for " + out_path);
    std::cout << rows.size() << " rows written to " << out_path << "\n";
    if (failed) std::cerr << "warning: " << failed << " of " << rows.size() << " rows failed; see the error column\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent-space image codec: patch-PCA autoencoder, K-means / int8 latent quantization, tiled PLC1 containers"};
    app.require_subcommand(1);

    FitPcaArgs fit_pca;
    auto* c_fit_pca = app.add_subcommand("fit-pca", "Fit a patch-PCA autoencoder (PCA1 model)");
    c_fit_pca->add_option("--images", fit_pca.images, "Directory of training PNG/PPM images")->required();
    c_fit_pca->add_option("--factor", fit_pca.factor, "Spatial downsample factor f")->required();
    c_fit_pca->add_option("--channels", fit_pca.channels, "Latent channels c")->required();
    c_fit_pca->add_option("--seed", fit_pca.seed, "Patch sampling seed");
    c_fit_pca->add_option("--max-patches", fit_pca.max_patches, "Cap on training patches");
    c_fit_pca->add_option("--model-id", fit_pca.model_id, "Identifier stored in the model (<= 16 bytes)");
    c_fit_pca->add_option("--out", fit_pca.out, "Output model file")->required();

    FitCodebookArgs fit_cb;
    auto* c_fit_cb = app.add_subcommand("fit-codebook", "Learn a K-means latent codebook (KCB1)");
    c_fit_cb->add_option("--latents", fit_cb.src.latents, "LIF files or glob patterns");
    c_fit_cb->add_option("--images", fit_cb.src.images, "Directory of images to encode with --model");
    c_fit_cb->add_option("--model", fit_cb.src.model, "PCA1 model for --images");
    c_fit_cb->add_option("--k", fit_cb.k, "Clusters (256 for 8-bit codes)");
    c_fit_cb->add_option("--scope", fit_cb.scope, "global | per-channel");
    c_fit_cb->add_option("--seed", fit_cb.seed, "Sampling and initialisation seed");
    c_fit_cb->add_option("--max-samples", fit_cb.max_samples, "Cap on sampled scalar values per scope unit");
    c_fit_cb->add_option("--max-iters", fit_cb.max_iters, "Lloyd iteration cap");
    c_fit_cb->add_option("--rel-tol", fit_cb.rel_tol, "Stop when relative SSE improvement falls below this");
    c_fit_cb->add_option("--out", fit_cb.out, "Output codebook file")->required();

    CalibrateArgs calib;
    auto* c_calib = app.add_subcommand("calibrate-int8", "Calibrate a static int8 range (I8R1)");
    c_calib->add_option("--latents", calib.src.latents, "LIF files or glob patterns");
    c_calib->add_option("--images", calib.src.images, "Directory of images to encode with --model");
    c_calib->add_option("--model", calib.src.model, "PCA1 model for --images");
    c_calib->add_option("--out", calib.out, "Output range file")->required();

    std::string enc_in, enc_model, enc_out;
    auto* c_encode = app.add_subcommand("encode", "Encode an image to a LIF latent");
    c_encode->add_option("--input", enc_in, "Input image")->required();
    c_encode->add_option("--model", enc_model, "PCA1 model")->required();
    c_encode->add_option("--out", enc_out, "Output LIF file")->required();

    std::string rq_in, rq_mode, rq_dict, rq_out;
    auto* c_requant = app.add_subcommand("requantize", "Quantize and dequantize a LIF latent in place of storage");
    c_requant->add_option("--input", rq_in, "Input LIF file")->required();
    c_requant->add_option("--mode", rq_mode, "int8 | kmeans")->required();
    c_requant->add_option("--dict", rq_dict, "I8R1 range or KCB1 codebook");
    c_requant->add_option("--out", rq_out, "Output LIF file")->required();

    CompressArgs comp;
    auto* c_comp = app.add_subcommand("compress", "Compress an image into a PLC1 container");
    c_comp->add_option("--input", comp.input, "Input image")->required();
    c_comp->add_option("--model", comp.model, "PCA1 model")->required();
    c_comp->add_option("--mode", comp.mode, "raw | int8 | kmeans");
    c_comp->add_option("--dict", comp.dict, "I8R1 range (int8) or KCB1 codebook (kmeans)");
    c_comp->add_option("--tile-size", comp.tile_size, "Tile edge in pixels (multiple of f)");
    c_comp->add_option("--out", comp.out, "Output container")->required();

    std::string dec_in, dec_model, dec_out, dec_ref, dec_report;
    auto* c_dec = app.add_subcommand("decompress", "Decode a PLC1 container to an image");
    c_dec->add_option("--input", dec_in, "Input container")->required();
    c_dec->add_option("--model", dec_model, "PCA1 model")->required();
    c_dec->add_option("--out", dec_out, "Output image (.png or .ppm)")->required();
    c_dec->add_option("--reference", dec_ref, "Original image; prints PSNR/SSIM");
    c_dec->add_option("--report", dec_report, "JSON report path (needs --reference)");

    std::string bench_manifest, bench_out;
    unsigned bench_threads = 0;
    auto* c_bench = app.add_subcommand("benchmark", "Rate-distortion table over a manifest");
    c_bench->add_option("--manifest", bench_manifest, "JSON manifest")->required();
    c_bench->add_option("--out", bench_out, "CSV report");
    c_bench->add_option("--threads", bench_threads, "Worker threads (LATENT_CODEC_THREADS overrides)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*c_fit_pca) return run_fit_pca(fit_pca);
        if (*c_fit_cb) return run_fit_codebook(fit_cb);
        if (*c_calib) return run_calibrate(calib);
        if (*c_encode) return run_encode(enc_in, enc_model, enc_out);
        if (*c_requant) return run_requantize(rq_in, rq_mode, rq_dict, rq_out);
        if (*c_comp) return run_compress(comp);
        if (*c_dec) return run_decompress(dec_in, dec_model, dec_out, dec_ref, dec_report);
        if (*c_bench) return run_benchmark(bench_manifest, bench_out, bench_threads);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CodecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
