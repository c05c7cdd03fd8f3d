#include "rmtlab/lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "rmtlab/error.hpp"
#include "rmtlab/gaf.hpp"
#include "rmtlab/lab/csv.hpp"
#include "rmtlab/lab/svg.hpp"
#include "rmtlab/outliers.hpp"
#include "rmtlab/overlaps.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/trajectories.hpp"

namespace rmtlab::lab {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string str(Index i) { return std::to_string(i); }
std::string str(std::size_t i) { return std::to_string(i); }

Json base_summary(const std::string& command, const ExperimentConfig& config) {
    Json doc;
    doc["command"] = command;
    doc["config"] = Json::parse(config_to_json(config));
    return doc;
}

RunSummary finish(const ExperimentConfig& config, const std::string& command, Json doc, std::vector<fs::path> files) {
    const fs::path path = fs::path(config.out_dir) / (command + "_summary.json");
    RunSummary summary;
    summary.json = doc.dump(2);
    write_text_file(path, summary.json + "\n");
    files.push_back(path);
    summary.files = std::move(files);
    return summary;
}

std::vector<Complex> spectrum_of(const Instance& inst, double t) {
    return to_std(eigenvalues(build_matrix(inst.model, inst.base, t)));
}

RunSummary run_sample(const ExperimentConfig& config) {
    const auto ts = config.t.resolve(config.n);
    const auto spectra = parallel_trials(static_cast<std::size_t>(config.trials), [&](std::size_t trial) {
        const Instance inst = make_instance(config.model, config.n, {config.seed, trial, 0}, config.w, config.rank);
        std::vector<std::vector<Complex>> per_t;
        for (const double t : ts) per_t.push_back(spectrum_of(inst, t));
        return per_t;
    });
    const fs::path path = fs::path(config.out_dir) / "spectra.csv";
    CsvWriter csv(path, {"model", "trial", "t", "re", "im"});
    const std::string model = to_string(config.model);
    double max_modulus = 0.0;
    for (std::size_t trial = 0; trial < spectra.size(); ++trial) {
        for (std::size_t k = 0; k < ts.size(); ++k) {
            for (const Complex z : spectra[trial][k]) {
                csv.row({model, str(trial), format_real(ts[k]), format_real(z.real()), format_real(z.imag())});
                max_modulus = std::max(max_modulus, std::abs(z));
            }
        }
    }
    csv.close();
    Json doc = base_summary("sample", config);
    doc["rows"] = csv.rows();
    doc["max_modulus"] = max_modulus;
    return finish(config, "sample", std::move(doc), {path});
}

RunSummary run_trajectories(const ExperimentConfig& config) {
    if (config.t.kind != TSpec::Kind::Range || config.t.steps < 2) {
        fail(ErrorKind::InvalidConfig, "trajectories need --t-range a:b:steps with steps >= 2");
    }
    const auto bundles = parallel_trials(static_cast<std::size_t>(config.trials), [&](std::size_t trial) {
        const Instance inst = make_instance(config.model, config.n, {config.seed, trial, 0}, config.w, config.rank);
        return track(inst.model, inst.base, config.t.a, config.t.b, config.t.steps);
    });
    std::vector<fs::path> files;
    const fs::path path = fs::path(config.out_dir) / "trajectories.csv";
    CsvWriter csv(path, {"model", "trial", "t", "path_index", "re", "im"});
    const std::string model = to_string(config.model);
    Json per_trial = Json::array();
    for (std::size_t trial = 0; trial < bundles.size(); ++trial) {
        const auto& b = bundles[trial];
        double min_modulus = std::numeric_limits<double>::infinity();
        double max_modulus = 0.0;
        for (std::size_t k = 0; k < b.grid.size(); ++k) {
            for (std::size_t j = 0; j < b.paths.size(); ++j) {
                const Complex z = b.paths[j][k];
                csv.row({model, str(trial), format_real(b.grid[k]), str(j), format_real(z.real()), format_real(z.imag())});
                min_modulus = std::min(min_modulus, std::abs(z));
                max_modulus = std::max(max_modulus, std::abs(z));
            }
        }
        Json entry;
        entry["trial"] = trial;
        entry["paths"] = b.paths.size();
        entry["grid_points"] = b.grid.size();
        entry["refinements"] = b.refinements;
        entry["min_gap"] = b.min_gap;
        entry["min_modulus"] = min_modulus;
        entry["max_modulus"] = max_modulus;
        per_trial.push_back(entry);
        if (config.svg) {
            SvgOptions opts;
            opts.unit_circle = config.model == ModelKind::Multiplicative;
            opts.title = model + " n=" + str(config.n) + " t=" + config.t.to_string() + " trial " + str(trial);
            const fs::path svg_path = fs::path(config.out_dir) / ("trajectories_trial" + str(trial) + ".svg");
            write_text_file(svg_path, render_trajectories_svg(b, opts));
            files.push_back(svg_path);
        }
    }
    csv.close();
    files.insert(files.begin(), path);
    Json doc = base_summary("trajectories", config);
    doc["rows"] = csv.rows();
    doc["trials"] = per_trial;
    return finish(config, "trajectories", std::move(doc), std::move(files));
}

struct OutlierRow {
    double t;
    SeparationReport report;
    std::optional<Complex> predicted;
};

RunSummary run_outlier(const ExperimentConfig& config) {
    const auto ts = config.t.resolve(config.n);
    const auto rows = parallel_trials(static_cast<std::size_t>(config.trials), [&](std::size_t trial) {
        const Instance inst = make_instance(config.model, config.n, {config.seed, trial, 0}, config.w, config.rank);
        std::vector<OutlierRow> out;
        for (const double t : ts) {
            const auto spectrum = spectrum_of(inst, t);
            OutlierRow row{t, {}, std::nullopt};
            switch (config.model) {
                case ModelKind::Additive:
                    row.report = detect_separation(spectrum, Disk{t, 1.0}, Disk{0.0, 1.1});
                    row.predicted = Complex{t, 0.0};
                    break;
                case ModelKind::AntiHermitian: {
                    const auto domains = musical_domains(config.n, t, config.epsilon);
                    row.report = detect_separation(spectrum, domains.d1, domains.d2);
                    row.predicted = domains.d1.center;
                    break;
                }
                case ModelKind::Multiplicative:
                    row.report = detect_separation(spectrum, Disk{0.0, 0.6}, Annulus{0.0, 0.85, 2.0},
                                                   static_cast<int>(config.rank));
                    if (config.rank == 1 && t != 0.0 && std::abs(t) < 1.0) {
                        row.predicted = predicted_outlier(inst.model, inst.base, t, config.n).location;
                    }
                    break;
            }
            out.push_back(row);
        }
        return out;
    });
    const fs::path path = fs::path(config.out_dir) / "outliers.csv";
    CsvWriter csv(path, {"model", "trial", "t", "outlier_count", "in_d2", "elsewhere", "margin", "satisfied",
                         "outlier_re", "outlier_im", "predicted_re", "predicted_im"});
    const std::string model = to_string(config.model);
    std::vector<int> satisfied(ts.size(), 0);
    for (std::size_t trial = 0; trial < rows.size(); ++trial) {
        for (std::size_t k = 0; k < rows[trial].size(); ++k) {
            const auto& r = rows[trial][k];
            const Complex o = r.report.outlier.value_or(Complex{std::nan(""), std::nan("")});
            const Complex p = r.predicted.value_or(Complex{std::nan(""), std::nan("")});
            csv.row({model, str(trial), format_real(r.t), std::to_string(r.report.outlier_count),
                     std::to_string(r.report.in_d2), std::to_string(r.report.elsewhere), format_real(r.report.margin),
                     r.report.satisfied ? "1" : "0", format_real(o.real()), format_real(o.imag()),
                     format_real(p.real()), format_real(p.imag())});
            satisfied[k] += r.report.satisfied ? 1 : 0;
        }
    }
    csv.close();
    Json doc = base_summary("outlier", config);
    Json freq = Json::array();
    for (std::size_t k = 0; k < ts.size(); ++k) {
        Json e;
        e["t"] = ts[k];
        e["separation_frequency"] = static_cast<double>(satisfied[k]) / config.trials;
        if (!rows.empty()) {
            e["d1"] = describe(rows[0][k].report.d1);
            e["d2"] = describe(rows[0][k].report.d2);
        }
        freq.push_back(e);
    }
    doc["results"] = freq;
    return finish(config, "outlier", std::move(doc), {path});
}

RunSummary run_gaf(const ExperimentConfig& config) {
    const Index k = minimum_truncation(config.radius);
    const auto zeros = parallel_trials(static_cast<std::size_t>(config.trials), [&](std::size_t trial) {
        const GafSample g = sample_gaf(k, {config.seed, trial, streams::gaf});
        return gaf_zeros(g, config.level, config.radius);
    });
    const fs::path path = fs::path(config.out_dir) / "gaf_zeros.csv";
    CsvWriter csv(path, {"trial", "index", "re", "im"});
    double total = 0.0;
    for (std::size_t trial = 0; trial < zeros.size(); ++trial) {
        for (std::size_t j = 0; j < zeros[trial].size(); ++j) {
            csv.row({str(trial), str(j), format_real(zeros[trial][j].real()), format_real(zeros[trial][j].imag())});
        }
        total += static_cast<double>(zeros[trial].size());
    }
    csv.close();
    Json doc = base_summary("gaf", config);
    doc["truncation"] = k;
    doc["mean_zero_count"] = total / config.trials;
    if (config.level == 0.0) {
        doc["mean_zero_count_expected"] = config.radius * config.radius / (1.0 - config.radius * config.radius);
    }
    return finish(config, "gaf", std::move(doc), {path});
}

RunSummary run_overlaps(const ExperimentConfig& config) {
    const double t = config.t.resolve(config.n).front();
    struct Row {
        Vector values;
        Eigen::VectorXd diag;
        double row_sum_defect;
    };
    const auto rows = parallel_trials(static_cast<std::size_t>(config.trials), [&](std::size_t trial) {
        const Instance inst = make_instance(config.model, config.n, {config.seed, trial, 0}, config.w, config.rank);
        const EigenSystem es = eigen_decompose(build_matrix(inst.model, inst.base, t));
        const Matrix o = overlap_matrix(es);
        const double defect = (o.rowwise().sum().array() - 1.0).abs().maxCoeff();
        return Row{es.values, o.diagonal().real(), defect};
    });
    const fs::path path = fs::path(config.out_dir) / "overlaps.csv";
    CsvWriter csv(path, {"trial", "index", "re_lambda", "im_lambda", "overlap_diag"});
    double mean_diag = 0.0, max_defect = 0.0;
    for (std::size_t trial = 0; trial < rows.size(); ++trial) {
        const auto& r = rows[trial];
        for (Index j = 0; j < r.values.size(); ++j) {
            csv.row({str(trial), str(j), format_real(r.values(j).real()), format_real(r.values(j).imag()),
                     format_real(r.diag(j))});
        }
        mean_diag += r.diag.mean();
        max_defect = std::max(max_defect, r.row_sum_defect);
    }
    csv.close();
    Json doc = base_summary("overlaps", config);
    doc["t"] = t;
    doc["mean_overlap_diag"] = mean_diag / config.trials;
    doc["max_row_sum_defect"] = max_defect;
    return finish(config, "overlaps", std::move(doc), {path});
}

}  // namespace

Instance make_instance(ModelKind kind, Index n, const SeedSpec& seed, WMode w, Index rank) {
    const SeedSpec base_seed = seed.with_stream(streams::base);
    Vector v;
    std::vector<Vector> extra;
    if (rank > 1) {
        const Matrix frame = sample_orthonormal_frame(n, rank, seed.with_stream(streams::extra));
        v = frame.col(0);
        for (Index j = 1; j < rank; ++j) extra.emplace_back(frame.col(j));
    } else {
        v = sample_unit_vector(n, seed.with_stream(streams::v));
    }
    switch (kind) {
        case ModelKind::Additive: {
            Vector wv = w == WMode::SameAsV ? v : sample_unit_vector(n, seed.with_stream(streams::w));
            return {sample_ginibre(n, base_seed), ModelConfig::additive(std::move(v), std::move(wv))};
        }
        case ModelKind::AntiHermitian:
            return {sample_gue(n, base_seed), ModelConfig::anti_hermitian(std::move(v))};
        case ModelKind::Multiplicative:
            return {sample_haar_unitary(n, base_seed), ModelConfig::multiplicative(std::move(v), std::move(extra))};
    }
    fail(ErrorKind::InvalidConfig, "unknown model kind");
}

const std::vector<std::string>& experiment_commands() {
    static const std::vector<std::string> names{"sample", "trajectories", "outlier", "gaf", "overlaps"};
    return names;
}

RunSummary run_experiment(const std::string& command, const ExperimentConfig& config) {
    config.validate();
    if (command == "sample") return run_sample(config);
    if (command == "trajectories") return run_trajectories(config);
    if (command == "outlier") return run_outlier(config);
    if (command == "gaf") return run_gaf(config);
    if (command == "overlaps") return run_overlaps(config);
    fail(ErrorKind::InvalidConfig, "unknown command '" + command + "'");
}

}  // namespace rmtlab::lab
