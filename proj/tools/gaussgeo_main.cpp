// gaussgeo — command-line front end for the Gaussian-state geometry library
//
// Exit codes: 0 success (validate: 0 physical, 1 unphysical), 2 usage error,
// 3 file-format error, 4 numerical failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gaussgeo/ensemble.hpp"
#include "gaussgeo/io.hpp"
#include "gaussgeo/measures.hpp"
#include "gaussgeo/metrics.hpp"
#include "gaussgeo/sampling.hpp"
#include "gaussgeo/symplectic.hpp"

namespace {

using namespace gaussgeo;
using nlohmann::json;

constexpr int kExitUnphysical = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFileFormat = 3;
constexpr int kExitNumerical = 4;

struct OutputOptions {
    std::string format = "csv";  // csv | json
    std::string path;            // empty -> stdout
    int precision = 12;
};

void emit(const OutputOptions& opts, const std::string& content) {
    if (opts.path.empty()) {
        std::cout << content;
        return;
    }
    write_file_atomic(opts.path, content);
}

std::string fmt(const OutputOptions& opts, double v) {
    return format_double(v, opts.precision);
}

std::string render_table(const OutputOptions& opts,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    if (opts.format == "json") {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t c = 0; c < columns.size(); ++c)
                obj[columns[c]] = row[c];
            arr.push_back(obj);
        }
        out << arr.dump(2) << "\n";
        return out.str();
    }
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << columns[c];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << fmt(opts, row[c]);
        out << "\n";
    }
    return out.str();
}

std::string render_scalar(const OutputOptions& opts, const std::string& name,
                          double value) {
    if (opts.format == "json") {
        json obj;
        obj[name] = value;
        return obj.dump() + "\n";
    }
    return fmt(opts, value) + "\n";
}

Observable parse_observable(const std::string& name) {
    if (name == "purity") return Observable::purity;
    if (name == "entropy") return Observable::entropy;
    if (name == "unit") return Observable::unit;
    throw CLI::ValidationError("--observable", "unknown observable: " + name);
}

// ------------------------------------------------------------- commands ---

struct ValidateCmd {
    std::string file;
    int run(const OutputOptions& opts) const {
        ValidityReport report;
        try {
            report = validate_covariance(load_covariance_matrix(file));
        } catch (const std::invalid_argument& err) {
            throw FileFormatError(err.what());  // bad content, not bad usage
        }
        std::string content;
        if (opts.format == "json") {
            json obj;
            obj["physical"] = report.physical;
            obj["min_nu"] = report.min_nu;
            content = obj.dump() + "\n";
        } else {
            content = fmt(opts, report.min_nu) + "\n";
        }
        emit(opts, content);
        std::cerr << (report.physical ? "physical" : "unphysical")
                  << " (min_nu = " << report.min_nu << ")\n";
        return report.physical ? 0 : kExitUnphysical;
    }
};

struct SpectrumCmd {
    std::string file;
    int run(const OutputOptions& opts) const {
        const CovarianceMatrix sigma = load_covariance(file);
        const SymplecticSpectrum spec = symplectic_spectrum(sigma);
        if (opts.format == "json") {
            json obj;
            obj["modes"] = spec.modes();
            obj["values"] = spec.values();
            emit(opts, obj.dump() + "\n");
            return 0;
        }
        std::ostringstream out;
        for (int i = 0; i < spec.modes(); ++i)
            out << (i ? "," : "") << "nu_" << i + 1;
        out << "\n";
        for (int i = 0; i < spec.modes(); ++i)
            out << (i ? "," : "") << fmt(opts, spec.values()[i]);
        out << "\n";
        emit(opts, out.str());
        return 0;
    }
};

struct DistanceCmd {
    std::string metric = "hs";
    std::string file_a, file_b;
    int run(const OutputOptions& opts) const {
        const CovarianceMatrix a = load_covariance(file_a);
        const CovarianceMatrix b = load_covariance(file_b);
        if (metric == "bures" && (a.modes() != 1 || b.modes() != 1)) {
            std::cerr << "error: --metric bures supports one-mode states only "
                         "(the closed-form fidelity stops at N = 1)\n";
            return kExitUsage;
        }
        const double d =
            metric == "hs" ? hs_distance(a, b) : bures_distance_one_mode(a, b);
        emit(opts, render_scalar(opts, "distance", d));
        return 0;
    }
};

struct DensityCmd {
    std::string family;
    int modes = 1;
    std::vector<double> at;
    bool raw = false;
    int run(const OutputOptions& opts) const {
        std::vector<std::vector<double>> rows;
        std::vector<std::string> columns;
        if (family == "hs-spectral") {
            if (at.empty() || at.size() % static_cast<std::size_t>(modes) != 0)
                throw CLI::ValidationError(
                    "--at", "need a multiple of --modes values");
            for (int i = 0; i < modes; ++i)
                columns.push_back("nu_" + std::to_string(i + 1));
            columns.push_back("density");
            for (std::size_t k = 0; k < at.size(); k += modes) {
                std::vector<double> nu(at.begin() + k, at.begin() + k + modes);
                const SymplecticSpectrum spec(nu);
                const auto eval = hs_spectral_density(spec, !raw);
                std::vector<double> row = spec.values();
                row.push_back(eval.value);
                rows.push_back(std::move(row));
            }
        } else if (family == "bures-spectral") {
            if (modes != 1)
                throw CLI::ValidationError(
                    "--modes", "bures-spectral is defined for one mode");
            columns = {"nu", "density"};
            for (double nu : at)
                rows.push_back({nu, bures_spectral_density_one_mode(nu)});
        } else if (family == "purity") {
            columns = {"mu", "density"};
            for (double mu : at)
                rows.push_back({mu, purity_density(modes, mu)});
        } else {
            throw CLI::ValidationError("--family", "unknown family: " + family);
        }
        emit(opts, render_table(opts, columns, rows));
        return 0;
    }
};

struct SampleCmd {
    int modes = 1;
    std::uint64_t count = 1;
    std::uint64_t seed = kDefaultSeed;
    int workers = 1;
    bool covariance = false;
    double scale = 0.3;
    int run(const OutputOptions& opts) const {
        SamplerConfig config;
        config.modes = modes;
        config.seed = seed;
        if (modes >= 4)
            std::cerr << "warning: rejection acceptance collapses for modes >= 4 "
                         "(an MCMC backend is future work); expect long runtimes\n";
        if (covariance) {
            if (opts.format != "json")
                throw CLI::ValidationError(
                    "--covariance", "covariance emission requires --format json");
            json arr = json::array();
            for (std::uint64_t i = 0; i < count; ++i) {
                Rng rng(derive_stream(seed, i));
                const CovarianceMatrix sigma =
                    sample_covariance(config, scale, rng);
                json obj;
                obj["modes"] = sigma.modes();
                obj["ordering"] = "block";
                std::vector<double> flat;
                flat.reserve(sigma.dim() * sigma.dim());
                for (int r = 0; r < sigma.dim(); ++r)
                    for (int c = 0; c < sigma.dim(); ++c)
                        flat.push_back(sigma.entries()(r, c));
                obj["matrix"] = flat;
                arr.push_back(obj);
            }
            emit(opts, arr.dump(2) + "\n");
            return 0;
        }
        const SampleBatch batch = sample_spectrum_batch(config, count, workers);
        std::vector<std::string> columns = {"index"};
        for (int i = 0; i < modes; ++i)
            columns.push_back("nu_" + std::to_string(i + 1));
        std::vector<std::vector<double>> rows;
        rows.reserve(batch.spectra.size());
        for (std::size_t i = 0; i < batch.spectra.size(); ++i) {
            std::vector<double> row = {static_cast<double>(i)};
            for (double v : batch.spectra[i].values()) row.push_back(v);
            rows.push_back(std::move(row));
        }
        emit(opts, render_table(opts, columns, rows));
        std::cerr << "acceptance_rate = " << batch.acceptance_rate << " ("
                  << batch.attempts << " proposals)\n";
        return 0;
    }
};

struct StatsCmd {
    std::string observable = "purity";
    int modes = 1;
    std::string method = "mc";
    std::uint64_t count = 100000;
    std::uint64_t seed = kDefaultSeed;
    int workers = 1;
    double tol = 0.0;
    int run(const OutputOptions& opts) const {
        const Observable obs = parse_observable(observable);
        EnsembleSummary summary;
        if (method == "mc") {
            summary = mc_mean(obs, modes, count, seed, workers);
        } else if (method == "quad") {
            QuadratureConfig cfg;
            if (tol > 0.0) cfg.rel_tol = tol;
            summary = quad_mean(obs, modes, cfg);
        } else {
            throw CLI::ValidationError("--method", "must be mc or quad");
        }
        if (opts.format == "json") {
            json obj;
            obj["observable"] = summary.observable;
            obj["modes"] = summary.modes;
            obj["method"] = summary.method;
            obj["estimate"] = summary.estimate;
            obj["standard_error"] = summary.standard_error;
            obj["sample_count"] = summary.sample_count;
            obj["tolerance"] = summary.tolerance;
            obj["seed"] = summary.seed;
            emit(opts, obj.dump() + "\n");
            return 0;
        }
        std::ostringstream out;
        out << "observable,modes,method,estimate,standard_error,sample_count,"
               "tolerance,seed\n";
        out << summary.observable << "," << summary.modes << ","
            << summary.method << "," << fmt(opts, summary.estimate) << ","
            << fmt(opts, summary.standard_error) << "," << summary.sample_count
            << "," << fmt(opts, summary.tolerance) << "," << summary.seed
            << "\n";
        emit(opts, out.str());
        return 0;
    }
};

struct PurityDistCmd {
    int modes = 1;
    int grid = 100;
    int run(const OutputOptions& opts) const {
        FigureParams params;
        params.modes = modes;
        params.grid = grid;
        const FigureTable table = figure_data(Figure::purity_dist, params);
        emit(opts, render_table(opts, table.columns, table.rows));
        return 0;
    }
};

struct FigureCmd {
    std::string which = "means";
    int modes = 1;
    int grid = 100;
    double range = 4.0;
    std::vector<int> mc_modes;
    std::uint64_t mc_count = 10000;
    std::uint64_t seed = kDefaultSeed;
    int run(const OutputOptions& opts) const {
        FigureParams params;
        params.modes = modes;
        params.grid = grid;
        params.range_max = range;
        params.mc_modes = mc_modes;
        params.mc_count = mc_count;
        params.seed = seed;
        Figure figure;
        if (which == "means") figure = Figure::means;
        else if (which == "purity_dist") figure = Figure::purity_dist;
        else if (which == "spectral_density") figure = Figure::spectral_density;
        else throw CLI::ValidationError("--which", "unknown figure: " + which);
        const FigureTable table = figure_data(figure, params);
        emit(opts, render_table(opts, table.columns, table.rows));
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometry of Gaussian states: symplectic spectra, metrics, "
                 "measure densities, and ensemble statistics"};
    app.require_subcommand(1);

    OutputOptions out;
    app.add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--output", out.path, "Write to file (atomic) instead of stdout");
    app.add_option("--precision", out.precision, "Significant digits")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();

    ValidateCmd validate_cmd;
    auto* validate = app.add_subcommand("validate", "Check physicality of a covariance file");
    validate->add_option("file", validate_cmd.file)->required();

    SpectrumCmd spectrum_cmd;
    auto* spectrum = app.add_subcommand("spectrum", "Symplectic eigenvalues of a covariance file");
    spectrum->add_option("file", spectrum_cmd.file)->required();

    DistanceCmd distance_cmd;
    auto* distance = app.add_subcommand("distance", "Distance between two states");
    distance->add_option("--metric", distance_cmd.metric)
        ->check(CLI::IsMember({"hs", "bures"}))
        ->capture_default_str();
    distance->add_option("fileA", distance_cmd.file_a)->required();
    distance->add_option("fileB", distance_cmd.file_b)->required();

    DensityCmd density_cmd;
    auto* density = app.add_subcommand("density", "Evaluate a measure density");
    density->add_option("--family", density_cmd.family)
        ->check(CLI::IsMember({"hs-spectral", "bures-spectral", "purity"}))
        ->required();
    density->add_option("--modes", density_cmd.modes)->check(CLI::PositiveNumber);
    density->add_option("--at", density_cmd.at, "Evaluation points")->required();
    density->add_flag("--raw", density_cmd.raw,
                      "hs-spectral: emit sqrt(det g) instead of the normalized density");

    SampleCmd sample_cmd;
    auto* sample = app.add_subcommand("sample", "Draw spectra (or covariances) from the ensemble");
    sample->add_option("--modes", sample_cmd.modes)->check(CLI::PositiveNumber);
    sample->add_option("--count", sample_cmd.count)->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_cmd.seed)->capture_default_str();
    sample->add_option("--workers", sample_cmd.workers)->check(CLI::PositiveNumber);
    sample->add_flag("--covariance", sample_cmd.covariance,
                     "Emit full covariance matrices (JSON only)");
    sample->add_option("--scale", sample_cmd.scale,
                       "Generator scale for --covariance")
        ->capture_default_str();

    StatsCmd stats_cmd;
    auto* stats = app.add_subcommand("stats", "Ensemble mean of an observable");
    stats->add_option("--observable", stats_cmd.observable)
        ->check(CLI::IsMember({"purity", "entropy"}))
        ->required();
    stats->add_option("--modes", stats_cmd.modes)->check(CLI::PositiveNumber);
    stats->add_option("--method", stats_cmd.method)
        ->check(CLI::IsMember({"mc", "quad"}))
        ->capture_default_str();
    stats->add_option("--count", stats_cmd.count)->check(CLI::PositiveNumber);
    stats->add_option("--seed", stats_cmd.seed)->capture_default_str();
    stats->add_option("--workers", stats_cmd.workers)->check(CLI::PositiveNumber);
    stats->add_option("--tol", stats_cmd.tol, "Quadrature relative tolerance");

    PurityDistCmd purity_dist_cmd;
    auto* purity_dist = app.add_subcommand("purity-dist", "Purity density on a grid");
    purity_dist->add_option("--modes", purity_dist_cmd.modes)->check(CLI::PositiveNumber);
    purity_dist->add_option("--grid", purity_dist_cmd.grid)->check(CLI::PositiveNumber);

    FigureCmd figure_cmd;
    auto* figure = app.add_subcommand("figure", "Figure-reproduction data series");
    figure->add_option("--which", figure_cmd.which)
        ->check(CLI::IsMember({"means", "purity_dist", "spectral_density"}))
        ->required();
    figure->add_option("--modes", figure_cmd.modes)->check(CLI::PositiveNumber);
    figure->add_option("--grid", figure_cmd.grid)->check(CLI::PositiveNumber);
    figure->add_option("--range", figure_cmd.range);
    figure->add_option("--mc-modes", figure_cmd.mc_modes,
                       "Extra Monte Carlo rows for the means figure (slow)");
    figure->add_option("--mc-count", figure_cmd.mc_count);
    figure->add_option("--seed", figure_cmd.seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*validate) return validate_cmd.run(out);
        if (*spectrum) return spectrum_cmd.run(out);
        if (*distance) return distance_cmd.run(out);
        if (*density) return density_cmd.run(out);
        if (*sample) return sample_cmd.run(out);
        if (*stats) return stats_cmd.run(out);
        if (*purity_dist) return purity_dist_cmd.run(out);
        if (*figure) return figure_cmd.run(out);
    } catch (const CLI::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const FileFormatError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitFileFormat;
    } catch (const NumericalError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
