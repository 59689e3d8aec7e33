#include "anderson/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include <json.hpp>

#include "anderson/io.hpp"
#include "anderson/msa.hpp"
#include "anderson/observables.hpp"
#include "anderson/parallel.hpp"

namespace anderson {

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["task"] = to_string(task);
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["workers"] = workers;
    j["outputs"] = outputs;
    j["wall_seconds"] = wall_seconds;
    std::vector<std::string> lines;
    std::istringstream echo(config_echo);
    for (std::string line; std::getline(echo, line);)
        lines.push_back(line);
    j["config"] = lines;
    return j.dump(2) + "\n";
}

std::size_t resolve_worker_count(const ExperimentConfig& config, const RunOptions& options) {
    if (options.workers)
        return resolve_workers(*options.workers);
    if (const char* env = std::getenv("ANDERSON_WORKERS"); env && *env) {
        char* end = nullptr;
        const long long value = std::strtoll(env, &end, 10);
        if (*end != '\0' || value < 0)
            throw ConfigError({{0, "ANDERSON_WORKERS", std::string("not a worker count: '") + env + "'"}});
        return resolve_workers(static_cast<std::size_t>(value));
    }
    return resolve_workers(config.run.workers);
}

namespace {

std::string log10_or_nan(double v) {
    return v > 0.0 ? format_double(std::log10(v)) : "nan";
}

Rectangle task_region(const ExperimentConfig& c) {
    return Cube(ConfigPoint::origin(c.model.n, c.model.d), c.task.L);
}

HamiltonianMatrix realization_hamiltonian(const ExperimentConfig& c, const Rectangle& region,
                                          std::size_t r) {
    const auto realization = sample(c.disorder, region.projection(), c.run.master_seed, r);
    return build_hamiltonian(region, realization, c.interaction, c.model.h);
}

TaskOutput run_msa(const ExperimentConfig& c, std::size_t workers) {
    auto params = c.msa_params();
    params.workers = workers;
    const auto rows = msa_report(params, c.disorder, c.interaction);

    TaskOutput out;
    out.csv_name = "msa.csv";
    std::ostringstream csv;
    write_msa_csv(csv, params, rows);
    out.csv = csv.str();

    std::string estimate, target;
    for (const auto& r : rows) {
        estimate += std::to_string(r.L) + ' ' + log10_or_nan(r.estimate) + '\n';
        target += std::to_string(r.L) + ' ' + log10_or_nan(r.target) + '\n';
    }
    out.plots = {{"msa_estimate.dat", estimate}, {"msa_target.dat", target}};
    return out;
}

TaskOutput run_spectrum(const ExperimentConfig& c, std::size_t workers) {
    const auto region = task_region(c);
    const auto spectra = parallel_map(c.run.realizations, workers, [&](std::size_t r) {
        return eigenvalues(realization_hamiltonian(c, region, r), c.model.dense_limit);
    });

    TaskOutput out;
    out.csv_name = "spectrum.csv";
    std::string csv = "# realization,seed,index,eigenvalue\n";
    std::string plot;
    for (std::size_t r = 0; r < spectra.size(); ++r) {
        for (Eigen::Index j = 0; j < spectra[r].size(); ++j) {
            csv += std::to_string(r) + ',' + std::to_string(c.run.master_seed) + ',' +
                   std::to_string(j) + ',' + format_double(spectra[r][j]) + '\n';
            if (r == 0)
                plot += std::to_string(j) + ' ' + format_double(spectra[r][j]) + '\n';
        }
    }
    out.csv = std::move(csv);
    out.plots = {{"spectrum.dat", plot}};
    return out;
}

struct DecayRow {
    double energy;
    std::optional<DecayFit> fit;
    std::string status;
};

TaskOutput run_decay(const ExperimentConfig& c, std::size_t workers) {
    const auto region = task_region(c);
    const auto results = parallel_map(c.run.realizations, workers, [&](std::size_t r) {
        const auto spectrum = eigensolve(realization_hamiltonian(c, region, r), c.model.dense_limit);
        std::vector<DecayRow> rows;
        rows.reserve(spectrum.size());
        for (std::size_t j = 0; j < spectrum.size(); ++j) {
            DecayRow row{spectrum.eigenvalues[static_cast<Eigen::Index>(j)], std::nullopt, "ok"};
            try {
                row.fit = decay_fit(spectrum, j);
            } catch (const InsufficientShells&) {
                row.status = "skip_insufficient_shells";
            }
            rows.push_back(std::move(row));
        }
        return rows;
    });

    TaskOutput out;
    out.csv_name = "decay.csv";
    std::string csv = "# realization,seed,index,energy,rate,intercept,r_squared,shells,status\n";
    std::string shells, lines;
    for (std::size_t r = 0; r < results.size(); ++r) {
        for (std::size_t j = 0; j < results[r].size(); ++j) {
            const auto& row = results[r][j];
            csv += std::to_string(r) + ',' + std::to_string(c.run.master_seed) + ',' +
                   std::to_string(j) + ',' + format_double(row.energy) + ',';
            if (row.fit)
                csv += format_double(row.fit->rate) + ',' + format_double(row.fit->intercept) + ',' +
                       format_double(row.fit->r_squared) + ',' + std::to_string(row.fit->shells_used);
            else
                csv += "nan,nan,nan,0";
            csv += ',' + row.status + '\n';

            if (r != 0 || !row.fit)
                continue;
            // One block per eigenvector; both files share the abscissae.
            const auto& f = *row.fit;
            if (!shells.empty()) {
                shells += '\n';
                lines += '\n';
            }
            for (std::size_t k = 0; k < f.radii.size(); ++k) {
                const auto x = std::to_string(f.radii[k]);
                shells += x + ' ' + format_double(f.log_maxima[k]) + '\n';
                lines += x + ' ' + format_double(f.intercept - f.rate * f.radii[k]) + '\n';
            }
        }
    }
    out.csv = std::move(csv);
    out.plots = {{"decay_shells.dat", shells}, {"decay_fit.dat", lines}};
    return out;
}

TaskOutput run_moment(const ExperimentConfig& c, std::size_t workers) {
    const auto region = task_region(c);
    const auto origin = ConfigPoint::origin(c.model.n, c.model.d);
    const auto K = sites(Cube(origin, c.task.K_radius));
    const EnergyInterval I{c.task.E_lo, c.task.E_hi};
    MomentOptions options;
    options.vertex_limit = c.task.vertex_limit;

    const ModelParams model{c.model.n, c.model.d, c.model.h, c.model.dense_limit};
    const auto averaged = disorder_averaged_moment(model, c.disorder, c.interaction, region, I, c.task.s, K,
                                                   c.run.realizations, c.run.master_seed, workers, options);

    TaskOutput out;
    out.csv_name = "moment.csv";
    std::string csv = "# realization,seed,value,method,multiplicity\n";
    std::string plot;
    for (std::size_t r = 0; r < averaged.samples.size(); ++r) {
        const auto& m = averaged.samples[r];
        csv += std::to_string(r) + ',' + std::to_string(c.run.master_seed) + ',' + format_double(m.value) +
               ',' + to_string(m.method) + ',' + std::to_string(m.multiplicity) + '\n';
        plot += std::to_string(r) + ' ' + format_double(m.value) + '\n';
    }
    out.csv = std::move(csv);
    out.plots = {{"moment.dat", plot}};
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

TaskOutput run_task(const ExperimentConfig& config, TaskKind task, std::size_t workers) {
    switch (task) {
    case TaskKind::Msa: return run_msa(config, workers);
    case TaskKind::Decay: return run_decay(config, workers);
    case TaskKind::Moment: return run_moment(config, workers);
    case TaskKind::Spectrum: return run_spectrum(config, workers);
    }
    throw std::invalid_argument("run: unknown task");
}

RunManifest run(ExperimentConfig config, TaskKind task, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    if (options.seed)
        config.run.master_seed = *options.seed;
    if (options.out)
        config.run.output = options.out->string();
    validate_config(config, task);
    const std::size_t workers = resolve_worker_count(config, options);

    RunManifest manifest;
    manifest.task = task;
    manifest.workers = workers;
    manifest.timestamp = utc_timestamp();
    manifest.config_echo = print_config(config);

    const auto output = run_task(config, task, workers);
    const std::filesystem::path dir(config.run.output);
    write_file_atomic(dir / output.csv_name, output.csv);
    manifest.outputs.push_back(output.csv_name);
    if (options.plot) {
        for (const auto& plot : output.plots) {
            write_file_atomic(dir / plot.name, plot.contents);
            manifest.outputs.push_back(plot.name);
        }
    }
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file_atomic(dir / "manifest.json", manifest.to_json());
    return manifest;
}

}  // namespace anderson
