// roofline: validate, plot, analyze and share roofline datasets.

#include "roofline/dataset.hpp"
#include "roofline/errors.hpp"
#include "roofline/geometry.hpp"
#include "roofline/payload.hpp"
#include "roofline/repository.hpp"
#include "roofline/service.hpp"
#include "roofline/svg.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <thread>

#include <pthread.h>

namespace fs = std::filesystem;
using namespace roofline;

namespace {

enum Exit : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kInvalid = 3,
    kNetwork = 4,
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reads and loads a dataset file, mapping failures onto exit codes.
struct LoadFailure {
    int code;
    std::string message;
};

Dataset load_file(const std::string& path) {
    std::string bytes;
    try {
        bytes = read_file(path);
    } catch (const Error& e) {
        throw LoadFailure{kFailure, e.what()};
    }
    try {
        return load_dataset(bytes);
    } catch (const Error& e) {
        throw LoadFailure{kInvalid, path + ": " + e.what()};
    }
}

std::string dataset_id_for(const std::string& path) {
    std::string name = fs::path(path).filename().string();
    for (std::string_view ext : {kDatasetExtension, std::string_view(".json")}) {
        if (name.size() > ext.size() && name.ends_with(ext)) {
            return name.substr(0, name.size() - ext.size());
        }
    }
    return name;
}

std::string repo_url(const std::string& flag) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv("ROOFLINE_REPO_URL"); env && *env) {
        return env;
    }
    throw UsageError("no repository URL: pass --url or set ROOFLINE_REPO_URL");
}

std::string classification_text(BoundClass c) {
    switch (c) {
    case BoundClass::memory_bound:
        return "memory-bound";
    case BoundClass::compute_bound:
        return "compute-bound";
    case BoundClass::at_ridge:
        return "at-ridge";
    }
    return "?";
}

void print_row(std::ostream& out, const BoundAnalysis& a, const std::string& tag) {
    out << std::left << std::setw(14) << a.ceiling_pair.compute << std::setw(14) << a.ceiling_pair.bandwidth
        << std::right << std::setw(12) << a.ridge_point << std::setw(14) << a.attainable_gflops << std::setw(12)
        << a.efficiency << "  " << classification_text(a.classification);
    if (!tag.empty()) {
        out << "  " << tag;
    }
    out << '\n';
}

int cmd_validate(const std::string& file) {
    const Dataset d = load_file(file);
    std::cout << d.fingerprint << '\n';
    return kOk;
}

struct PlotOptions {
    std::vector<std::string> files;
    std::string output;
    std::optional<double> x_min;
    std::optional<double> x_max;
    bool compare = false;
    std::string title;
};

int cmd_plot(const PlotOptions& o) {
    if (o.files.empty()) {
        throw UsageError("plot needs at least one dataset file");
    }
    if (o.files.size() > 1 && !o.compare) {
        throw UsageError("plotting several datasets requires --compare");
    }
    if (o.files.size() > kMaxComparedDatasets) {
        throw UsageError("--compare supports at most " + std::to_string(kMaxComparedDatasets) + " datasets");
    }
    if ((o.x_min && !(*o.x_min > 0.0)) || (o.x_max && !(*o.x_max > 0.0)) ||
        (o.x_min && o.x_max && !(*o.x_min < *o.x_max))) {
        throw UsageError("invalid domain: need 0 < --x-min < --x-max");
    }

    std::vector<Dataset> datasets;
    for (const auto& f : o.files) {
        datasets.push_back(load_file(f));
    }
    std::vector<MachineProfile> profiles;
    std::vector<KernelTrial> trials;
    for (const auto& d : datasets) {
        profiles.push_back(d.machine);
        trials.insert(trials.end(), d.trials.begin(), d.trials.end());
    }

    ChartDomain domain = default_domain(profiles, trials);
    if (o.x_min || o.x_max) {
        const double lo = o.x_min.value_or(domain.x_min);
        const double hi = o.x_max.value_or(domain.x_max);
        if (!(lo < hi)) {
            throw UsageError("invalid domain: --x-min must be below --x-max");
        }
        domain = domain_with_x(profiles, trials, lo, hi);
    }

    std::vector<ChartGeometry> geometries;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        geometries.push_back(build_geometry(datasets[i].machine, datasets[i].trials, domain, dataset_id_for(o.files[i])));
    }
    std::optional<std::string> title;
    if (!o.title.empty()) {
        title = o.title;
    } else if (!o.compare) {
        title = datasets.front().machine.name;
    }
    const std::string svg = o.compare ? render_comparison(geometries, {}, title) : render(geometries.front(), {}, title);
    write_file_atomic(o.output, svg);
    std::cout << "wrote " << o.output << '\n';
    return kOk;
}

int cmd_analyze(const std::string& file, double ai, double gflops, bool as_json) {
    if (!(ai > 0.0) || !(gflops > 0.0) || !std::isfinite(ai) || !std::isfinite(gflops)) {
        throw UsageError("--ai and --gflops must be positive");
    }
    const Dataset d = load_file(file);
    const KernelAnalysis a = analyze_kernel({"query", ai, gflops, {}}, d.machine);
    if (as_json) {
        std::cout << to_json(a).dump(2) << '\n';
        return kOk;
    }
    std::cout << d.machine.name << ": ai " << ai << " FLOPs/Byte, achieved " << gflops << " GFLOP/s\n"
              << std::left << std::setw(14) << "compute" << std::setw(14) << "bandwidth" << std::right
              << std::setw(12) << "ridge" << std::setw(14) << "attainable" << std::setw(12) << "efficiency"
              << "  " << std::left << "bound\n";
    for (const auto& p : a.pairs) {
        print_row(std::cout, p, "");
    }
    print_row(std::cout, a.top, "(top envelope)");
    return kOk;
}

int cmd_repo_sync(const std::string& url_flag, const std::string& cache_flag) {
    const std::string url = repo_url(url_flag);
    const fs::path cache = cache_flag.empty() ? default_cache_dir() : fs::path(cache_flag);
    RepositoryClient client;
    const SyncReport r = client.sync(url, cache);
    std::cout << "pulled: " << r.pulled.size() << '\n'
              << "cached: " << r.cached.size() << '\n'
              << "errors: " << r.errors.size() << '\n';
    for (const auto& e : r.errors) {
        std::cerr << "error: " << e.id << ": " << e.message << '\n';
    }
    return r.errors.empty() ? kOk : kNetwork;
}

int cmd_repo_list(const std::string& url_flag, const std::string& tag, bool as_json) {
    RepositoryClient client;
    const RepositoryIndex index = client.fetch_index(repo_url(url_flag));
    const auto entries = list_remote(index, tag.empty() ? std::nullopt : std::optional(tag));
    if (as_json) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& e : entries) {
            out.push_back(to_json(e));
        }
        std::cout << out.dump(2) << '\n';
        return kOk;
    }
    for (const auto& e : entries) {
        std::cout << e.id << '\t' << e.machine_name << '\t' << e.created;
        if (!e.tags.empty()) {
            std::cout << "\t[";
            for (std::size_t i = 0; i < e.tags.size(); ++i) {
                std::cout << (i ? "," : "") << e.tags[i];
            }
            std::cout << ']';
        }
        std::cout << '\n';
    }
    return kOk;
}

int cmd_serve(ServiceConfig config) {
    if (const char* env = std::getenv("ROOFLINE_REPO_URL"); env && *env && !config.remote_repo_url) {
        config.remote_repo_url = env;
    }

    // Block termination signals here so only the waiter thread sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    Service service(config);
    const int port = service.bind();
    std::cout << "listening on http://" << config.host << ':' << port << " (data dir " << config.data_dir.string()
              << ")" << std::endl;

    std::thread waiter([&service, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        service.stop();
    });
    waiter.detach();
    service.listen();
    std::cout << "shut down" << std::endl;
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Roofline model toolkit: validate, plot, analyze and share roofline datasets"};
    app.require_subcommand(1);

    std::string validate_file;
    auto* validate = app.add_subcommand("validate", "Validate a dataset and print its fingerprint");
    validate->add_option("file", validate_file, "Dataset file")->required();

    PlotOptions plot_opts;
    double plot_x_min = 0.0, plot_x_max = 0.0;
    auto* plot = app.add_subcommand("plot", "Render datasets to an SVG roofline chart");
    plot->add_option("files", plot_opts.files, "Dataset files")->required();
    plot->add_option("-o,--output", plot_opts.output, "Output SVG path")->required();
    auto* x_min_opt = plot->add_option("--x-min", plot_x_min, "Lower arithmetic-intensity bound");
    auto* x_max_opt = plot->add_option("--x-max", plot_x_max, "Upper arithmetic-intensity bound");
    plot->add_flag("--compare", plot_opts.compare, "Overlay 2-4 datasets in one chart");
    plot->add_option("--title", plot_opts.title, "Chart title");

    std::string analyze_file;
    double ai = 0.0, gflops = 0.0;
    bool analyze_json = false;
    auto* analyze = app.add_subcommand("analyze", "Bound a kernel against every ceiling pair");
    analyze->add_option("file", analyze_file, "Dataset file")->required();
    analyze->add_option("--ai", ai, "Arithmetic intensity (FLOPs/Byte)")->required();
    analyze->add_option("--gflops", gflops, "Achieved GFLOP/s")->required();
    analyze->add_flag("--json", analyze_json, "Emit JSON");

    std::string repo_url_flag, repo_tag, repo_cache;
    bool repo_json = false;
    auto* repo = app.add_subcommand("repo", "Work with a remote dataset repository");
    repo->require_subcommand(1);
    auto* sync = repo->add_subcommand("sync", "Pull every repository entry into the local cache");
    sync->add_option("--url", repo_url_flag, "Repository base URL (default $ROOFLINE_REPO_URL)");
    sync->add_option("--cache-dir", repo_cache, "Cache directory (default $ROOFLINE_CACHE_DIR)");
    auto* list = repo->add_subcommand("list", "List repository entries");
    list->add_option("--url", repo_url_flag, "Repository base URL (default $ROOFLINE_REPO_URL)");
    list->add_option("--tag", repo_tag, "Only entries carrying this tag");
    list->add_flag("--json", repo_json, "Emit JSON");

    ServiceConfig serve_config;
    std::string data_dir;
    std::string cors;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--port", serve_config.listen_port, "Listen port")->check(CLI::Range(1, 65535))->required();
    serve->add_option("--data-dir", data_dir, "Dataset store directory")->required();
    serve->add_option("--host", serve_config.host, "Listen address");
    serve->add_option("--cors-origin", cors, "Emit Access-Control-Allow-Origin with this value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate) {
            return cmd_validate(validate_file);
        }
        if (*plot) {
            if (*x_min_opt) {
                plot_opts.x_min = plot_x_min;
            }
            if (*x_max_opt) {
                plot_opts.x_max = plot_x_max;
            }
            return cmd_plot(plot_opts);
        }
        if (*analyze) {
            return cmd_analyze(analyze_file, ai, gflops, analyze_json);
        }
        if (*sync) {
            return cmd_repo_sync(repo_url_flag, repo_cache);
        }
        if (*list) {
            return cmd_repo_list(repo_url_flag, repo_tag, repo_json);
        }
        if (*serve) {
            serve_config.data_dir = data_dir;
            if (!cors.empty()) {
                serve_config.cors_allowed_origin = cors;
            }
            return cmd_serve(serve_config);
        }
    } catch (const LoadFailure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const CapacityError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNetwork;
    } catch (const RemoteError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNetwork;
    } catch (const IntegrityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNetwork;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNetwork;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
