#include "roofline/service.hpp"

#include "roofline/errors.hpp"
#include "roofline/geometry.hpp"
#include "roofline/payload.hpp"
#include "roofline/repository.hpp"
#include "roofline/store.hpp"

#include <httplib.h>

#include <charconv>
#include <cmath>
#include <system_error>

namespace roofline {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
    send(res, status, error_envelope(code, message));
}

// Strict decimal: the whole parameter must parse and be positive and finite.
std::optional<double> positive_param(const httplib::Request& req, const char* name, bool& malformed) {
    if (!req.has_param(name)) {
        return std::nullopt;
    }
    const std::string text = req.get_param_value(name);
    double v = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(v) || v <= 0.0) {
        malformed = true;
        return std::nullopt;
    }
    return v;
}

} // namespace

struct Service::Impl {
    explicit Impl(ServiceConfig c) : config(std::move(c)), store(config.data_dir) {}

    ServiceConfig config;
    DatasetStore store;
    httplib::Server server;
    int port = -1;

    std::optional<StoredDataset> lookup(const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        auto found = store.get(id);
        if (!found) {
            send_error(res, 404, "not_found", "no dataset with id \"" + id + "\"");
        }
        return found;
    }

    void routes() {
        // The library default adds SO_REUSEPORT, which would let a second
        // server share an occupied port instead of failing to bind.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
        });
        server.Get("/api/v1/machines", [this](const httplib::Request&, httplib::Response& res) {
            json out = json::array();
            for (const auto& s : store.list()) {
                out.push_back(summary_json(s));
            }
            send(res, 200, out);
        });

        server.Get(R"(/api/v1/machines/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            if (auto found = lookup(req, res)) {
                res.status = 200;
                res.set_content(save_dataset(found->dataset), kJson);
            }
        });

        server.Get(R"(/api/v1/machines/([^/]+)/geometry)",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       bool malformed = false;
                       auto x_min = positive_param(req, "x_min", malformed);
                       auto x_max = positive_param(req, "x_max", malformed);
                       if (malformed) {
                           send_error(res, 400, "bad_request", "x_min and x_max must be positive decimals");
                           return;
                       }
                       auto found = lookup(req, res);
                       if (!found) {
                           return;
                       }
                       const Dataset& d = found->dataset;
                       const std::span profiles(&d.machine, 1);
                       ChartDomain domain = default_domain(profiles, d.trials);
                       if (x_min || x_max) {
                           const double lo = x_min.value_or(domain.x_min);
                           const double hi = x_max.value_or(domain.x_max);
                           if (!(lo < hi)) {
                               send_error(res, 400, "bad_request", "x_min must be < x_max");
                               return;
                           }
                           domain = domain_with_x(profiles, d.trials, lo, hi);
                       }
                       send(res, 200, to_json(build_geometry(d.machine, d.trials, domain, found->id)));
                   });

        server.Get(R"(/api/v1/machines/([^/]+)/analyze)",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       bool malformed = false;
                       auto ai = positive_param(req, "ai", malformed);
                       auto gflops = positive_param(req, "gflops", malformed);
                       if (malformed || !ai || !gflops) {
                           send_error(res, 400, "bad_request", "ai and gflops must be positive decimals");
                           return;
                       }
                       auto found = lookup(req, res);
                       if (!found) {
                           return;
                       }
                       KernelTrial trial{"query", *ai, *gflops, {}};
                       send(res, 200, to_json(analyze_kernel(trial, found->dataset.machine)));
                   });

        server.Post("/api/v1/machines", [this](const httplib::Request& req, httplib::Response& res) {
            Dataset d;
            try {
                d = load_dataset(req.body);
            } catch (const ParseError& e) {
                send_error(res, 400, "malformed_json", e.what());
                return;
            } catch (const ValidationError& e) {
                send_error(res, 422, "validation_failed", e.what());
                return;
            } catch (const VersionError& e) {
                send_error(res, 422, "unsupported_version", e.what());
                return;
            }
            auto result = store.put(d);
            send(res, 201, {{"id", result.id}, {"fingerprint", d.fingerprint}, {"duplicates", result.duplicates}});
        });

        server.Get("/api/v1/search", [this](const httplib::Request& req, httplib::Response& res) {
            MetadataQuery query;
            std::optional<std::string> name;
            for (const auto& [key, value] : req.params) {
                if (key.starts_with("meta.") && key.size() > 5) {
                    query.emplace_back(key.substr(5), value);
                } else if (key == "name") {
                    name = value;
                }
            }
            send(res, 200, json(search(store.list(), query, name)));
        });

        server.Post("/api/v1/repo/sync", [this](const httplib::Request&, httplib::Response& res) {
            if (!config.remote_repo_url || config.remote_repo_url->empty()) {
                send_error(res, 409, "no_repository", "no remote repository configured");
                return;
            }
            RepositoryClient client;
            auto lock = store.lock_exclusive();
            try {
                send(res, 200, to_json(client.sync(*config.remote_repo_url, store.dir())));
            } catch (const RemoteError& e) {
                send_error(res, 502, "repository_error", e.what());
            } catch (const TransportError& e) {
                send_error(res, 502, "repository_unreachable", e.what());
            } catch (const FormatError& e) {
                send_error(res, 502, "repository_index_invalid", e.what());
            }
        });

        server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            try {
                std::rethrow_exception(ep);
            } catch (const DomainError& e) {
                send_error(res, 400, "bad_request", e.what());
            } catch (const ValidationError& e) {
                send_error(res, 422, "validation_failed", e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, "internal", e.what());
            } catch (...) {
                send_error(res, 500, "internal", "unknown error");
            }
        });

        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) {
                const char* code = res.status == 404 ? "not_found" : "http_error";
                send_error(res, res.status, code, httplib::status_message(res.status));
            }
        });

        server.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
            if (config.cors_allowed_origin) {
                res.set_header("Access-Control-Allow-Origin", *config.cors_allowed_origin);
                res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
                res.set_header("Access-Control-Allow-Headers", "Content-Type");
            }
        });
    }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
    if (impl_->config.listen_port < 0 || impl_->config.listen_port > 65535) {
        throw Error("listen port must be in 1-65535");
    }
    impl_->routes();
}

Service::~Service() { stop(); }

int Service::bind() {
    auto& s = impl_->server;
    if (impl_->config.listen_port == 0) {
        impl_->port = s.bind_to_any_port(impl_->config.host);
    } else if (s.bind_to_port(impl_->config.host, impl_->config.listen_port)) {
        impl_->port = impl_->config.listen_port;
    } else {
        impl_->port = -1;
    }
    if (impl_->port < 0) {
        throw Error("cannot listen on " + impl_->config.host + ":" + std::to_string(impl_->config.listen_port) +
                    " (address in use?)");
    }
    return impl_->port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
    if (impl_) {
        impl_->server.stop();
    }
}

bool Service::is_running() const { return impl_->server.is_running(); }

const ServiceConfig& Service::config() const noexcept { return impl_->config; }

} // namespace roofline
