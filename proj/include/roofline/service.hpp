#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace roofline {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int listen_port = 8080;  // 0 binds an ephemeral port
    std::filesystem::path data_dir;
    std::optional<std::string> remote_repo_url;
    std::optional<std::string> cors_allowed_origin;
};

// HTTP/1.1 JSON API over a DatasetStore rooted at data_dir:
//
//   GET  /api/v1/machines
//   GET  /api/v1/machines/{id}
//   GET  /api/v1/machines/{id}/geometry?x_min=&x_max=
//   GET  /api/v1/machines/{id}/analyze?ai=&gflops=
//   POST /api/v1/machines
//   GET  /api/v1/search?meta.<key>=<value>&name=
//   POST /api/v1/repo/sync
//
// Errors always use {"error":{"code","message"}}. Repository sync pulls into
// data_dir itself, so synced datasets are listed under their repository ids.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Binds the listening socket; returns the bound port. Throws Error when
    // the address is unavailable.
    int bind();

    // Serves until stop(). bind() must have succeeded.
    void listen();

    void stop();

    bool is_running() const;

    const ServiceConfig& config() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace roofline
