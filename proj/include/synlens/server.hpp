#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace synlens::report {

/// Read-only HTTP server for one analysis bundle.
///
///   GET /api/bundle   the bundle bytes, application/json
///   GET /...          static explorer assets, when a directory is given
///   GET /             a placeholder page otherwise
///
/// Everything else is 404.
class BundleServer {
public:
    BundleServer(std::string bundle_bytes, std::optional<std::filesystem::path> static_dir = {});
    ~BundleServer();

    BundleServer(const BundleServer&) = delete;
    BundleServer& operator=(const BundleServer&) = delete;

    /// Binds the port (0 picks a free one). Returns false if it is taken.
    bool bind(const std::string& host, int port);
    int port() const { return port_; }

    /// Serves until stop() is called. Requires a successful bind().
    void listen();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = -1;
};

/// Validates the bundle file, binds, and serves until SIGINT/SIGTERM.
/// Returns the process exit code: 0 after a clean shutdown, 1 when the
/// bundle is unreadable or invalid or the port cannot be bound.
int serve(const std::filesystem::path& bundle_path, int port, const std::string& host = "127.0.0.1",
          std::optional<std::filesystem::path> static_dir = {});

}  // namespace synlens::report
