#include "synlens/server.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "synlens/error.hpp"
#include "synlens/report.hpp"

namespace synlens::report {

namespace {

constexpr const char* kPlaceholderPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>synlens</title></head>\n"
    "<body><p>The explorer UI is not installed. The analysis bundle is at "
    "<a href=\"/api/bundle\">/api/bundle</a>.</p></body></html>\n";

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

}  // namespace

struct BundleServer::Impl {
    httplib::Server server;
    std::string bundle;
};

BundleServer::BundleServer(std::string bundle_bytes, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>()) {
    impl_->bundle = std::move(bundle_bytes);
    auto& svr = impl_->server;
    // SO_REUSEADDR only: with SO_REUSEPORT a second server could share a port in use.
    svr.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    svr.Get("/api/bundle", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(impl_->bundle, "application/json");
    });
    if (static_dir) {
        if (!svr.set_mount_point("/", static_dir->string())) {
            throw ConfigError("static asset directory '" + static_dir->string() + "' does not exist");
        }
    } else {
        svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
        });
    }
}

BundleServer::~BundleServer() { stop(); }

bool BundleServer::bind(const std::string& host, int port) {
    auto& svr = impl_->server;
    if (port == 0) {
        port_ = svr.bind_to_any_port(host);
        return port_ > 0;
    }
    if (!svr.bind_to_port(host, port)) return false;
    port_ = port;
    return true;
}

void BundleServer::listen() {
    if (port_ <= 0) throw ContractError("BundleServer::listen: bind() first");
    impl_->server.listen_after_bind();
}

void BundleServer::stop() {
    if (impl_) impl_->server.stop();
}

bool BundleServer::running() const { return impl_->server.is_running(); }

int serve(const std::filesystem::path& bundle_path, int port, const std::string& host,
          std::optional<std::filesystem::path> static_dir) {
    std::ifstream in(bundle_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read bundle '" << bundle_path.string() << "'\n";
        return 1;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    try {
        (void)parse_bundle(bytes);
    } catch (const Error& e) {
        std::cerr << "error: " << bundle_path.string() << ": " << e.what() << "\n";
        return 1;
    }

    std::unique_ptr<BundleServer> server;
    try {
        server = std::make_unique<BundleServer>(std::move(bytes), static_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!server->bind(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port
                  << " (port in use or not permitted)\n";
        return 1;
    }

    g_interrupted = false;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::atomic<bool> done{false};
    std::thread watcher([&] {
        while (!done) {
            if (g_interrupted) {
                server->stop();
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
    });

    std::cerr << "serving " << bundle_path.string() << " at http://" << host << ":" << server->port()
              << "/ (Ctrl-C to stop)\n";
    server->listen();
    done = true;
    watcher.join();
    std::signal(SIGINT, SIG_DFL);
    std::signal(SIGTERM, SIG_DFL);
    std::cerr << "server stopped\n";
    return 0;
}

}  // namespace synlens::report
