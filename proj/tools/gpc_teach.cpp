// gpc-teach: live teaching server. A browser (or any WebSocket client)
// connects, sends a handshake and then corrective feedback while the agent
// runs at a human-followable step rate.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "gpc/errors.hpp"
#include "gpc/harness/config.hpp"
#include "gpc/teach/server.hpp"

using namespace gpc;

int main(int argc, char** argv) {
  CLI::App app{"GPC live teaching server (WebSocket)"};
  std::string bind = "127.0.0.1:8765", config_path, snapshot_dir;
  std::vector<std::string> overrides;
  int threads = 1;
  app.add_option("-b,--bind", bind, "address:port to listen on");
  app.add_option("-c,--config", config_path, "base experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("-s,--set", overrides, "override on the base config, dotted.key=value (repeatable)");
  app.add_option("--snapshot-dir", snapshot_dir, "session step streams and model snapshots go here");
  app.add_option("--threads", threads, "I/O threads")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw UsageError("--bind must look like address:port");
    teach::ServerOptions opts;
    opts.address = bind.substr(0, colon);
    const int port = std::stoi(bind.substr(colon + 1));
    if (port < 0 || port > 65535) throw UsageError("port out of range");
    opts.port = static_cast<unsigned short>(port);
    opts.snapshot_dir = snapshot_dir;
    opts.threads = threads;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      opts.base_config = harness::Json::parse(is);
    }
    for (const auto& o : overrides) harness::apply_override(opts.base_config, o);
    harness::validate(harness::config_from_json(opts.base_config));  // fail before listening

    // Signals are waited for on the main thread; the server runs on its own.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    teach::TeachServer server(opts);
    std::cerr << "gpc-teach listening on " << opts.address << ":" << server.port() << "\n";
    std::thread worker([&] { server.run(); });
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
    worker.join();
    std::cerr << "stopped after " << server.sessions_started() << " session(s)\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
