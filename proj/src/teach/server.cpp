#include "gpc/teach/server.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <deque>
#include <thread>
#include <vector>

#include "gpc/errors.hpp"
#include "gpc/teach/session.hpp"

namespace gpc::teach {

namespace beast = boost::beast;
namespace net = boost::asio;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

// One teacher connection. Everything runs on the connection's strand, so the
// session itself needs no locking.
class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, const ServerOptions& options, std::atomic<std::uint64_t>& started)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), options_(options), started_(started) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept(beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    read();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&Connection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      shutdown();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());

    Json msg;
    try {
      msg = Json::parse(text);
    } catch (const Json::exception&) {
      send(error_message("bad_json", "message is not valid JSON"));
      read();
      return;
    }

    if (!session_) {
      handshake(msg);
    } else {
      send(session_->handle(msg));
      if (session_->ended()) {
        finish();
        return;
      }
      // Lockstep: a "step" while paused runs immediately.
      if (session_->paused() && session_->wants_tick()) send(session_->tick());
    }
    read();
  }

  void handshake(const Json& msg) {
    if (!msg.is_object() || msg.value("type", std::string()) != "handshake") {
      send(error_message("no_session", "first message must be a handshake"));
      return;
    }
    const Json& version = msg.value("protocol_version", Json());
    if (!version.is_number_integer() || version.get<int>() != kProtocolVersion) {
      send(error_message("bad_version", "protocol_version must be " + std::to_string(kProtocolVersion)));
      return;
    }
    try {
      auto settings =
          settings_from_json(msg.value("session_config", Json::object()), options_.base_config, options_.snapshot_dir);
      session_ = std::make_unique<TeachSession>(std::move(settings));
    } catch (const std::exception& e) {
      send(error_message("bad_config", e.what()));
      return;
    }
    ++started_;
    send(session_->welcome());
    next_deadline_ = Clock::now();
    arm_timer();
  }

  Clock::duration period() const {
    return std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / session_->step_rate()));
  }

  void arm_timer() {
    timer_.expires_at(next_deadline_);
    timer_.async_wait(beast::bind_front_handler(&Connection::on_timer, shared_from_this()));
  }

  void on_timer(beast::error_code ec) {
    if (ec || !session_ || session_->ended() || closed_) return;
    const auto now = Clock::now();
    if (!session_->paused()) {
      // Late by more than one period counts as a missed deadline.
      if (now - next_deadline_ > period()) session_->record_deadline_miss();
      send(session_->tick());
    }
    next_deadline_ += period();
    if (next_deadline_ < now) next_deadline_ = now;
    arm_timer();
  }

  void send(const Json& msg) {
    outbox_.push_back(msg.dump());
    if (outbox_.size() == 1) write_next();
  }

  void write_next() {
    ws_.async_write(net::buffer(outbox_.front()),
                    beast::bind_front_handler(&Connection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      shutdown();
      return;
    }
    outbox_.pop_front();
    if (!outbox_.empty()) {
      write_next();
    } else if (closing_) {
      ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
    }
  }

  void finish() {
    timer_.cancel();
    send(session_->end());
    closing_ = true;
  }

  void shutdown() {
    if (closed_) return;
    closed_ = true;
    timer_.cancel();
    if (session_) session_->end();
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  beast::flat_buffer buffer_;
  const ServerOptions& options_;
  std::atomic<std::uint64_t>& started_;
  std::unique_ptr<TeachSession> session_;
  std::deque<std::string> outbox_;
  Clock::time_point next_deadline_;
  bool closing_ = false;
  bool closed_ = false;
};

}  // namespace

struct TeachServer::Impl {
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::atomic<std::uint64_t> started{0};

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;  // acceptor closed
      std::make_shared<Connection>(std::move(socket), options, started)->start();
      accept();
    });
  }
};

TeachServer::TeachServer(const ServerOptions& options) : impl_(std::make_unique<Impl>()) {
  impl_->options = options;
  beast::error_code ec;
  const auto address = net::ip::make_address(options.address, ec);
  if (ec) throw UsageError("bad bind address '" + options.address + "': " + ec.message());
  const tcp::endpoint endpoint{address, options.port};
  auto& a = impl_->acceptor;
  a.open(endpoint.protocol(), ec);
  if (!ec) a.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) a.bind(endpoint, ec);
  if (!ec) a.listen(net::socket_base::max_listen_connections, ec);
  if (ec)
    throw UsageError("cannot bind " + options.address + ":" + std::to_string(options.port) + ": " + ec.message());
  impl_->accept();
}

TeachServer::~TeachServer() { stop(); }

unsigned short TeachServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void TeachServer::run() {
  const int n = std::max(1, impl_->options.threads);
  std::vector<std::thread> extra;
  for (int i = 1; i < n; ++i) extra.emplace_back([this] { impl_->ioc.run(); });
  impl_->ioc.run();
  for (auto& t : extra) t.join();
}

void TeachServer::stop() {
  net::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
  });
  impl_->ioc.stop();
}

std::uint64_t TeachServer::sessions_started() const { return impl_->started.load(); }

}  // namespace gpc::teach
