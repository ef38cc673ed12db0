#include "fencing/server.hpp"

#include <chrono>
#include <deque>
#include <optional>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace fencing {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, const ServerOptions& opt, std::uint64_t index)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), period_(period_for(opt.tick_hz)) {
    LiveSession::Options so;
    so.config = opt.config;
    so.protagonist = opt.protagonist;
    so.protagonist_id = opt.protagonist_id;
    so.seed = derive_seed(opt.seed, index);
    so.record_dir = opt.record_dir;
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "session-%04llu", static_cast<unsigned long long>(index));
    so.record_prefix = prefix;
    so.on_record = opt.on_record;
    session_ = std::make_unique<LiveSession>(std::move(so));
  }

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->read();
      self->next_tick_ = Clock::now() + self->period_;
      self->schedule();
    });
  }

  void close() {
    beast::error_code ec;
    timer_.cancel();
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  static Clock::duration period_for(double hz) {
    return std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / hz));
  }

  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->shutdown();
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      for (auto& reply : self->session_->on_message(text)) self->send(reply.dump());
      self->read();
    });
  }

  // Deadlines advance by exactly one period; a late wake-up never runs extra
  // ticks to catch up, so game time cannot outpace the wall clock.
  void schedule() {
    if (closed_) return;
    timer_.expires_at(next_tick_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_) return;
      for (auto& msg : self->session_->tick()) self->send(msg.dump());
      self->next_tick_ = std::max(self->next_tick_ + self->period_, Clock::now());
      self->schedule();
    });
  }

  void send(std::string text) {
    if (closed_) return;
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) write_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->shutdown();
        return;
      }
      self->outbox_.pop_front();
      if (!self->outbox_.empty()) self->write_next();
    });
  }

  void shutdown() {
    if (closed_) return;
    closed_ = true;
    timer_.cancel();
    session_->on_disconnect();
  }

  websocket::stream<beast::tcp_stream> ws_;
  asio::steady_timer timer_;
  Clock::duration period_;
  Clock::time_point next_tick_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  std::unique_ptr<LiveSession> session_;
  bool closed_ = false;
};

}  // namespace

struct LiveServer::Impl {
  ServerOptions opt;
  asio::io_context io{1};
  tcp::acceptor acceptor{io};
  std::uint64_t next_index = 0;
  std::vector<std::weak_ptr<Connection>> connections;
  std::optional<asio::signal_set> signals;

  void close_all() {
    beast::error_code ec;
    acceptor.close(ec);
    if (signals) signals->cancel(ec);
    for (auto& w : connections) {
      if (auto c = w.lock()) c->close();
    }
    // Pending handlers now complete with errors and run() returns.
  }

  void accept() {
    acceptor.async_accept(asio::make_strand(io), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      auto c = std::make_shared<Connection>(std::move(socket), opt, next_index++);
      std::erase_if(connections, [](const auto& w) { return w.expired(); });
      connections.push_back(c);
      c->start();
      accept();
    });
  }
};

LiveServer::LiveServer(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->opt = std::move(options);
  if (!impl_->opt.protagonist) throw std::invalid_argument("LiveServer: no protagonist policy");
  if (!(impl_->opt.tick_hz > 0.0)) throw std::invalid_argument("LiveServer: tick_hz must be > 0");
  impl_->opt.config.validate();
  const tcp::endpoint ep(asio::ip::make_address(impl_->opt.address), impl_->opt.port);
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen();
  impl_->accept();
  if (impl_->opt.stop_on_signals) {
    impl_->signals.emplace(impl_->io, SIGINT, SIGTERM);
    impl_->signals->async_wait([impl = impl_.get()](beast::error_code ec, int) {
      if (!ec) impl->close_all();
    });
  }
}

LiveServer::~LiveServer() = default;

unsigned short LiveServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void LiveServer::run() { impl_->io.run(); }

void LiveServer::stop() {
  asio::post(impl_->io, [impl = impl_.get()] { impl->close_all(); });
}

}  // namespace fencing
