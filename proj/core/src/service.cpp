#include "memetic/service.hpp"

#include <atomic>
#include <deque>
#include <thread>

#include <boost/asio/signal_set.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace memetic {

namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

class WebSocketSession : public std::enable_shared_from_this<WebSocketSession> {
 public:
  WebSocketSession(tcp::socket&& socket, Console& console, std::size_t max_queued)
      : ws_(std::move(socket)), console_(console), max_queued_(max_queued) {}

  void run(http::request<http::string_body> request) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, beast::bind_front_handler(&WebSocketSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<WebSocketSession> weak = shared_from_this();
    subscription_ = console_.subscribe([weak](const std::string& message) {
      auto self = weak.lock();
      return self && self->deliver(message);
    });
    do_read();
  }

  // Called with the console lock held, from any thread: only posts.
  bool deliver(const std::string& message) {
    if (queued_.fetch_add(1) >= max_queued_) {
      net::post(ws_.get_executor(), [self = shared_from_this()] { self->drop(); });
      return false;
    }
    net::post(ws_.get_executor(), [self = shared_from_this(), message] {
      self->outbox_.push_back(message);
      if (self->outbox_.size() == 1) self->do_write();
    });
    return true;
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()),
                    beast::bind_front_handler(&WebSocketSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return finish();
    outbox_.pop_front();
    queued_.fetch_sub(1);
    if (!outbox_.empty()) do_write();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WebSocketSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return finish();
    auto text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    console_.apply_message(text);
    do_read();
  }

  void finish() {
    if (subscription_) console_.unsubscribe(subscription_);
    subscription_ = 0;
  }

  void drop() {
    finish();
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().close(ignored);
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  Console& console_;
  std::size_t max_queued_;
  std::atomic<std::size_t> queued_{0};
  std::uint64_t subscription_ = 0;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Console& console, std::size_t max_queued)
      : stream_(std::move(socket)), console_(console), max_queued_(max_queued) {}

  void run() { do_read(); }

 private:
  void do_read() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    if (websocket::is_upgrade(request_) && request_.target() == "/ws") {
      stream_.expires_never();
      std::make_shared<WebSocketSession>(stream_.release_socket(), console_, max_queued_)->run(std::move(request_));
      return;
    }
    send(handle(request_));
  }

  http::response<http::string_body> handle(const http::request<http::string_body>& req) {
    auto reply = [&](http::status status, const char* type, std::string body) {
      http::response<http::string_body> res{status, req.version()};
      res.set(http::field::server, "memetic");
      res.set(http::field::content_type, type);
      res.set(http::field::access_control_allow_origin, "*");
      res.keep_alive(req.keep_alive());
      res.body() = std::move(body);
      res.prepare_payload();
      return res;
    };
    if (req.method() != http::verb::get)
      return reply(http::status::method_not_allowed, "application/json", R"({"error":"method not allowed"})");
    auto target = req.target();
    if (target == "/state") return reply(http::status::ok, "application/json", console_.state().dump());
    if (target == "/config") return reply(http::status::ok, "application/json", console_.config_document());
    if (target == "/session/log") return reply(http::status::ok, "application/x-ndjson", console_.log_text());
    return reply(http::status::not_found, "application/json", R"({"error":"not found"})");
  }

  void send(http::response<http::string_body> response) {
    auto res = std::make_shared<http::response<http::string_body>>(std::move(response));
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (res->need_eof()) {
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      self->do_read();
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  Console& console_;
  std::size_t max_queued_;
};

}  // namespace

struct ConsoleServer::Impl {
  Impl(Console& c, ServerOptions o) : console(c), options(std::move(o)), acceptor(ioc) {}

  void listen() {
    tcp::endpoint endpoint{net::ip::make_address(options.address), options.port};
    acceptor.open(endpoint.protocol());
    acceptor.set_option(net::socket_base::reuse_address(true));
    acceptor.bind(endpoint);
    acceptor.listen(net::socket_base::max_listen_connections);
    do_accept();
  }

  void do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(socket), console, options.max_queued_messages)->run();
      do_accept();
    });
  }

  Console& console;
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::thread thread;
};

ConsoleServer::ConsoleServer(Console& console, ServerOptions options)
    : impl_(std::make_unique<Impl>(console, std::move(options))) {
  impl_->listen();
}

ConsoleServer::~ConsoleServer() { stop(); }

void ConsoleServer::start() {
  impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

void ConsoleServer::run(bool handle_signals) {
  net::signal_set signals(impl_->ioc);
  if (handle_signals) {
    signals.add(SIGINT);
    signals.add(SIGTERM);
    signals.async_wait([this](beast::error_code, int) { impl_->ioc.stop(); });
  }
  impl_->ioc.run();
}

void ConsoleServer::stop() {
  if (!impl_) return;
  impl_->ioc.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::uint16_t ConsoleServer::port() const noexcept {
  beast::error_code ec;
  auto ep = impl_->acceptor.local_endpoint(ec);
  return ec ? 0 : ep.port();
}

}  // namespace memetic
