#include "beliefsim/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "beliefsim/session.hpp"

namespace beliefsim {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

using Message = std::shared_ptr<const std::string>;

Message make_message(const json& j) { return std::make_shared<const std::string>(j.dump()); }

json error_message(const std::string& text) {
  return {{"v", kProtocolVersion}, {"type", "error"}, {"message", text}};
}

std::string mime_type(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

}  // namespace

class Client;

struct StreamServer::Impl {
  Impl(ExperimentConfig config, std::uint64_t seed, Options opts)
      : options(std::move(opts)), session(std::move(config), seed), acceptor(ioc) {}

  Options options;
  mutable std::mutex state_mutex;
  Session session;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  net::io_context ioc;
  tcp::acceptor acceptor;
  std::optional<net::executor_work_guard<net::io_context::executor_type>> work;
  std::set<std::shared_ptr<Client>> clients;  // touched on the io thread only
  std::atomic<std::size_t> client_total{0};
  std::atomic<std::uint64_t> next_client{1};
  std::atomic<bool> running{false};
  bool stopped = false;
  std::thread io_thread;
  std::thread sim_thread;

  void add(const std::shared_ptr<Client>& c) {
    clients.insert(c);
    client_total = clients.size();
  }
  void remove(const std::shared_ptr<Client>& c) {
    clients.erase(c);
    client_total = clients.size();
  }

  void accept();
  void simulate();
  void broadcast(Message message);
  void send_to(std::uint64_t client, Message message);
  http::response<http::string_body> handle(const http::request<http::string_body>& request) const;
  json health() const;
  json hello(std::uint64_t client) const;
};

class Client : public std::enable_shared_from_this<Client> {
 public:
  Client(tcp::socket&& socket, StreamServer::Impl& server, std::uint64_t id)
      : ws_(std::move(socket)), server_(server), id_(id) {}

  std::uint64_t id() const { return id_; }

  void start(http::request<http::string_body> request) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, beast::bind_front_handler(&Client::on_accept, shared_from_this()));
  }

  void send(Message message) {
    if (closed_) return;
    if (queue_.size() >= server_.options.max_queue) {
      drop();
      return;
    }
    queue_.push_back(std::move(message));
    if (queue_.size() == 1) write_next();
  }

  void drop() {
    if (closed_) return;
    closed_ = true;
    queue_.clear();
    server_.remove(shared_from_this());
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    server_.add(shared_from_this());
    send(make_message(server_.hello(id_)));
    read_next();
  }

  void read_next() { ws_.async_read(buffer_, beast::bind_front_handler(&Client::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      drop();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    try {
      ControlCommand command = parse_command(text);
      server_.session.submit(command, id_);
      send(make_message({{"v", kProtocolVersion}, {"type", "ack"}, {"command", to_json(command)}}));
    } catch (const CommandError& e) {
      send(make_message(error_message(e.what())));
    }
    read_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(net::buffer(*queue_.front()), beast::bind_front_handler(&Client::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      drop();
      return;
    }
    if (closed_) return;
    queue_.pop_front();
    if (!queue_.empty()) write_next();
  }

  websocket::stream<beast::tcp_stream> ws_;
  StreamServer::Impl& server_;
  std::uint64_t id_;
  beast::flat_buffer buffer_;
  std::deque<Message> queue_;
  bool closed_ = false;
};

namespace {

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, StreamServer::Impl& server) : stream_(std::move(socket)), server_(server) {}

  void start() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_, beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
  }

 private:
  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(request_) && request_.target() == "/ws") {
      stream_.expires_never();
      std::make_shared<Client>(stream_.release_socket(), server_, server_.next_client++)->start(std::move(request_));
      return;
    }
    auto response = std::make_shared<http::response<http::string_body>>(server_.handle(request_));
    http::async_write(stream_, *response, [self = shared_from_this(), response](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  beast::tcp_stream stream_;
  StreamServer::Impl& server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
};

}  // namespace

void StreamServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (!ec) std::make_shared<HttpConnection>(std::move(socket), *this)->start();
    if (acceptor.is_open()) accept();
  });
}

void StreamServer::Impl::broadcast(Message message) {
  net::post(ioc, [this, message = std::move(message)] {
    const auto targets = clients;
    for (const auto& c : targets) c->send(message);
  });
}

void StreamServer::Impl::send_to(std::uint64_t client, Message message) {
  net::post(ioc, [this, client, message = std::move(message)] {
    const auto targets = clients;
    for (const auto& c : targets)
      if (c->id() == client) c->send(message);
  });
}

void StreamServer::Impl::simulate() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / options.frame_hz));
  auto next = clock::now();
  double carry = 0.0;
  while (running) {
    std::vector<Session::Rejection> rejected;
    Message snapshot;
    {
      std::lock_guard lock(state_mutex);
      int steps = 1;
      if (!session.paused()) {
        carry += options.steps_per_frame * session.speed_multiplier();
        steps = static_cast<int>(carry);
        carry -= steps;
      }
      for (int i = 0; i < steps; ++i) {
        auto r = session.tick();
        rejected.insert(rejected.end(), r.begin(), r.end());
      }
      snapshot = make_message(session.snapshot(options.projection));
    }
    for (const auto& r : rejected) {
      json message = error_message(r.message);
      message["command"] = to_json(r.command);
      send_to(r.origin, make_message(message));
    }
    broadcast(std::move(snapshot));

    next += period;
    const auto now = clock::now();
    if (next < now) next = now;
    std::this_thread::sleep_until(next);
  }
}

json StreamServer::Impl::health() const {
  std::lock_guard lock(state_mutex);
  const double uptime = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {{"v", kProtocolVersion},
          {"status", session.paused() ? "paused" : "running"},
          {"step", session.world().step_index()},
          {"sim_time", session.world().sim_time()},
          {"ticks", session.ticks()},
          {"seed", session.seed()},
          {"clients", client_total.load()},
          {"uptime_seconds", uptime}};
}

json StreamServer::Impl::hello(std::uint64_t client) const {
  std::lock_guard lock(state_mutex);
  return {{"v", kProtocolVersion},
          {"type", "hello"},
          {"client", client},
          {"projection", {options.projection.first, options.projection.second}},
          {"frame_hz", options.frame_hz},
          {"config", to_json(session.active_config())}};
}

http::response<http::string_body> StreamServer::Impl::handle(const http::request<http::string_body>& request) const {
  auto reply = [&](http::status status, std::string body, const std::string& type) {
    http::response<http::string_body> res{status, request.version()};
    res.set(http::field::server, "beliefsim");
    res.set(http::field::content_type, type);
    res.set(http::field::access_control_allow_origin, "*");
    res.keep_alive(false);
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };
  auto reply_json = [&](http::status status, const json& body) {
    return reply(status, body.dump(), "application/json");
  };

  if (request.method() != http::verb::get)
    return reply_json(http::status::method_not_allowed, error_message("only GET is supported"));

  std::string target(request.target());
  target = target.substr(0, target.find('?'));
  if (target == "/health") return reply_json(http::status::ok, health());
  if (target == "/config") {
    std::lock_guard lock(state_mutex);
    return reply_json(http::status::ok, to_json(session.active_config()));
  }
  if (target == "/record") {
    std::lock_guard lock(state_mutex);
    return reply_json(http::status::ok, session.record());
  }
  if (target == "/ws") return reply_json(http::status::upgrade_required, error_message("websocket upgrade required"));

  if (!options.static_dir.empty()) {
    const std::filesystem::path relative = target == "/" ? "index.html" : target.substr(1);
    bool safe = !relative.is_absolute();
    for (const auto& part : relative)
      if (part == "..") safe = false;
    const auto path = options.static_dir / relative;
    if (safe && std::filesystem::is_regular_file(path)) {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream body;
      body << in.rdbuf();
      return reply(http::status::ok, body.str(), mime_type(path));
    }
  }
  return reply_json(http::status::not_found, error_message("no such resource: " + target));
}

StreamServer::StreamServer(ExperimentConfig config, std::uint64_t seed, Options options)
    : impl_(std::make_unique<Impl>(std::move(config), seed, std::move(options))) {
  const int d = impl_->session.world().config().dimensions;
  const auto [px, py] = impl_->options.projection;
  if (px < 0 || px >= d || py < 0 || py >= d) throw ServerError("projection dimensions out of range for d=" + std::to_string(d));
  if (!(impl_->options.frame_hz > 0.0)) throw ServerError("frame rate must be > 0");
  if (!(impl_->options.steps_per_frame > 0.0)) throw ServerError("steps per frame must be > 0");

  beast::error_code ec;
  const auto address = net::ip::make_address(impl_->options.address, ec);
  if (ec) throw ServerError("bad listen address '" + impl_->options.address + "'");
  const tcp::endpoint endpoint(address, impl_->options.port);
  auto& acceptor = impl_->acceptor;
  acceptor.open(endpoint.protocol(), ec);
  if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(endpoint, ec);
  if (ec == net::error::address_in_use) throw ServerError("port " + std::to_string(impl_->options.port) + " is busy");
  if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) throw ServerError("cannot listen on " + impl_->options.address + ":" + std::to_string(impl_->options.port) + ": " + ec.message());
}

StreamServer::~StreamServer() { stop(); }

std::uint16_t StreamServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void StreamServer::start() {
  if (impl_->running.exchange(true)) return;
  impl_->work.emplace(impl_->ioc.get_executor());
  impl_->accept();
  impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
  impl_->sim_thread = std::thread([this] { impl_->simulate(); });
}

void StreamServer::stop() {
  if (impl_->stopped) return;
  impl_->stopped = true;
  impl_->running = false;
  if (impl_->sim_thread.joinable()) impl_->sim_thread.join();
  net::post(impl_->ioc, [impl = impl_.get()] {
    beast::error_code ignored;
    impl->acceptor.close(ignored);
    const auto targets = impl->clients;
    for (const auto& c : targets) c->drop();
    impl->work.reset();
    impl->ioc.stop();
  });
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
  if (!impl_->options.record_path.empty()) {
    std::ofstream out(impl_->options.record_path);
    out << record().dump(2) << '\n';
  }
}

std::size_t StreamServer::client_count() const { return impl_->client_total; }

json StreamServer::health() const { return impl_->health(); }

json StreamServer::record() const {
  std::lock_guard lock(impl_->state_mutex);
  return impl_->session.record();
}

}  // namespace beliefsim
