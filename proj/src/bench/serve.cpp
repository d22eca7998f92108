#include "ldmp/bench/serve.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <system_error>
#include <thread>
#include <utility>

#include "ldmp/planner/demonstration.hpp"

namespace ldmp::bench {

namespace {

[[noreturn]] void sys_fail(const std::string& what) { throw std::system_error(errno, std::generic_category(), what); }

// Closes on scope exit.
struct Fd {
  int fd = -1;
  explicit Fd(int f) : fd(f) {}
  Fd(Fd&& o) noexcept : fd(std::exchange(o.fd, -1)) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() {
    if (fd >= 0) ::close(fd);
  }
};

struct Listener {
  Fd sock;
  int port = 0;
};

Listener listen_on(const std::string& host, int port) {
  Listener l{Fd(::socket(AF_INET, SOCK_STREAM, 0)), 0};
  if (l.sock.fd < 0) sys_fail("socket");
  int one = 1;
  ::setsockopt(l.sock.fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw std::invalid_argument("not an IPv4 address: '" + host + "'");
  }
  if (::bind(l.sock.fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    if (errno == EADDRINUSE || errno == EACCES) {
      throw PortBusy("cannot bind " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
    }
    sys_fail("bind");
  }
  if (::listen(l.sock.fd, 1) < 0) sys_fail("listen");
  socklen_t len = sizeof addr;
  ::getsockname(l.sock.fd, reinterpret_cast<sockaddr*>(&addr), &len);
  l.port = ntohs(addr.sin_port);
  return l;
}

nlohmann::json error_frame(const std::string& msg) { return {{"type", "error"}, {"msg", msg}}; }

std::string args_string(const nlohmann::json& args, const char* key) {
  if (!args.contains(key) || !args[key].is_string()) {
    throw sim::InvalidDisturbance(std::string("args.") + key + " must be a string");
  }
  return args[key].get<std::string>();
}

// Session state shared by the reader thread and the executor.
class Session {
 public:
  Session(int fd, const exec::Setup& setup, const sim::WorldState& start, const exec::RunOptions& run)
      : fd_(fd), setup_(setup), start_(start), run_options_(run) {
    journal_ = {{"world", sim::to_json(start)}, {"commands", nlohmann::json::array()}};
  }

  ServeOutcome run() {
    std::thread reader([this] { read_loop(); });
    exec::RunReport last;
    for (;;) {
      reset_requested_ = false;
      {
        std::lock_guard lk(m_);
        paused_ = true;
        pause_after_.reset();
      }
      last_key_ = {-2, -2};
      exec::LiveChannel channel{[this](const exec::LiveView& v) { return poll(v); }};
      last = exec::run_logic_dmp(start_, setup_, {}, run_options_, &channel);
      if (reset_requested_) {
        ++run_index_;
        continue;
      }
      if (closed()) break;
      auto rep = exec::to_json(last, false);
      nlohmann::json frame = {{"type", "report"}, {"report", rep}};
      if (frame.dump().size() > kMaxFrame) frame["report"].erase("trace");
      send(frame);
      if (!wait_after_finish()) break;
      ++run_index_;
    }
    ::shutdown(fd_, SHUT_RDWR);
    reader.join();
    journal_["runs"] = run_index_ + 1;
    return {last, journal_};
  }

 private:
  bool closed() {
    std::lock_guard lk(m_);
    return closed_;
  }

  void send(const nlohmann::json& frame) {
    std::string line = frame.dump();
    if (line.size() > kMaxFrame) line = error_frame("outbound frame exceeds 64 KiB").dump();
    line += '\n';
    std::lock_guard lk(write_m_);
    std::size_t off = 0;
    while (off < line.size()) {
      const ssize_t n = ::send(fd_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
      if (n <= 0) {
        mark_closed();
        return;
      }
      off += static_cast<std::size_t>(n);
    }
  }

  void mark_closed() {
    {
      std::lock_guard lk(m_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  void read_loop() {
    std::string buf;
    char chunk[4096];
    bool skipping = false;  // inside an oversized line
    for (;;) {
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0) break;
      buf.append(chunk, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = buf.find('\n')) != std::string::npos) {
        std::string line = buf.substr(0, nl);
        buf.erase(0, nl + 1);
        if (skipping) {
          skipping = false;
          continue;
        }
        if (line.size() > kMaxFrame) {
          send(error_frame("inbound frame exceeds 64 KiB"));
          continue;
        }
        accept_line(line);
      }
      if (buf.size() > kMaxFrame) {
        send(error_frame("inbound frame exceeds 64 KiB"));
        buf.clear();
        skipping = true;
      }
    }
    mark_closed();
  }

  void accept_line(const std::string& line) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) return;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      send(error_frame(std::string("malformed json: ") + e.what()));
      return;
    }
    if (!j.is_object() || j.value("type", "") != "cmd" || !j.contains("cmd") || !j["cmd"].is_string()) {
      send(error_frame("expected {\"type\":\"cmd\",\"cmd\":...}"));
      return;
    }
    if (j.contains("args") && !j["args"].is_object()) {
      send(error_frame("args must be an object"));
      return;
    }
    static const std::set<std::string> known{"move_object", "add_object", "pause", "resume", "speed", "reset"};
    if (!known.count(j["cmd"].get<std::string>())) {
      send(error_frame("unknown cmd '" + j["cmd"].get<std::string>() + "'"));
      return;
    }
    {
      std::lock_guard lk(m_);
      inbox_.push_back(std::move(j));
    }
    cv_.notify_all();
  }

  void journal(const exec::LiveView* v, const nlohmann::json& cmd) {
    nlohmann::json e = {{"run", run_index_}, {"cmd", cmd}};
    if (v) {
      e["executed"] = v->executed;
      e["step"] = v->step;
      e["time"] = v->world.time;
    }
    journal_["commands"].push_back(e);
  }

  nlohmann::json snapshot(const exec::LiveView& v) {
    nlohmann::json plan = nlohmann::json::array();
    for (const auto& a : v.plan) plan.push_back(a.name());
    std::lock_guard lk(m_);
    return {{"type", "snapshot"}, {"time", v.world.time}, {"world", sim::to_json(v.world)},
            {"plan", plan},       {"sources", v.sources}, {"cursor", v.cursor},
            {"executed", v.executed}, {"step", v.step},   {"paused", paused_},
            {"speed", speed_},    {"run", run_index_},    {"last_event", v.last_event}};
  }

  // Runs on the executor thread at every boundary and motion step.
  std::vector<sim::Disturbance> poll(const exec::LiveView& v) {
    const std::pair<int, int> key{v.executed, v.step};
    const bool fresh = key != last_key_;
    last_key_ = key;
    if (!fresh || v.step < 0 || v.step % kSnapshotEvery == 0) send(snapshot(v));

    std::vector<sim::Disturbance> batch;
    std::unique_lock lk(m_);
    for (;;) {
      const bool was_paused = paused_;
      while (!inbox_.empty()) {
        auto cmd = std::move(inbox_.front());
        inbox_.pop_front();
        lk.unlock();
        handle(v, cmd, batch);
        lk.lock();
      }
      if (!batch.empty()) return batch;
      if (paused_ != was_paused) {
        lk.unlock();
        send(snapshot(v));
        lk.lock();
      }
      if (closed_) throw exec::StopRun("client disconnected");
      if (pause_after_ && v.step < 0 && v.executed >= *pause_after_) {
        pause_after_.reset();
        paused_ = true;
        lk.unlock();
        send(snapshot(v));
        lk.lock();
        continue;
      }
      if (!paused_) break;
      cv_.wait(lk, [this] { return closed_ || !inbox_.empty(); });
    }
    const double speed = speed_;
    lk.unlock();
    if (v.step > 0) {
      const double dt = setup_.motions.segments.empty() ? 0.01 : setup_.motions.segments.begin()->second.dt;
      std::this_thread::sleep_for(std::chrono::duration<double>(dt / speed));
    }
    return {};
  }

  void handle(const exec::LiveView& v, const nlohmann::json& cmd, std::vector<sim::Disturbance>& batch) {
    const std::string name = cmd["cmd"].get<std::string>();
    const nlohmann::json args = cmd.value("args", nlohmann::json::object());
    if (name == "pause") {
      std::lock_guard lk(m_);
      if (args.contains("after_actions")) {
        if (!args["after_actions"].is_number_integer()) {
          send(error_frame("args.after_actions must be an integer"));
          return;
        }
        pause_after_ = args["after_actions"].get<int>();
      } else {
        paused_ = true;
      }
    } else if (name == "resume") {
      std::lock_guard lk(m_);
      paused_ = false;
    } else if (name == "speed") {
      if (!args.contains("factor") || !args["factor"].is_number() || !(args["factor"].get<double>() > 0)) {
        send(error_frame("speed needs args.factor > 0"));
        return;
      }
      std::lock_guard lk(m_);
      speed_ = args["factor"].get<double>();
    } else if (name == "reset") {
      journal(&v, cmd);
      reset_requested_ = true;
      throw exec::StopRun("reset");
    } else {
      try {
        auto d = disturbance_from_cmd(v.world, cmd);
        sim::WorldState probe = v.world;
        for (const auto& prev : batch) probe = sim::apply_disturbance(probe, prev);
        sim::apply_disturbance(probe, d);
        batch.push_back(std::move(d));
      } catch (const sim::InvalidDisturbance& e) {
        send(error_frame(name + " rejected: " + e.what()));
        return;
      }
    }
    journal(&v, cmd);
  }

  // After a finished run: reset starts another, anything else is refused.
  bool wait_after_finish() {
    std::unique_lock lk(m_);
    for (;;) {
      cv_.wait(lk, [this] { return closed_ || !inbox_.empty(); });
      if (inbox_.empty()) return false;
      auto cmd = std::move(inbox_.front());
      inbox_.pop_front();
      if (cmd["cmd"] == "reset") {
        lk.unlock();
        journal(nullptr, cmd);
        return true;
      }
      lk.unlock();
      send(error_frame("run finished; only reset is accepted"));
      lk.lock();
    }
  }

  int fd_;
  const exec::Setup& setup_;
  sim::WorldState start_;
  exec::RunOptions run_options_;
  nlohmann::json journal_;

  std::mutex m_, write_m_;
  std::condition_variable cv_;
  std::deque<nlohmann::json> inbox_;
  bool closed_ = false;
  bool paused_ = true;
  double speed_ = 1.0;
  std::optional<int> pause_after_;

  int run_index_ = 0;
  bool reset_requested_ = false;
  std::pair<int, int> last_key_{-2, -2};
};

}  // namespace

sim::Disturbance disturbance_from_cmd(const sim::WorldState& world, const nlohmann::json& cmd) {
  const std::string name = cmd.at("cmd").get<std::string>();
  const nlohmann::json args = cmd.value("args", nlohmann::json::object());
  nlohmann::json d = {{"trigger", "manual"}, {"type", name}};
  if (name == "move_object") {
    const std::string object = args_string(args, "object");
    d["object"] = object;
    if (!args.contains("pose")) throw sim::InvalidDisturbance("args.pose is required");
    d["pose"] = args["pose"];
    if (args.contains("support")) {
      d["support"] = args_string(args, "support");
    } else {
      // keep the current support when it is a region, else the region below
      const auto region = world.objects.count(object) ? world.region_of(object) : std::nullopt;
      if (!region) throw sim::InvalidDisturbance("args.support is required for '" + object + "'");
      d["support"] = *region;
    }
  } else if (name == "add_object") {
    if (!args.contains("object") || !args["object"].is_object()) {
      throw sim::InvalidDisturbance("args.object must be an object description");
    }
    d["object"] = args["object"];
  } else {
    throw sim::InvalidDisturbance("'" + name + "' is not a disturbance command");
  }
  return sim::disturbance_from_json(d);
}

ServeOutcome serve(const ServeOptions& options) {
  const auto setup = exec::load_setup(options.demo);
  const sim::WorldState start =
      options.world ? sim::world_from_json(planner::read_json(*options.world)) : setup.world;
  start.validate();

  Listener l = listen_on(options.host, options.port);
  if (options.on_listen) options.on_listen(l.port);
  const int fd = ::accept(l.sock.fd, nullptr, nullptr);
  if (fd < 0) sys_fail("accept");
  Fd client(fd);
  Session session(client.fd, setup, start, options.run);
  auto out = session.run();
  out.journal["demo"] = options.demo.string();
  return out;
}

exec::RunReport replay_journal(const exec::Setup& setup, const nlohmann::json& journal,
                               const exec::RunOptions& options) {
  const auto start = sim::world_from_json(journal.at("world"));
  const auto& cmds = journal.at("commands");
  const int last_run = journal.value("runs", 1) - 1;
  std::vector<nlohmann::json> due;
  for (const auto& c : cmds) {
    const auto name = c.at("cmd").at("cmd").get<std::string>();
    if (c.at("run").get<int>() == last_run && (name == "move_object" || name == "add_object")) due.push_back(c);
  }
  std::size_t next = 0;
  std::pair<int, int> served{-2, -2};
  exec::LiveChannel channel{[&](const exec::LiveView& v) {
    std::vector<sim::Disturbance> batch;
    const std::pair<int, int> key{v.executed, v.step};
    if (key == served) return batch;
    served = key;
    while (next < due.size() && due[next].at("executed").get<int>() == v.executed &&
           due[next].at("step").get<int>() == v.step) {
      batch.push_back(disturbance_from_cmd(v.world, due[next].at("cmd")));
      ++next;
    }
    return batch;
  }};
  return exec::run_logic_dmp(start, setup, {}, options, &channel);
}

}  // namespace ldmp::bench
