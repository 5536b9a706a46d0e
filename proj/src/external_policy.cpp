#include "choreduel/external_policy.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <utility>

#include "choreduel/errors.hpp"
#include "json_codec.hpp"

namespace choreduel {

namespace {

using codec::json;

constexpr std::size_t kMaxReplyBytes = 1 << 20;

std::string errno_text(const char* what) {
    return std::string(what) + ": " + std::strerror(errno);
}

// Writing to a child that already exited must surface as EPIPE, not kill us.
void ignore_sigpipe_once() {
    static const bool done = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

class Subprocess {
public:
    explicit Subprocess(const std::string& command) {
        ignore_sigpipe_once();
        int to_child[2] = {-1, -1};
        int from_child[2] = {-1, -1};
        if (::pipe(to_child) != 0) throw ProtocolError(errno_text("pipe"));
        if (::pipe(from_child) != 0) {
            ::close(to_child[0]);
            ::close(to_child[1]);
            throw ProtocolError(errno_text("pipe"));
        }
        pid_ = ::fork();
        if (pid_ < 0) {
            for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
            throw ProtocolError(errno_text("fork"));
        }
        if (pid_ == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        stdin_fd_ = to_child[1];
        stdout_fd_ = from_child[0];
    }

    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;

    ~Subprocess() { shutdown(); }

    void send_line(const std::string& line) {
        std::string payload = line;
        payload.push_back('\n');
        std::size_t written = 0;
        while (written < payload.size()) {
            ssize_t r = ::write(stdin_fd_, payload.data() + written, payload.size() - written);
            if (r < 0) {
                if (errno == EINTR) continue;
                throw ProtocolError(errno_text("subprocess rejected input"));
            }
            written += static_cast<std::size_t>(r);
        }
    }

    std::string read_line(int timeout_ms) {
        auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        for (;;) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            if (buffer_.size() > kMaxReplyBytes) {
                throw ProtocolError("reply exceeds " + std::to_string(kMaxReplyBytes) + " bytes");
            }
            auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                deadline - std::chrono::steady_clock::now());
            if (remaining.count() <= 0) {
                throw ProtocolError("no reply within " + std::to_string(timeout_ms) + " ms");
            }
            pollfd pfd{stdout_fd_, POLLIN, 0};
            int pr = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
            if (pr < 0) {
                if (errno == EINTR) continue;
                throw ProtocolError(errno_text("poll"));
            }
            if (pr == 0) {
                throw ProtocolError("no reply within " + std::to_string(timeout_ms) + " ms");
            }
            char chunk[4096];
            ssize_t r = ::read(stdout_fd_, chunk, sizeof chunk);
            if (r < 0) {
                if (errno == EINTR) continue;
                throw ProtocolError(errno_text("read"));
            }
            if (r == 0) throw ProtocolError("subprocess closed its output");
            buffer_.append(chunk, static_cast<std::size_t>(r));
        }
    }

    void shutdown() noexcept {
        if (stdin_fd_ >= 0) {
            ::close(stdin_fd_);
            stdin_fd_ = -1;
        }
        if (stdout_fd_ >= 0) {
            ::close(stdout_fd_);
            stdout_fd_ = -1;
        }
        if (pid_ > 0) {
            for (int i = 0; i < 50; ++i) {
                if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
                    pid_ = -1;
                    return;
                }
                ::usleep(10'000);
            }
            ::kill(pid_, SIGKILL);
            ::waitpid(pid_, nullptr, 0);
            pid_ = -1;
        }
    }

private:
    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
};

class ExternalPolicy final : public Policy {
public:
    ExternalPolicy(std::string command, int timeout_ms)
        : name_("external:" + command),
          command_(std::move(command)),
          timeout_ms_(timeout_ms) {}

    const std::string& name() const override { return name_; }

    void begin(int n, const Rat& epsilon) override {
        n_ = n;
        proc_ = std::make_unique<Subprocess>(command_);
        json hello;
        hello["type"] = "hello";
        hello["n"] = n;
        hello["epsilon"] = format_rat(epsilon);
        proc_->send_line(hello.dump());
    }

    AgentId decide(std::int64_t index, const ChoreCosts& chore, const Transcript&) override {
        if (!proc_) throw ProtocolError("external policy was not started");
        json msg;
        msg["type"] = "chore";
        msg["index"] = index;
        json costs = json::array();
        for (const Rat& c : chore.costs) costs.push_back(format_rat(c));
        msg["costs"] = std::move(costs);
        proc_->send_line(msg.dump());

        std::string reply = proc_->read_line(timeout_ms_);
        std::int64_t agent;
        try {
            json j = codec::parse_line(reply);
            if (codec::get_string(j, "type") != "assign") {
                throw ParseError("reply type is not \"assign\"");
            }
            agent = codec::get_int(j, "agent");
            codec::expect_size(j, 2, "assign reply");
        } catch (const ParseError& e) {
            throw ProtocolError(std::string("malformed reply: ") + e.what());
        }
        if (agent < 1 || agent > n_) {
            throw ProtocolError("assignee out of range: " + std::to_string(agent));
        }
        return AgentId{static_cast<int>(agent)};
    }

    void end(const Outcome& outcome) override {
        if (!proc_) return;
        json msg;
        msg["type"] = "end";
        msg["verdict"] = codec::outcome_to_json(outcome);
        try {
            proc_->send_line(msg.dump());
        } catch (const ProtocolError&) {
            // The duel is over either way; a dead subprocess loses nothing.
        }
        proc_.reset();
    }

private:
    std::string name_;
    std::string command_;
    int timeout_ms_;
    int n_ = 1;
    std::unique_ptr<Subprocess> proc_;
};

}  // namespace

std::unique_ptr<Policy> external_policy(std::string command, int timeout_ms) {
    return std::make_unique<ExternalPolicy>(std::move(command), timeout_ms);
}

}  // namespace choreduel
