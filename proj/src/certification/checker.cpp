#include "ttvr/certification/certification.hpp"
#include "ttvr/core/text.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace ttvr::certification {

namespace fs = std::filesystem;

namespace {

std::optional<fs::path> resolve_executable(const std::string& name) {
    auto executable = [](const fs::path& p) {
        std::error_code ec;
        return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
    };
    if (name.find('/') != std::string::npos) {
        fs::path p = fs::absolute(name);
        return executable(p) ? std::optional(p) : std::nullopt;
    }
    const char* path_env = std::getenv("PATH");
    for (auto dir : text::split(path_env ? path_env : "/usr/bin:/bin", ':')) {
        if (dir.empty()) {
            continue;
        }
        fs::path p = fs::path(std::string(dir)) / name;
        if (executable(p)) {
            return p;
        }
    }
    return std::nullopt;
}

class Sandbox {
public:
    explicit Sandbox(bool keep) : keep_(keep) {
        std::string pattern = (fs::temp_directory_path() / "ttvr-check-XXXXXX").string();
        if (::mkdtemp(pattern.data()) == nullptr) {
            throw std::runtime_error("cannot create checker sandbox: " +
                                     std::string(std::strerror(errno)));
        }
        path_ = pattern;
    }
    ~Sandbox() {
        if (!keep_) {
            std::error_code ec;
            fs::remove_all(path_, ec);
        }
    }
    Sandbox(const Sandbox&) = delete;
    Sandbox& operator=(const Sandbox&) = delete;

    [[nodiscard]] const fs::path& path() const noexcept { return path_; }

private:
    fs::path path_;
    bool keep_;
};

struct Spawned {
    pid_t pid = -1;
    int out_fd = -1;
};

Spawned spawn(const std::vector<std::string>& argv, const fs::path& cwd) {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0) {
        throw std::runtime_error("pipe failed: " + std::string(std::strerror(errno)));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDERR_FILENO);
    posix_spawn_file_actions_addchdir_np(&actions, cwd.c_str());

    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);

    std::vector<char*> args;
    for (const auto& a : argv) {
        args.push_back(const_cast<char*>(a.c_str()));
    }
    args.push_back(nullptr);

    pid_t pid = -1;
    const int rc = ::posix_spawn(&pid, args[0], &actions, &attr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    ::close(fds[1]);
    if (rc != 0) {
        ::close(fds[0]);
        throw CheckerConfigError("cannot start checker '" + argv[0] + "': " + std::strerror(rc));
    }
    return {pid, fds[0]};
}

} // namespace

std::vector<std::string> split_command(std::string_view command_line) {
    std::vector<std::string> out;
    std::string current;
    bool in_word = false;
    char quote = 0;
    for (char c : command_line) {
        if (quote != 0) {
            if (c == quote) {
                quote = 0;
            } else {
                current.push_back(c);
            }
        } else if (c == '"' || c == '\'') {
            quote = c;
            in_word = true;
        } else if (text::is_space(c)) {
            if (in_word) {
                out.push_back(std::move(current));
                current.clear();
                in_word = false;
            }
        } else {
            current.push_back(c);
            in_word = true;
        }
    }
    if (quote != 0) {
        throw CheckerConfigError("unterminated quote in checker command");
    }
    if (in_word) {
        out.push_back(std::move(current));
    }
    return out;
}

FormalArtifact run_checker(FormalArtifact artifact, const CheckerConfig& config) {
    if (text::trim(artifact.source_text).empty()) {
        throw std::invalid_argument("run_checker requires a non-empty source");
    }
    if (config.command.empty()) {
        throw CheckerConfigError("no checker command configured");
    }
    const auto executable = resolve_executable(config.command.front());
    if (!executable) {
        throw CheckerConfigError("checker executable not found: " + config.command.front());
    }

    Sandbox sandbox(config.keep_sandbox);
    const fs::path source = sandbox.path() / config.source_file_name;
    {
        std::ofstream out(source, std::ios::binary);
        out << artifact.source_text;
        if (!out) {
            throw std::runtime_error("cannot write checker source " + source.string());
        }
    }

    std::vector<std::string> argv;
    argv.push_back(executable->string());
    for (std::size_t i = 1; i < config.command.size(); ++i) {
        std::string arg = text::replace_all(config.command[i], "{source}", source.string());
        argv.push_back(text::replace_all(arg, "{sandbox}", sandbox.path().string()));
    }

    const auto started = std::chrono::steady_clock::now();
    const auto deadline = started + config.timeout;
    Spawned child = spawn(argv, sandbox.path());

    std::string output;
    bool timed_out = false;
    char buffer[4096];
    while (true) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            timed_out = true;
            break;
        }
        pollfd pfd{child.out_fd, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (ready < 0 && errno == EINTR) {
            continue;
        }
        if (ready == 0) {
            timed_out = true;
            break;
        }
        const ssize_t n = ::read(child.out_fd, buffer, sizeof buffer);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            break;
        }
        output.append(buffer, static_cast<std::size_t>(n));
    }
    if (timed_out) {
        ::kill(-child.pid, SIGKILL);
    }
    ::close(child.out_fd);

    int status = 0;
    while (::waitpid(child.pid, &status, 0) < 0 && errno == EINTR) {
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    std::string note;
    bool clean_exit = false;
    if (timed_out) {
        note = "[checker timeout after " + std::to_string(config.timeout.count()) + " ms]";
    } else if (WIFEXITED(status)) {
        clean_exit = WEXITSTATUS(status) == 0;
        note = "[checker exit status " + std::to_string(WEXITSTATUS(status)) + " after " +
               std::to_string(elapsed.count()) + " ms]";
    } else if (WIFSIGNALED(status)) {
        note = "[checker killed by signal " + std::to_string(WTERMSIG(status)) + "]";
    }

    const bool diagnostics =
        !config.error_pattern.empty() && output.find(config.error_pattern) != std::string::npos;
    if (!output.empty() && output.back() != '\n') {
        output.push_back('\n');
    }
    if (clean_exit && diagnostics) {
        note += " [error diagnostics in output]";
    }
    artifact.checker_log = output + note;
    artifact.checker_outcome =
        clean_exit && !diagnostics ? CheckerOutcome::Certified : CheckerOutcome::Failed;
    return artifact;
}

} // namespace ttvr::certification
