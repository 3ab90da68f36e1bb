#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <thread>

#include "lemlift/core.hpp"

namespace lemlift::core {

namespace {

namespace fs = std::filesystem;

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  for (size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

std::string quote(const std::string& path) {
  std::string out = "'";
  for (char c : path) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

fs::path make_workdir() {
  std::string tmpl = (fs::temp_directory_path() / "lemlift-bridge-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw BridgeError("write", std::string("cannot create temp directory: ") + strerror(errno));
  return tmpl;
}

std::string tail(const fs::path& p) {
  std::error_code ec;
  if (!fs::exists(p, ec)) return {};
  std::string text = frontend::read_text_file(p.string());
  if (text.size() > 2000) text = "..." + text.substr(text.size() - 2000);
  return text;
}

/// Runs `command` under /bin/sh with output redirected to `log`. Returns the
/// exit status, or nullopt on timeout.
std::optional<int> run(const std::string& command, const fs::path& log, std::chrono::milliseconds timeout) {
  pid_t pid = fork();
  if (pid < 0) throw BridgeError("run", std::string("fork failed: ") + strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    int fd = open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      dup2(fd, STDOUT_FILENO);
      dup2(fd, STDERR_FILENO);
      close(fd);
    }
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    int status = 0;
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      if (WIFEXITED(status)) return WEXITSTATUS(status);
      return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
    }
    if (r < 0 && errno != EINTR) throw BridgeError("run", std::string("waitpid failed: ") + strerror(errno));
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      return std::nullopt;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
}

}  // namespace

std::vector<uint32_t> external_bridge(std::span<const sat::BoolClause> clauses, size_t num_vars,
                                      const ExternalConfig& config) {
  if (config.command.find("{in}") == std::string::npos || config.command.find("{out}") == std::string::npos) {
    throw BridgeError("config", "command template needs both {in} and {out} placeholders: " + config.command);
  }
  frontend::DimacsDocument doc{num_vars, {clauses.begin(), clauses.end()}};
  fs::path dir = make_workdir();
  fs::path in = dir / "lifted.cnf", out = dir / "core.out", log = dir / "extractor.log";
  auto keep = [&](const std::string& stage, const std::string& message) {
    return BridgeError(stage, message + " (files kept in " + dir.string() + ")");
  };
  try {
    frontend::write_text_file(in.string(), frontend::write_dimacs(doc));
  } catch (const Error& e) {
    throw keep("write", e.what());
  }
  std::string command = substitute(substitute(config.command, "{in}", quote(in.string())), "{out}", quote(out.string()));
  auto status = run(command, log, config.timeout);
  if (!status) throw keep("timeout", "no answer after " + std::to_string(config.timeout.count()) + " ms");
  if (*status != 0) throw keep("run", "exit status " + std::to_string(*status) + "; output:\n" + tail(log));
  std::vector<uint32_t> core;
  try {
    core = frontend::read_core(frontend::read_text_file(out.string()), doc, config.mode);
  } catch (const Error& e) {
    throw keep("parse", e.what());
  }
  std::vector<sat::BoolClause> sub;
  for (auto i : core) sub.push_back(doc.clauses[i]);
  if (sat::sat_solve(sub, {}, {}, num_vars).status != Status::Unsat) {
    throw keep("validate", "returned clause set of size " + std::to_string(core.size()) + " is satisfiable");
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return core;
}

}  // namespace lemlift::core
