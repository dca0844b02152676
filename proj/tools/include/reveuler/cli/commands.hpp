#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "reveuler/cli/run_config.hpp"
#include "reveuler/grid.hpp"

namespace reveuler::cli {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitNotCauchy = 2, kExitRuntimeFault = 3 };

/// Maps a library error kind onto the exit-code contract.
int exit_code_for(ErrorKind kind);

struct CheckItem {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

/// The only writer into the output directory.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);
  void write_text(const std::string& name, const std::string& text) const;
  void write_field(const std::string& name, const VectorField& v) const;
  [[nodiscard]] std::filesystem::path path(const std::string& name) const { return root_ / name; }
  [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
};

std::string checks_json(const std::vector<CheckItem>& items);

std::vector<CheckItem> data_checks(const RunConfig& cfg);
std::vector<CheckItem> kernel_checks(const RunConfig& cfg);

int cmd_data_check(const RunConfig& cfg, std::ostream& log);
int cmd_kernel_check(const RunConfig& cfg, std::ostream& log);
int cmd_iterate(const RunConfig& cfg, std::ostream& log);
int cmd_limit(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);

}  // namespace reveuler::cli
