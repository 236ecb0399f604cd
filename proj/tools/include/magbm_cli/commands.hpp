#pragma once
#include "magbm_cli/config.hpp"
#include "magbm_cli/output.hpp"

#include <string>
#include <vector>

namespace magbm::cli {

const std::vector<std::string>& command_names();

Table run_command(RunConfig c);

Table cmd_magic(RunConfig c);
Table cmd_bands(RunConfig c);
Table cmd_squeeze(RunConfig c);
Table cmd_zeromode(RunConfig c);
Table cmd_dos(RunConfig c);
Table cmd_sdh(RunConfig c);
Table cmd_dhva(RunConfig c);
Table cmd_qhe(RunConfig c);

enum ExitCode { kOk = 0, kConfig = 2, kNumeric = 3, kIo = 4 };

// Parse, run and write; returns the exit code and fills `message` on failure.
int execute(const std::string& command, const std::string& config_path, const std::string& out_path,
            const std::string& format, int threads, std::string& message);

} // namespace magbm::cli
