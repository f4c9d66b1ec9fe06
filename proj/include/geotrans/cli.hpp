#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace geotrans
{

/** @brief Process exit codes of the command-line tool. */
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitMath = 2 };

/**
 * @brief Runs one command line (args[0] is the program name).
 * Errors are written to err as {"error": code, "detail": text}.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geotrans
