// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_LOG_HPP
#define BLOCHROUGH_LOG_HPP

#include <string>

namespace blochrough::log
{

// Verbosity: -1 silences warnings, 0 prints warnings, 1 adds progress and iteration logs,
// 2 adds debug output.
void set_verbosity(int level);
int verbosity();

// Warnings with identical text are printed once per process.
void warning(const std::string &msg);
void info(const std::string &msg);
void debug(const std::string &msg);

// Number of distinct warnings issued so far.
int warning_count();

}  // namespace blochrough::log

#endif  // BLOCHROUGH_LOG_HPP
