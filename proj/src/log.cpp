// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <set>

namespace blochrough::log
{

namespace
{

std::atomic<int> level{0};
std::mutex mutex;
std::set<std::string> seen;

}  // namespace

void set_verbosity(int v)
{
  level = v;
}

int verbosity()
{
  return level;
}

void warning(const std::string &msg)
{
  std::lock_guard lock(mutex);
  if (!seen.insert(msg).second)
  {
    return;
  }
  if (level >= 0)
  {
    std::cerr << "warning: " << msg << '\n';
  }
}

void info(const std::string &msg)
{
  if (level >= 1)
  {
    std::lock_guard lock(mutex);
    std::cerr << msg << '\n';
  }
}

void debug(const std::string &msg)
{
  if (level >= 2)
  {
    std::lock_guard lock(mutex);
    std::cerr << "debug: " << msg << '\n';
  }
}

int warning_count()
{
  std::lock_guard lock(mutex);
  return static_cast<int>(seen.size());
}

}  // namespace blochrough::log
