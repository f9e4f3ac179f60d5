// Copyright 2026 The QLV Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qlv/selftest.hpp"

namespace qlv::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailed = 1,
  kExitUsage = 2,
  kExitReject = 3,
};

struct Hooks {
  KrausProvider krausProvider = krausFor;
};

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

}  // namespace qlv::cli
