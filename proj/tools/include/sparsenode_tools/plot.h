// Copyright 2026 The sparsenode Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SPARSENODE_TOOLS_PLOT_H_
#define SPARSENODE_TOOLS_PLOT_H_

#include <filesystem>
#include <string>
#include <vector>

namespace sparsenode::tools {

// Writes u_l1_vs_t.svg and error_vs_t.svg from a run directory, plus
// w_heatmap_tK.svg for the neural forms. Returns the files written.
std::vector<std::string> plot_run(const std::filesystem::path& dir);

// Writes decay_vs_T.svg (T axis) or tstar_vs_M.svg (M axis) from a sweep
// directory.
std::vector<std::string> plot_sweep(const std::filesystem::path& dir);

// Dispatches on the directory contents. Throws InvalidInput listing the
// missing files when neither layout is complete.
std::vector<std::string> plot_dir(const std::filesystem::path& dir);

}  // namespace sparsenode::tools

#endif  // SPARSENODE_TOOLS_PLOT_H_
