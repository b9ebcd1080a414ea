// Copyright 2026 The kpgen Authors.
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

// Model checkpoints: the 8-byte magic "KPGCKPT1", a little-endian uint64
// header length, a JSON header (config, vocabularies, POS lexicon and tensor
// table) and the tensors as raw row-major doubles in table order.

#ifndef KPGEN_CHECKPOINT_H_
#define KPGEN_CHECKPOINT_H_

#include <filesystem>

#include "kpgen/phraseness.h"

namespace kpgen {

void save_checkpoint(const PhrasenessModel& model,
                     const std::filesystem::path& path);

// Throws FormatError on a malformed or truncated file.
PhrasenessModel load_checkpoint(const std::filesystem::path& path);

}  // namespace kpgen

#endif  // KPGEN_CHECKPOINT_H_
