// Copyright 2026 The upsa Authors.
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

#pragma once

#include <cstddef>
#include <optional>

#include "upsa/text.hpp"

namespace upsa {

enum class EditOp { kReplace = 0, kInsert = 1, kDelete = 2 };

const char* edit_op_name(EditOp op);

// Positions are 1-based for Replace and Delete (1 <= k <= length). Insert
// places the word after token k, 0 <= k <= length, so k = 0 prepends.
struct Edit {
  EditOp op = EditOp::kReplace;
  std::size_t position = 1;
  std::optional<Token> word;  // absent exactly for Delete
};

// Pure: returns the edited copy. Throws PositionError for an invalid
// position (including deleting the only token) and std::invalid_argument
// when the word's presence does not match the operation.
Sentence apply_edit(const Sentence& s, const Edit& edit);
Sentence apply_edit(const Sentence& s, EditOp op, std::size_t position,
                    std::optional<Token> word = std::nullopt);

// 0-based index of the first token whose left context differs between `s`
// and apply_edit(s, edit).
std::size_t first_changed_index(const Edit& edit);

}  // namespace upsa
