/* Copyright 2026 The Rewriter Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef REWRITER_TEXT_HPP_
#define REWRITER_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace rewriter {

// ASCII case folding; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Splits on runs of spaces/tabs; no empty fields.
std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string_view trim(std::string_view s);

// True if every byte is an ASCII digit or one of ".,-+/%" and at least one
// digit is present ("0.2", "1,000", "-3").
bool is_numeric(std::string_view s);

// True if the token is made only of ASCII punctuation.
bool is_punctuation(std::string_view s);

}  // namespace rewriter

#endif  // REWRITER_TEXT_HPP_
