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

#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

#include "rewriter/stemmer.hpp"

TEST_CASE("Porter stemmer reference pairs") {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"caresses", "caress"},   {"ponies", "poni"},        {"ties", "ti"},
      {"caress", "caress"},     {"cats", "cat"},           {"feed", "feed"},
      {"agreed", "agre"},       {"plastered", "plaster"},  {"bled", "bled"},
      {"motoring", "motor"},    {"sing", "sing"},          {"conflated", "conflat"},
      {"troubled", "troubl"},   {"sized", "size"},         {"hopping", "hop"},
      {"tanned", "tan"},        {"falling", "fall"},       {"hissing", "hiss"},
      {"fizzed", "fizz"},       {"failing", "fail"},       {"filing", "file"},
      {"happy", "happi"},       {"sky", "sky"},            {"relational", "relat"},
      {"conditional", "condit"}, {"rational", "ration"},   {"valenci", "valenc"},
      {"digitizer", "digit"},   {"conformabli", "conform"}, {"radicalli", "radic"},
      {"differentli", "differ"}, {"vileli", "vile"},       {"analogousli", "analog"},
      {"vietnamization", "vietnam"}, {"predication", "predic"}, {"operator", "oper"},
      {"feudalism", "feudal"},  {"decisiveness", "decis"}, {"hopefulness", "hope"},
      {"callousness", "callous"}, {"formaliti", "formal"}, {"sensitiviti", "sensit"},
      {"sensibiliti", "sensibl"}, {"triplicate", "triplic"}, {"formative", "form"},
      {"formalize", "formal"},  {"electriciti", "electr"}, {"electrical", "electr"},
      {"hopeful", "hope"},      {"goodness", "good"},      {"revival", "reviv"},
      {"allowance", "allow"},   {"inference", "infer"},    {"airliner", "airlin"},
      {"adjustable", "adjust"}, {"defensible", "defens"},  {"irritant", "irrit"},
      {"replacement", "replac"}, {"adjustment", "adjust"}, {"dependent", "depend"},
      {"adoption", "adopt"},    {"communism", "commun"},   {"activate", "activ"},
      {"angulariti", "angular"}, {"homologous", "homolog"}, {"effective", "effect"},
      {"bowdlerize", "bowdler"}, {"probate", "probat"},    {"rate", "rate"},
      {"cease", "ceas"},        {"controll", "control"},   {"roll", "roll"},
      {"ships", "ship"},        {"miles", "mile"},         {"walked", "walk"},
      {"a", "a"},               {"is", "is"},
  };
  for (const auto& [word, stem] : pairs) {
    CAPTURE(word);
    CHECK(rewriter::porter_stem(word) == stem);
  }
}
