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

#include "rewriter/stemmer.hpp"

#include "rewriter/text.hpp"

namespace rewriter {

namespace {

// State follows the classic formulation: b[0..k] is the current word and
// j marks the end of the stem after a successful ends().
class PorterStemmer {
 public:
  explicit PorterStemmer(std::string word)
      : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

  std::string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  bool cons(int i) const {
    switch (b_[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_consonant(int j) const {
    if (j < 1) return false;
    if (b_[static_cast<std::size_t>(j)] != b_[static_cast<std::size_t>(j - 1)]) {
      return false;
    }
    return cons(j);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = b_[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1),
                                    s.size()) != s) {
      return false;
    }
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.replace(static_cast<std::size_t>(j_ + 1),
               static_cast<std::size_t>(k_ - j_), s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void replace_if_measure(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (at(k_ - 1) != 's') {
        --k_;
      }
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_consonant(k_)) {
        --k_;
        const char ch = at(k_);
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else {
        j_ = k_;
        if (m() == 1 && cvc(k_)) set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  // First matching suffix wins; replacement applies only when m() > 0.
  template <std::size_t N>
  void apply_first(const Rule (&rules)[N]) {
    for (const Rule& r : rules) {
      if (ends(r.suffix)) {
        replace_if_measure(r.replacement);
        return;
      }
    }
  }

  void step2() {
    static constexpr Rule kA[] = {{"ational", "ate"}, {"tional", "tion"}};
    static constexpr Rule kC[] = {{"enci", "ence"}, {"anci", "ance"}};
    static constexpr Rule kE[] = {{"izer", "ize"}};
    static constexpr Rule kL[] = {{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"},
                                  {"eli", "e"}, {"ousli", "ous"}};
    static constexpr Rule kO[] = {{"ization", "ize"}, {"ation", "ate"},
                                  {"ator", "ate"}};
    static constexpr Rule kS[] = {{"alism", "al"}, {"iveness", "ive"},
                                  {"fulness", "ful"}, {"ousness", "ous"}};
    static constexpr Rule kT[] = {{"aliti", "al"}, {"iviti", "ive"},
                                  {"biliti", "ble"}};
    static constexpr Rule kG[] = {{"logi", "log"}};
    if (k_ < 1) return;
    switch (at(k_ - 1)) {
      case 'a': apply_first(kA); break;
      case 'c': apply_first(kC); break;
      case 'e': apply_first(kE); break;
      case 'l': apply_first(kL); break;
      case 'o': apply_first(kO); break;
      case 's': apply_first(kS); break;
      case 't': apply_first(kT); break;
      case 'g': apply_first(kG); break;
      default: break;
    }
  }

  void step3() {
    static constexpr Rule kE[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
    static constexpr Rule kI[] = {{"iciti", "ic"}};
    static constexpr Rule kL[] = {{"ical", "ic"}, {"ful", ""}};
    static constexpr Rule kS[] = {{"ness", ""}};
    switch (at(k_)) {
      case 'e': apply_first(kE); break;
      case 'i': apply_first(kI); break;
      case 'l': apply_first(kL); break;
      case 's': apply_first(kS); break;
      default: break;
    }
  }

  void step4() {
    if (k_ < 1) return;
    bool matched = false;
    switch (at(k_ - 1)) {
      case 'a': matched = ends("al"); break;
      case 'c': matched = ends("ance") || ends("ence"); break;
      case 'e': matched = ends("er"); break;
      case 'i': matched = ends("ic"); break;
      case 'l': matched = ends("able") || ends("ible"); break;
      case 'n':
        matched = ends("ant") || ends("ement") || ends("ment") || ends("ent");
        break;
      case 'o':
        matched = (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) ||
                  ends("ou");
        break;
      case 's': matched = ends("ism"); break;
      case 't': matched = ends("ate") || ends("iti"); break;
      case 'u': matched = ends("ous"); break;
      case 'v': matched = ends("ive"); break;
      case 'z': matched = ends("ize"); break;
      default: break;
    }
    if (matched && m() > 1) k_ = j_;
  }

  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && double_consonant(k_) && m() > 1) --k_;
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w = to_lower(word);
  for (const char c : w) {
    if (c < 'a' || c > 'z') return w;
  }
  return PorterStemmer(std::move(w)).run();
}

}  // namespace rewriter
