#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maple/core/types.hpp"

namespace maple::textenc {

// Keyword stems are lowercase. A stem matches a token exactly, or as a prefix
// when the stem has at least four characters (so "no" cannot swallow
// "normal", while "calcif" still covers "calcified").
struct KeywordLexicon {
  std::map<core::Finding, std::vector<std::string>> finding_keywords;
  std::vector<std::string> negation_cues;
  std::map<core::Finding, std::vector<std::string>> state_cues;  // informational

  // Throws if a finding has no keywords or keyword stems collide across
  // findings.
  void validate() const;
};

std::vector<std::string> tokenize_words(const std::string& text);
bool stem_match(const std::string& token, const std::string& stem);

// Keyword labeling. Returns nothing when no finding keyword matches (the
// sentence is filtered out). When keywords of several findings match, the
// first finding in configured order wins and a warning is appended.
std::optional<core::FindingLabel> label_sentence(const core::Sentence& s,
                                                 const KeywordLexicon& lexicon,
                                                 std::vector<std::string>* warnings = nullptr);

KeywordLexicon default_keyword_lexicon();

}  // namespace maple::textenc
