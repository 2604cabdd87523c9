#pragma once

#include <string>
#include <vector>

namespace errid {

// Deterministic Treebank-style tokenizer driven by a fixed rule list (see
// fixtures/tokenizer_rules_v1.txt). Case and digits are preserved.
std::vector<std::string> tokenize(const std::string& sentence);

// The rule-list version embedded in the binary.
const std::string& tokenizer_rules_version();

// Abbreviations whose trailing period stays attached (compared lowercase).
const std::vector<std::string>& tokenizer_abbreviations();

}  // namespace errid
