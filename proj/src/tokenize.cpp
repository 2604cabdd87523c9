#include "errid/tokenize.hpp"

#include <algorithm>
#include <cctype>

namespace errid {

namespace {

const std::string kVersion = "v1";

// Keep in sync with fixtures/tokenizer_rules_v1.txt (guarded by a test).
const std::vector<std::string> kAbbreviations = {
    "al.",  "approx.", "ca.",  "cf.",  "ch.",  "co.",  "dr.",   "e.g.", "eq.",
    "eqs.", "et.",     "etc.", "fig.", "figs.", "i.e.", "inc.", "jr.",  "mr.",
    "mrs.", "ms.",     "no.",  "p.",   "pp.",  "prof.", "sec.", "st.",  "vs.",
};

const std::string kOpeners = "([{\"`";
const std::string kClosers = ")]}\"'";
const std::string kTerminal = ",;:!?";

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_abbreviation(const std::string& tok) {
  const std::string lo = lower(tok);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lo) != kAbbreviations.end();
}

bool keeps_final_period(const std::string& tok) {
  // tok ends with '.'
  if (is_abbreviation(tok)) return true;
  if (tok.size() == 2 && std::isupper(static_cast<unsigned char>(tok[0]))) return true;  // initials
  // internal periods: "U.S.", "i.i.d."
  if (tok.find('.') < tok.size() - 1) return true;
  return false;
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// Clitics split off at the apostrophe; matched case-insensitively.
const std::vector<std::string> kClitics = {"'s", "'re", "'ve", "'ll", "'d", "'m"};

void emit_core(const std::string& core, std::vector<std::string>& out) {
  if (core.empty()) return;
  const std::string lo = lower(core);
  if (ends_with(lo, "n't") && core.size() > 3) {
    out.push_back(core.substr(0, core.size() - 3));
    out.push_back(core.substr(core.size() - 3));
    return;
  }
  for (const auto& cl : kClitics) {
    if (ends_with(lo, cl) && core.size() > cl.size()) {
      out.push_back(core.substr(0, core.size() - cl.size()));
      out.push_back(core.substr(core.size() - cl.size()));
      return;
    }
  }
  out.push_back(core);
}

void emit_token(std::string tok, std::vector<std::string>& out) {
  // leading openers
  while (!tok.empty() && kOpeners.find(tok.front()) != std::string::npos) {
    out.push_back(std::string(1, tok.front()));
    tok.erase(tok.begin());
  }
  // trailing punctuation, collected then re-emitted in order
  std::vector<std::string> suffix;
  while (!tok.empty()) {
    if (tok.size() > 3 && ends_with(tok, "...")) {
      suffix.push_back("...");
      tok.resize(tok.size() - 3);
      continue;
    }
    const char c = tok.back();
    if (kTerminal.find(c) != std::string::npos || kClosers.find(c) != std::string::npos) {
      suffix.push_back(std::string(1, c));
      tok.pop_back();
      continue;
    }
    if (c == '.' && tok.size() > 1 && !keeps_final_period(tok)) {
      suffix.push_back(".");
      tok.pop_back();
      continue;
    }
    break;
  }
  emit_core(tok, out);
  for (auto it = suffix.rbegin(); it != suffix.rend(); ++it) out.push_back(*it);
}

}  // namespace

std::vector<std::string> tokenize(const std::string& sentence) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    size_t j = i;
    while (j < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[j]))) ++j;
    if (j > i) emit_token(sentence.substr(i, j - i), out);
    i = j;
  }
  return out;
}

const std::string& tokenizer_rules_version() { return kVersion; }

const std::vector<std::string>& tokenizer_abbreviations() { return kAbbreviations; }

}  // namespace errid
