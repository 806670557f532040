#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "audit/model.hpp"

namespace audit {

// Lowercase and keep only [a-z0-9]. Bytes outside ASCII are dropped.
inline std::string canonicalize_tag(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) out.push_back(static_cast<char>(c));
  }
  return out;
}

// User-interest definition: hashtags (matched against video hashtags,
// substrings in either direction count) and/or a creator list.
struct InterestSpec {
  std::vector<std::string> hashtags;  // canonical form
  std::vector<std::string> creators;

  static InterestSpec from_raw(const std::vector<std::string>& raw_hashtags,
                               std::vector<std::string> creators = {}) {
    InterestSpec s;
    for (const auto& t : raw_hashtags) {
      std::string c = canonicalize_tag(t);
      if (!c.empty()) s.hashtags.push_back(std::move(c));
    }
    s.creators = std::move(creators);
    return s;
  }

  bool empty() const { return hashtags.empty() && creators.empty(); }
};

inline bool tags_substring_match(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) return false;
  return a.find(b) != std::string_view::npos || b.find(a) != std::string_view::npos;
}

// True iff some canonicalized video hashtag matches an interest hashtag
// (equal or substring, either direction), or the creator is of interest.
inline bool matches_interest(const Video& video, const InterestSpec& interests) {
  for (const auto& c : interests.creators)
    if (video.creator == c) return true;
  if (interests.hashtags.empty()) return false;
  for (const auto& raw : video.hashtags) {
    std::string h = canonicalize_tag(raw);
    if (h.empty()) continue;
    for (const auto& i : interests.hashtags)
      if (tags_substring_match(h, i)) return true;
  }
  return false;
}

// The default hashtag interest list used by the interest-driven scenarios.
const std::vector<std::string>& default_interest_hashtags();

}  // namespace audit
